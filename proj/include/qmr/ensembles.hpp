#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "qmr/linalg.hpp"
#include "qmr/rng.hpp"

namespace qmr {

enum class Domain { Real, Complex };

enum class EnsembleKind {
  RealGaussianSymmetric,
  ComplexGaussianHermitian,
  ComplexSubGaussianRotationInvariant,
};

std::string_view to_string(EnsembleKind k);
std::string_view to_string(Domain d);
EnsembleKind ensemble_kind_from_string(std::string_view s);
Domain domain_for(EnsembleKind k);

/// A signal in working coordinates: length p for Real, length 2p storing
/// [Re; Im] for Complex. Complex signals produced by generate_true_signal
/// have unit Euclidean norm.
struct Signal {
  std::vector<double> values;
  Domain domain = Domain::Real;
  std::size_t p = 0;

  std::size_t working_dim() const { return domain == Domain::Real ? p : 2 * p; }
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::RealGaussianSymmetric;
  std::size_t p = 0;
  std::size_t n = 0;
  double sigma = 1.0;        // entry scale
  double noise_sigma = 0.0;  // observation noise std
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

/// One problem instance. Matrices are stored as n contiguous row-major
/// symmetric blocks of order d (d = p for real, 2p after complex embedding).
/// Immutable after construction; safe to share across threads.
struct MeasurementSet {
  EnsembleSpec spec;
  Signal truth;
  std::size_t d = 0;
  std::vector<double> b;     // length n
  std::vector<double> mats;  // n * d * d

  const double* matrix(std::size_t i) const { return mats.data() + i * d * d; }
  std::size_t n() const { return spec.n; }
};

/// Empirical frame-bound estimates: min/max over sampled unit-vector pairs
/// (u, v) of (1/n) sum_i <u, A_i v>^2. The minimum is an upper bound on the
/// true lower frame constant and the maximum a lower bound on the upper one.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t samples = 0;
  double gamma_margin = 0.0;  // implied concentration margin wrt sigma^2
};

// Maximum n*d*d entries a single instance may allocate.
inline constexpr std::size_t kDefaultEntryCap = 2'000'000'000;

Signal generate_true_signal(std::size_t p, Domain domain, Rng& rng);

MeasurementSet generate_measurements(const EnsembleSpec& spec, const Signal& truth,
                                     Rng& matrix_rng, Rng& noise_rng,
                                     std::size_t entry_cap = kDefaultEntryCap);

/// Canonical entry point: derives the signal / matrix / noise streams from
/// spec.seed and the fixed role tags, so an instance is a pure function of
/// its spec.
MeasurementSet generate_instance(const EnsembleSpec& spec,
                                 std::size_t entry_cap = kDefaultEntryCap);

/// Real embedding of a Hermitian form: u = [Re x; Im x] and
/// M = [[Re A, -Im A], [Im A, Re A]], so <u, M u> = x^H A x. A is p x p
/// row-major; the output M is exactly symmetric. Throws if A deviates from
/// Hermitian by more than 1e-12 relative.
std::pair<Matrix, std::vector<double>> embed_complex(
    const std::vector<std::complex<double>>& a, std::size_t p,
    const std::vector<std::complex<double>>& x);

FrameBounds estimate_frame_bounds(const MeasurementSet& set, std::size_t samples,
                                  Rng& rng);

/// n >= 2p-1 is required for injectivity of real quadratic measurements;
/// callers may warn when an instance is below that count.
bool meets_injectivity_count(const EnsembleSpec& spec);

}  // namespace qmr
