#include "qmr/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qmr/kernels.hpp"

namespace qmr {

std::string_view to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::RealGaussianSymmetric:
      return "real_gaussian";
    case EnsembleKind::ComplexGaussianHermitian:
      return "complex_gaussian";
    case EnsembleKind::ComplexSubGaussianRotationInvariant:
      return "complex_subgaussian";
  }
  return "unknown";
}

std::string_view to_string(Domain d) {
  return d == Domain::Real ? "real" : "complex";
}

EnsembleKind ensemble_kind_from_string(std::string_view s) {
  if (s == "real_gaussian") return EnsembleKind::RealGaussianSymmetric;
  if (s == "complex_gaussian") return EnsembleKind::ComplexGaussianHermitian;
  if (s == "complex_subgaussian")
    return EnsembleKind::ComplexSubGaussianRotationInvariant;
  throw std::invalid_argument("unknown ensemble kind: " + std::string(s));
}

Domain domain_for(EnsembleKind k) {
  return k == EnsembleKind::RealGaussianSymmetric ? Domain::Real : Domain::Complex;
}

void EnsembleSpec::validate() const {
  if (p < 1) throw std::invalid_argument("EnsembleSpec: p must be >= 1");
  if (n < 1) throw std::invalid_argument("EnsembleSpec: n must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("EnsembleSpec: sigma must be > 0");
  if (!(noise_sigma >= 0.0))
    throw std::invalid_argument("EnsembleSpec: noise_sigma must be >= 0");
}

bool meets_injectivity_count(const EnsembleSpec& spec) {
  return spec.n >= 2 * spec.p - 1;
}

Signal generate_true_signal(std::size_t p, Domain domain, Rng& rng) {
  if (p < 1) throw std::invalid_argument("generate_true_signal: p must be >= 1");
  Signal sig;
  sig.domain = domain;
  sig.p = p;
  sig.values.resize(domain == Domain::Real ? p : 2 * p);
  for (auto& v : sig.values) v = rng.normal();
  if (domain == Domain::Complex) {
    const double norm = std::sqrt(kernels::nrm2sq(sig.values.data(), sig.values.size()));
    kernels::scal(1.0 / norm, sig.values.data(), sig.values.size());
  }
  return sig;
}

namespace {

// Fills one real symmetric matrix A = (B + B^T)/2, B iid N(0, sigma^2).
// Entries are drawn in B's row-major order so the stream layout is fixed.
void fill_real_symmetric(double* a, std::size_t p, double sigma, Rng& rng) {
  std::vector<double> raw(p * p);
  for (auto& v : raw) v = rng.normal(0.0, sigma);
  for (std::size_t k = 0; k < p; ++k) {
    a[k * p + k] = raw[k * p + k];
    for (std::size_t l = k + 1; l < p; ++l) {
      const double v = 0.5 * (raw[k * p + l] + raw[l * p + k]);
      a[k * p + l] = v;
      a[l * p + k] = v;
    }
  }
}

// Hermitian A = (R + R^T + j(I - I^T))/2 with R, I iid N(0, sigma^2).
void fill_complex_gaussian(std::vector<std::complex<double>>& a, std::size_t p,
                           double sigma, Rng& rng) {
  std::vector<double> r(p * p), im(p * p);
  for (auto& v : r) v = rng.normal(0.0, sigma);
  for (auto& v : im) v = rng.normal(0.0, sigma);
  for (std::size_t k = 0; k < p; ++k) {
    a[k * p + k] = {r[k * p + k], 0.0};
    for (std::size_t l = k + 1; l < p; ++l) {
      const double re = 0.5 * (r[k * p + l] + r[l * p + k]);
      const double imag = 0.5 * (im[k * p + l] - im[l * p + k]);
      a[k * p + l] = {re, imag};
      a[l * p + k] = {re, -imag};
    }
  }
}

// Hermitian A = (B + B^H)/2 where B has rotation-invariant entries
// r * exp(j theta), theta uniform on [0, 2pi), r uniform on [0, sqrt(3)*sigma]
// (so E|entry|^2 = sigma^2). Any rotation-invariant bounded entry law fits
// here; this one keeps the generator branch-free.
void fill_complex_subgaussian(std::vector<std::complex<double>>& a, std::size_t p,
                              double sigma, Rng& rng) {
  const double rmax = std::sqrt(3.0) * sigma;
  std::vector<std::complex<double>> raw(p * p);
  for (auto& v : raw) {
    const double radius = rmax * rng.uniform01();
    const double theta = 2.0 * std::numbers::pi * rng.uniform01();
    v = {radius * std::cos(theta), radius * std::sin(theta)};
  }
  for (std::size_t k = 0; k < p; ++k) {
    a[k * p + k] = {raw[k * p + k].real(), 0.0};
    for (std::size_t l = k + 1; l < p; ++l) {
      const std::complex<double> v = 0.5 * (raw[k * p + l] + std::conj(raw[l * p + k]));
      a[k * p + l] = v;
      a[l * p + k] = std::conj(v);
    }
  }
}

}  // namespace

std::pair<Matrix, std::vector<double>> embed_complex(
    const std::vector<std::complex<double>>& a, std::size_t p,
    const std::vector<std::complex<double>>& x) {
  if (a.size() != p * p) throw std::invalid_argument("embed_complex: bad matrix size");
  if (x.size() != p) throw std::invalid_argument("embed_complex: bad vector size");

  double max_abs = 0.0;
  double max_dev = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t l = 0; l < p; ++l) {
      max_abs = std::max(max_abs, std::abs(a[k * p + l]));
      max_dev = std::max(max_dev, std::abs(a[k * p + l] - std::conj(a[l * p + k])));
    }
  }
  if (max_dev > 1e-12 * std::max(1.0, max_abs))
    throw std::invalid_argument("embed_complex: matrix is not Hermitian");

  const std::size_t d = 2 * p;
  Matrix m(d, d);
  // Build from the upper triangle so the result is exactly symmetric even
  // when the input is Hermitian only to tolerance.
  for (std::size_t k = 0; k < p; ++k) {
    m(k, k) = a[k * p + k].real();
    m(p + k, p + k) = a[k * p + k].real();
    m(k, p + k) = 0.0;  // -Im(a_kk) with Im(a_kk) treated as 0
    m(p + k, k) = 0.0;
    for (std::size_t l = k + 1; l < p; ++l) {
      const double re = a[k * p + l].real();
      const double im = a[k * p + l].imag();
      m(k, l) = re;
      m(l, k) = re;
      m(p + k, p + l) = re;
      m(p + l, p + k) = re;
      m(k, p + l) = -im;
      m(p + l, k) = -im;
      m(l, p + k) = im;
      m(p + k, l) = im;
    }
  }

  std::vector<double> u(d);
  for (std::size_t k = 0; k < p; ++k) {
    u[k] = x[k].real();
    u[p + k] = x[k].imag();
  }
  return {std::move(m), std::move(u)};
}

MeasurementSet generate_measurements(const EnsembleSpec& spec, const Signal& truth,
                                     Rng& matrix_rng, Rng& noise_rng,
                                     std::size_t entry_cap) {
  spec.validate();
  if (truth.p != spec.p)
    throw std::invalid_argument("generate_measurements: truth dimension mismatch");
  if (truth.domain != domain_for(spec.kind))
    throw std::invalid_argument("generate_measurements: truth domain mismatch");

  MeasurementSet set;
  set.spec = spec;
  set.truth = truth;
  set.d = truth.working_dim();
  const std::size_t d = set.d;
  if (spec.n * d * d > entry_cap)
    throw std::invalid_argument("generate_measurements: instance exceeds entry cap");

  set.mats.resize(spec.n * d * d);
  set.b.resize(spec.n);

  std::vector<std::complex<double>> ca;
  std::vector<std::complex<double>> cx;
  if (truth.domain == Domain::Complex) {
    ca.resize(spec.p * spec.p);
    cx.resize(spec.p);
    for (std::size_t k = 0; k < spec.p; ++k)
      cx[k] = {truth.values[k], truth.values[spec.p + k]};
  }

  std::vector<double> tmp(d);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double* mat = set.mats.data() + i * d * d;
    switch (spec.kind) {
      case EnsembleKind::RealGaussianSymmetric:
        fill_real_symmetric(mat, spec.p, spec.sigma, matrix_rng);
        break;
      case EnsembleKind::ComplexGaussianHermitian:
        fill_complex_gaussian(ca, spec.p, spec.sigma, matrix_rng);
        break;
      case EnsembleKind::ComplexSubGaussianRotationInvariant:
        fill_complex_subgaussian(ca, spec.p, spec.sigma, matrix_rng);
        break;
    }
    if (truth.domain == Domain::Complex) {
      auto [m, u] = embed_complex(ca, spec.p, cx);
      std::copy(m.data.begin(), m.data.end(), mat);
    }
    // Observations are evaluated in the stored real coordinates with the
    // same quad_form the objective uses, so noiseless residuals at the
    // truth cancel exactly.
    set.b[i] = quad_form(mat, d, truth.values.data(), tmp.data());
  }

  if (spec.noise_sigma > 0.0) {
    for (std::size_t i = 0; i < spec.n; ++i)
      set.b[i] += noise_rng.normal(0.0, spec.noise_sigma);
  }
  return set;
}

MeasurementSet generate_instance(const EnsembleSpec& spec, std::size_t entry_cap) {
  spec.validate();
  Rng signal_rng = derive_stream(spec.seed, StreamRole::TrueSignal);
  Rng matrix_rng = derive_stream(spec.seed, StreamRole::Matrices);
  Rng noise_rng = derive_stream(spec.seed, StreamRole::Noise);
  const Signal truth = generate_true_signal(spec.p, domain_for(spec.kind), signal_rng);
  return generate_measurements(spec, truth, matrix_rng, noise_rng, entry_cap);
}

FrameBounds estimate_frame_bounds(const MeasurementSet& set, std::size_t samples,
                                  Rng& rng) {
  if (samples < 1)
    throw std::invalid_argument("estimate_frame_bounds: samples must be >= 1");
  const std::size_t d = set.d;
  const std::size_t n = set.n();

  std::vector<double> u(d), v(d), pair(d * d);
  double lo = 0.0, hi = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& e : u) e = rng.normal();
    for (auto& e : v) e = rng.normal();
    kernels::scal(1.0 / std::sqrt(kernels::nrm2sq(u.data(), d)), u.data(), d);
    kernels::scal(1.0 / std::sqrt(kernels::nrm2sq(v.data(), d)), v.data(), d);
    // <u, A_i v> = <vec(A_i), vec(u v^T)>; one long dot per measurement
    for (std::size_t r = 0; r < d; ++r) {
      const double ur = u[r];
      for (std::size_t c = 0; c < d; ++c) pair[r * d + c] = ur * v[c];
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double val = kernels::dot(set.matrix(i), pair.data(), d * d);
      acc += val * val;
    }
    acc /= static_cast<double>(n);
    if (s == 0) {
      lo = hi = acc;
    } else {
      lo = std::min(lo, acc);
      hi = std::max(hi, acc);
    }
  }

  FrameBounds fb;
  fb.lower = lo;
  fb.upper = hi;
  fb.samples = samples;
  const double s2 = set.spec.sigma * set.spec.sigma;
  fb.gamma_margin =
      std::max({0.0, 1.0 - 2.0 * lo / s2, 2.0 * (hi - s2) / s2});
  return fb;
}

}  // namespace qmr
