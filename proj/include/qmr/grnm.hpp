#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qmr/objective.hpp"
#include "qmr/rng.hpp"

namespace qmr {

enum class SolveStatus { GradToleranceMet, ExactStationary, MaxIters, BacktrackFailure };
std::string_view to_string(SolveStatus s);

enum class IterPhase { One, Two };

/// Two-phase solver parameters. Phase I runs Armijo gradient descent until
/// ||g|| < eps1; Phase II runs damped Newton steps with damping
/// beta * ||g||^delta until ||g|| < eps. A single iteration budget covers
/// both phases.
struct GrnmConfig {
  double eps1 = 0.1;
  double eps = 1e-5;
  double beta = 0.5;
  double delta = 0.25;
  double mu1 = 0.1;
  double mu2 = 0.1;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  int max_iters = 5000;
  int max_backtracks = 60;

  void validate() const;  // throws std::invalid_argument
};

struct IterateRecord {
  int k = 0;
  IterPhase phase = IterPhase::One;
  double f = 0.0;
  double grad_norm = 0.0;
  int j_k = 0;
  double tau = 0.0;       // accepted step, alpha^j_k for GRNM phases
  double dir_norm = 0.0;  // Newton direction norm, Phase II only
};

struct CertificateReport {
  double s_norm = 0.0;            // ||(1/n) sum_i phi_i(x) A_i||
  double threshold = 0.0;         // 2 * lambda_lower * ||x||^2
  double lambda_lower_est = 0.0;
  bool passed = false;
  bool degenerate = false;        // x = 0, certificate inapplicable
  bool norm_converged = true;     // power iteration status
};

struct SolveResult {
  std::vector<double> x_hat;
  SolveStatus status = SolveStatus::MaxIters;
  std::vector<IterateRecord> trace;
  int phase1_iters = 0;
  int phase2_iters = 0;
  double wall_time = 0.0;
  double final_f = 0.0;
  double final_grad_norm = 0.0;
  std::optional<CertificateReport> certificate;
};

/// How to obtain the lower frame constant for a certificate.
struct CertifyOptions {
  enum class Source { MonteCarlo, SetupPopulation, Given };
  Source source = Source::MonteCarlo;
  std::size_t samples = 10000;  // Monte Carlo pair count
  double given_value = 0.0;
};

struct NewtonDirection {
  std::vector<double> dir;
  double damping = 0.0;        // beta * ||g||^delta
  double residual_norm = 0.0;  // ||(H + damping I) d + g||
};

/// Standard-normal point scaled by 1/f(0) = 4n/||b||^2; falls back to a unit
/// vector when b is (numerically) zero.
std::vector<double> default_initial_point(QuadraticResidualModel& model, Rng& rng);

/// Solves (H + beta ||g||^delta I) d = -g by Cholesky, retrying once with a
/// tiny diagonal jitter if roundoff makes the damped matrix indefinite.
/// Guarantees <g,d> <= -damping ||d||^2 and ||d|| <= ||g||^(1-delta)/beta up
/// to roundoff; refines once if the residual exceeds 1e-10 ||g||.
NewtonDirection newton_direction(const Matrix& h, std::span<const double> g, double beta,
                                 double delta);

struct PhaseOutcome {
  std::vector<double> x;
  SolveStatus status = SolveStatus::GradToleranceMet;
};

PhaseOutcome phase1(QuadraticResidualModel& model, std::vector<double> x0,
                    const GrnmConfig& cfg, std::vector<IterateRecord>& trace,
                    int& iter_counter);
PhaseOutcome phase2(QuadraticResidualModel& model, std::vector<double> xk,
                    const GrnmConfig& cfg, std::vector<IterateRecord>& trace,
                    int& iter_counter);

SolveResult solve(QuadraticResidualModel& model, const GrnmConfig& cfg,
                  std::span<const double> x0,
                  const CertifyOptions* certify = nullptr);
SolveResult solve(QuadraticResidualModel& model, const GrnmConfig& cfg, Rng& init_rng,
                  const CertifyOptions* certify = nullptr);

CertificateReport certify_local_min(QuadraticResidualModel& model,
                                    std::span<const double> x_hat, double frame_lower);

/// Resolves the frame-lower constant per options, then certifies.
CertificateReport certify_local_min(QuadraticResidualModel& model,
                                    std::span<const double> x_hat,
                                    const CertifyOptions& opts);

}  // namespace qmr
