#pragma once

#include <vector>

#include "qmr/grnm.hpp"
#include "qmr/objective.hpp"

namespace qmr {

/// Wirtinger-Flow-style baseline: spectral initialization from
/// Y = (1/n) sum_i b_i A_i, then fixed-step gradient descent on the same
/// objective with a halve-on-increase safeguard.
struct WfConfig {
  double alpha = 0.2;      // base step; effective step is (alpha/sigma)/||x0||^2
  int max_iters = 5000;
  double eps = 1e-5;
  int power_iters = 200;
  double power_tol = 1e-8;
  int max_halvings = 30;

  void validate() const;
};

struct SpectralInit {
  std::vector<double> x0;
  double lambda1 = 0.0;       // leading eigenvalue of Y
  double sigma_hat_sq = 0.0;  // entry variance estimated from the A_i diagonals
  bool power_converged = true;
  bool nonpositive_top = false;  // lambda1 <= 0, unit-norm fallback used
};

/// Leading eigenpair of Y by power iteration on Y + cI (c an infinity-norm
/// bound, so the shifted matrix is PSD even when Y has a negative spectrum),
/// scaled to sqrt(max(lambda1, 0)/sigma_hat^2). Deterministic for a given
/// instance.
SpectralInit spectral_init(const MeasurementSet& set, const WfConfig& cfg = {});

SolveResult wf_solve(QuadraticResidualModel& model, const WfConfig& cfg);

}  // namespace qmr
