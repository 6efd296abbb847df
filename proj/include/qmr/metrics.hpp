#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qmr/ensembles.hpp"

namespace qmr {

/// Phase-invariant relative error min_theta ||x* - x_hat e^{j theta}|| / ||x*||.
/// Real domain restricts theta to {0, pi}; complex domain uses the closed
/// form with the optimal phase aligning <x_hat, x*> to be real nonnegative.
double relative_error(const Signal& x_hat, const Signal& x_star);

/// x_hat given in working coordinates (embedded [Re; Im] for complex).
double relative_error(std::span<const double> x_hat, const Signal& x_star);

/// Strict thresholds: 1e-5 noiseless, 5e-3 noisy.
bool classify_success(double rel_err, bool noisy);

struct TrialOutcome {
  double rel_err = 0.0;
  bool success = false;
  double wall_time = 0.0;
  int iters_phase1 = 0;
  int iters_phase2 = 0;
  double final_grad_norm = 0.0;
  std::optional<bool> certificate_passed;
};

struct AggregateSummary {
  double success_rate = 0.0;
  double mean_rel_err = 0.0;
  double median_rel_err = 0.0;
  double mean_time = 0.0;
  double mean_iters = 0.0;
};

AggregateSummary aggregate(const std::vector<TrialOutcome>& outcomes);

}  // namespace qmr
