#include "qmr/wf.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qmr/kernels.hpp"

namespace qmr {

void WfConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("WfConfig: alpha must be > 0");
  if (max_iters < 1) throw std::invalid_argument("WfConfig: max_iters must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("WfConfig: eps must be > 0");
  if (power_iters < 1) throw std::invalid_argument("WfConfig: power_iters must be >= 1");
  if (!(power_tol > 0.0)) throw std::invalid_argument("WfConfig: power_tol must be > 0");
  if (max_halvings < 1) throw std::invalid_argument("WfConfig: max_halvings must be >= 1");
}

SpectralInit spectral_init(const MeasurementSet& set, const WfConfig& cfg) {
  cfg.validate();
  const std::size_t d = set.d;
  const std::size_t n = set.n();

  Matrix y(d, d);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::axpy(set.b[i] * inv_n, set.matrix(i), y.data.data(), d * d);
  }

  // Shift so the dominant eigenvalue of the iterated matrix is the algebraic
  // top of Y rather than the largest in magnitude.
  const double shift = max_abs_row_sum(y);
  Matrix shifted = y;
  for (std::size_t i = 0; i < d; ++i) shifted(i, i) += shift;

  const auto pi = power_iteration(shifted, cfg.power_tol,
                                  static_cast<std::size_t>(cfg.power_iters),
                                  derive_seed(0x57f0ULL, d));

  SpectralInit init;
  init.power_converged = pi.converged;
  std::vector<double> tmp(d);
  init.lambda1 = quad_form(y.data.data(), d, pi.vector.data(), tmp.data());

  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* mat = set.matrix(i);
    for (std::size_t k = 0; k < d; ++k) sq += mat[k * d + k] * mat[k * d + k];
  }
  init.sigma_hat_sq = sq / static_cast<double>(n * d);

  init.x0 = pi.vector;
  if (init.lambda1 > 0.0 && init.sigma_hat_sq > 0.0) {
    kernels::scal(std::sqrt(init.lambda1 / init.sigma_hat_sq), init.x0.data(), d);
  } else {
    init.nonpositive_top = true;  // keep the unit-norm eigenvector
  }
  return init;
}

SolveResult wf_solve(QuadraticResidualModel& model, const WfConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = model.dim();

  SolveResult res;
  const auto init = spectral_init(model.set(), cfg);
  std::vector<double> x = init.x0;

  const double x0sq = std::max(kernels::nrm2sq(x.data(), d), 1e-12);
  double eta = (cfg.alpha / model.set().spec.sigma) / x0sq;

  std::vector<double> g, candidate(d);
  int k = 0;
  res.status = SolveStatus::MaxIters;
  while (k < cfg.max_iters) {
    model.gradient(x, g);
    const double gnorm = std::sqrt(kernels::nrm2sq(g.data(), d));
    if (gnorm == 0.0) {
      res.status = SolveStatus::ExactStationary;
      break;
    }
    if (gnorm < cfg.eps) {
      res.status = SolveStatus::GradToleranceMet;
      break;
    }
    const double f = model.value(x);

    // Halve-on-increase safeguard; the reduced step is kept for later
    // iterations, so accepted f-values never increase.
    int halvings = 0;
    bool accepted = false;
    while (halvings <= cfg.max_halvings) {
      for (std::size_t i = 0; i < d; ++i) candidate[i] = x[i] - eta * g[i];
      if (model.value(candidate) <= f) {
        accepted = true;
        break;
      }
      eta *= 0.5;
      ++halvings;
    }
    if (!accepted) {
      res.status = SolveStatus::BacktrackFailure;
      break;
    }

    // j_k counts safeguard halvings; tau carries the step actually taken
    res.trace.push_back({k, IterPhase::One, f, gnorm, halvings, eta, 0.0});
    x = candidate;
    ++k;
  }

  res.x_hat = std::move(x);
  res.phase1_iters = k;
  res.phase2_iters = 0;
  res.final_f = model.value(res.x_hat);
  res.final_grad_norm =
      std::sqrt(kernels::nrm2sq(model.gradient(res.x_hat).data(), d));
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace qmr
