#include "qmr/grnm.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qmr/kernels.hpp"

namespace qmr {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::GradToleranceMet:
      return "grad_tolerance_met";
    case SolveStatus::ExactStationary:
      return "exact_stationary";
    case SolveStatus::MaxIters:
      return "max_iters";
    case SolveStatus::BacktrackFailure:
      return "backtrack_failure";
  }
  return "unknown";
}

void GrnmConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!(eps1 > 0.0)) throw std::invalid_argument("GrnmConfig: eps1 must be > 0");
  if (!(eps > 0.0 && eps < eps1))
    throw std::invalid_argument("GrnmConfig: need 0 < eps < eps1");
  if (!(beta > 0.0)) throw std::invalid_argument("GrnmConfig: beta must be > 0");
  if (!in_unit(delta)) throw std::invalid_argument("GrnmConfig: delta must be in (0,1)");
  if (!in_unit(mu1)) throw std::invalid_argument("GrnmConfig: mu1 must be in (0,1)");
  if (!in_unit(mu2)) throw std::invalid_argument("GrnmConfig: mu2 must be in (0,1)");
  if (!in_unit(alpha1)) throw std::invalid_argument("GrnmConfig: alpha1 must be in (0,1)");
  if (!in_unit(alpha2)) throw std::invalid_argument("GrnmConfig: alpha2 must be in (0,1)");
  if (max_iters < 1) throw std::invalid_argument("GrnmConfig: max_iters must be >= 1");
  if (max_backtracks < 1)
    throw std::invalid_argument("GrnmConfig: max_backtracks must be >= 1");
}

std::vector<double> default_initial_point(QuadraticResidualModel& model, Rng& rng) {
  const std::size_t d = model.dim();
  std::vector<double> z(d);
  for (auto& v : z) v = rng.normal();
  const double f0 = kernels::nrm2sq(model.set().b.data(), model.set().n()) /
                    (4.0 * static_cast<double>(model.set().n()));
  if (f0 < 1e-12) {
    kernels::scal(1.0 / std::sqrt(kernels::nrm2sq(z.data(), d)), z.data(), d);
    return z;
  }
  kernels::scal(1.0 / f0, z.data(), d);
  return z;
}

NewtonDirection newton_direction(const Matrix& h, std::span<const double> g, double beta,
                                 double delta) {
  const std::size_t d = g.size();
  if (h.rows != d || h.cols != d)
    throw std::invalid_argument("newton_direction: dimension mismatch");
  const double gnorm = std::sqrt(kernels::nrm2sq(g.data(), d));
  if (!(gnorm > 0.0))
    throw std::invalid_argument("newton_direction: zero gradient");

  NewtonDirection out;
  out.damping = beta * std::pow(gnorm, delta);

  Matrix damped = h;
  for (std::size_t i = 0; i < d; ++i) damped(i, i) += out.damping;

  Matrix factor = damped;
  if (!cholesky_inplace(factor)) {
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += damped(i, i);
    factor = damped;
    for (std::size_t i = 0; i < d; ++i) factor(i, i) += 1e-12 * trace;
    if (!cholesky_inplace(factor))
      throw std::runtime_error("newton_direction: damped system not positive definite");
  }

  std::vector<double> rhs(g.begin(), g.end());
  kernels::scal(-1.0, rhs.data(), d);
  out.dir.resize(d);
  cholesky_solve(factor, rhs.data(), out.dir.data());

  auto residual = [&](std::vector<double>& r) {
    r.resize(d);
    kernels::matvec(damped.data.data(), d, d, out.dir.data(), r.data());
    for (std::size_t i = 0; i < d; ++i) r[i] += g[i];
    return std::sqrt(kernels::nrm2sq(r.data(), d));
  };

  std::vector<double> r;
  out.residual_norm = residual(r);
  if (out.residual_norm > 1e-10 * gnorm) {
    // one step of iterative refinement
    std::vector<double> corr(d);
    kernels::scal(-1.0, r.data(), d);
    cholesky_solve(factor, r.data(), corr.data());
    kernels::axpy(1.0, corr.data(), out.dir.data(), d);
    out.residual_norm = residual(r);
  }
  return out;
}

namespace {

// Smallest j in [0, max_backtracks] with
//   f(x + alpha^j step) <= f + slope * alpha^j ; returns -1 on failure.
// "slope" is -mu1 ||g||^2 in Phase I and mu2 <g,d> in Phase II.
struct ArmijoResult {
  int j = -1;
  double tau = 0.0;
  double f_new = 0.0;
};

ArmijoResult armijo_search(QuadraticResidualModel& model, std::span<const double> x,
                           std::span<const double> step, double f, double slope,
                           double alpha, int max_backtracks,
                           std::vector<double>& candidate) {
  const std::size_t d = x.size();
  candidate.resize(d);
  double tau = 1.0;
  for (int j = 0; j <= max_backtracks; ++j) {
    for (std::size_t i = 0; i < d; ++i) candidate[i] = x[i] + tau * step[i];
    const double f_new = model.value(candidate);
    if (f_new <= f + slope * tau) return {j, tau, f_new};
    tau *= alpha;
  }
  return {};
}

}  // namespace

PhaseOutcome phase1(QuadraticResidualModel& model, std::vector<double> x0,
                    const GrnmConfig& cfg, std::vector<IterateRecord>& trace,
                    int& iter_counter) {
  cfg.validate();
  const std::size_t d = model.dim();
  std::vector<double> x = std::move(x0);
  std::vector<double> g, step(d), candidate;

  while (true) {
    model.gradient(x, g);
    const double gnorm = std::sqrt(kernels::nrm2sq(g.data(), d));
    if (gnorm == 0.0) return {std::move(x), SolveStatus::ExactStationary};
    if (gnorm < cfg.eps1) return {std::move(x), SolveStatus::GradToleranceMet};
    if (iter_counter >= cfg.max_iters) return {std::move(x), SolveStatus::MaxIters};

    const double f = model.value(x);
    for (std::size_t i = 0; i < d; ++i) step[i] = -g[i];
    const auto ls = armijo_search(model, x, step, f, -cfg.mu1 * gnorm * gnorm,
                                  cfg.alpha1, cfg.max_backtracks, candidate);
    if (ls.j < 0) return {std::move(x), SolveStatus::BacktrackFailure};

    trace.push_back({iter_counter, IterPhase::One, f, gnorm, ls.j, ls.tau, 0.0});
    x = candidate;
    ++iter_counter;
  }
}

PhaseOutcome phase2(QuadraticResidualModel& model, std::vector<double> xk,
                    const GrnmConfig& cfg, std::vector<IterateRecord>& trace,
                    int& iter_counter) {
  cfg.validate();
  const std::size_t d = model.dim();
  std::vector<double> x = std::move(xk);
  std::vector<double> g, candidate;
  Matrix h;

  while (true) {
    model.gradient(x, g);
    const double gnorm = std::sqrt(kernels::nrm2sq(g.data(), d));
    if (gnorm == 0.0) return {std::move(x), SolveStatus::ExactStationary};
    if (gnorm < cfg.eps) return {std::move(x), SolveStatus::GradToleranceMet};
    if (iter_counter >= cfg.max_iters) return {std::move(x), SolveStatus::MaxIters};

    model.gauss_newton_matrix(x, h);
    const auto nd = newton_direction(h, g, cfg.beta, cfg.delta);
    const double slope = kernels::dot(g.data(), nd.dir.data(), d);
    const double f = model.value(x);
    const auto ls = armijo_search(model, x, nd.dir, f, cfg.mu2 * slope, cfg.alpha2,
                                  cfg.max_backtracks, candidate);
    if (ls.j < 0) return {std::move(x), SolveStatus::BacktrackFailure};

    const double dir_norm = std::sqrt(kernels::nrm2sq(nd.dir.data(), d));
    trace.push_back({iter_counter, IterPhase::Two, f, gnorm, ls.j, ls.tau, dir_norm});
    x = candidate;
    ++iter_counter;
  }
}

SolveResult solve(QuadraticResidualModel& model, const GrnmConfig& cfg,
                  std::span<const double> x0, const CertifyOptions* certify) {
  cfg.validate();
  if (x0.size() != model.dim())
    throw std::invalid_argument("solve: initial point dimension mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult res;
  int iter_counter = 0;

  auto p1 = phase1(model, {x0.begin(), x0.end()}, cfg, res.trace, iter_counter);
  res.phase1_iters = iter_counter;
  res.status = p1.status;

  if (p1.status == SolveStatus::GradToleranceMet) {
    auto p2 = phase2(model, std::move(p1.x), cfg, res.trace, iter_counter);
    res.phase2_iters = iter_counter - res.phase1_iters;
    res.status = p2.status;
    res.x_hat = std::move(p2.x);
  } else {
    res.x_hat = std::move(p1.x);
  }

  res.final_f = model.value(res.x_hat);
  res.final_grad_norm =
      std::sqrt(kernels::nrm2sq(model.gradient(res.x_hat).data(), model.dim()));

  if (certify) res.certificate = certify_local_min(model, res.x_hat, *certify);

  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

SolveResult solve(QuadraticResidualModel& model, const GrnmConfig& cfg, Rng& init_rng,
                  const CertifyOptions* certify) {
  const auto x0 = default_initial_point(model, init_rng);
  return solve(model, cfg, x0, certify);
}

CertificateReport certify_local_min(QuadraticResidualModel& model,
                                    std::span<const double> x_hat, double frame_lower) {
  if (!(frame_lower > 0.0))
    throw std::invalid_argument("certify_local_min: frame_lower must be > 0");
  CertificateReport rep;
  rep.lambda_lower_est = frame_lower;
  const double xnorm2 = kernels::nrm2sq(x_hat.data(), x_hat.size());
  if (xnorm2 == 0.0) {
    rep.degenerate = true;
    rep.threshold = 0.0;
    rep.passed = false;
    return rep;
  }
  const auto est = model.residual_matrix_norm(x_hat);
  rep.s_norm = est.value;
  rep.norm_converged = est.converged;
  rep.threshold = 2.0 * frame_lower * xnorm2;
  rep.passed = rep.s_norm < rep.threshold;
  return rep;
}

CertificateReport certify_local_min(QuadraticResidualModel& model,
                                    std::span<const double> x_hat,
                                    const CertifyOptions& opts) {
  double frame_lower = 0.0;
  switch (opts.source) {
    case CertifyOptions::Source::Given:
      frame_lower = opts.given_value;
      break;
    case CertifyOptions::Source::SetupPopulation:
      frame_lower = 0.5 * model.set().spec.sigma * model.set().spec.sigma;
      break;
    case CertifyOptions::Source::MonteCarlo: {
      Rng rng = derive_stream(model.set().spec.seed, StreamRole::FrameSampling);
      frame_lower = estimate_frame_bounds(model.set(), opts.samples, rng).lower;
      break;
    }
  }
  return certify_local_min(model, x_hat, frame_lower);
}

}  // namespace qmr
