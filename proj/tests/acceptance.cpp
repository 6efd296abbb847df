// Acceptance suite: exercises the end-to-end contracts of the library and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmr/harness.hpp"
#include "qmr/io.hpp"
#include "qmr/kernels.hpp"
#include "qmr/metrics.hpp"

using namespace qmr;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

MeasurementSet make_set(EnsembleKind kind, std::size_t p, std::size_t n, double sigma,
                        double noise, std::uint64_t seed) {
  EnsembleSpec spec;
  spec.kind = kind;
  spec.p = p;
  spec.n = n;
  spec.sigma = sigma;
  spec.noise_sigma = noise;
  spec.seed = seed;
  return generate_instance(spec);
}

double norm2(const std::vector<double>& v) {
  return std::sqrt(kernels::nrm2sq(v.data(), v.size()));
}

struct RunOutcome {
  SolveResult result;
  double rel_err = 0.0;
  std::uint64_t seed = 0;
};

std::vector<RunOutcome> grnm_runs(EnsembleKind kind, std::size_t p, std::size_t n,
                                  double sigma, double noise, int trials,
                                  const GrnmConfig& cfg, std::uint64_t seed0 = 1) {
  std::vector<RunOutcome> outs;
  outs.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(t);
    const auto set = make_set(kind, p, n, sigma, noise, seed);
    QuadraticResidualModel model(set);
    Rng init = derive_stream(seed, StreamRole::SolverInit);
    RunOutcome out;
    out.result = solve(model, cfg, init);
    out.rel_err = relative_error(out.result.x_hat, set.truth);
    out.seed = seed;
    outs.push_back(std::move(out));
  }
  return outs;
}

// ---------------------------------------------------------------------------
// 1. derivative correctness

bool criterion_derivatives(std::string& detail) {
  const double t0 = now_seconds();
  Rng pick(2026);
  double worst_g = 0.0, worst_h = 0.0;
  const std::size_t ps[] = {2, 5, 10};
  for (int pair = 0; pair < 50; ++pair) {
    const std::size_t p = ps[pair % 3];
    const std::size_t n = 3 + pick.next_u64() % 38;  // 3..40
    const auto set = make_set(EnsembleKind::RealGaussianSymmetric, p, n, 1.0,
                              pair % 2 ? 0.1 : 0.0, 1000 + pair);
    QuadraticResidualModel model(set);
    std::vector<double> x(set.d);
    for (auto& v : x) v = pick.normal();
    const double h = 1e-5 * (1.0 + norm2(x));

    const auto g = model.gradient(x);
    const double gnorm = norm2(g);
    auto xp = x, xm = x;
    double err_g = 0.0;
    for (std::size_t i = 0; i < set.d; ++i) {
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      const double fd = (model.value(xp) - model.value(xm)) / (2.0 * h);
      err_g = std::max(err_g, std::abs(fd - g[i]));
      xp[i] = x[i];
      xm[i] = x[i];
    }
    worst_g = std::max(worst_g, err_g / std::max(1e-12, gnorm));

    Matrix hess;
    model.hessian(x, hess);
    double hscale = 0.0;
    for (double v : hess.data) hscale = std::max(hscale, std::abs(v));
    double err_h = 0.0;
    for (std::size_t i = 0; i < set.d; ++i) {
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      const auto gp = model.gradient(xp);
      const auto gm = model.gradient(xm);
      for (std::size_t r = 0; r < set.d; ++r) {
        const double fd = (gp[r] - gm[r]) / (2.0 * h);
        err_h = std::max(err_h, std::abs(fd - hess(r, i)));
      }
      xp[i] = x[i];
      xm[i] = x[i];
    }
    worst_h = std::max(worst_h, err_h / std::max(1e-12, hscale));
  }
  const double elapsed = now_seconds() - t0;
  std::ostringstream os;
  os << "50 pairs, worst grad rel err " << worst_g << ", worst hessian rel err "
     << worst_h << ", " << elapsed << " s";
  detail = os.str();
  return worst_g <= 1e-6 && worst_h <= 1e-5 && elapsed < 10.0;
}

// ---------------------------------------------------------------------------
// 2. Newton direction contracts on real solver runs

bool criterion_newton_contracts(std::string& detail) {
  GrnmConfig cfg;
  int phase2_total = 0;
  bool ok = true;
  double worst_res = 0.0;
  for (int run = 0; run < 20; ++run) {
    const std::size_t p = 10 + 5 * (run % 4);
    const auto set = make_set(EnsembleKind::RealGaussianSymmetric, p, 4 * p, 1.0,
                              run % 2 ? 0.1 : 0.0, 3000 + run);
    QuadraticResidualModel model(set);
    Rng init = derive_stream(set.spec.seed, StreamRole::SolverInit);
    const auto x0 = default_initial_point(model, init);
    const auto res = solve(model, cfg, x0);

    // replay the recorded path and verify every phase-II direction
    QuadraticResidualModel replay(set);
    std::vector<double> x = x0;
    std::vector<double> cand(set.d);
    for (const auto& rec : res.trace) {
      std::vector<double> g;
      replay.gradient(x, g);
      const double gnorm = norm2(g);
      if (rec.grad_norm != gnorm) {
        detail = "replay diverged from the recorded trace";
        return false;
      }
      std::vector<double> step;
      if (rec.phase == IterPhase::One) {
        step.resize(set.d);
        for (std::size_t i = 0; i < set.d; ++i) step[i] = -g[i];
      } else {
        Matrix hmat;
        replay.gauss_newton_matrix(x, hmat);
        const auto nd = newton_direction(hmat, g, cfg.beta, cfg.delta);
        step = nd.dir;
        ++phase2_total;

        const double gd = kernels::dot(g.data(), step.data(), set.d);
        const double dn2 = kernels::nrm2sq(step.data(), set.d);
        const double dnorm = std::sqrt(dn2);
        const double damping = cfg.beta * std::pow(gnorm, cfg.delta);
        if (!(gd <= -damping * dn2 * (1.0 - 1e-8))) ok = false;
        if (!(dnorm <= std::pow(gnorm, 1.0 - cfg.delta) / cfg.beta * (1.0 + 1e-8)))
          ok = false;
        if (!(nd.residual_norm <= 1e-10 * gnorm)) ok = false;
        worst_res = std::max(worst_res, nd.residual_norm / gnorm);
      }
      for (std::size_t i = 0; i < set.d; ++i) cand[i] = x[i] + rec.tau * step[i];
      x.swap(cand);
    }
  }
  std::ostringstream os;
  os << phase2_total << " phase-II iterations across 20 runs, worst solve residual "
     << worst_res << " * ||g||";
  detail = os.str();
  return ok && phase2_total > 0;
}

// ---------------------------------------------------------------------------
// shared run sets

struct Campaign {
  std::vector<RunOutcome> noiseless_real;  // criterion 3 (p=50, n=200)
  std::vector<RunOutcome> noisy_real;      // criterion 4 (p=100, n=400)
  std::vector<RunOutcome> complex_runs;    // criterion 6
};

bool criterion_noiseless_recovery(Campaign& camp, std::string& detail) {
  const double t0 = now_seconds();
  GrnmConfig cfg;
  camp.noiseless_real =
      grnm_runs(EnsembleKind::RealGaussianSymmetric, 50, 200, 1.0, 0.0, 20, cfg);
  int successes = 0;
  double mean_err = 0.0;
  for (const auto& run : camp.noiseless_real) {
    if (classify_success(run.rel_err, false)) {
      ++successes;
      mean_err += run.rel_err;
    }
  }
  if (successes > 0) mean_err /= successes;
  const double elapsed = now_seconds() - t0;
  std::ostringstream os;
  os << successes << "/20 successes, mean rel err among successes " << mean_err
     << ", " << elapsed << " s";
  detail = os.str();
  return successes >= 19 && mean_err <= 1e-6 && elapsed < 60.0;
}

bool criterion_noisy_accuracy(Campaign& camp, std::string& detail) {
  GrnmConfig cfg;
  camp.noisy_real =
      grnm_runs(EnsembleKind::RealGaussianSymmetric, 100, 400, 1.0, 0.1, 20, cfg);
  double mean_err = 0.0;
  for (const auto& run : camp.noisy_real) mean_err += run.rel_err;
  mean_err /= static_cast<double>(camp.noisy_real.size());
  std::ostringstream os;
  os << "mean rel err " << mean_err << " (band [1.3e-4, 1.2e-3])";
  detail = os.str();
  return mean_err >= 1.3e-4 && mean_err <= 1.2e-3;
}

bool criterion_error_scaling(std::string& detail) {
  GrnmConfig cfg;
  auto median_err = [&](std::size_t n, std::uint64_t seed0) {
    auto runs = grnm_runs(EnsembleKind::RealGaussianSymmetric, 50, n, 1.0, 0.1, 20,
                          cfg, seed0);
    std::vector<double> errs;
    for (const auto& r : runs) errs.push_back(r.rel_err);
    std::sort(errs.begin(), errs.end());
    return 0.5 * (errs[9] + errs[10]);
  };
  const double med500 = median_err(500, 11000);
  const double med2000 = median_err(2000, 12000);
  const double ratio = med500 / med2000;
  std::ostringstream os;
  os << "median rel err " << med500 << " (n=500) / " << med2000
     << " (n=2000), ratio " << ratio << " (band [1.3, 3.2])";
  detail = os.str();
  return ratio >= 1.3 && ratio <= 3.2;
}

bool criterion_complex_path(Campaign& camp, std::string& detail) {
  // The Newton phase runs to a deeper gradient tolerance here: with the
  // unit-norm complex truth the transverse curvature is O(sigma^2), so a
  // 1e-5 gradient stop would park the iterate around 1e-4 relative error.
  // The superlinear tail reaches 1e-8 within a handful of extra steps.
  GrnmConfig cfg;
  cfg.eps = 1e-8;
  camp.complex_runs =
      grnm_runs(EnsembleKind::ComplexGaussianHermitian, 50, 200, 1.0, 0.0, 20, cfg);
  int successes = 0;
  double mean_err = 0.0;
  for (const auto& run : camp.complex_runs) {
    if (classify_success(run.rel_err, false)) {
      ++successes;
      mean_err += run.rel_err;
    }
  }
  if (successes > 0) mean_err /= successes;

  // embedding consistency: complex-arithmetic objective vs embedded model
  double worst_embed = 0.0;
  Rng rng(777);
  for (int rep = 0; rep < 3; ++rep) {
    const std::size_t p = 5, n = 12;
    std::vector<std::vector<std::complex<double>>> mats(n);
    std::vector<std::complex<double>> z(p);
    for (auto& v : z) v = {rng.normal(), rng.normal()};

    MeasurementSet set;
    set.spec.kind = EnsembleKind::ComplexGaussianHermitian;
    set.spec.p = p;
    set.spec.n = n;
    set.d = 2 * p;
    set.truth.domain = Domain::Complex;
    set.truth.p = p;
    set.mats.resize(n * set.d * set.d);
    set.b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& a = mats[i];
      a.resize(p * p);
      for (std::size_t k = 0; k < p; ++k) {
        a[k * p + k] = {rng.normal(), 0.0};
        for (std::size_t l = k + 1; l < p; ++l) {
          a[k * p + l] = {rng.normal(), rng.normal()};
          a[l * p + k] = std::conj(a[k * p + l]);
        }
      }
      auto [m, u] = embed_complex(a, p, z);
      std::copy(m.data.begin(), m.data.end(), set.mats.begin() + i * set.d * set.d);
      set.truth.values = u;
      std::complex<double> q = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        std::complex<double> row = 0.0;
        for (std::size_t l = 0; l < p; ++l) row += a[k * p + l] * z[l];
        q += std::conj(z[k]) * row;
      }
      set.b[i] = q.real();
    }

    // evaluate both routes at a second random complex point
    std::vector<std::complex<double>> y(p);
    for (auto& v : y) v = {rng.normal(), rng.normal()};
    std::vector<double> yu(2 * p);
    for (std::size_t k = 0; k < p; ++k) {
      yu[k] = y[k].real();
      yu[p + k] = y[k].imag();
    }
    double f_complex = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> q = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        std::complex<double> row = 0.0;
        for (std::size_t l = 0; l < p; ++l) row += mats[i][k * p + l] * y[l];
        q += std::conj(y[k]) * row;
      }
      const double phi = q.real() - set.b[i];
      f_complex += phi * phi;
    }
    f_complex /= 4.0 * static_cast<double>(n);
    QuadraticResidualModel model(set);
    const double f_embedded = model.value(yu);
    worst_embed = std::max(
        worst_embed, std::abs(f_complex - f_embedded) / (1.0 + std::abs(f_complex)));
  }

  std::ostringstream os;
  os << successes << "/20 successes, mean rel err among successes " << mean_err
     << ", embedding mismatch " << worst_embed;
  detail = os.str();
  return successes >= 19 && mean_err <= 1e-6 && worst_embed <= 1e-10;
}

bool criterion_monotone_traces(const Campaign& camp, std::string& detail) {
  std::size_t checked = 0;
  bool ok = true;
  auto check_traces = [&](const std::vector<RunOutcome>& runs) {
    for (const auto& run : runs) {
      const auto& tr = run.result.trace;
      for (std::size_t i = 1; i < tr.size(); ++i) {
        if (!(tr[i].f <= tr[i - 1].f)) ok = false;
        const bool both_p2 =
            tr[i - 1].phase == IterPhase::Two && tr[i].phase == IterPhase::Two;
        const bool moved = tr[i - 1].tau * tr[i - 1].dir_norm > 0.0;
        if (both_p2 && moved && !(tr[i].f < tr[i - 1].f)) ok = false;
        ++checked;
      }
      if (!tr.empty() && !(run.result.final_f <= tr.back().f)) ok = false;
    }
  };
  check_traces(camp.noiseless_real);
  check_traces(camp.noisy_real);
  check_traces(camp.complex_runs);
  std::ostringstream os;
  os << checked << " consecutive record pairs checked across 60 runs";
  detail = os.str();
  return ok && checked > 0;
}

bool criterion_superlinear_tail(std::string& detail) {
  // With the default 1e-5 stop, well-conditioned real instances finish the
  // Newton phase in only two steps; a deeper tolerance exposes a tail of
  // three or more full Newton steps to measure the rate on.
  GrnmConfig cfg;
  cfg.eps = 1e-9;
  const auto runs =
      grnm_runs(EnsembleKind::RealGaussianSymmetric, 50, 200, 1.0, 0.0, 20, cfg, 30000);
  int eligible = 0;
  bool ok = true;
  double worst_c = 0.0;
  for (const auto& run : runs) {
    if (run.result.status != SolveStatus::GradToleranceMet) continue;
    std::vector<const IterateRecord*> p2;
    for (const auto& r : run.result.trace)
      if (r.phase == IterPhase::Two) p2.push_back(&r);
    if (p2.size() < 3) continue;
    ++eligible;

    // final three iterations take full steps
    for (std::size_t i = p2.size() - 3; i < p2.size(); ++i)
      if (p2[i]->j_k != 0) ok = false;

    // gradient norm chain including the post-step gradient
    std::vector<double> gs;
    for (std::size_t i = p2.size() - 3; i < p2.size(); ++i)
      gs.push_back(p2[i]->grad_norm);
    gs.push_back(run.result.final_grad_norm);
    for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
      const double bound = 1e3 * std::pow(gs[i], 1.125);
      if (!(gs[i + 1] <= bound)) ok = false;
      if (gs[i + 1] > 0.0 && bound > 0.0) worst_c = std::max(worst_c, gs[i + 1] / bound);
    }
  }
  std::ostringstream os;
  os << eligible << " eligible runs, worst chain ratio " << worst_c;
  detail = os.str();
  return ok && eligible >= 10;
}

bool criterion_frame_bounds(std::string& detail) {
  const auto set = make_set(EnsembleKind::RealGaussianSymmetric, 20, 2000, 1.0, 0.0, 9);
  Rng rng = derive_stream(set.spec.seed, StreamRole::FrameSampling);
  const auto fb = estimate_frame_bounds(set, 10000, rng);
  std::ostringstream os;
  os << "lower " << fb.lower << " (band [0.35, 0.65]), upper " << fb.upper
     << " (band [0.85, 1.15])";
  detail = os.str();
  return fb.lower >= 0.35 && fb.lower <= 0.65 && fb.upper >= 0.85 && fb.upper <= 1.15;
}

bool criterion_certificates(const Campaign& camp, std::string& detail) {
  int certified = 0, successes = 0;
  for (const auto& run : camp.noiseless_real) {
    if (!classify_success(run.rel_err, false)) continue;
    ++successes;
    const auto set =
        make_set(EnsembleKind::RealGaussianSymmetric, 50, 200, 1.0, 0.0, run.seed);
    QuadraticResidualModel model(set);
    // 0.8 * population lower bound sigma^2/2
    const auto rep = certify_local_min(model, run.result.x_hat, 0.4);
    if (rep.passed) ++certified;
  }
  std::ostringstream os;
  os << certified << "/" << successes << " successful runs certified";
  detail = os.str();
  return successes > 0 && certified == successes;
}

bool criterion_baseline(std::string& detail) {
  GrnmConfig gcfg;
  WfConfig wcfg;
  double grnm_time = 0.0, wf_time = 0.0;
  int grnm_succ = 0, wf_succ = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const auto set = make_set(EnsembleKind::RealGaussianSymmetric, 100, 400, 1.0, 0.0,
                              20000 + static_cast<std::uint64_t>(t));
    {
      QuadraticResidualModel model(set);
      Rng init = derive_stream(set.spec.seed, StreamRole::SolverInit);
      const auto res = solve(model, gcfg, init);
      grnm_time += res.wall_time;
      grnm_succ += classify_success(relative_error(res.x_hat, set.truth), false);
    }
    {
      QuadraticResidualModel model(set);
      const auto res = wf_solve(model, wcfg);
      wf_time += res.wall_time;
      wf_succ += classify_success(relative_error(res.x_hat, set.truth), false);
    }
  }
  grnm_time /= trials;
  wf_time /= trials;
  std::ostringstream os;
  os << "grnm " << grnm_time << " s mean, wf " << wf_time << " s mean; success "
     << grnm_succ << "/20 vs " << wf_succ << "/20";
  detail = os.str();
  return grnm_time <= wf_time && grnm_succ >= 10 && wf_succ >= 10;
}

bool criterion_determinism(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "qmr_acceptance";
  fs::create_directories(base);

  ExperimentSpec spec;
  spec.name = "determinism";
  spec.kinds = {EnsembleKind::RealGaussianSymmetric};
  spec.p_values = {8};
  spec.n_values = {24};
  spec.sigma_values = {1.0};
  spec.noise_values = {0.0, 0.1};
  spec.solvers = {SolverId::Grnm, SolverId::Wf};
  spec.trials_per_cell = 2;
  spec.master_seed = 4242;
  const fs::path config = base / "config.json";
  {
    std::ofstream out(config);
    out << experiment_to_json(spec);
  }

  const fs::path dir1 = base / "run1";
  const fs::path dir2 = base / "run2";
  const std::string cmd_base = std::string(QMR_CLI_BIN) + " bench --config " +
                               config.string() + " --jobs 2 --out-dir ";
  if (std::system((cmd_base + dir1.string() + " > /dev/null").c_str()) != 0 ||
      std::system((cmd_base + dir2.string() + " > /dev/null").c_str()) != 0) {
    detail = "qmr bench invocation failed";
    return false;
  }

  const auto rec1 = parse_csv((dir1 / "determinism.csv").string());
  const auto rec2 = parse_csv((dir2 / "determinism.csv").string());
  if (rec1.size() != rec2.size() || rec1.empty()) {
    detail = "row count mismatch";
    return false;
  }
  auto eq = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  for (std::size_t i = 0; i < rec1.size(); ++i) {
    const auto& a = rec1[i];
    const auto& b = rec2[i];
    const bool same = a.experiment == b.experiment && a.cell_index == b.cell_index &&
                      a.solver == b.solver && a.kind == b.kind && a.p == b.p &&
                      a.n == b.n && eq(a.sigma, b.sigma) &&
                      eq(a.noise_sigma, b.noise_sigma) && a.trial == b.trial &&
                      a.seed == b.seed && eq(a.rel_err, b.rel_err) &&
                      a.success == b.success && a.iters_phase1 == b.iters_phase1 &&
                      a.iters_phase2 == b.iters_phase2 &&
                      eq(a.final_grad_norm, b.final_grad_norm) &&
                      a.certificate_passed == b.certificate_passed;
    if (!same) {
      detail = "field mismatch at row " + std::to_string(i);
      return false;
    }
  }
  std::ostringstream os;
  os << rec1.size() << " rows identical across two qmr bench runs (time column aside)";
  detail = os.str();
  return true;
}

}  // namespace

int main() {
  Campaign camp;
  struct Entry {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const Entry entries[] = {
      {1, "derivative-correctness", criterion_derivatives},
      {2, "newton-direction-contracts", criterion_newton_contracts},
      {3, "noiseless-exact-recovery",
       [&](std::string& d) { return criterion_noiseless_recovery(camp, d); }},
      {4, "noisy-accuracy",
       [&](std::string& d) { return criterion_noisy_accuracy(camp, d); }},
      {5, "error-rate-scaling", criterion_error_scaling},
      {6, "complex-path",
       [&](std::string& d) { return criterion_complex_path(camp, d); }},
      {7, "monotone-traces",
       [&](std::string& d) { return criterion_monotone_traces(camp, d); }},
      {8, "superlinear-tail", criterion_superlinear_tail},
      {9, "frame-bound-concentration", criterion_frame_bounds},
      {10, "certificate-soundness",
       [&](std::string& d) { return criterion_certificates(camp, d); }},
      {11, "baseline-comparison", criterion_baseline},
      {12, "bench-determinism", criterion_determinism},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    std::string detail;
    bool passed = false;
    const double t0 = now_seconds();
    try {
      passed = entry.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed = now_seconds() - t0;
    std::printf("%s  %2d  %-28s %s  [%.1f s]\n", passed ? "PASS" : "FAIL", entry.id,
                entry.name, detail.c_str(), elapsed);
    std::fflush(stdout);
    failures += passed ? 0 : 1;
  }
  if (failures == 0) {
    std::printf("all 12 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
