// qmr: generate, inspect and solve quadratic-measurement regression
// instances, and run benchmark grids.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "qmr/harness.hpp"
#include "qmr/io.hpp"
#include "qmr/kernels.hpp"
#include "qmr/metrics.hpp"

namespace {

using namespace qmr;

int cmd_generate(const EnsembleSpec& spec, const std::string& out_path) {
  spec.validate();
  if (!meets_injectivity_count(spec)) {
    std::cerr << "warning: n=" << spec.n << " is below the injectivity count 2p-1="
              << 2 * spec.p - 1 << "; recovery may be ambiguous\n";
  }
  const MeasurementSet set = generate_instance(spec);
  save_instance(set, out_path);
  std::cout << "wrote " << out_path << " (kind=" << to_string(spec.kind)
            << " p=" << spec.p << " n=" << spec.n << " d=" << set.d
            << " sigma=" << spec.sigma << " noise=" << spec.noise_sigma
            << " seed=" << spec.seed << ")\n";
  return 0;
}

int cmd_check(const std::string& instance_path, bool fd_check) {
  const MeasurementSet set = load_instance(instance_path);
  QuadraticResidualModel model(set);
  std::cout << "instance: kind=" << to_string(set.spec.kind) << " p=" << set.spec.p
            << " n=" << set.spec.n << " d=" << set.d << " noise="
            << set.spec.noise_sigma << "\n";
  std::cout << "f(truth) = " << model.value(set.truth.values) << "\n";
  if (!fd_check) return 0;

  // Central finite differences of f against the analytic gradient, and of
  // the gradient against the analytic Hessian, at a few random points.
  Rng rng(derive_seed(set.spec.seed, 0xfdULL));
  const std::size_t d = set.d;
  bool ok = true;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x(d);
    for (auto& v : x) v = rng.normal();
    double xnorm = 0.0;
    for (double v : x) xnorm += v * v;
    const double h = 1e-5 * (1.0 + std::sqrt(xnorm));

    const auto g = model.gradient(x);
    double worst_g = 0.0;
    std::vector<double> xp = x, xm = x;
    for (std::size_t i = 0; i < d; ++i) {
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      const double fd = (model.value(xp) - model.value(xm)) / (2.0 * h);
      worst_g = std::max(worst_g, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
      xp[i] = x[i];
      xm[i] = x[i];
    }

    Matrix hess;
    model.hessian(x, hess);
    double worst_h = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      const auto gp = model.gradient(xp);
      const auto gm = model.gradient(xm);
      for (std::size_t r = 0; r < d; ++r) {
        const double fd = (gp[r] - gm[r]) / (2.0 * h);
        worst_h = std::max(worst_h,
                           std::abs(fd - hess(r, i)) / std::max(1.0, std::abs(hess(r, i))));
      }
      xp[i] = x[i];
      xm[i] = x[i];
    }

    const bool pass = worst_g <= 1e-6 && worst_h <= 1e-5;
    ok = ok && pass;
    std::cout << "point " << trial << ": grad rel err " << worst_g
              << ", hessian rel err " << worst_h << (pass ? "  [ok]" : "  [FAIL]")
              << "\n";
  }
  std::cout << (ok ? "fd-check PASS\n" : "fd-check FAIL\n");
  return ok ? 0 : 1;
}

void write_trace_csv(const SolveResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "k,phase,f,grad_norm,j_k,tau,dir_norm\n";
  for (const auto& r : result.trace) {
    out << r.k << ',' << (r.phase == IterPhase::One ? 1 : 2) << ',' << r.f << ','
        << r.grad_norm << ',' << r.j_k << ',' << r.tau << ',' << r.dir_norm << "\n";
  }
}

int cmd_solve(const std::string& instance_path, const std::string& solver,
              const GrnmConfig& gcfg, WfConfig wcfg, std::uint64_t seed,
              const std::string& trace_path, bool certify,
              std::optional<double> frame_lower) {
  const MeasurementSet set = load_instance(instance_path);
  QuadraticResidualModel model(set);

  SolveResult result;
  if (solver == "wf") {
    // --eps and --max-iters apply to either solver
    wcfg.eps = gcfg.eps;
    wcfg.max_iters = gcfg.max_iters;
    result = wf_solve(model, wcfg);
  } else {
    Rng init_rng = derive_stream(seed != 0 ? seed : set.spec.seed, StreamRole::SolverInit);
    result = solve(model, gcfg, init_rng);
  }

  if (certify) {
    CertifyOptions copts;
    if (frame_lower) {
      copts.source = CertifyOptions::Source::Given;
      copts.given_value = *frame_lower;
    }
    result.certificate = certify_local_min(model, result.x_hat, copts);
  }

  const double rel_err = relative_error(result.x_hat, set.truth);
  std::cout << "solver:      " << (solver == "wf" ? "wf" : "grnm") << "\n"
            << "status:      " << to_string(result.status) << "\n"
            << "iterations:  " << result.phase1_iters << " + " << result.phase2_iters
            << "\n"
            << "final f:     " << result.final_f << "\n"
            << "final ||g||: " << result.final_grad_norm << "\n"
            << "rel error:   " << rel_err << "\n"
            << "time:        " << result.wall_time << " s\n";
  if (result.certificate) {
    const auto& c = *result.certificate;
    std::cout << "certificate: ||S(x)|| = " << c.s_norm << " vs threshold "
              << c.threshold << " (lambda_lower " << c.lambda_lower_est << ") -> "
              << (c.passed ? "local minimum certified" : "not certified")
              << (c.degenerate ? " [degenerate x=0]" : "") << "\n";
  }
  if (!trace_path.empty()) {
    write_trace_csv(result, trace_path);
    std::cout << "trace:       " << trace_path << "\n";
  }
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& preset, bool full,
              const std::string& out_dir, int jobs, std::optional<std::uint64_t> seed,
              std::optional<int> trials) {
  if (!config_path.empty() && !preset.empty()) {
    std::cerr << "bench: --config and --preset are mutually exclusive\n";
    return 2;
  }
  ExperimentSpec spec;
  std::vector<PlotKind> plots;
  if (!preset.empty()) {
    spec = make_preset(preset, full);
    plots = preset_plots(preset);
  } else if (!config_path.empty()) {
    spec = load_experiment_config(config_path);
    plots = {PlotKind::SuccessVsRatio};
  } else {
    std::cerr << "bench: need --config or --preset\n";
    return 2;
  }
  if (seed) spec.master_seed = *seed;
  if (trials) spec.trials_per_cell = *trials;
  spec.validate();

  std::filesystem::create_directories(out_dir);
  RunOptions opts;
  opts.jobs = jobs;

  const auto records = run_experiment(spec, opts);
  const std::string base = out_dir + "/" + spec.name;
  emit_csv(records, base + ".csv");
  std::cout << "wrote " << base << ".csv (" << records.size() << " rows)\n";
  for (const auto kind : plots) {
    const std::string svg = base + "." + std::string(to_string(kind)) + ".svg";
    emit_plot(records, kind, svg);
    std::cout << "wrote " << svg << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic measurements regression toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate an instance file");
  EnsembleSpec gspec;
  std::string kind_str = "real_gaussian";
  std::string out_path = "instance.qmr";
  gen->add_option("--kind", kind_str, "real_gaussian|complex_gaussian|complex_subgaussian");
  gen->add_option("--p", gspec.p, "signal dimension")->required();
  gen->add_option("--n", gspec.n, "number of measurements")->required();
  gen->add_option("--sigma", gspec.sigma, "entry scale");
  gen->add_option("--noise", gspec.noise_sigma, "observation noise std");
  gen->add_option("--seed", gspec.seed, "master seed");
  gen->add_option("--out", out_path, "output path");

  // check
  auto* chk = app.add_subcommand("check", "inspect an instance / derivative check");
  std::string chk_instance;
  bool fd_check = false;
  chk->add_option("--instance", chk_instance, "instance file")->required();
  chk->add_flag("--fd-check", fd_check, "finite-difference validation");

  // solve
  auto* slv = app.add_subcommand("solve", "solve an instance");
  std::string slv_instance, solver = "grnm", trace_path;
  GrnmConfig gcfg;
  WfConfig wcfg;
  std::uint64_t slv_seed = 0;
  bool certify = false;
  std::optional<double> frame_lower;
  double frame_lower_value = 0.0;
  slv->add_option("--instance", slv_instance, "instance file")->required();
  slv->add_option("--solver", solver, "grnm|wf");
  slv->add_option("--eps", gcfg.eps, "phase-II gradient tolerance");
  slv->add_option("--eps1", gcfg.eps1, "phase-I gradient tolerance");
  slv->add_option("--beta", gcfg.beta, "Newton damping scale");
  slv->add_option("--delta", gcfg.delta, "Newton damping exponent");
  slv->add_option("--mu1", gcfg.mu1, "phase-I Armijo constant");
  slv->add_option("--mu2", gcfg.mu2, "phase-II Armijo constant");
  slv->add_option("--alpha1", gcfg.alpha1, "phase-I backtracking ratio");
  slv->add_option("--alpha2", gcfg.alpha2, "phase-II backtracking ratio");
  slv->add_option("--max-iters", gcfg.max_iters, "iteration budget");
  slv->add_option("--alpha", wcfg.alpha, "wf base step");
  slv->add_option("--seed", slv_seed, "initialization seed (default: instance seed)");
  slv->add_option("--trace", trace_path, "write per-iteration CSV");
  slv->add_flag("--certify", certify, "attach local-minimum certificate");
  auto* flopt = slv->add_option("--frame-lower", frame_lower_value,
                                "lower frame constant for the certificate "
                                "(default: Monte-Carlo estimate)");

  // bench
  auto* ben = app.add_subcommand("bench", "run an experiment grid");
  std::string config_path, preset, out_dir = "bench_out";
  bool full = false;
  int jobs = 0;
  std::uint64_t bench_seed = 0;
  int bench_trials = 0;
  ben->add_option("--config", config_path, "experiment JSON");
  ben->add_option("--preset", preset, "table1|fig1|fig2|fig3|fig4|fig5|fig6");
  ben->add_flag("--full", full, "paper-scale grid (slow)");
  ben->add_option("--out-dir", out_dir, "output directory");
  ben->add_option("--jobs", jobs, "worker threads (default: QMR_JOBS or hardware)");
  auto* bso = ben->add_option("--seed", bench_seed, "master seed override");
  auto* bto = ben->add_option("--trials", bench_trials, "trials per cell override");

  // diagnostics
  auto* info = app.add_subcommand("info", "print build information");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gspec.kind = ensemble_kind_from_string(kind_str);
      return cmd_generate(gspec, out_path);
    }
    if (*chk) return cmd_check(chk_instance, fd_check);
    if (*slv) {
      if (flopt->count() > 0) frame_lower = frame_lower_value;
      return cmd_solve(slv_instance, solver, gcfg, wcfg, slv_seed, trace_path, certify,
                       frame_lower);
    }
    if (*ben) {
      std::optional<std::uint64_t> seed;
      std::optional<int> trials;
      if (bso->count() > 0) seed = bench_seed;
      if (bto->count() > 0) trials = bench_trials;
      return cmd_bench(config_path, preset, full, out_dir, jobs, seed, trials);
    }
    if (*info) {
      std::cout << "kernel backend: "
                << qmr::kernels::backend_name(qmr::kernels::active_backend()) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
