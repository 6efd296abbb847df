#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmr/ensembles.hpp"
#include "qmr/grnm.hpp"
#include "qmr/wf.hpp"

namespace qmr {

enum class SolverId { Grnm, Wf };
std::string_view to_string(SolverId s);
SolverId solver_from_string(std::string_view s);

/// A grid of experiment cells: the cartesian product of
/// kinds x p_values x (np_ratios | n_values) x sigma_values x noise_values,
/// enumerated in that nesting order. Each cell runs trials_per_cell trials;
/// every trial generates one instance (seed derived from the master seed,
/// cell index and trial index) shared by all requested solvers.
struct ExperimentSpec {
  std::string name = "experiment";
  std::vector<EnsembleKind> kinds{EnsembleKind::RealGaussianSymmetric};
  std::vector<std::size_t> p_values{50};
  std::vector<double> np_ratios;      // n = round(ratio * p) when nonempty
  std::vector<std::size_t> n_values;  // used when np_ratios is empty
  std::vector<double> sigma_values{1.0};
  std::vector<double> noise_values{0.0};
  std::vector<SolverId> solvers{SolverId::Grnm, SolverId::Wf};
  int trials_per_cell = 20;
  std::uint64_t master_seed = 1;
  GrnmConfig grnm;
  WfConfig wf;

  void validate() const;
  std::size_t cell_count() const;
};

struct CellParams {
  EnsembleKind kind;
  std::size_t p;
  std::size_t n;
  double sigma;
  double noise_sigma;
};

CellParams cell_params(const ExperimentSpec& spec, std::size_t cell_index);

struct TrialRecord {
  std::string experiment;
  std::size_t cell_index = 0;
  SolverId solver = SolverId::Grnm;
  EnsembleKind kind = EnsembleKind::RealGaussianSymmetric;
  std::size_t p = 0;
  std::size_t n = 0;
  double sigma = 1.0;
  double noise_sigma = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double rel_err = 0.0;
  bool success = false;
  int iters_phase1 = 0;
  int iters_phase2 = 0;
  double time_seconds = 0.0;
  double final_grad_norm = 0.0;
  std::optional<bool> certificate_passed;
};

struct RunOptions {
  int jobs = 0;          // 0: QMR_JOBS env, else hardware concurrency
  bool certify = false;  // attach a Monte-Carlo certificate to GRNM rows
};

/// Runs the whole grid. Trials may execute on a worker pool; records come
/// back ordered by (cell, trial, solver) and their content is independent
/// of the worker count (time_seconds aside). Solver failures become rows
/// with NaN error and success=false rather than aborting the run.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec,
                                        const RunOptions& opts = {});

/// CSV with RFC-4180 quoting and shortest round-trip float formatting.
void emit_csv(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> parse_csv(const std::string& path);

enum class PlotKind { SuccessVsRatio, ErrVsP, TimeVsP, ErrVsSigma };
std::string_view to_string(PlotKind k);

/// Writes a self-contained SVG line chart (one polyline per solver/noise
/// series) plus a sibling .dat file with the aggregated series. Error plots
/// use a log y-axis with values clamped to 1e-16.
void emit_plot(const std::vector<TrialRecord>& records, PlotKind kind,
               const std::string& svg_path);

/// Named grids. Desk-scale shrinks dimensions and trial counts so a preset
/// finishes in minutes; full restores the larger grids.
ExperimentSpec make_preset(const std::string& name, bool full);
std::vector<std::string> preset_names();
std::vector<PlotKind> preset_plots(const std::string& name);

/// JSON round-trip for configs; missing fields keep their defaults.
std::string experiment_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const std::string& text);
ExperimentSpec load_experiment_config(const std::string& path);

}  // namespace qmr
