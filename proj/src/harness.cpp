#include "qmr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qmr/metrics.hpp"

namespace qmr {

std::string_view to_string(SolverId s) { return s == SolverId::Grnm ? "grnm" : "wf"; }

SolverId solver_from_string(std::string_view s) {
  if (s == "grnm") return SolverId::Grnm;
  if (s == "wf") return SolverId::Wf;
  throw std::invalid_argument("unknown solver: " + std::string(s));
}

void ExperimentSpec::validate() const {
  if (kinds.empty() || p_values.empty() || sigma_values.empty() ||
      noise_values.empty() || solvers.empty())
    throw std::invalid_argument("ExperimentSpec: empty grid dimension");
  if (np_ratios.empty() == n_values.empty())
    throw std::invalid_argument(
        "ExperimentSpec: exactly one of np_ratios / n_values must be set");
  if (trials_per_cell < 1)
    throw std::invalid_argument("ExperimentSpec: trials_per_cell must be >= 1");
  grnm.validate();
  wf.validate();
}

std::size_t ExperimentSpec::cell_count() const {
  const std::size_t sizes = np_ratios.empty() ? n_values.size() : np_ratios.size();
  return kinds.size() * p_values.size() * sizes * sigma_values.size() *
         noise_values.size();
}

CellParams cell_params(const ExperimentSpec& spec, std::size_t cell_index) {
  const std::size_t n_sizes =
      spec.np_ratios.empty() ? spec.n_values.size() : spec.np_ratios.size();
  std::size_t idx = cell_index;
  const std::size_t noise_i = idx % spec.noise_values.size();
  idx /= spec.noise_values.size();
  const std::size_t sigma_i = idx % spec.sigma_values.size();
  idx /= spec.sigma_values.size();
  const std::size_t size_i = idx % n_sizes;
  idx /= n_sizes;
  const std::size_t p_i = idx % spec.p_values.size();
  idx /= spec.p_values.size();
  const std::size_t kind_i = idx;
  if (kind_i >= spec.kinds.size())
    throw std::out_of_range("cell_params: cell index out of range");

  CellParams c{};
  c.kind = spec.kinds[kind_i];
  c.p = spec.p_values[p_i];
  if (spec.np_ratios.empty()) {
    c.n = spec.n_values[size_i];
  } else {
    c.n = static_cast<std::size_t>(std::llround(spec.np_ratios[size_i] *
                                                static_cast<double>(c.p)));
    if (c.n < 1) c.n = 1;
  }
  c.sigma = spec.sigma_values[sigma_i];
  c.noise_sigma = spec.noise_values[noise_i];
  return c;
}

namespace {

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("QMR_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

TrialRecord base_record(const ExperimentSpec& spec, std::size_t cell, int trial,
                        const CellParams& params, std::uint64_t seed, SolverId solver) {
  TrialRecord rec;
  rec.experiment = spec.name;
  rec.cell_index = cell;
  rec.solver = solver;
  rec.kind = params.kind;
  rec.p = params.p;
  rec.n = params.n;
  rec.sigma = params.sigma;
  rec.noise_sigma = params.noise_sigma;
  rec.trial = trial;
  rec.seed = seed;
  return rec;
}

void run_trial(const ExperimentSpec& spec, std::size_t cell, int trial,
               const RunOptions& opts, TrialRecord* out) {
  const CellParams params = cell_params(spec, cell);
  const std::uint64_t seed = derive_seed(derive_seed(spec.master_seed, cell),
                                         static_cast<std::uint64_t>(trial));

  EnsembleSpec espec;
  espec.kind = params.kind;
  espec.p = params.p;
  espec.n = params.n;
  espec.sigma = params.sigma;
  espec.noise_sigma = params.noise_sigma;
  espec.seed = seed;

  MeasurementSet set;
  bool generated = true;
  try {
    set = generate_instance(espec);
  } catch (const std::exception&) {
    generated = false;
  }

  const bool noisy = params.noise_sigma > 0.0;
  for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
    TrialRecord rec = base_record(spec, cell, trial, params, seed, spec.solvers[s]);
    if (!generated) {
      rec.rel_err = std::numeric_limits<double>::quiet_NaN();
      out[s] = std::move(rec);
      continue;
    }
    try {
      QuadraticResidualModel model(set);
      SolveResult result;
      if (spec.solvers[s] == SolverId::Grnm) {
        Rng init_rng = derive_stream(seed, StreamRole::SolverInit);
        CertifyOptions copts;
        result = solve(model, spec.grnm, init_rng, opts.certify ? &copts : nullptr);
      } else {
        result = wf_solve(model, spec.wf);
      }
      rec.rel_err = relative_error(result.x_hat, set.truth);
      rec.success = classify_success(rec.rel_err, noisy);
      rec.iters_phase1 = result.phase1_iters;
      rec.iters_phase2 = result.phase2_iters;
      rec.time_seconds = result.wall_time;
      rec.final_grad_norm = result.final_grad_norm;
      if (result.certificate) rec.certificate_passed = result.certificate->passed;
    } catch (const std::exception&) {
      rec.rel_err = std::numeric_limits<double>::quiet_NaN();
      rec.success = false;
    }
    out[s] = std::move(rec);
  }
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec,
                                        const RunOptions& opts) {
  spec.validate();
  const std::size_t cells = spec.cell_count();
  const std::size_t trials = static_cast<std::size_t>(spec.trials_per_cell);
  const std::size_t tasks = cells * trials;
  const std::size_t solvers = spec.solvers.size();

  std::vector<TrialRecord> records(tasks * solvers);
  const int jobs = std::min<std::size_t>(resolve_jobs(opts.jobs), tasks);

  // Every (cell, trial) task writes into its own pre-assigned slots, so the
  // output order never depends on scheduling.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      const std::size_t cell = t / trials;
      const int trial = static_cast<int>(t % trials);
      run_trial(spec, cell, trial, opts, records.data() + t * solvers);
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

constexpr const char* kCsvHeader =
    "experiment,cell_index,solver,kind,p,n,sigma,noise_sigma,trial,seed,rel_err,"
    "success,iters_phase1,iters_phase2,time_seconds,final_grad_norm,"
    "certificate_passed";

}  // namespace

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    out << csv_quote(r.experiment) << ',' << r.cell_index << ','
        << to_string(r.solver) << ',' << to_string(r.kind) << ',' << r.p << ','
        << r.n << ',' << format_double(r.sigma) << ','
        << format_double(r.noise_sigma) << ',' << r.trial << ',' << r.seed << ','
        << format_double(r.rel_err) << ',' << (r.success ? "true" : "false") << ','
        << r.iters_phase1 << ',' << r.iters_phase2 << ','
        << format_double(r.time_seconds) << ',' << format_double(r.final_grad_norm)
        << ',';
    if (r.certificate_passed) out << (*r.certificate_passed ? "true" : "false");
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

}  // namespace

std::vector<TrialRecord> parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  // tolerate a trailing \r from foreign writers
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header in " + path);

  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 17) throw std::runtime_error("bad CSV row in " + path);
    TrialRecord r;
    r.experiment = f[0];
    r.cell_index = std::stoull(f[1]);
    r.solver = solver_from_string(f[2]);
    r.kind = ensemble_kind_from_string(f[3]);
    r.p = std::stoull(f[4]);
    r.n = std::stoull(f[5]);
    r.sigma = parse_double(f[6]);
    r.noise_sigma = parse_double(f[7]);
    r.trial = std::stoi(f[8]);
    r.seed = std::stoull(f[9]);
    r.rel_err = parse_double(f[10]);
    r.success = f[11] == "true";
    r.iters_phase1 = std::stoi(f[12]);
    r.iters_phase2 = std::stoi(f[13]);
    r.time_seconds = parse_double(f[14]);
    r.final_grad_norm = parse_double(f[15]);
    if (!f[16].empty()) r.certificate_passed = f[16] == "true";
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace qmr
