#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qmr/harness.hpp"

namespace qmr {

std::string_view to_string(PlotKind k) {
  switch (k) {
    case PlotKind::SuccessVsRatio:
      return "success_vs_ratio";
    case PlotKind::ErrVsP:
      return "err_vs_p";
    case PlotKind::TimeVsP:
      return "time_vs_p";
    case PlotKind::ErrVsSigma:
      return "err_vs_sigma";
  }
  return "unknown";
}

namespace {

constexpr double kLogFloor = 1e-16;

struct SeriesKey {
  SolverId solver;
  double noise_sigma;
  EnsembleKind kind;
  bool operator<(const SeriesKey& o) const {
    if (solver != o.solver) return solver < o.solver;
    if (noise_sigma != o.noise_sigma) return noise_sigma < o.noise_sigma;
    return kind < o.kind;
  }
};

double x_value(const TrialRecord& r, PlotKind kind) {
  switch (kind) {
    case PlotKind::SuccessVsRatio:
      return static_cast<double>(r.n) / static_cast<double>(r.p);
    case PlotKind::ErrVsP:
    case PlotKind::TimeVsP:
      return static_cast<double>(r.p);
    case PlotKind::ErrVsSigma:
      return r.sigma;
  }
  return 0.0;
}

bool log_y(PlotKind kind) {
  return kind == PlotKind::ErrVsP || kind == PlotKind::ErrVsSigma;
}

std::string_view y_label(PlotKind kind) {
  switch (kind) {
    case PlotKind::SuccessVsRatio:
      return "success rate";
    case PlotKind::ErrVsP:
    case PlotKind::ErrVsSigma:
      return "mean relative error";
    case PlotKind::TimeVsP:
      return "mean time (s)";
  }
  return "";
}

std::string_view x_label(PlotKind kind) {
  switch (kind) {
    case PlotKind::SuccessVsRatio:
      return "n/p";
    case PlotKind::ErrVsP:
    case PlotKind::TimeVsP:
      return "p";
    case PlotKind::ErrVsSigma:
      return "sigma";
  }
  return "";
}

struct Accum {
  double sum = 0.0;
  std::size_t count = 0;
  std::size_t successes = 0;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void emit_plot(const std::vector<TrialRecord>& records, PlotKind kind,
               const std::string& svg_path) {
  // series key -> x -> accumulated y
  std::map<SeriesKey, std::map<double, Accum>> series;
  bool multi_noise = false, multi_kind = false;
  {
    std::map<double, int> noises;
    std::map<EnsembleKind, int> kinds;
    for (const auto& r : records) {
      noises[r.noise_sigma] = 1;
      kinds[r.kind] = 1;
    }
    multi_noise = noises.size() > 1;
    multi_kind = kinds.size() > 1;
  }

  std::map<SolverId, std::size_t> dropped;
  for (const auto& r : records) {
    if (std::isnan(r.rel_err) && kind != PlotKind::SuccessVsRatio) {
      ++dropped[r.solver];
      continue;
    }
    auto& acc = series[{r.solver, r.noise_sigma, r.kind}][x_value(r, kind)];
    switch (kind) {
      case PlotKind::SuccessVsRatio:
        acc.successes += r.success ? 1 : 0;
        break;
      case PlotKind::ErrVsP:
      case PlotKind::ErrVsSigma:
        acc.sum += r.rel_err;
        break;
      case PlotKind::TimeVsP:
        acc.sum += r.time_seconds;
        break;
    }
    acc.count += 1;
  }

  for (const auto& [solver, count] : dropped) {
    bool has_series = false;
    for (const auto& [key, xs] : series) has_series = has_series || key.solver == solver;
    if (!has_series)
      std::cerr << "emit_plot: series " << to_string(solver)
                << " skipped, no finite values\n";
  }

  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Series> plotted;
  for (const auto& [key, xs] : series) {
    if (xs.empty()) continue;
    Series s;
    s.label = std::string(to_string(key.solver));
    if (multi_kind) s.label += std::string(" ") + std::string(to_string(key.kind));
    if (multi_noise) s.label += " noise=" + fmt(key.noise_sigma);
    for (const auto& [x, acc] : xs) {
      double y = 0.0;
      if (kind == PlotKind::SuccessVsRatio) {
        y = acc.count ? static_cast<double>(acc.successes) / acc.count : 0.0;
      } else {
        y = acc.count ? acc.sum / acc.count : 0.0;
      }
      if (log_y(kind)) y = std::max(y, kLogFloor);
      s.points.emplace_back(x, y);
    }
    plotted.push_back(std::move(s));
  }

  // sibling data file
  std::string dat_path = svg_path;
  if (dat_path.size() > 4 && dat_path.substr(dat_path.size() - 4) == ".svg")
    dat_path = dat_path.substr(0, dat_path.size() - 4);
  dat_path += ".dat";
  {
    std::ofstream dat(dat_path);
    if (!dat) throw std::runtime_error("cannot open for writing: " + dat_path);
    dat << "# " << to_string(kind) << ": x=" << x_label(kind) << " y=" << y_label(kind)
        << "\n";
    for (const auto& s : plotted) {
      dat << "# series: " << s.label << "\n";
      for (const auto& [x, y] : s.points) dat << x << " " << y << "\n";
      dat << "\n";
    }
  }

  const double width = 720, height = 480;
  const double ml = 80, mr = 24, mt = 36, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : plotted) {
    for (const auto& [x, y] : s.points) {
      const double yy = log_y(kind) ? std::log10(y) : y;
      if (first) {
        xmin = xmax = x;
        ymin = ymax = yy;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, yy);
        ymax = std::max(ymax, yy);
      }
    }
  }
  if (kind == PlotKind::SuccessVsRatio) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  if (log_y(kind)) {
    // pad to whole decades
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax == ymin) ymax += 1.0;
  }

  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) {
    const double yy = log_y(kind) ? std::log10(y) : y;
    return mt + (1.0 - (yy - ymin) / (ymax - ymin)) * ph;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // frame
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

  // ticks
  const int nticks = 5;
  for (int t = 0; t <= nticks; ++t) {
    const double fr = static_cast<double>(t) / nticks;
    const double xv = xmin + fr * (xmax - xmin);
    const double px = sx(xv);
    svg << "<line x1=\"" << px << "\" y1=\"" << mt + ph << "\" x2=\"" << px
        << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << mt + ph + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
  }
  const int yticks = log_y(kind) ? static_cast<int>(ymax - ymin) : nticks;
  for (int t = 0; t <= yticks; ++t) {
    const double fr = yticks > 0 ? static_cast<double>(t) / yticks : 0.0;
    const double yv = ymin + fr * (ymax - ymin);
    const double py = mt + (1.0 - fr) * ph;
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py << "\" x2=\"" << ml
        << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    std::string label = log_y(kind) ? ("1e" + fmt(yv)) : fmt(yv);
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << py + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
  }

  // axis titles
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label(kind)
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">" << y_label(kind) << "</text>\n";
  if (!records.empty()) {
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << mt - 12
        << "\" font-size=\"14\" text-anchor=\"middle\">" << records.front().experiment
        << "</text>\n";
  }

  // series
  std::size_t ci = 0;
  for (const auto& s : plotted) {
    const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : s.points) svg << sx(x) << "," << sy(y) << " ";
    svg << "\"/>\n";
    for (const auto& [x, y] : s.points) {
      svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    }
    // legend entry
    const double ly = mt + 16 + 18 * static_cast<double>(ci);
    svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw - 126 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << ml + pw - 120 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << s.label << "</text>\n";
    ++ci;
  }
  svg << "</svg>\n";

  std::ofstream out(svg_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + svg_path);
  out << svg.str();
  if (!out) throw std::runtime_error("write failed: " + svg_path);
}

}  // namespace qmr
