#include "qmr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmr/kernels.hpp"

namespace qmr {

double relative_error(std::span<const double> x_hat, const Signal& x_star) {
  const std::size_t d = x_star.working_dim();
  if (x_hat.size() != d)
    throw std::invalid_argument("relative_error: dimension mismatch");
  const double star_sq = kernels::nrm2sq(x_star.values.data(), d);
  if (star_sq == 0.0)
    throw std::invalid_argument("relative_error: reference signal is zero");
  const double star_norm = std::sqrt(star_sq);

  if (x_star.domain == Domain::Real) {
    // theta restricted to {0, pi}: min(||x* - x||, ||x* + x||)
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double dp = x_star.values[i] - x_hat[i];
      const double dm = x_star.values[i] + x_hat[i];
      plus += dp * dp;
      minus += dm * dm;
    }
    return std::sqrt(std::min(plus, minus)) / star_norm;
  }

  // The optimal phase aligns <x_hat, x*> to be real nonnegative. Evaluate
  // the difference elementwise at that phase; this avoids the cancellation
  // of the ||x*||^2 + ||x||^2 - 2|<x,x*>| form when the vectors coincide.
  // Embedded inner product: <a, b> = (a_re.b_re + a_im.b_im)
  //                                + j (a_im.b_re - a_re.b_im)
  const std::size_t p = x_star.p;
  const double* hr = x_hat.data();
  const double* hi = x_hat.data() + p;
  const double* sr = x_star.values.data();
  const double* si = x_star.values.data() + p;
  const double re = kernels::dot(hr, sr, p) + kernels::dot(hi, si, p);
  const double im = kernels::dot(hi, sr, p) - kernels::dot(hr, si, p);
  const double mod = std::hypot(re, im);
  // for a zero inner product any phase is optimal
  const double cos_t = mod > 0.0 ? re / mod : 1.0;
  const double sin_t = mod > 0.0 ? im / mod : 0.0;

  // multiply x_hat by e^{-j phi}
  double diff_sq = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    const double rot_re = cos_t * hr[k] + sin_t * hi[k];
    const double rot_im = cos_t * hi[k] - sin_t * hr[k];
    const double dr = sr[k] - rot_re;
    const double di = si[k] - rot_im;
    diff_sq += dr * dr + di * di;
  }
  return std::sqrt(diff_sq) / star_norm;
}

double relative_error(const Signal& x_hat, const Signal& x_star) {
  if (x_hat.domain != x_star.domain || x_hat.p != x_star.p)
    throw std::invalid_argument("relative_error: signal shape mismatch");
  return relative_error(std::span<const double>(x_hat.values), x_star);
}

bool classify_success(double rel_err, bool noisy) {
  return noisy ? rel_err < 5e-3 : rel_err < 1e-5;
}

AggregateSummary aggregate(const std::vector<TrialOutcome>& outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("aggregate: empty outcome list");
  AggregateSummary s;
  std::vector<double> errs;
  errs.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    s.success_rate += o.success ? 1.0 : 0.0;
    s.mean_rel_err += o.rel_err;
    s.mean_time += o.wall_time;
    s.mean_iters += static_cast<double>(o.iters_phase1 + o.iters_phase2);
    errs.push_back(o.rel_err);
  }
  const double count = static_cast<double>(outcomes.size());
  s.success_rate /= count;
  s.mean_rel_err /= count;
  s.mean_time /= count;
  s.mean_iters /= count;

  std::sort(errs.begin(), errs.end());
  const std::size_t mid = errs.size() / 2;
  s.median_rel_err =
      errs.size() % 2 == 1 ? errs[mid] : 0.5 * (errs[mid - 1] + errs[mid]);
  return s;
}

}  // namespace qmr
