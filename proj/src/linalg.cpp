#include "qmr/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "qmr/kernels.hpp"
#include "qmr/rng.hpp"

namespace qmr {

double quad_form(const double* a, std::size_t d, const double* x, double* tmp) {
  kernels::matvec(a, d, d, x, tmp);
  return kernels::dot(x, tmp, d);
}

bool cholesky_inplace(Matrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("cholesky: matrix not square");
  const std::size_t n = a.rows;
  double* m = a.data.data();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m[j * n + j] - kernels::nrm2sq(m + j * n, j);
    if (!(diag > 0.0)) return false;
    diag = std::sqrt(diag);
    m[j * n + j] = diag;
    const double inv = 1.0 / diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      m[i * n + j] = (m[i * n + j] - kernels::dot(m + i * n, m + j * n, j)) * inv;
    }
  }
  return true;
}

void cholesky_solve(const Matrix& chol, const double* b, double* x) {
  const std::size_t n = chol.rows;
  const double* l = chol.data.data();
  // forward solve L y = b
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (b[i] - kernels::dot(l + i * n, x, i)) / l[i * n + i];
  }
  // backward solve L^T x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= l[k * n + ii] * x[k];
    x[ii] = acc / l[ii * n + ii];
  }
}

PowerIterResult power_iteration(const Matrix& s, double tol, std::size_t max_iters,
                                std::uint64_t start_seed) {
  if (s.rows != s.cols) throw std::invalid_argument("power_iteration: matrix not square");
  const std::size_t d = s.rows;
  PowerIterResult res;
  res.vector.assign(d, 0.0);

  Rng rng(start_seed);
  std::vector<double> v(d), w(d), r(d);
  for (auto& e : v) e = rng.normal();
  double norm = std::sqrt(kernels::nrm2sq(v.data(), d));
  if (norm == 0.0) {
    v.assign(d, 0.0);
    v[0] = 1.0;
    norm = 1.0;
  }
  kernels::scal(1.0 / norm, v.data(), d);

  double rayleigh = 0.0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    kernels::matvec(s.data.data(), d, d, v.data(), w.data());
    const double wnorm = std::sqrt(kernels::nrm2sq(w.data(), d));
    res.iterations = it + 1;
    if (wnorm == 0.0) {
      // exactly in the null space (or S = 0); the dominant value is 0
      res.value = 0.0;
      res.vector = v;
      res.converged = true;
      return res;
    }
    rayleigh = kernels::dot(v.data(), w.data(), d);
    // eigenpair residual ||S v - rho v||; a plain delta test on rho can
    // report convergence on the slow plateau of a tight spectrum
    r = w;
    kernels::axpy(-rayleigh, v.data(), r.data(), d);
    const double rnorm = std::sqrt(kernels::nrm2sq(r.data(), d));
    if (rnorm <= tol * std::abs(rayleigh)) {
      res.value = rayleigh;
      res.vector = v;
      res.converged = true;
      return res;
    }
    kernels::scal(1.0 / wnorm, w.data(), d);
    v.swap(w);
  }
  res.value = rayleigh;
  res.vector = v;
  res.converged = false;
  return res;
}

double max_abs_row_sum(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) sum += std::abs(a(i, j));
    if (sum > best) best = sum;
  }
  return best;
}

}  // namespace qmr
