#include "qmr/objective.hpp"

#include <cstring>
#include <stdexcept>

#include "qmr/kernels.hpp"

namespace qmr {

QuadraticResidualModel::QuadraticResidualModel(const MeasurementSet& set)
    : set_(&set), d_(set.d) {
  ax_.resize(set.n() * d_);
  phi_.resize(set.n());
}

void QuadraticResidualModel::prepare(std::span<const double> x) {
  if (x.size() != d_)
    throw std::invalid_argument("QuadraticResidualModel: dimension mismatch");
  // Scratch is a pure function of x; skip when evaluating the same point
  // again (bitwise comparison, so this cannot change any result).
  if (last_x_.size() == d_ &&
      std::memcmp(last_x_.data(), x.data(), d_ * sizeof(double)) == 0) {
    return;
  }
  const std::size_t n = set_->n();
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double* row = ax_.data() + i * d_;
    kernels::matvec(set_->matrix(i), d_, d_, x.data(), row);
    const double phi = kernels::dot(x.data(), row, d_) - set_->b[i];
    phi_[i] = phi;
    sq += phi * phi;
  }
  f_ = sq / (4.0 * static_cast<double>(n));
  last_x_.assign(x.begin(), x.end());
}

std::vector<double> QuadraticResidualModel::residuals(std::span<const double> x) {
  prepare(x);
  return phi_;
}

double QuadraticResidualModel::value(std::span<const double> x) {
  prepare(x);
  return f_;
}

void QuadraticResidualModel::gradient(std::span<const double> x, std::vector<double>& g) {
  prepare(x);
  const std::size_t n = set_->n();
  g.assign(d_, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::axpy(phi_[i] * inv_n, ax_.data() + i * d_, g.data(), d_);
  }
}

std::vector<double> QuadraticResidualModel::gradient(std::span<const double> x) {
  std::vector<double> g;
  gradient(x, g);
  return g;
}

void QuadraticResidualModel::gauss_newton_matrix(std::span<const double> x, Matrix& h) {
  prepare(x);
  const std::size_t n = set_->n();
  h.rows = h.cols = d_;
  h.data.assign(d_ * d_, 0.0);
  const double scale = 2.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::syr_upper(h.data.data(), d_, scale, ax_.data() + i * d_);
  }
  for (std::size_t r = 1; r < d_; ++r)
    for (std::size_t c = 0; c < r; ++c) h(r, c) = h(c, r);
}

void QuadraticResidualModel::residual_weighted_matrix(std::span<const double> x,
                                                      Matrix& s) {
  prepare(x);
  const std::size_t n = set_->n();
  s.rows = s.cols = d_;
  s.data.assign(d_ * d_, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::axpy(phi_[i] * inv_n, set_->matrix(i), s.data.data(), d_ * d_);
  }
}

void QuadraticResidualModel::hessian(std::span<const double> x, Matrix& h) {
  gauss_newton_matrix(x, h);
  const std::size_t n = set_->n();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::axpy(phi_[i] * inv_n, set_->matrix(i), h.data.data(), d_ * d_);
  }
}

ResidualNormEstimate QuadraticResidualModel::residual_matrix_norm(
    std::span<const double> x) {
  Matrix s;
  residual_weighted_matrix(x, s);
  const auto pi = power_iteration(s, 1e-8, 10 * d_, derive_seed(0x51duLL, d_));
  ResidualNormEstimate est;
  est.value = std::abs(pi.value);
  est.converged = pi.converged;
  est.iterations = pi.iterations;
  return est;
}

}  // namespace qmr
