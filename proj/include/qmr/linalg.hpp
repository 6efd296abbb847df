#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qmr {

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  void set_zero() { data.assign(rows * cols, 0.0); }
};

/// <x, A x> for symmetric row-major A of order d; tmp holds A x on return.
double quad_form(const double* a, std::size_t d, const double* x, double* tmp);

/// In-place lower Cholesky of a symmetric positive definite matrix (reads the
/// lower triangle). Returns false on a non-positive pivot.
bool cholesky_inplace(Matrix& a);

/// Solves L L^T x = b given the factor from cholesky_inplace.
void cholesky_solve(const Matrix& chol, const double* b, double* x);

struct PowerIterResult {
  double value = 0.0;           // dominant eigenvalue (Rayleigh quotient)
  std::vector<double> vector;   // corresponding unit eigenvector
  bool converged = false;
  std::size_t iterations = 0;
};

/// Power iteration on a symmetric matrix, deterministic start vector derived
/// from start_seed. Converges to the eigenvalue of largest magnitude.
PowerIterResult power_iteration(const Matrix& s, double tol, std::size_t max_iters,
                                std::uint64_t start_seed);

/// max_i sum_j |A(i,j)|; for symmetric A an upper bound on the spectral radius.
double max_abs_row_sum(const Matrix& a);

}  // namespace qmr
