#pragma once

#include <span>
#include <vector>

#include "qmr/ensembles.hpp"
#include "qmr/linalg.hpp"

namespace qmr {

/// Evaluates the residual vector and its estimate, with a fixed, SIMD-length
/// dependent but run-stable summation order.
struct ResidualNormEstimate {
  double value = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

/// Least-squares evaluator for one MeasurementSet:
///
///   phi_i(x) = <x, A_i x> - b_i
///   f(x)     = (1/4n) ||phi(x)||^2
///   grad(x)  = (1/n) sum_i phi_i(x) A_i x
///   H(x)     = (2/n) sum_i (A_i x)(A_i x)^T          (Gauss-Newton term)
///   hess(x)  = H(x) + (1/n) sum_i phi_i(x) A_i
///
/// Holds scratch for the n x d matrix of A_i x rows and the residuals, so a
/// model instance is single-threaded; several models may share one set.
class QuadraticResidualModel {
 public:
  explicit QuadraticResidualModel(const MeasurementSet& set);

  const MeasurementSet& set() const { return *set_; }
  std::size_t dim() const { return d_; }

  std::vector<double> residuals(std::span<const double> x);
  double value(std::span<const double> x);
  void gradient(std::span<const double> x, std::vector<double>& g);
  std::vector<double> gradient(std::span<const double> x);

  /// (2/n) A(x)^T A(x); positive semi-definite by construction.
  void gauss_newton_matrix(std::span<const double> x, Matrix& h);

  /// Full Hessian, exactly symmetric.
  void hessian(std::span<const double> x, Matrix& h);

  /// S(x) = (1/n) sum_i phi_i(x) A_i
  void residual_weighted_matrix(std::span<const double> x, Matrix& s);

  /// Spectral norm of S(x) by power iteration (relative tolerance 1e-8,
  /// iteration cap 10*d). Non-convergence is reported, not thrown.
  ResidualNormEstimate residual_matrix_norm(std::span<const double> x);

 private:
  void prepare(std::span<const double> x);  // fills ax_, phi_, f_

  const MeasurementSet* set_;
  std::size_t d_;
  std::vector<double> ax_;      // n x d rows of A_i x
  std::vector<double> phi_;     // n residuals
  std::vector<double> last_x_;  // point the scratch was computed at
  double f_ = 0.0;
};

}  // namespace qmr
