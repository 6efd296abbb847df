#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "qmr/linalg.hpp"
#include "qmr/rng.hpp"

using namespace qmr;

namespace {

Matrix random_spd(std::size_t d, Rng& rng) {
  Matrix b(d, d);
  for (auto& v : b.data) v = rng.normal();
  Matrix spd(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += b(k, i) * b(k, j);
      spd(i, j) = acc + (i == j ? 0.5 : 0.0);
    }
  return spd;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

TEST_CASE("cholesky solve matches an independent dense solver") {
  Rng rng(17);
  for (std::size_t d : {1u, 2u, 5u, 20u, 60u}) {
    Matrix a = random_spd(d, rng);
    std::vector<double> b(d);
    for (auto& v : b) v = rng.normal();

    Matrix factor = a;
    REQUIRE(cholesky_inplace(factor));
    std::vector<double> x(d);
    cholesky_solve(factor, b.data(), x.data());

    const Eigen::MatrixXd ae = to_eigen(a);
    const Eigen::VectorXd be = Eigen::Map<const Eigen::VectorXd>(b.data(), d);
    const Eigen::VectorXd xe = ae.fullPivLu().solve(be);
    for (std::size_t i = 0; i < d; ++i)
      CHECK(x[i] == doctest::Approx(xe(static_cast<long>(i))).epsilon(1e-9));
  }
}

TEST_CASE("cholesky rejects indefinite matrices") {
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = m(1, 0) = 3.0;
  m(1, 1) = 1.0;  // eigenvalues 4, -2
  CHECK_FALSE(cholesky_inplace(m));
}

TEST_CASE("power iteration finds the dominant eigenvalue") {
  Rng rng(29);
  for (std::size_t d : {2u, 6u, 25u}) {
    Matrix s(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) s(i, j) = s(j, i) = rng.normal();

    const auto res = power_iteration(s, 1e-10, 100 * d, 123);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_eigen(s));
    const auto& ev = eig.eigenvalues();
    const double dominant =
        std::abs(ev(0)) > std::abs(ev(ev.size() - 1)) ? ev(0) : ev(ev.size() - 1);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(dominant).epsilon(1e-6));
  }
}

TEST_CASE("power iteration on the zero matrix returns zero") {
  Matrix s(4, 4);
  const auto res = power_iteration(s, 1e-8, 40, 9);
  CHECK(res.converged);
  CHECK(res.value == 0.0);
}

TEST_CASE("quad_form evaluates <x, A x>") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = a(1, 0) = 2.0;
  a(1, 1) = -1.0;
  std::vector<double> x{3.0, -1.0};
  std::vector<double> tmp(2);
  // 9 - 12 - 1 = -4
  CHECK(quad_form(a.data.data(), 2, x.data(), tmp.data()) == doctest::Approx(-4.0));
}
