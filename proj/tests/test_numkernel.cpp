#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "macrobell/errors.hpp"
#include "macrobell/numkernel.hpp"

using namespace macrobell;

TEST_CASE("log factorial accumulates ln(n)") {
  LogFactorialTable t(50);
  CHECK(t(0) == 0.0);
  double acc = 0.0;
  for (std::size_t n = 1; n <= 50; ++n) {
    acc += std::log(static_cast<double>(n));
    CHECK(t(n) == acc);
  }
  CHECK(log_factorial().size() >= 301);
}

TEST_CASE("bessel_i0 against the power series") {
  CHECK(bessel_i0(0.0) == 1.0);

  // 40-term series at x = 1.
  double sum = 0.0, term = 1.0;
  for (int k = 0; k < 40; ++k) {
    if (k > 0) term *= 0.25 / (static_cast<double>(k) * k);
    sum += term;
  }
  CHECK(bessel_i0(1.0) == doctest::Approx(sum).epsilon(1e-14));

  // Series at the pump operating point 2 * 1.1^2.
  const double x = 2.42;
  double s2 = 0.0, t2 = 1.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) t2 *= (x * x / 4.0) / (static_cast<double>(k) * k);
    s2 += t2;
  }
  CHECK(bessel_i0(x) == doctest::Approx(s2).epsilon(1e-13));

  // Continuity across the series/asymptotic switch at x = 18.
  CHECK(bessel_i0(18.0 + 1e-9) == doctest::Approx(bessel_i0(18.0)).epsilon(1e-8));

  CHECK_THROWS_AS(bessel_i0(-1.0), ConfigError);
  CHECK_THROWS_AS(bessel_i0(701.0), ConfigError);
}

TEST_CASE("hermite_psi convention and parity") {
  CHECK(hermite_psi(0, 0.0) == doctest::Approx(std::pow(2.0 * M_PI, -0.25)).epsilon(1e-15));
  CHECK(hermite_psi(1, 0.0) == 0.0);
  CHECK(hermite_psi(3, 0.0) == 0.0);
  CHECK(hermite_psi(2, 1.3) == doctest::Approx(hermite_psi(2, -1.3)).epsilon(1e-14));
  CHECK(hermite_psi(5, 1.3) == doctest::Approx(-hermite_psi(5, -1.3)).epsilon(1e-14));
}

TEST_CASE("hermite_psi orthonormality on a fine grid") {
  const double h = 1.0 / 64.0, lim = 14.0;
  std::vector<double> x;
  for (double v = -lim + h / 2.0; v < lim; v += h) x.push_back(v);
  std::vector<std::vector<double>> tab;
  hermite_psi_table(20, x, tab);
  for (unsigned n = 0; n <= 20; ++n)
    for (unsigned m = n; m <= 20; ++m) {
      double dot = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) dot += tab[n][j] * tab[m][j];
      dot *= h;
      CHECK(std::abs(dot - (n == m ? 1.0 : 0.0)) < 1e-8);
    }
}

TEST_CASE("hermite_psi recurrence residual stays small") {
  for (double x = -12.0; x <= 12.0; x += 0.75)
    for (unsigned n = 1; n <= 100; ++n) {
      const double res = std::sqrt(n + 1.0) * hermite_psi(n + 1, x) -
                         x * hermite_psi(n, x) +
                         std::sqrt(static_cast<double>(n)) * hermite_psi(n - 1, x);
      CHECK(std::abs(res) < 1e-10);
    }
}

TEST_CASE("hermite_psi_table matches the scalar routine") {
  std::vector<double> x = {-3.7, -0.5, 0.0, 1.25, 6.0};
  std::vector<std::vector<double>> tab;
  hermite_psi_table(30, x, tab);
  for (unsigned n = 0; n <= 30; ++n)
    for (std::size_t j = 0; j < x.size(); ++j)
      CHECK(tab[n][j] == doctest::Approx(hermite_psi(n, x[j])).epsilon(1e-13));
}

TEST_CASE("displaced_fock_overlap coherent column") {
  for (double beta : {0.5, 2.0, 5.0})
    CHECK(displaced_fock_overlap(0, 0, beta) ==
          doctest::Approx(std::exp(-beta * beta / 2.0)).epsilon(1e-14));
  CHECK(displaced_fock_overlap(1, 0, 2.0) ==
        doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(displaced_fock_overlap(3, 3, 0.0) == 1.0);
  CHECK(displaced_fock_overlap(3, 2, 0.0) == 0.0);
}

TEST_CASE("displaced_fock_overlap column unitarity") {
  for (unsigned n = 0; n <= 10; ++n)
    for (double beta : {1.0, 4.0, 8.0}) {
      // Columns of a unitary: sum over a window wide enough to hold the
      // displaced distribution (mean beta^2, std ~ beta).
      const int top = static_cast<int>(beta * beta + 10.0 * beta) + 20;
      double s = 0.0;
      for (int m = 0; m <= top; ++m) {
        const double v = displaced_fock_overlap(m, n, beta);
        s += v * v;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("displaced_fock_overlap equals the exponential of the generator") {
  // D(beta) = exp(beta (a^dag - a)) on a truncated Fock space. The
  // truncation is benign for m <= 60, n <= 10, beta = 5: the matrix
  // elements live far from the 120-dim boundary.
  const int dim = 120;
  const double beta = 5.0;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m + 1 < dim; ++m) {
    const double v = beta * std::sqrt(m + 1.0);
    k(m + 1, m) = v;
    k(m, m + 1) = -v;
  }
  Eigen::MatrixXd d = k.exp();
  for (int m = 0; m <= 60; ++m)
    for (int n = 0; n <= 10; ++n)
      CHECK(std::abs(displaced_fock_overlap(m, n, beta) - (d(m, n))) < 1e-8);
}

TEST_CASE("gaussian_tail values and identities") {
  CHECK(gaussian_tail(0.0, 1.0) == 0.5);
  CHECK(gaussian_tail(0.0, 7.3) == 0.5);
  CHECK(gaussian_tail(3.0, 0.0) == 1.0);
  CHECK(gaussian_tail(0.0, 0.0) == 1.0);
  CHECK(gaussian_tail(-3.0, 0.0) == 0.0);
  for (double s : {0.3, 1.0, 2.5})
    CHECK(std::abs(gaussian_tail(-1.96 * s, s) - (0.0250)) < 1e-4);
  for (double s : {0.5, 1.0, 4.0})
    for (double i : {-2.0, -0.7, 0.1, 3.0})
      CHECK(gaussian_tail(i, s) + gaussian_tail(-i, s) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(gaussian_tail(1.0, -0.1), ConfigError);
}
