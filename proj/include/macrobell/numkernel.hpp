#pragma once

#include <cstddef>
#include <vector>

namespace macrobell {

// Precomputed ln(n!) by cumulative summation of ln(n). One shared table keeps
// log-space ratio formulas consistent across call sites.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::size_t n_max);
  double operator()(std::size_t n) const { return values_.at(n); }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// Shared default table, large enough for every supported parameter range
// (alpha <= 12 needs ~300 Fock levels, spin N <= 200 needs 200).
const LogFactorialTable& log_factorial();

// Modified Bessel function I0(x) for 0 <= x <= 700, relative accuracy 1e-12.
// Power series for small x, scaled asymptotic expansion for large x.
double bessel_i0(double x);

// Harmonic-oscillator eigenfunction of X = a e^{-it} + a† e^{it} (vacuum
// variance 1): psi_n(x) = (2pi)^{-1/4} (2^n n!)^{-1/2} H_n(x/sqrt2) e^{-x^2/4}.
// Upward recurrence on the orthonormalized functions, never raw H_n.
double hermite_psi(unsigned n, double x);

// Fills out[k][j] = psi_k(x[j]) for k = 0..n_max in one recurrence pass.
void hermite_psi_table(unsigned n_max, const std::vector<double>& x,
                       std::vector<std::vector<double>>& out);

// <m|D(beta)|n> for real beta, via the associated-Laguerre closed form in log
// space. Convention: <m|D(beta)|0> = e^{-beta^2/2} beta^m / sqrt(m!).
double displaced_fock_overlap(unsigned m, unsigned n, double beta);

// P(noise >= -i) for zero-mean Gaussian noise of std sigma: Phi(i/sigma).
// sigma = 0 degenerates to the sharp classification: 1 if i >= 0 else 0.
double gaussian_tail(double i, double sigma);

}
