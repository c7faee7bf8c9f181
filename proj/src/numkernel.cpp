#include "macrobell/numkernel.hpp"

#include <cmath>
#include <limits>

#include "macrobell/errors.hpp"

namespace macrobell {

LogFactorialTable::LogFactorialTable(std::size_t n_max) {
  values_.resize(n_max + 1);
  values_[0] = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n)
    values_[n] = values_[n - 1] + std::log(static_cast<double>(n));
}

const LogFactorialTable& log_factorial() {
  static const LogFactorialTable table(1023);
  return table;
}

double bessel_i0(double x) {
  if (x < 0.0 || x > 700.0)
    throw ConfigError("bessel_i0: argument must lie in [0, 700]");
  if (x <= 18.0) {
    // All-positive power series: no cancellation, term ratio (x/2)^2/k^2.
    const double q = x * x / 4.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum;
  }
  // Scaled asymptotic expansion; truncation error ~e^{-2x} relative at the
  // smallest term, far below 1e-12 for x > 18.
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 40; ++k) {
    const double next = term * (2.0 * k + 1.0) * (2.0 * k + 1.0) /
                        (8.0 * x * (k + 1.0));
    if (next >= term) break;  // divergent tail reached
    term = next;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  const double two_pi = 6.283185307179586476925286766559;
  return std::exp(x) / std::sqrt(two_pi * x) * sum;
}

double hermite_psi(unsigned n, double x) {
  const double psi0 = 0.6316187777460647073 * std::exp(-x * x / 4.0);
  if (n == 0) return psi0;
  double prev = psi0, cur = x * psi0;
  for (unsigned k = 1; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k) + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_psi_table(unsigned n_max, const std::vector<double>& x,
                       std::vector<std::vector<double>>& out) {
  out.assign(n_max + 1, std::vector<double>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j)
    out[0][j] = 0.6316187777460647073 * std::exp(-x[j] * x[j] / 4.0);
  if (n_max >= 1)
    for (std::size_t j = 0; j < x.size(); ++j) out[1][j] = x[j] * out[0][j];
  for (unsigned k = 1; k < n_max; ++k) {
    const double a = std::sqrt(static_cast<double>(k));
    const double b = 1.0 / std::sqrt(static_cast<double>(k) + 1.0);
    for (std::size_t j = 0; j < x.size(); ++j)
      out[k + 1][j] = (x[j] * out[k][j] - a * out[k - 1][j]) * b;
  }
}

double displaced_fock_overlap(unsigned m, unsigned n, double beta) {
  if (beta == 0.0) return m == n ? 1.0 : 0.0;
  // <m|D(b)|n> = sqrt(n!/m!) b^{m-n} e^{-b^2/2} L_n^{(m-n)}(b^2) for m >= n;
  // the m < n case follows from <m|D(b)|n> = <n|D(-b)|m> (real b).
  const bool swapped = m < n;
  if (swapped) {
    std::swap(m, n);
    beta = -beta;
  }
  const unsigned d = m - n;
  const double y = beta * beta;
  const auto& lf = log_factorial();
  double lag_prev = 1.0;  // L_0
  double lag = 1.0 + d - y;  // L_1^{(d)}
  if (n == 0) lag = 1.0;
  for (unsigned k = 1; k < n; ++k) {
    const double next =
        ((2.0 * k + 1.0 + d - y) * lag - (k + static_cast<double>(d)) * lag_prev) /
        (k + 1.0);
    lag_prev = lag;
    lag = next;
  }
  if (lag == 0.0) return 0.0;
  const double log_pre =
      0.5 * (lf(n) - lf(m)) + d * std::log(std::abs(beta)) - y / 2.0;
  double sign = lag > 0 ? 1.0 : -1.0;
  if (beta < 0.0 && (d % 2 != 0)) sign = -sign;
  return sign * std::exp(log_pre + std::log(std::abs(lag)));
}

double gaussian_tail(double i, double sigma) {
  if (sigma < 0.0) throw ConfigError("gaussian_tail: sigma must be >= 0");
  if (sigma == 0.0) return i >= 0.0 ? 1.0 : 0.0;
  const double inv_sqrt2 = 0.70710678118654752440;
  return 0.5 * std::erfc(-i / sigma * inv_sqrt2);
}

}
