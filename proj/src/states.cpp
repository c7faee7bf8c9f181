#include "macrobell/states.hpp"

#include <cmath>

#include "macrobell/errors.hpp"
#include "macrobell/numkernel.hpp"

namespace macrobell {

SchmidtState pair_coherent_coeffs(double r0, double tail_tol) {
  if (r0 < 0.0 || r0 > 3.0)
    throw ConfigError("pair_coherent_coeffs: r0 must lie in [0, 3]");
  if (!(tail_tol > 0.0) || tail_tol > 1e-6)
    throw ConfigError("pair_coherent_coeffs: tail_tol must lie in (0, 1e-6]");

  SchmidtState st;
  st.r0 = r0;
  if (r0 == 0.0) {
    st.c = {1.0};
    st.n_max = 0;
    return st;
  }

  const double z = r0 * r0;
  const auto& lf = log_factorial();
  // Probability weights p_n = z^{2n}/(n!)^2 / I0(2z). Beyond n0 = ceil(e*z)
  // the term ratio q_n = (z/(n+1))^2 is < 1 and decreasing, so the tail after
  // n is bounded by p_n * q/(1-q), a geometric bound.
  const double log_i0 = std::log(bessel_i0(2.0 * z));
  const int n0 = static_cast<int>(std::ceil(2.718281828459045 * z));
  int n_max = n0;
  for (;; ++n_max) {
    const double log_p = 2.0 * (n_max * std::log(z) - lf(n_max)) - log_i0;
    const double q = (z / (n_max + 1.0)) * (z / (n_max + 1.0));
    if (std::exp(log_p) * q / (1.0 - q) < tail_tol) break;
  }

  st.n_max = n_max;
  st.c.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n)
    st.c[n] = std::exp(n * std::log(z) - lf(n) - 0.5 * log_i0);
  // Renormalize away the truncated tail (and any I0 rounding).
  double s2 = 0.0;
  for (double cn : st.c) s2 += cn * cn;
  const double inv = 1.0 / std::sqrt(s2);
  for (double& cn : st.c) cn *= inv;
  return st;
}

SpinPairState spin_schmidt(int N) {
  if (N < 1 || N > 200)
    throw ConfigError("spin_schmidt: N must lie in [1, 200]");
  return SpinPairState{N};
}

}
