#pragma once

#include <vector>

namespace macrobell {

// Two-mode signal state in Schmidt form Sum_n c_n |n>|n>, mixed with local
// oscillators of real amplitude alpha (side A) and beta (side B).
struct SchmidtState {
  std::vector<double> c;  // normalized, c_n >= 0
  double alpha = 0.0;
  double beta = 0.0;
  double r0 = 0.0;
  int n_max = 0;
};

// Singlet-family state Sum_k |k, N-k>|k, N-k> / sqrt(N+1).
struct SpinPairState {
  int N = 1;
};

// Coefficients c_n proportional to (r0^2)^n/n!, normalized by the I0 identity.
// n_max is the smallest n whose geometric tail bound drops below tail_tol.
SchmidtState pair_coherent_coeffs(double r0, double tail_tol);

SpinPairState spin_schmidt(int N);

}
