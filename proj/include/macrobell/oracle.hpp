#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "macrobell/bell.hpp"
#include "macrobell/distributions.hpp"

namespace macrobell {

// Brute-force and sampling validators. Deliberately independent of the
// production tables: no shared intermediate past the state coefficients.
// Orders of magnitude slower than the production paths; that is fine.

// Post-mixer amplitude tensor over the four detector modes (p+, p-, q+, q-),
// each truncated at cutoff photons. Squared norm stays within the truncated
// tail of 1.
struct DenseFockTensor {
  int cutoff = 0;
  std::vector<std::complex<double>> amp;  // row-major over (p+, p-, q+, q-)

  std::complex<double> value(int pp, int pm, int qp, int qm) const;
  double squared_norm() const;
};

// Builds the n-correlated pair state with a local oscillator per side
// literally in Fock space and pushes it through explicit 50:50 mixers,
// realized as per-total-photon-sector matrix exponentials of the lifted
// mixer generator.
DenseFockTensor dense_four_mode_state(double r0, double alpha, double theta,
                                      double phi, int cutoff);

// Count-difference distribution read off the dense tensor by enumerating
// every four-mode count configuration.
JointIntegerDistribution dense_state_and_measure(double r0, double alpha,
                                                 double theta, double phi,
                                                 int cutoff);

struct McEstimate {
  std::uint64_t n_samples = 0;
  std::uint64_t tally_pp = 0;  // both sides binarized +
  std::uint64_t tally_a = 0;   // side A +
  std::uint64_t tally_b = 0;   // side B +
  double p_pp = 0.0, p_a = 0.0, p_b = 0.0;
  double se_pp = 0.0, se_a = 0.0, se_b = 0.0;  // binomial standard errors
};

// Samples (i, j) pairs, adds Gaussian readout noise per side, binarizes at 0
// and tallies. Identical seeds give identical tallies regardless of the
// worker count: the stream is split into fixed-size chunks, each with its own
// generator.
McEstimate mc_sample(const JointIntegerDistribution& dist,
                     const NoiseModel& noise, std::uint64_t n_samples,
                     std::uint64_t seed);

// Expands the N-pair creation polynomial with the port rotation applied as an
// exact symbolic substitution, then enumerates outcomes. Integer coefficient
// bookkeeping throughout; trig factors enter only at final evaluation.
JointIntegerDistribution symbolic_spin_expand(int N, double theta, double phi);

}
