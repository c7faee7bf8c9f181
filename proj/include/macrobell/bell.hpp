#pragma once

#include <memory>
#include <utility>

#include "macrobell/distributions.hpp"
#include "macrobell/measurement.hpp"
#include "macrobell/states.hpp"

namespace macrobell {

// sigma: Gaussian readout std (photons for integer outcomes, quadrature units
// for the asymptotic mode). eta: detector efficiency, applied as a loss
// channel before readout noise (asymptotic mode only).
struct NoiseModel {
  double sigma = 0.0;
  double eta = 1.0;
};

struct ChSettings {
  double theta = 0.0;
  double phi = 0.0;
  double theta_prime = 0.0;
  double phi_prime = 0.0;
};

struct ChEvaluation {
  double p_pp_theta_phi = 0.0;
  double p_pp_theta_phip = 0.0;
  double p_pp_thetap_phi = 0.0;
  double p_pp_thetap_phip = 0.0;
  double p_a = 0.0;  // P+^A(theta')
  double p_b = 0.0;  // P+^B(phi)
  double s = 0.0;
};

struct BinarizedProbs {
  double p_pp = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
};

enum class MeasurementMode { exact, quadrature, spin };

struct BellSource {
  MeasurementMode mode = MeasurementMode::quadrature;
  SchmidtState schmidt;  // exact and quadrature modes
  SpinPairState spin;    // spin mode
  GridSpec grid;         // quadrature mode
};

BellSource exact_source(const SchmidtState& state);
BellSource quadrature_source(const SchmidtState& state,
                             const GridSpec& grid = GridSpec{});
BellSource spin_source(int N);

// Readout-noise weights applied to an already-built distribution. Loss is a
// state-space channel, not a readout effect, so noise.eta is not consumed
// here; apply_loss_quadrature upstream instead.
BinarizedProbs binarized_probs(const JointIntegerDistribution& dist,
                               const NoiseModel& noise);
BinarizedProbs binarized_probs(const JointQuadratureDensity& density,
                               const NoiseModel& noise);

// Caches the angle-dependent tables for one (source, settings) pair so that
// sweeps over noise re-use them; evaluations are pure in the noise model.
class ChKernel {
 public:
  ChKernel(const BellSource& source, const ChSettings& settings);
  ~ChKernel();
  ChKernel(ChKernel&&) noexcept;
  ChKernel& operator=(ChKernel&&) noexcept;

  ChEvaluation eval(const NoiseModel& noise) const;

  // RMS of the binarization outcome at sigma = 0; sets the coarse-scan step
  // for the cutoff search.
  double outcome_scale() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ChEvaluation ch_ratio(const BellSource& source, const ChSettings& settings,
                      const NoiseModel& noise);

// sup{sigma : S(sigma) > 1}: coarse upward scan (step = outcome scale / 8)
// brackets the last sign change of S - 1, then bisection to tol. S(sigma)
// must be nonincreasing along the scan; a violation aborts the search.
// Returns 0 when there is no violation at sigma = 0.
double sigma_cutoff(const BellSource& source, const ChSettings& settings,
                    double tol);

// Fig-4 angle family (theta, phi, theta', phi') = (0, psi, 2psi, 3psi):
// scans psi over (0, pi/2] at 200 points, refines the best bracket by
// golden-section to 1e-6 rad. Returns (psi_opt, evaluation at psi_opt).
std::pair<double, ChEvaluation> optimize_psi(int N, const NoiseModel& noise);

}
