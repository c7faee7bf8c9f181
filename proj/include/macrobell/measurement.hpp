#pragma once

#include <vector>

#include "macrobell/distributions.hpp"
#include "macrobell/states.hpp"

namespace macrobell {

struct LossChannel {
  double eta = 1.0;
};

// Number of worker threads used by the distribution builders and sweeps.
// Results are bit-stable across thread counts: every task writes its own
// slot and reductions run in a fixed order.
void set_default_jobs(int jobs);
int default_jobs();

// Angle-independent tables for the finite-alpha photon-counting scheme.
//
// For Schmidt index n the two detector counts (p+, p-) at one side have joint
// amplitude e^{-in*theta} R_n(p+,p-); angles therefore enter the joint
// outcome distribution only through cos((n-n')(theta+phi)) factors applied to
// the precomputed difference-diagonal sums
//   M[n][n'](i) = sum_{p+ - p- = i} R_n(p+,p-) R_n'(p+,p-).
class ExactTables {
 public:
  explicit ExactTables(const SchmidtState& state);

  const SchmidtState& state() const { return state_; }
  int p_max() const { return p_max_; }

  // M[n][n'] as a vector over i = -p_max .. p_max.
  const std::vector<double>& m(int n, int nprime) const;

  JointIntegerDistribution assemble(double angle_sum) const;

  // Binarized (P_pp, P_pA, P_pB) at this angle sum and noise width, without
  // materializing the joint table.
  void binarized(double angle_sum, double sigma, double& p_pp, double& p_a,
                 double& p_b) const;

  double outcome_second_moment() const;  // E[i^2] on side A

 private:
  SchmidtState state_;
  int p_max_;
  int nc_;                                // n_max + 1
  std::vector<std::vector<double>> m_;    // A side, full square pair index
  std::vector<std::vector<double>> mb_;   // B side (copy of A when alpha==beta)
  std::vector<double> m_one_, mb_one_;    // completeness dots per pair
};

// Grid tables for the asymptotic (quadrature) scheme: per Schmidt pair the
// separable factor f[n][n'](x) = psi_n(x) psi_n'(x), optionally pushed
// through the loss channel. The joint density at angle sum s is
// sum_{n,n'} c_n c_n' cos((n-n')s) f(x) f(y).
class QuadratureTables {
 public:
  QuadratureTables(const SchmidtState& state, const GridSpec& grid);

  const SchmidtState& state() const { return state_; }
  const GridSpec& grid() const { return grid_; }

  JointQuadratureDensity assemble(double angle_sum, double eta = 1.0) const;

  void binarized(double angle_sum, double sigma, double eta, double& p_pp,
                 double& p_a, double& p_b) const;

  double outcome_second_moment() const;  // E[x^2], lossless marginal

 private:
  const std::vector<std::vector<double>>& factors_for_eta(double eta) const;

  SchmidtState state_;
  GridSpec grid_;
  int nc_;
  std::vector<double> x_;                      // cell centers
  std::vector<std::vector<double>> f_;         // lossless factors, pair index
  mutable double cached_eta_ = 1.0;
  mutable std::vector<std::vector<double>> f_loss_;
};

// Rotation amplitude table for the singlet-family state: t[u][k] is the
// amplitude to count (u, N-u) photons at the two output ports when the input
// carries (k, N-k). Built by an add-a-photon recurrence, stable to N = 200;
// columns are exactly orthonormal in exact arithmetic.
std::vector<std::vector<double>> spin_rotation_table(int N, double theta);

class SpinTables {
 public:
  SpinTables(const SpinPairState& state, double theta, double phi);

  JointIntegerDistribution assemble() const;

  void binarized(double sigma, double& p_pp, double& p_a, double& p_b) const;

  double outcome_second_moment() const;

 private:
  int N_;
  std::vector<std::vector<double>> joint_;  // P(u, v)
};

JointIntegerDistribution exact_joint_distribution(const SchmidtState& state,
                                                  double theta, double phi);

JointQuadratureDensity quadrature_joint_density(const SchmidtState& state,
                                                double theta, double phi,
                                                const GridSpec& grid);

JointIntegerDistribution spin_joint_distribution(const SpinPairState& state,
                                                 double theta, double phi);

// X -> eta * X + Gaussian noise of std sqrt(1 - eta), independently per axis,
// realized as one fused scale-and-convolve kernel per axis on the fixed grid.
JointQuadratureDensity apply_loss_quadrature(const JointQuadratureDensity& in,
                                             LossChannel channel);

}
