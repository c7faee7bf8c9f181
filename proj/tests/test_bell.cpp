#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "macrobell/bell.hpp"
#include "macrobell/errors.hpp"
#include "macrobell/measurement.hpp"
#include "macrobell/states.hpp"

using namespace macrobell;

namespace {

const ChSettings kDefaultAngles{0.0, -M_PI / 4.0, M_PI / 2.0, -3.0 * M_PI / 4.0};

SchmidtState pumped(double alpha) {
  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  st.alpha = st.beta = alpha;
  return st;
}

double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("binarized point mass reproduces the hand computation") {
  JointIntegerDistribution d(3, 3, -1, -1);
  d.at(3, -1) = 1.0;
  BinarizedProbs p = binarized_probs(d, NoiseModel{2.0, 1.0});
  CHECK(p.p_pp == doctest::Approx(phi_cdf(1.5) * phi_cdf(-0.5)).epsilon(1e-12));
  CHECK(p.p_a == doctest::Approx(phi_cdf(1.5)).epsilon(1e-12));
  CHECK(p.p_b == doctest::Approx(phi_cdf(-0.5)).epsilon(1e-12));
}

TEST_CASE("binarized probabilities reject lossy tables") {
  JointIntegerDistribution d(0, 1, 0, 1);
  d.at(0, 0) = 0.9;
  CHECK_THROWS_AS(binarized_probs(d, NoiseModel{1.0, 1.0}), NumericalGuardError);
}

TEST_CASE("perfectly correlated spin pair at equal angles") {
  JointIntegerDistribution d = spin_joint_distribution(spin_schmidt(1), 0.3, 0.3);
  BinarizedProbs p = binarized_probs(d, NoiseModel{0.0, 1.0});
  CHECK(p.p_pp == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.p_a == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.p_b == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("large noise washes out every correlation") {
  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  ChKernel kernel(quadrature_source(st), kDefaultAngles);
  ChEvaluation ev = kernel.eval(NoiseModel{50.0, 1.0});
  CHECK(std::abs(ev.p_pp_theta_phi - (0.25)) < 1e-3);
  CHECK(std::abs(ev.p_a - (0.5)) < 1e-3);
  CHECK(std::abs(ev.s - (0.5)) < 2e-3);
}

TEST_CASE("noiseless quadrature ratio hits the asymptotic violation") {
  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  ChEvaluation ev = ch_ratio(quadrature_source(st), kDefaultAngles, NoiseModel{0.0, 1.0});
  CHECK(std::abs(ev.s - (1.0157)) < 2e-3);
  CHECK(ev.s == doctest::Approx(1.01599673416).epsilon(1e-9));
  // The stored ratio is exactly the stored numerator over denominator.
  const double num = ev.p_pp_theta_phi - ev.p_pp_theta_phip + ev.p_pp_thetap_phi +
                     ev.p_pp_thetap_phip;
  CHECK(ev.s == num / (ev.p_a + ev.p_b));
}

TEST_CASE("violation survives two percent detector loss") {
  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  ChEvaluation ev = ch_ratio(quadrature_source(st), kDefaultAngles, NoiseModel{0.0, 0.98});
  CHECK(ev.s > 1.0);
  CHECK(ev.s == doctest::Approx(1.01139501443).epsilon(1e-9));
}

TEST_CASE("loss is rejected outside the quadrature scheme") {
  CHECK_THROWS_AS(ch_ratio(exact_source(pumped(3.0)), kDefaultAngles, NoiseModel{0.0, 0.98}),
                  ConfigError);
  CHECK_THROWS_AS(ch_ratio(spin_source(1), kDefaultAngles, NoiseModel{0.0, 0.98}),
                  ConfigError);
  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  CHECK_THROWS_AS(ch_ratio(quadrature_source(st), kDefaultAngles, NoiseModel{0.0, 0.0}),
                  ConfigError);
}

TEST_CASE("ratio depends only on the four angle sums") {
  const double d = 0.31;
  ChSettings shifted{kDefaultAngles.theta + d, kDefaultAngles.phi - d,
                     kDefaultAngles.theta_prime + d, kDefaultAngles.phi_prime - d};
  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  const NoiseModel noise{0.1, 1.0};
  CHECK(ch_ratio(quadrature_source(st), shifted, noise).s ==
        doctest::Approx(ch_ratio(quadrature_source(st), kDefaultAngles, noise).s).epsilon(1e-9));
  CHECK(ch_ratio(exact_source(pumped(3.0)), shifted, noise).s ==
        doctest::Approx(ch_ratio(exact_source(pumped(3.0)), kDefaultAngles, noise).s).epsilon(1e-9));
}

TEST_CASE("ratio is independent of the worker count") {
  SchmidtState st = pumped(3.0);
  set_default_jobs(1);
  const double a = ch_ratio(exact_source(st), kDefaultAngles, NoiseModel{0.2, 1.0}).s;
  set_default_jobs(3);
  const double b = ch_ratio(exact_source(st), kDefaultAngles, NoiseModel{0.2, 1.0}).s;
  set_default_jobs(1);
  CHECK(a == b);
}

TEST_CASE("exact ratio is nonincreasing for positive noise") {
  ChKernel kernel(exact_source(pumped(4.0)), kDefaultAngles);
  double prev = kernel.eval(NoiseModel{1e-12, 1.0}).s;
  for (double sigma = 0.05; sigma <= 2.0; sigma += 0.05) {
    const double s = kernel.eval(NoiseModel{sigma, 1.0}).s;
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
}

TEST_CASE("quadrature noise cutoff sits near 0.273") {
  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  const double s0 = sigma_cutoff(quadrature_source(st), kDefaultAngles, 1e-3);
  CHECK(std::abs(s0 - (0.272765)) < 2e-3);
}

TEST_CASE("cutoff returns zero when nothing is violated") {
  // alpha = 2 never violates; even N loses the violation under any
  // positive noise because the zero-outcome atom drops to half weight.
  CHECK(sigma_cutoff(exact_source(pumped(2.0)), kDefaultAngles, 1e-4) == 0.0);
  ChSettings even{0.0, 0.538777910609, 2.0 * 0.538777910609, 3.0 * 0.538777910609};
  CHECK(sigma_cutoff(spin_source(2), even, 1e-4) == 0.0);
}

TEST_CASE("cutoff tolerance is bounded") {
  SchmidtState st = pair_coherent_coeffs(1.1, 1e-10);
  CHECK_THROWS_AS(sigma_cutoff(quadrature_source(st), kDefaultAngles, 0.0), ConfigError);
  CHECK_THROWS_AS(sigma_cutoff(quadrature_source(st), kDefaultAngles, 2e-3), ConfigError);
}

TEST_CASE("spin cutoff for one pair") {
  ChSettings s1{0.0, M_PI / 4.0, M_PI / 2.0, 3.0 * M_PI / 4.0};
  const double sc = sigma_cutoff(spin_source(1), s1, 1e-4);
  CHECK(std::abs(sc - (0.710174560547)) < 5e-4);
}

TEST_CASE("psi optimization for one pair matches a dense grid") {
  auto [psi, ev] = optimize_psi(1, NoiseModel{0.0, 1.0});
  CHECK(ev.s > 1.0);
  CHECK(std::abs(psi - (M_PI / 4.0)) < 1e-5);
  CHECK(ev.s == doctest::Approx(0.5 * (1.0 + std::sqrt(2.0))).epsilon(1e-9));

  double best = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    const double p = (M_PI / 2.0) * k / 2000.0;
    ChSettings st{0.0, p, 2.0 * p, 3.0 * p};
    best = std::max(best, ch_ratio(spin_source(1), st, NoiseModel{0.0, 1.0}).s);
  }
  CHECK(std::abs(ev.s - (best)) < 1e-4);
}

TEST_CASE("psi optimization in the washed-out limit") {
  auto [psi, ev] = optimize_psi(3, NoiseModel{60.0, 1.0});
  (void)psi;
  CHECK(std::abs(ev.s - (0.5)) < 2e-3);
}
