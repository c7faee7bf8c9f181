#include "macrobell/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "macrobell/errors.hpp"
#include "macrobell/measurement.hpp"
#include "macrobell/numkernel.hpp"
#include "macrobell/states.hpp"
#include "parallel.hpp"

namespace macrobell {

namespace {

using Complex = std::complex<double>;

// Principal logarithm of the 2x2 mixer matrix, times i: a Hermitian
// generator h with V = exp(-i h). The mixer's eigenvalues are never
// degenerate for real theta, so the eigendecomposition route is safe.
Eigen::Matrix2cd mixer_generator(double theta) {
  Eigen::Matrix2cd v;
  const Complex ph = std::exp(Complex(0.0, -theta));
  v << 1.0, ph, 1.0, -ph;
  v /= std::sqrt(2.0);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(v);
  Eigen::Vector2cd loglam;
  loglam << std::log(es.eigenvalues()(0)), std::log(es.eigenvalues()(1));
  const Eigen::Matrix2cd g =
      es.eigenvectors() * loglam.asDiagonal() * es.eigenvectors().inverse();
  Eigen::Matrix2cd h = Complex(0.0, 1.0) * g;
  return 0.5 * (h + h.adjoint().eval());
}

// Amplitudes <p|coherent alpha> up to the cutoff.
std::vector<double> coherent_amplitudes(double alpha, int dim) {
  const LogFactorialTable& lf = log_factorial();
  std::vector<double> a(static_cast<std::size_t>(dim), 0.0);
  if (alpha == 0.0) {
    a[0] = 1.0;
    return a;
  }
  for (int p = 0; p < dim; ++p)
    a[static_cast<std::size_t>(p)] = std::exp(
        -0.5 * alpha * alpha + p * std::log(alpha) - 0.5 * lf(static_cast<std::size_t>(p)));
  return a;
}

// A_n[p+][p-]: amplitude to count (p+, p-) behind the mixer when the inputs
// are |coherent alpha> and |n>. The mixer conserves total photon number, so
// exp acts exactly within each total-count sector; each sector holds exactly
// one input basis state, column T - n.
void mixer_output(const Eigen::Matrix2cd& h, const std::vector<double>& coh,
                  int n, int dim, std::vector<Complex>& out) {
  out.assign(static_cast<std::size_t>(dim) * dim, Complex(0.0, 0.0));
  for (int t = n; t <= n + dim - 1; ++t) {
    const int lo = std::max(0, t - (dim - 1));
    const int hi = std::min(t, dim - 1);
    const int m = hi - lo + 1;
    Eigen::MatrixXcd hs = Eigen::MatrixXcd::Zero(m, m);
    for (int a = 0; a < m; ++a) {
      const int n0 = lo + a;
      const int n1 = t - n0;
      hs(a, a) = h(0, 0) * static_cast<double>(n0) + h(1, 1) * static_cast<double>(n1);
      if (a + 1 < m)
        hs(a + 1, a) = h(0, 1) * std::sqrt(static_cast<double>((n0 + 1) * n1));
      if (a - 1 >= 0)
        hs(a - 1, a) = h(1, 0) * std::sqrt(static_cast<double>(n0) * (n1 + 1));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
    const int k_in = t - n;
    if (k_in < lo || k_in > hi) continue;
    // column k_in - lo of exp(-i hs), scaled by the input amplitude
    Eigen::VectorXcd phase(m);
    for (int a = 0; a < m; ++a)
      phase(a) = std::exp(Complex(0.0, -es.eigenvalues()(a)));
    const Eigen::VectorXcd col =
        es.eigenvectors() *
        (phase.array() * es.eigenvectors().adjoint().col(k_in - lo).array())
            .matrix();
    const double w = coh[static_cast<std::size_t>(k_in)];
    for (int a = 0; a < m; ++a) {
      const int m0 = lo + a;
      const int m1 = t - m0;
      out[static_cast<std::size_t>(m0) * dim + m1] = w * col(a);
    }
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::complex<double> DenseFockTensor::value(int pp, int pm, int qp,
                                            int qm) const {
  const std::size_t d = static_cast<std::size_t>(cutoff) + 1;
  return amp[((static_cast<std::size_t>(pp) * d + pm) * d + qp) * d + qm];
}

double DenseFockTensor::squared_norm() const {
  double s = 0.0;
  for (const Complex& a : amp) s += std::norm(a);
  return s;
}

DenseFockTensor dense_four_mode_state(double r0, double alpha, double theta,
                                      double phi, int cutoff) {
  if (alpha < 0.0 || alpha > 3.0)
    throw ConfigError("dense tensor route requires alpha in [0, 3]");
  if (cutoff < 1 || cutoff > 40)
    throw ConfigError("per-mode cutoff must lie in [1, 40]");
  const SchmidtState state = pair_coherent_coeffs(r0, 1e-12);
  const int dim = cutoff + 1;
  const int n_top = std::min(state.n_max, cutoff);

  const std::vector<double> coh = coherent_amplitudes(alpha, dim);
  const Eigen::Matrix2cd ha = mixer_generator(theta);
  const Eigen::Matrix2cd hb = mixer_generator(phi);

  DenseFockTensor tensor;
  tensor.cutoff = cutoff;
  const std::size_t d = static_cast<std::size_t>(dim);
  tensor.amp.assign(d * d * d * d, Complex(0.0, 0.0));

  std::vector<Complex> side_a, side_b;
  for (int n = 0; n <= n_top; ++n) {
    mixer_output(ha, coh, n, dim, side_a);
    mixer_output(hb, coh, n, dim, side_b);
    const double cn = state.c[static_cast<std::size_t>(n)];
    for (std::size_t ab = 0; ab < d * d; ++ab) {
      const Complex wa = cn * side_a[ab];
      if (wa == Complex(0.0, 0.0)) continue;
      Complex* slab = tensor.amp.data() + ab * d * d;
      for (std::size_t cd = 0; cd < d * d; ++cd) slab[cd] += wa * side_b[cd];
    }
  }
  if (std::abs(1.0 - tensor.squared_norm()) > 1e-8)
    throw NumericalGuardError("dense tensor cutoff leaves more than 1e-8 mass outside");
  return tensor;
}

JointIntegerDistribution dense_state_and_measure(double r0, double alpha,
                                                 double theta, double phi,
                                                 int cutoff) {
  const DenseFockTensor tensor =
      dense_four_mode_state(r0, alpha, theta, phi, cutoff);
  const int dim = cutoff + 1;
  JointIntegerDistribution dist(-cutoff, cutoff, -cutoff, cutoff);
  std::size_t idx = 0;
  for (int pp = 0; pp < dim; ++pp)
    for (int pm = 0; pm < dim; ++pm)
      for (int qp = 0; qp < dim; ++qp)
        for (int qm = 0; qm < dim; ++qm)
          dist.at(pp - pm, qp - qm) += std::norm(tensor.amp[idx++]);
  return dist;
}

McEstimate mc_sample(const JointIntegerDistribution& dist,
                     const NoiseModel& noise, std::uint64_t n_samples,
                     std::uint64_t seed) {
  if (n_samples < 10000)
    throw ConfigError("sampling needs at least 1e4 samples");
  if (noise.eta != 1.0)
    throw ConfigError("detector loss is only modelled for quadrature measurements");
  const double sigma = noise.sigma;
  if (sigma < 0.0) throw ConfigError("noise width must be nonnegative");

  // cumulative mass over cells in row-major (i, j) order
  const int nj = dist.j_max() - dist.j_min() + 1;
  std::vector<double> cum;
  cum.reserve(static_cast<std::size_t>(dist.i_max() - dist.i_min() + 1) * nj);
  double total = 0.0;
  for (int i = dist.i_min(); i <= dist.i_max(); ++i)
    for (int j = dist.j_min(); j <= dist.j_max(); ++j) {
      total += dist.probability(i, j);
      cum.push_back(total);
    }

  constexpr std::uint64_t kChunk = 65536;
  const std::uint64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<std::array<std::uint64_t, 3>> tallies(
      static_cast<std::size_t>(n_chunks), {0, 0, 0});
  detail::parallel_for(
      static_cast<std::size_t>(n_chunks), default_jobs(), [&](std::size_t c) {
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t count = std::min(kChunk, n_samples - begin);
        std::mt19937_64 rng(splitmix64(seed ^ (c + 1)));
        std::uint64_t pp = 0, pa = 0, pb = 0;
        for (std::uint64_t s = 0; s < count; ++s) {
          const double u = uniform01(rng) * total;
          const std::size_t cell = static_cast<std::size_t>(
              std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
          double x = static_cast<double>(dist.i_min() + static_cast<int>(cell) / nj);
          double y = static_cast<double>(dist.j_min() + static_cast<int>(cell) % nj);
          if (sigma > 0.0) {
            const double r = std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
            const double a = 6.283185307179586476925286766559 * uniform01(rng);
            x += sigma * r * std::cos(a);
            y += sigma * r * std::sin(a);
          }
          const bool plus_a = x >= 0.0;
          const bool plus_b = y >= 0.0;
          pa += plus_a;
          pb += plus_b;
          pp += plus_a && plus_b;
        }
        tallies[c] = {pp, pa, pb};
      });

  McEstimate est;
  est.n_samples = n_samples;
  for (const auto& t : tallies) {
    est.tally_pp += t[0];
    est.tally_a += t[1];
    est.tally_b += t[2];
  }
  const double n = static_cast<double>(n_samples);
  est.p_pp = static_cast<double>(est.tally_pp) / n;
  est.p_a = static_cast<double>(est.tally_a) / n;
  est.p_b = static_cast<double>(est.tally_b) / n;
  est.se_pp = std::sqrt(est.p_pp * (1.0 - est.p_pp) / n);
  est.se_a = std::sqrt(est.p_a * (1.0 - est.p_a) / n);
  est.se_b = std::sqrt(est.p_b * (1.0 - est.p_b) / n);
  return est;
}

JointIntegerDistribution symbolic_spin_expand(int N, double theta, double phi) {
  if (N < 1 || N > 4)
    throw ConfigError("symbolic expansion supports N in [1, 4]");
  // Monomials in the four output creation operators, keyed by their
  // exponents (p, q, r, t); each carries an integer-coefficient polynomial
  // in the half-angle factors (ct, st, cp, sp), keyed likewise.
  using Key = std::array<int, 4>;
  using Poly = std::map<Key, long long>;
  struct Term {
    Key cre;
    Key trig;
    long long coef;
  };
  // (a+ b+ + a- b-) with a+ -> ct c+ + st c-, a- -> st c+ - ct c-,
  // and the same with (cp, sp) on the b side.
  const std::array<Term, 8> factor = {{
      {{1, 0, 1, 0}, {1, 0, 1, 0}, +1},
      {{1, 0, 0, 1}, {1, 0, 0, 1}, +1},
      {{0, 1, 1, 0}, {0, 1, 1, 0}, +1},
      {{0, 1, 0, 1}, {0, 1, 0, 1}, +1},
      {{1, 0, 1, 0}, {0, 1, 0, 1}, +1},
      {{1, 0, 0, 1}, {0, 1, 1, 0}, -1},
      {{0, 1, 1, 0}, {1, 0, 0, 1}, -1},
      {{0, 1, 0, 1}, {1, 0, 1, 0}, +1},
  }};

  std::map<Key, Poly> acc;
  acc[{0, 0, 0, 0}][{0, 0, 0, 0}] = 1;
  for (int step = 0; step < N; ++step) {
    std::map<Key, Poly> next;
    for (const auto& [cre, poly] : acc)
      for (const Term& t : factor) {
        const Key cre2 = {cre[0] + t.cre[0], cre[1] + t.cre[1],
                          cre[2] + t.cre[2], cre[3] + t.cre[3]};
        Poly& target = next[cre2];
        for (const auto& [trig, coef] : poly) {
          const Key trig2 = {trig[0] + t.trig[0], trig[1] + t.trig[1],
                             trig[2] + t.trig[2], trig[3] + t.trig[3]};
          target[trig2] += coef * t.coef;
        }
      }
    acc.swap(next);
  }

  const double ct = std::cos(theta / 2.0), st = std::sin(theta / 2.0);
  const double cp = std::cos(phi / 2.0), sp = std::sin(phi / 2.0);
  const LogFactorialTable& lf = log_factorial();
  const double norm =
      std::exp(lf(static_cast<std::size_t>(N))) * std::sqrt(N + 1.0);
  JointIntegerDistribution dist(-N, N, -N, N);
  for (const auto& [cre, poly] : acc) {
    double value = 0.0;
    for (const auto& [trig, coef] : poly)
      value += static_cast<double>(coef) * std::pow(ct, trig[0]) *
               std::pow(st, trig[1]) * std::pow(cp, trig[2]) *
               std::pow(sp, trig[3]);
    double lw = 0.0;
    for (int k = 0; k < 4; ++k) lw += lf(static_cast<std::size_t>(cre[k]));
    const double amp = value * std::exp(0.5 * lw) / norm;
    dist.at(cre[0] - cre[1], cre[2] - cre[3]) += amp * amp;
  }
  return dist;
}

}  // namespace macrobell
