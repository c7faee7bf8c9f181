#include "macrobell/bell.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "macrobell/errors.hpp"
#include "macrobell/numkernel.hpp"

namespace macrobell {

namespace {

std::vector<double> integer_weights(int lo, int hi, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1));
  for (int i = lo; i <= hi; ++i)
    w[static_cast<std::size_t>(i - lo)] = gaussian_tail(i, sigma);
  return w;
}

}  // namespace

BellSource exact_source(const SchmidtState& state) {
  BellSource src;
  src.mode = MeasurementMode::exact;
  src.schmidt = state;
  return src;
}

BellSource quadrature_source(const SchmidtState& state, const GridSpec& grid) {
  BellSource src;
  src.mode = MeasurementMode::quadrature;
  src.schmidt = state;
  src.grid = grid;
  return src;
}

BellSource spin_source(int N) {
  BellSource src;
  src.mode = MeasurementMode::spin;
  src.spin = spin_schmidt(N);
  return src;
}

BinarizedProbs binarized_probs(const JointIntegerDistribution& dist,
                               const NoiseModel& noise) {
  if (std::abs(dist.mass_deficit()) > 1e-6)
    throw NumericalGuardError("joint distribution mass deviates from 1");
  const auto wa = integer_weights(dist.i_min(), dist.i_max(), noise.sigma);
  const auto wb = integer_weights(dist.j_min(), dist.j_max(), noise.sigma);
  BinarizedProbs out;
  for (int i = dist.i_min(); i <= dist.i_max(); ++i) {
    double row_pp = 0.0;
    double row_all = 0.0;
    for (int j = dist.j_min(); j <= dist.j_max(); ++j) {
      const double p = dist.probability(i, j);
      row_all += p;
      row_pp += p * wb[static_cast<std::size_t>(j - dist.j_min())];
    }
    const double w = wa[static_cast<std::size_t>(i - dist.i_min())];
    out.p_pp += w * row_pp;
    out.p_a += w * row_all;
    out.p_b += row_pp;
  }
  return out;
}

BinarizedProbs binarized_probs(const JointQuadratureDensity& density,
                               const NoiseModel& noise) {
  if (std::abs(density.mass_deficit()) > 1e-6)
    throw NumericalGuardError("joint density mass deviates from 1");
  const GridSpec& g = density.grid();
  const int n = g.count();
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    w[static_cast<std::size_t>(k)] = gaussian_tail(g.center(k), noise.sigma);
  const double cell = g.step * g.step;
  BinarizedProbs out;
  for (int ix = 0; ix < n; ++ix) {
    double row_pp = 0.0;
    double row_all = 0.0;
    for (int iy = 0; iy < n; ++iy) {
      const double v = density.value(ix, iy);
      row_all += v;
      row_pp += v * w[static_cast<std::size_t>(iy)];
    }
    out.p_pp += w[static_cast<std::size_t>(ix)] * row_pp;
    out.p_a += w[static_cast<std::size_t>(ix)] * row_all;
    out.p_b += row_pp;
  }
  out.p_pp *= cell;
  out.p_a *= cell;
  out.p_b *= cell;
  return out;
}

struct ChKernel::Impl {
  MeasurementMode mode;
  ChSettings settings;
  std::optional<ExactTables> exact;
  std::optional<QuadratureTables> quad;
  // One table per angle pair, in the numerator's order:
  // (theta,phi), (theta,phi'), (theta',phi), (theta',phi').
  std::vector<SpinTables> spin;
};

ChKernel::ChKernel(const BellSource& source, const ChSettings& settings)
    : impl_(std::make_unique<Impl>()) {
  impl_->mode = source.mode;
  impl_->settings = settings;
  switch (source.mode) {
    case MeasurementMode::exact:
      impl_->exact.emplace(source.schmidt);
      break;
    case MeasurementMode::quadrature:
      impl_->quad.emplace(source.schmidt, source.grid);
      break;
    case MeasurementMode::spin:
      impl_->spin.reserve(4);
      impl_->spin.emplace_back(source.spin, settings.theta, settings.phi);
      impl_->spin.emplace_back(source.spin, settings.theta,
                               settings.phi_prime);
      impl_->spin.emplace_back(source.spin, settings.theta_prime,
                               settings.phi);
      impl_->spin.emplace_back(source.spin, settings.theta_prime,
                               settings.phi_prime);
      break;
  }
}

ChKernel::~ChKernel() = default;
ChKernel::ChKernel(ChKernel&&) noexcept = default;
ChKernel& ChKernel::operator=(ChKernel&&) noexcept = default;

ChEvaluation ChKernel::eval(const NoiseModel& noise) const {
  const ChSettings& a = impl_->settings;
  // The normalization pairs one A marginal with one B marginal taken at
  // different angles; both fall out of the (theta', phi) evaluation.
  double pp[4];
  double pa3 = 0.0, pb3 = 0.0;
  if (impl_->mode == MeasurementMode::quadrature) {
    const double sums[4] = {a.theta + a.phi, a.theta + a.phi_prime,
                            a.theta_prime + a.phi,
                            a.theta_prime + a.phi_prime};
    for (int k = 0; k < 4; ++k) {
      double pa = 0.0, pb = 0.0;
      impl_->quad->binarized(sums[k], noise.sigma, noise.eta, pp[k], pa, pb);
      if (k == 2) {
        pa3 = pa;
        pb3 = pb;
      }
    }
  } else {
    if (noise.eta != 1.0)
      throw ConfigError(
          "detector loss is only modelled for quadrature measurements");
    if (impl_->mode == MeasurementMode::exact) {
      const double sums[4] = {a.theta + a.phi, a.theta + a.phi_prime,
                              a.theta_prime + a.phi,
                              a.theta_prime + a.phi_prime};
      for (int k = 0; k < 4; ++k) {
        double pa = 0.0, pb = 0.0;
        impl_->exact->binarized(sums[k], noise.sigma, pp[k], pa, pb);
        if (k == 2) {
          pa3 = pa;
          pb3 = pb;
        }
      }
    } else {
      for (int k = 0; k < 4; ++k) {
        double pa = 0.0, pb = 0.0;
        impl_->spin[static_cast<std::size_t>(k)].binarized(noise.sigma, pp[k],
                                                           pa, pb);
        if (k == 2) {
          pa3 = pa;
          pb3 = pb;
        }
      }
    }
  }
  ChEvaluation ev;
  ev.p_pp_theta_phi = pp[0];
  ev.p_pp_theta_phip = pp[1];
  ev.p_pp_thetap_phi = pp[2];
  ev.p_pp_thetap_phip = pp[3];
  ev.p_a = pa3;
  ev.p_b = pb3;
  const double denom = ev.p_a + ev.p_b;
  if (denom <= 1e-12)
    throw NumericalGuardError("degenerate normalization in the CH ratio");
  ev.s = (pp[0] - pp[1] + pp[2] + pp[3]) / denom;
  return ev;
}

double ChKernel::outcome_scale() const {
  double m2 = 0.0;
  switch (impl_->mode) {
    case MeasurementMode::exact:
      m2 = impl_->exact->outcome_second_moment();
      break;
    case MeasurementMode::quadrature:
      m2 = impl_->quad->outcome_second_moment();
      break;
    case MeasurementMode::spin:
      m2 = impl_->spin[0].outcome_second_moment();
      break;
  }
  return std::sqrt(m2);
}

ChEvaluation ch_ratio(const BellSource& source, const ChSettings& settings,
                      const NoiseModel& noise) {
  return ChKernel(source, settings).eval(noise);
}

double sigma_cutoff(const BellSource& source, const ChSettings& settings,
                    double tol) {
  if (!(tol > 0.0) || tol > 1e-3)
    throw ConfigError("cutoff tolerance must lie in (0, 1e-3]");
  ChKernel kernel(source, settings);
  NoiseModel noise;
  // The cutoff is a supremum over sigma > 0, so gate on the sigma -> 0+
  // limit, not on sigma = 0: a zero-outcome atom gets weight 1 under the
  // sharp classification but only 1/2 under any positive noise, and S is
  // monotone only on the positive side of that step. Any width below the
  // outcome granularity realizes the limit exactly (the tail weights
  // saturate), so evaluate at a token 1e-12.
  noise.sigma = 1e-12;
  double s_prev = kernel.eval(noise).s;
  if (s_prev <= 1.0) return 0.0;
  const double step = kernel.outcome_scale() / 8.0;
  double lo = 0.0;
  double hi = 0.0;
  for (int k = 1;; ++k) {
    if (k > 10000)
      throw NumericalGuardError("cutoff scan failed to bracket S = 1");
    noise.sigma = k * step;
    const double s = kernel.eval(noise).s;
    if (s > s_prev + 1e-9)
      throw NumericalGuardError("S increased along the cutoff scan");
    if (s <= 1.0) {
      lo = (k - 1) * step;
      hi = k * step;
      break;
    }
    s_prev = s;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    noise.sigma = mid;
    if (kernel.eval(noise).s > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, ChEvaluation> optimize_psi(int N, const NoiseModel& noise) {
  const BellSource src = spin_source(N);
  auto s_at = [&](double psi) {
    const ChSettings st{0.0, psi, 2.0 * psi, 3.0 * psi};
    return ChKernel(src, st).eval(noise).s;
  };
  const int n_scan = 200;
  const double span = 1.5707963267948966;  // pi / 2
  const double delta = span / n_scan;
  int best = 1;
  double best_s = s_at(delta);
  for (int j = 2; j <= n_scan; ++j) {
    const double s = s_at(j * delta);
    if (s > best_s) {
      best_s = s;
      best = j;
    }
  }
  double lo = best * delta - delta;
  double hi = best * delta + delta;
  if (lo < 1e-9) lo = 1e-9;
  if (hi > span) hi = span;
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = s_at(x1);
  double f2 = s_at(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = s_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = s_at(x1);
    }
  }
  const double psi = 0.5 * (lo + hi);
  const ChSettings st{0.0, psi, 2.0 * psi, 3.0 * psi};
  ChKernel kernel(src, st);
  return {psi, kernel.eval(noise)};
}

}  // namespace macrobell
