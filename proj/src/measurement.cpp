#include "macrobell/measurement.hpp"

#include <atomic>
#include <cmath>
#include <memory>

#include "macrobell/errors.hpp"
#include "macrobell/numkernel.hpp"
#include "parallel.hpp"

namespace macrobell {

namespace {

std::atomic<int> g_jobs{1};

constexpr double kLn2 = 0.69314718055994530942;

// Amplitude table G[k][p] = <p|(c†)^k|beta>: the building block for expanding
// (a_-†)^n |alpha> in a rotated output mode with displacement beta = alpha/√2.
std::vector<std::vector<double>> g_table(double beta, int k_max, int p_max) {
  const auto& lf = log_factorial();
  std::vector<std::vector<double>> g(k_max + 1,
                                     std::vector<double>(p_max + 1, 0.0));
  if (beta == 0.0) {
    for (int k = 0; k <= k_max && k <= p_max; ++k)
      g[k][k] = std::exp(0.5 * lf(k));
    return g;
  }
  const double lb = std::log(beta);
  for (int k = 0; k <= k_max; ++k)
    for (int p = k; p <= p_max; ++p)
      g[k][p] = std::exp(-beta * beta / 2.0 + (p - k) * lb + 0.5 * lf(p) -
                         lf(p - k));
  return g;
}

// R_n(p+, p-) for one side: 2^{-n/2}/sqrt(n!) sum_k C(n,k)(-1)^{n-k}
// G(p+,k) G(p-,n-k). Returned flat, (p_max+1) x (p_max+1).
std::vector<std::vector<double>> r_tables(double alpha, int n_count,
                                          int p_max) {
  const double beta = alpha / std::sqrt(2.0);
  const auto g = g_table(beta, n_count - 1, p_max);
  const auto& lf = log_factorial();
  const std::size_t np = static_cast<std::size_t>(p_max) + 1;
  std::vector<std::vector<double>> r(n_count);
  detail::parallel_for(n_count, default_jobs(), [&](std::size_t n) {
    std::vector<double> acc(np * np, 0.0);
    for (int k = 0; k <= static_cast<int>(n); ++k) {
      double coef = std::exp(0.5 * lf(n) - lf(k) - lf(n - k) -
                             0.5 * n * kLn2);
      if ((static_cast<int>(n) - k) % 2 != 0) coef = -coef;
      const auto& gk = g[k];
      const auto& gm = g[n - k];
      for (std::size_t p = 0; p < np; ++p) {
        if (gk[p] == 0.0) continue;
        const double w = coef * gk[p];
        double* row = acc.data() + p * np;
        for (std::size_t q = 0; q < np; ++q) row[q] += w * gm[q];
      }
    }
    r[n] = std::move(acc);
  });
  return r;
}

// Difference-diagonal sums M[i + p_max] = sum_{p - q = i} R_n(p,q) R_n'(p,q).
std::vector<std::vector<double>> m_tables(
    const std::vector<std::vector<double>>& r, int p_max) {
  const int nc = static_cast<int>(r.size());
  const std::size_t np = static_cast<std::size_t>(p_max) + 1;
  std::vector<std::vector<double>> m(static_cast<std::size_t>(nc) * nc);
  std::vector<std::pair<int, int>> pairs;
  for (int n = 0; n < nc; ++n)
    for (int np2 = n; np2 < nc; ++np2) pairs.emplace_back(n, np2);
  detail::parallel_for(pairs.size(), default_jobs(), [&](std::size_t t) {
    const auto [n, n2] = pairs[t];
    std::vector<double> out(2 * p_max + 1, 0.0);
    const auto& a = r[n];
    const auto& b = r[n2];
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t q = 0; q < np; ++q)
        out[static_cast<int>(p) - static_cast<int>(q) + p_max] +=
            a[p * np + q] * b[p * np + q];
    m[static_cast<std::size_t>(n) * nc + n2] = out;
    if (n != n2) m[static_cast<std::size_t>(n2) * nc + n] = std::move(out);
  });
  return m;
}

int exact_window(const SchmidtState& state) {
  const double lam = state.alpha * state.alpha / 2.0;
  const double lam_b = state.beta * state.beta / 2.0;
  const double top = std::max(lam, lam_b);
  return static_cast<int>(std::ceil(top + 8.0 * std::sqrt(top))) +
         state.n_max + 2;
}

}  // namespace

void set_default_jobs(int jobs) { g_jobs.store(jobs < 1 ? 1 : jobs); }
int default_jobs() { return g_jobs.load(); }

ExactTables::ExactTables(const SchmidtState& state) : state_(state) {
  if (state.c.empty()) throw ConfigError("ExactTables: state has no coefficients");
  if (state.alpha < 0.0 || state.beta < 0.0)
    throw ConfigError("ExactTables: oscillator amplitudes must be >= 0");
  if (state.alpha > 12.0 || state.beta > 12.0)
    throw ConfigError(
        "ExactTables: window overflow, oscillator amplitude exceeds table "
        "bounds (alpha <= 12)");
  nc_ = static_cast<int>(state.c.size());
  p_max_ = exact_window(state);
  const auto r_a = r_tables(state.alpha, nc_, p_max_);
  m_ = m_tables(r_a, p_max_);
  if (state.beta == state.alpha) {
    mb_ = m_;
  } else {
    const auto r_b = r_tables(state.beta, nc_, p_max_);
    mb_ = m_tables(r_b, p_max_);
  }
  // Completeness dots sum_j M[n][n'](j); unitarity makes them delta_{nn'}.
  auto ones = [&](const std::vector<std::vector<double>>& m) {
    std::vector<double> d(m.size());
    for (std::size_t t = 0; t < m.size(); ++t) {
      double s = 0.0;
      for (double v : m[t]) s += v;
      d[t] = s;
    }
    return d;
  };
  m_one_ = ones(m_);
  mb_one_ = ones(mb_);
}

const std::vector<double>& ExactTables::m(int n, int nprime) const {
  return m_[static_cast<std::size_t>(n) * nc_ + nprime];
}

JointIntegerDistribution ExactTables::assemble(double angle_sum) const {
  JointIntegerDistribution dist(-p_max_, p_max_, -p_max_, p_max_);
  const int ni = 2 * p_max_ + 1;
  const auto& c = state_.c;
  detail::parallel_for(ni, default_jobs(), [&](std::size_t row) {
    const int i = static_cast<int>(row) - p_max_;
    for (int n = 0; n < nc_; ++n)
      for (int n2 = 0; n2 < nc_; ++n2) {
        const double k =
            c[n] * c[n2] * std::cos((n - n2) * angle_sum);
        const double ma = m_[static_cast<std::size_t>(n) * nc_ + n2][row];
        const double w = k * ma;
        if (w == 0.0) continue;
        const auto& mb = mb_[static_cast<std::size_t>(n) * nc_ + n2];
        for (int jj = 0; jj < ni; ++jj)
          dist.at(i, jj - p_max_) += w * mb[jj];
      }
  });
  return dist;
}

void ExactTables::binarized(double angle_sum, double sigma, double& p_pp,
                            double& p_a, double& p_b) const {
  std::vector<double> w(2 * p_max_ + 1);
  for (int i = -p_max_; i <= p_max_; ++i)
    w[i + p_max_] = gaussian_tail(i, sigma);
  p_pp = p_a = p_b = 0.0;
  const auto& c = state_.c;
  for (int n = 0; n < nc_; ++n)
    for (int n2 = 0; n2 < nc_; ++n2) {
      const std::size_t t = static_cast<std::size_t>(n) * nc_ + n2;
      const double k = c[n] * c[n2] * std::cos((n - n2) * angle_sum);
      double da = 0.0, db = 0.0;
      const auto& ma = m_[t];
      const auto& mb = mb_[t];
      for (std::size_t i = 0; i < w.size(); ++i) {
        da += ma[i] * w[i];
        db += mb[i] * w[i];
      }
      p_pp += k * da * db;
      p_a += k * da * mb_one_[t];
      p_b += k * m_one_[t] * db;
    }
}

double ExactTables::outcome_second_moment() const {
  double m2 = 0.0;
  for (int n = 0; n < nc_; ++n) {
    const auto& mn = m_[static_cast<std::size_t>(n) * nc_ + n];
    const double w = state_.c[n] * state_.c[n];
    for (int i = -p_max_; i <= p_max_; ++i)
      m2 += w * static_cast<double>(i) * i * mn[i + p_max_];
  }
  return m2;
}

QuadratureTables::QuadratureTables(const SchmidtState& state,
                                   const GridSpec& grid)
    : state_(state), grid_(grid) {
  if (state.c.empty())
    throw ConfigError("QuadratureTables: state has no coefficients");
  if (grid.x_min > -8.0 || grid.x_max < 8.0)
    throw ConfigError("QuadratureTables: grid bounds must cover [-8, 8]");
  if (grid.step > 1.0 / 32.0 + 1e-15)
    throw ConfigError("QuadratureTables: grid step must be <= 1/32");
  nc_ = static_cast<int>(state.c.size());
  const int n = grid.count();
  x_.resize(n);
  for (int k = 0; k < n; ++k) x_[k] = grid.center(k);
  std::vector<std::vector<double>> psi;
  hermite_psi_table(nc_ - 1, x_, psi);
  f_.resize(static_cast<std::size_t>(nc_) * nc_);
  for (int a = 0; a < nc_; ++a)
    for (int b = a; b < nc_; ++b) {
      std::vector<double> prod(n);
      for (int k = 0; k < n; ++k) prod[k] = psi[a][k] * psi[b][k];
      f_[static_cast<std::size_t>(a) * nc_ + b] = prod;
      if (a != b) f_[static_cast<std::size_t>(b) * nc_ + a] = std::move(prod);
    }
}

const std::vector<std::vector<double>>& QuadratureTables::factors_for_eta(
    double eta) const {
  if (eta == 1.0) return f_;
  if (!(eta > 0.0) || eta > 1.0)
    throw ConfigError("loss channel: eta must lie in (0, 1]");
  if (!f_loss_.empty() && cached_eta_ == eta) return f_loss_;
  const int n = static_cast<int>(x_.size());
  const double h = grid_.step;
  const double std_dev = std::sqrt(1.0 - eta);
  std::vector<double> kernel(static_cast<std::size_t>(n) * n);
  const double norm = h / (std_dev * std::sqrt(2.0 * 3.14159265358979323846));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const double d = (x_[k] - eta * x_[j]) / std_dev;
      kernel[static_cast<std::size_t>(k) * n + j] = norm * std::exp(-d * d / 2.0);
    }
  f_loss_.assign(f_.size(), {});
  detail::parallel_for(f_.size(), default_jobs(), [&](std::size_t t) {
    std::vector<double> out(n, 0.0);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      const double* krow = kernel.data() + static_cast<std::size_t>(k) * n;
      const double* fv = f_[t].data();
      for (int j = 0; j < n; ++j) s += krow[j] * fv[j];
      out[k] = s;
    }
    f_loss_[t] = std::move(out);
  });
  cached_eta_ = eta;
  return f_loss_;
}

JointQuadratureDensity QuadratureTables::assemble(double angle_sum,
                                                  double eta) const {
  const auto& f = factors_for_eta(eta);
  JointQuadratureDensity d(grid_);
  const int n = static_cast<int>(x_.size());
  const auto& c = state_.c;
  std::vector<double> kf(static_cast<std::size_t>(nc_) * nc_);
  for (int a = 0; a < nc_; ++a)
    for (int b = 0; b < nc_; ++b)
      kf[static_cast<std::size_t>(a) * nc_ + b] =
          c[a] * c[b] * std::cos((a - b) * angle_sum);
  detail::parallel_for(n, default_jobs(), [&](std::size_t ix) {
    for (int a = 0; a < nc_; ++a)
      for (int b = 0; b < nc_; ++b) {
        const double w = kf[static_cast<std::size_t>(a) * nc_ + b] *
                         f[static_cast<std::size_t>(a) * nc_ + b][ix];
        if (w == 0.0) continue;
        const auto& fv = f[static_cast<std::size_t>(a) * nc_ + b];
        for (int iy = 0; iy < n; ++iy)
          d.at(static_cast<int>(ix), iy) += w * fv[iy];
      }
  });
  return d;
}

void QuadratureTables::binarized(double angle_sum, double sigma, double eta,
                                 double& p_pp, double& p_a,
                                 double& p_b) const {
  const auto& f = factors_for_eta(eta);
  const int n = static_cast<int>(x_.size());
  const double h = grid_.step;
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) w[k] = gaussian_tail(x_[k], sigma);
  p_pp = p_a = p_b = 0.0;
  const auto& c = state_.c;
  for (int a = 0; a < nc_; ++a)
    for (int b = 0; b < nc_; ++b) {
      const double k = c[a] * c[b] * std::cos((a - b) * angle_sum);
      const auto& fv = f[static_cast<std::size_t>(a) * nc_ + b];
      double aw = 0.0, a1 = 0.0;
      for (int j = 0; j < n; ++j) {
        aw += w[j] * fv[j];
        a1 += fv[j];
      }
      aw *= h;
      a1 *= h;
      p_pp += k * aw * aw;
      p_a += k * aw * a1;
      p_b += k * a1 * aw;
    }
}

double QuadratureTables::outcome_second_moment() const {
  double m2 = 0.0;
  for (int n = 0; n < nc_; ++n) {
    const auto& fn = f_[static_cast<std::size_t>(n) * nc_ + n];
    const double w = state_.c[n] * state_.c[n];
    double acc = 0.0;
    for (std::size_t k = 0; k < x_.size(); ++k) acc += x_[k] * x_[k] * fn[k];
    m2 += w * acc * grid_.step;
  }
  return m2;
}

std::vector<std::vector<double>> spin_rotation_table(int N, double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  std::vector<std::vector<double>> a{{1.0}};
  for (int m = 1; m <= N; ++m) {
    std::vector<std::vector<double>> b(m + 1, std::vector<double>(m + 1, 0.0));
    for (int u = 0; u <= m; ++u) {
      // k = 0: one more a-' photon, a-'† -> s c+† - c c-†
      double acc = 0.0;
      if (u >= 1) acc += s * std::sqrt(static_cast<double>(u)) * a[u - 1][0];
      if (m - u >= 1)
        acc -= c * std::sqrt(static_cast<double>(m - u)) * a[u][0];
      b[u][0] = acc / std::sqrt(static_cast<double>(m));
      // k >= 1: one more a+' photon, a+'† -> c c+† + s c-†
      for (int k = 1; k <= m; ++k) {
        acc = 0.0;
        if (u >= 1)
          acc += c * std::sqrt(static_cast<double>(u)) * a[u - 1][k - 1];
        if (m - u >= 1)
          acc += s * std::sqrt(static_cast<double>(m - u)) * a[u][k - 1];
        b[u][k] = acc / std::sqrt(static_cast<double>(k));
      }
    }
    a = std::move(b);
  }
  return a;
}

SpinTables::SpinTables(const SpinPairState& state, double theta, double phi)
    : N_(state.N) {
  if (N_ < 1 || N_ > 200)
    throw ConfigError("SpinTables: N must lie in [1, 200]");
  const auto ta = spin_rotation_table(N_, theta);
  const auto tb = spin_rotation_table(N_, phi);
  joint_.assign(N_ + 1, std::vector<double>(N_ + 1, 0.0));
  const double norm = 1.0 / (N_ + 1.0);
  for (int u = 0; u <= N_; ++u)
    for (int v = 0; v <= N_; ++v) {
      double amp = 0.0;
      for (int k = 0; k <= N_; ++k) amp += ta[u][k] * tb[v][k];
      joint_[u][v] = amp * amp * norm;
    }
}

JointIntegerDistribution SpinTables::assemble() const {
  JointIntegerDistribution dist(-N_, N_, -N_, N_);
  for (int u = 0; u <= N_; ++u)
    for (int v = 0; v <= N_; ++v)
      dist.at(2 * u - N_, 2 * v - N_) = joint_[u][v];
  return dist;
}

void SpinTables::binarized(double sigma, double& p_pp, double& p_a,
                           double& p_b) const {
  std::vector<double> w(N_ + 1);
  for (int u = 0; u <= N_; ++u) w[u] = gaussian_tail(2 * u - N_, sigma);
  p_pp = p_a = p_b = 0.0;
  for (int u = 0; u <= N_; ++u)
    for (int v = 0; v <= N_; ++v) {
      const double p = joint_[u][v];
      p_pp += p * w[u] * w[v];
      p_a += p * w[u];
      p_b += p * w[v];
    }
}

double SpinTables::outcome_second_moment() const {
  double m2 = 0.0;
  for (int u = 0; u <= N_; ++u) {
    double row = 0.0;
    for (int v = 0; v <= N_; ++v) row += joint_[u][v];
    const double i = 2.0 * u - N_;
    m2 += i * i * row;
  }
  return m2;
}

JointIntegerDistribution exact_joint_distribution(const SchmidtState& state,
                                                  double theta, double phi) {
  return ExactTables(state).assemble(theta + phi);
}

JointQuadratureDensity quadrature_joint_density(const SchmidtState& state,
                                                double theta, double phi,
                                                const GridSpec& grid) {
  return QuadratureTables(state, grid).assemble(theta + phi);
}

JointIntegerDistribution spin_joint_distribution(const SpinPairState& state,
                                                 double theta, double phi) {
  return SpinTables(state, theta, phi).assemble();
}

JointQuadratureDensity apply_loss_quadrature(const JointQuadratureDensity& in,
                                             LossChannel channel) {
  const double eta = channel.eta;
  if (!(eta > 0.0) || eta > 1.0)
    throw ConfigError("loss channel: eta must lie in (0, 1]");
  if (eta == 1.0) return in;
  const GridSpec& grid = in.grid();
  const int n = grid.count();
  const double h = grid.step;
  const double std_dev = std::sqrt(1.0 - eta);
  std::vector<double> kernel(static_cast<std::size_t>(n) * n);
  const double norm = h / (std_dev * std::sqrt(2.0 * 3.14159265358979323846));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const double d = (grid.center(k) - eta * grid.center(j)) / std_dev;
      kernel[static_cast<std::size_t>(k) * n + j] = norm * std::exp(-d * d / 2.0);
    }
  JointQuadratureDensity mid(grid), out(grid);
  detail::parallel_for(n, default_jobs(), [&](std::size_t k) {
    for (int y = 0; y < n; ++y) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += kernel[k * n + j] * in.value(j, y);
      mid.at(static_cast<int>(k), y) = s;
    }
  });
  detail::parallel_for(n, default_jobs(), [&](std::size_t x) {
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += kernel[static_cast<std::size_t>(k) * n + j] *
             mid.value(static_cast<int>(x), j);
      out.at(static_cast<int>(x), k) = s;
    }
  });
  return out;
}

}
