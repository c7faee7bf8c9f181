#include "macrobell/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "macrobell/errors.hpp"

namespace macrobell {

JointIntegerDistribution::JointIntegerDistribution(int i_min, int i_max,
                                                   int j_min, int j_max)
    : i_min_(i_min), i_max_(i_max), j_min_(j_min), j_max_(j_max) {
  if (i_max < i_min || j_max < j_min)
    throw ConfigError("JointIntegerDistribution: empty window");
  p_.assign(static_cast<std::size_t>(i_max - i_min + 1) *
                static_cast<std::size_t>(j_max - j_min + 1),
            0.0);
}

double& JointIntegerDistribution::at(int i, int j) {
  return p_[static_cast<std::size_t>(i - i_min_) *
                static_cast<std::size_t>(j_max_ - j_min_ + 1) +
            static_cast<std::size_t>(j - j_min_)];
}

double JointIntegerDistribution::probability(int i, int j) const {
  if (i < i_min_ || i > i_max_ || j < j_min_ || j > j_max_) return 0.0;
  return p_[static_cast<std::size_t>(i - i_min_) *
                static_cast<std::size_t>(j_max_ - j_min_ + 1) +
            static_cast<std::size_t>(j - j_min_)];
}

double JointIntegerDistribution::mass() const {
  double s = 0.0;
  for (double v : p_) s += v;
  return s;
}

std::vector<double> JointIntegerDistribution::marginal_a() const {
  const std::size_t nj = static_cast<std::size_t>(j_max_ - j_min_ + 1);
  std::vector<double> m(static_cast<std::size_t>(i_max_ - i_min_ + 1), 0.0);
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < nj; ++b) m[a] += p_[a * nj + b];
  return m;
}

std::vector<double> JointIntegerDistribution::marginal_b() const {
  const std::size_t nj = static_cast<std::size_t>(j_max_ - j_min_ + 1);
  std::vector<double> m(nj, 0.0);
  for (std::size_t a = 0; a < static_cast<std::size_t>(i_max_ - i_min_ + 1); ++a)
    for (std::size_t b = 0; b < nj; ++b) m[b] += p_[a * nj + b];
  return m;
}

int GridSpec::count() const {
  return static_cast<int>(std::lround((x_max - x_min) / step));
}

JointQuadratureDensity::JointQuadratureDensity(const GridSpec& grid)
    : grid_(grid), n_(grid.count()) {
  if (n_ <= 0 || grid.step <= 0.0)
    throw ConfigError("JointQuadratureDensity: invalid grid");
  v_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
}

double& JointQuadratureDensity::at(int ix, int iy) {
  return v_[static_cast<std::size_t>(ix) * n_ + iy];
}

double JointQuadratureDensity::value(int ix, int iy) const {
  return v_[static_cast<std::size_t>(ix) * n_ + iy];
}

double JointQuadratureDensity::mass() const {
  double s = 0.0;
  for (double v : v_) s += v;
  return s * grid_.step * grid_.step;
}

std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& os, const JointIntegerDistribution& dist,
               const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << "\n";
  os << "i,j,p\n";
  for (int i = dist.i_min(); i <= dist.i_max(); ++i)
    for (int j = dist.j_min(); j <= dist.j_max(); ++j) {
      const double p = dist.probability(i, j);
      if (p != 0.0)
        os << i << "," << j << "," << format_sig12(p) << "\n";
    }
}

void write_csv(std::ostream& os, const JointQuadratureDensity& density,
               const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << "\n";
  os << "x,y,p\n";
  const int n = density.grid().count();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      os << format_sig12(density.grid().center(ix)) << ","
         << format_sig12(density.grid().center(iy)) << ","
         << format_sig12(density.value(ix, iy)) << "\n";
}

}
