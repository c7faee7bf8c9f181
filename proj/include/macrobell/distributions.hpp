#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace macrobell {

// Joint distribution of integer photon-number differences (i at A, j at B),
// stored dense over a rectangular window; cells outside carry no mass.
class JointIntegerDistribution {
 public:
  JointIntegerDistribution(int i_min, int i_max, int j_min, int j_max);

  double& at(int i, int j);
  double probability(int i, int j) const;

  int i_min() const { return i_min_; }
  int i_max() const { return i_max_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }

  double mass() const;
  double mass_deficit() const { return 1.0 - mass(); }

  // Marginal over the other side's outcomes, indexed from i_min (resp j_min).
  std::vector<double> marginal_a() const;
  std::vector<double> marginal_b() const;

 private:
  int i_min_, i_max_, j_min_, j_max_;
  std::vector<double> p_;  // row-major over (i, j)
};

// Uniform cell-centered grid: sample k sits at min + (k + 1/2) * step, so a
// cell edge (not a center) falls on 0 and sharp binarization is exact.
struct GridSpec {
  double x_min = -8.0;
  double x_max = 8.0;
  double step = 1.0 / 32.0;

  int count() const;
  double center(int k) const { return x_min + (k + 0.5) * step; }
};

// Joint density of the two quadrature outcomes on grid x grid.
class JointQuadratureDensity {
 public:
  explicit JointQuadratureDensity(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double& at(int ix, int iy);
  double value(int ix, int iy) const;

  double mass() const;  // Riemann sum, step^2 weighted
  double mass_deficit() const { return 1.0 - mass(); }

 private:
  GridSpec grid_;
  int n_;
  std::vector<double> v_;
};

// CSV with 12-significant-digit values: leading '#' comment lines, then a
// header row ("i,j,p" or "x,y,p"), then one row per cell with nonzero mass
// (every cell for densities).
void write_csv(std::ostream& os, const JointIntegerDistribution& dist,
               const std::vector<std::string>& comments);
void write_csv(std::ostream& os, const JointQuadratureDensity& density,
               const std::vector<std::string>& comments);

std::string format_sig12(double v);

}
