#pragma once

#include "ballrecon/measure.hpp"
#include "ballrecon/open_set.hpp"

#include <stdexcept>
#include <vector>

namespace ballrecon {

// Ball family covering a point set through its centers: every point of
// centers_of is the center of at least one ball.
struct BallFamily {
  std::vector<Ball> balls;
  std::vector<Point> centers_of;
};

struct DoublingParams {
  double alpha = 0.5;   // in (0, 1]
  double gamma = 1.0;   // >= 1
  double eps0 = 0.1;    // > 0
  std::vector<double> r_grid;  // decreasing radii
};

struct SubfamilyDecomposition {
  // Indices into the input family, one list per disjoint subfamily.
  std::vector<std::vector<int>> subfamilies;
  int subfamily_count = 0;
};

struct ZetaBoundExceeded : std::runtime_error {
  ZetaBoundExceeded(const Ball& b, int needed)
      : std::runtime_error("greedy_subfamilies: subfamily bound exceeded"),
        offending(b),
        needed_index(needed) {}
  Ball offending;
  int needed_index;
};

// Largest-radius-first greedy with first-fit subfamily assignment: every
// center ends up covered, each subfamily is pairwise disjoint. Throws
// ZetaBoundExceeded if more than zeta_bound subfamilies would be needed.
SubfamilyDecomposition greedy_subfamilies(const MetricSpace& space, const BallFamily& family,
                                          int zeta_bound);

struct DoublingRadii {
  std::vector<double> radii;
  bool grid_extended = false;  // one-decade extension was attempted
};

// Grid radii r with mu(B_r(x)) <= (gamma + eps0) mu(B_{alpha r}(x)). An empty
// result at a point of positive mass triggers one decade of grid extension
// before reporting empty.
DoublingRadii doubling_radii(const SignedMeasure& mu, const ReferenceMeasure& reference,
                             const Point& x, const DoublingParams& params);

struct DoublingCover {
  std::vector<Ball> chosen;       // pairwise disjoint, inside U, doubling
  std::vector<Point> uncovered;   // points with no admissible ball
  bool success = false;           // uncovered carries zero mass
};

// Besicovitch-with-doubling-balls: a disjoint family of doubling balls inside
// U covering every point of A inside U (atoms stand in for mu-a.e. coverage).
DoublingCover besicovitch_with_doubling(const MetricSpace& space, const std::vector<Point>& A,
                                        const OpenSet& U, const SignedMeasure& mu,
                                        const ReferenceMeasure& reference,
                                        const DoublingParams& params, double delta);

// Geometric grid with ratio 1/2 from delta down to delta * 2^-20.
std::vector<double> default_radius_grid(double delta);

}  // namespace ballrecon
