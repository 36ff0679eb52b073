#include <doctest.h>

#include "ballrecon/open_set.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace ballrecon;

namespace {

Point p2(double x, double y) { return Point::euclidean(0, Eigen::Vector2d(x, y)); }

// Independent clipping oracle: fine scan for sign changes of the membership
// indicator, bisection refinement of each crossing to 1e-12, then the measure
// of the inside set.
double bisect_clip_length(const std::function<bool(double)>& inside, int scan = 20000) {
  std::vector<double> ts;
  std::vector<bool> in;
  for (int i = 0; i <= scan; ++i) {
    const double t = static_cast<double>(i) / scan;
    ts.push_back(t);
    in.push_back(inside(t));
  }
  double total = 0.0;
  double enter = in[0] ? 0.0 : -1.0;
  for (int i = 1; i <= scan; ++i) {
    if (in[static_cast<size_t>(i)] == in[static_cast<size_t>(i - 1)]) continue;
    double lo = ts[static_cast<size_t>(i - 1)];
    double hi = ts[static_cast<size_t>(i)];
    for (int k = 0; k < 50; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (inside(mid) == in[static_cast<size_t>(i - 1)]) lo = mid;
      else hi = mid;
    }
    const double crossing = 0.5 * (lo + hi);
    if (in[static_cast<size_t>(i)]) {
      enter = crossing;
    } else {
      total += crossing - (enter >= 0.0 ? enter : 0.0);
      enter = -1.0;
    }
  }
  if (enter >= 0.0) total += 1.0 - enter;
  if (in[0] && enter < 0.0 && total == 0.0) {
    // never left the set
    bool always = true;
    for (bool b : in) always &= b;
    if (always) total = 1.0;
  }
  return total;
}

}  // namespace

TEST_CASE("segment-ball clipping matches geometry and the bisection oracle") {
  const Eigen::Vector2d p0(0, 0);
  const Eigen::Vector2d p1(1, 0);
  // Symmetric chord through the ball interior.
  auto iv = clip_segment_ball(p0, p1, Eigen::Vector2d(0.5, 0.0), 0.2);
  CHECK(intervals_total_length(iv) == doctest::Approx(0.4).epsilon(1e-13));
  // Tangent ball: measure-zero touch.
  iv = clip_segment_ball(p0, p1, Eigen::Vector2d(0.5, 0.2), 0.2);
  CHECK(intervals_total_length(iv) <= 1e-7);
  // Ball away from the carrier line.
  iv = clip_segment_ball(p0, p1, Eigen::Vector2d(0.5, 1.0), 0.2);
  CHECK(iv.empty());

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> rad(0.05, 0.8);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Vector2d a(unif(rng), unif(rng));
    const Eigen::Vector2d b(unif(rng), unif(rng));
    const Eigen::Vector2d c(unif(rng), unif(rng));
    const double r = rad(rng);
    const double got = intervals_total_length(clip_segment_ball(a, b, c, r));
    const double want = bisect_clip_length([&](double t) {
      return ((a + t * (b - a)) - c).norm() <= r;
    });
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("segment-box and segment-capsule clipping match the bisection oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Vector2d a(unif(rng), unif(rng));
    const Eigen::Vector2d b(unif(rng), unif(rng));

    Eigen::Vector2d lo(unif(rng), unif(rng));
    Eigen::Vector2d hi = lo + Eigen::Vector2d(0.3 + 0.5 * std::abs(unif(rng)),
                                              0.3 + 0.5 * std::abs(unif(rng)));
    const double got_box = intervals_total_length(clip_segment_box(a, b, lo, hi));
    const double want_box = bisect_clip_length([&](double t) {
      const Eigen::Vector2d x = a + t * (b - a);
      return x[0] >= lo[0] && x[0] <= hi[0] && x[1] >= lo[1] && x[1] <= hi[1];
    });
    CHECK(got_box == doctest::Approx(want_box).epsilon(1e-9));

    const Eigen::Vector2d q0(unif(rng), unif(rng));
    const Eigen::Vector2d q1(unif(rng), unif(rng));
    const double eps = 0.1 + 0.3 * std::abs(unif(rng));
    const double got_cap = intervals_total_length(clip_segment_capsule(a, b, q0, q1, eps));
    const double want_cap = bisect_clip_length([&](double t) {
      return point_segment_distance(a + t * (b - a), q0, q1) <= eps;
    });
    CHECK(got_cap == doctest::Approx(want_cap).epsilon(1e-9));
  }
}

TEST_CASE("open set membership, clearance and containment") {
  const MetricSpace plane = MetricSpace::euclidean(2);
  const OpenSet u = OpenSet::ball_union({{p2(0, 0), 1.0}, {p2(3, 0), 0.5}});
  CHECK(u.contains(plane, p2(0.5, 0)));
  CHECK(!u.contains(plane, p2(1.0, 0)));  // boundary is outside an open set
  CHECK(!u.contains(plane, p2(2.0, 0)));
  CHECK(u.clearance(plane, p2(0, 0)) == doctest::Approx(1.0));
  CHECK(u.contains_ball(plane, {p2(0, 0), 0.9}, 0.05));
  CHECK(!u.contains_ball(plane, {p2(0, 0), 0.99}, 0.05));

  OpenSet::Box box;
  box.lo = Eigen::Vector2d(0, 0);
  box.hi = Eigen::Vector2d(1, 1);
  const OpenSet ub = OpenSet::box_union({box});
  CHECK(ub.contains(plane, p2(0.5, 0.5)));
  CHECK(!ub.contains(plane, p2(0.5, 1.0)));
  CHECK(ub.clearance(plane, p2(0.5, 0.5)) == doctest::Approx(0.5));

  const OpenSet cap = OpenSet::polyline_neighborhood({p2(0, 0), p2(1, 0)}, 0.2);
  CHECK(cap.contains(plane, p2(1.1, 0.1)));  // end cap region
  CHECK(!cap.contains(plane, p2(1.3, 0.0)));
  CHECK(cap.clearance(plane, p2(0.5, 0.1)) == doctest::Approx(0.1));

  const OpenSet merged = OpenSet::merged(u, cap);
  CHECK(merged.contains(plane, p2(2.9, 0)));
  CHECK(merged.contains(plane, p2(0.5, 0.1)));

  Eigen::VectorXd lo, hi;
  merged.bounding_box(lo, hi);
  CHECK(lo[0] <= -1.0);
  CHECK(hi[0] >= 3.5);

  const OpenSet grown = cap.inflated(0.1);
  CHECK(grown.contains(plane, p2(1.25, 0.0)));
}

TEST_CASE("interval union merges overlaps") {
  ParamIntervals iv{{0.5, 0.7}, {0.1, 0.3}, {0.25, 0.55}};
  const ParamIntervals merged = intervals_union(std::move(iv));
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].first == doctest::Approx(0.1));
  CHECK(merged[0].second == doctest::Approx(0.7));
  CHECK(intervals_total_length(merged) == doctest::Approx(0.6));
}
