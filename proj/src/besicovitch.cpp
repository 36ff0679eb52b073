#include "ballrecon/besicovitch.hpp"

#include <algorithm>
#include <cmath>

namespace ballrecon {

namespace {

constexpr double kSlack = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool disjoint(const MetricSpace& space, const Ball& a, const Ball& b) {
  return distance(space, a.center, b.center) > a.radius + b.radius;
}

bool covers(const MetricSpace& space, const Ball& b, const Point& p) {
  return distance(space, b.center, p) <= b.radius + kSlack;
}

bool satisfies_doubling(const SignedMeasure& mu, const Point& x, double r,
                        const DoublingParams& params) {
  const double lhs = ball_mass(mu, {x, r});
  const double rhs = (params.gamma + params.eps0) * ball_mass(mu, {x, params.alpha * r});
  return lhs <= rhs + kSlack * std::max(1.0, lhs);
}

}  // namespace

std::vector<double> default_radius_grid(double delta) {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(delta / std::pow(2.0, k));
  return grid;
}

SubfamilyDecomposition greedy_subfamilies(const MetricSpace& space, const BallFamily& family,
                                          int zeta_bound) {
  require(zeta_bound >= 1, "greedy_subfamilies: zeta_bound must be >= 1");
  require(!family.balls.empty(), "greedy_subfamilies: empty family");
  for (const Point& a : family.centers_of) {
    bool centered = false;
    for (const Ball& b : family.balls) {
      if (same_point(b.center, a, kSlack)) {
        centered = true;
        break;
      }
    }
    require(centered, "greedy_subfamilies: a point of A is not the center of any ball");
  }

  const std::size_t n = family.balls.size();
  std::vector<char> ball_center_covered(n, 0);
  std::vector<char> point_covered(family.centers_of.size(), 0);
  SubfamilyDecomposition out;

  auto mark_covered = [&](const Ball& chosen) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!ball_center_covered[i] && covers(space, chosen, family.balls[i].center)) {
        ball_center_covered[i] = 1;
      }
    }
    for (std::size_t i = 0; i < family.centers_of.size(); ++i) {
      if (!point_covered[i] && covers(space, chosen, family.centers_of[i])) {
        point_covered[i] = 1;
      }
    }
  };

  while (true) {
    // Largest-radius ball among those whose center is still uncovered.
    int pick = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (ball_center_covered[i]) continue;
      if (pick < 0 || family.balls[i].radius > family.balls[static_cast<std::size_t>(pick)].radius) {
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) break;
    const Ball& chosen = family.balls[static_cast<std::size_t>(pick)];

    int slot = -1;
    for (std::size_t j = 0; j < out.subfamilies.size(); ++j) {
      bool fits = true;
      for (int k : out.subfamilies[j]) {
        if (!disjoint(space, chosen, family.balls[static_cast<std::size_t>(k)])) {
          fits = false;
          break;
        }
      }
      if (fits) {
        slot = static_cast<int>(j);
        break;
      }
    }
    if (slot < 0) {
      if (static_cast<int>(out.subfamilies.size()) >= zeta_bound) {
        throw ZetaBoundExceeded(chosen, static_cast<int>(out.subfamilies.size()) + 1);
      }
      out.subfamilies.emplace_back();
      slot = static_cast<int>(out.subfamilies.size()) - 1;
    }
    out.subfamilies[static_cast<std::size_t>(slot)].push_back(pick);
    mark_covered(chosen);
  }

  out.subfamily_count = static_cast<int>(out.subfamilies.size());
  return out;
}

DoublingRadii doubling_radii(const SignedMeasure& mu, const ReferenceMeasure& reference,
                             const Point& x, const DoublingParams& params) {
  (void)reference;  // gamma and alpha are carried by params
  require(!params.r_grid.empty(), "doubling_radii: empty radius grid");
  require(mu.nonnegative(), "doubling_radii: mu must be nonnegative");
  DoublingRadii out;
  for (double r : params.r_grid) {
    if (satisfies_doubling(mu, x, r, params)) out.radii.push_back(r);
  }
  if (out.radii.empty()) {
    const double smallest = params.r_grid.back();
    if (ball_mass(mu, {x, smallest}) > 0.0) {
      // The proposition guarantees doubling radii mu-a.e. as r -> 0; extend
      // the grid by one decade before reporting empty.
      out.grid_extended = true;
      for (double r = smallest / 2.0; r >= smallest / 10.0; r /= 2.0) {
        if (satisfies_doubling(mu, x, r, params)) out.radii.push_back(r);
      }
    }
  }
  return out;
}

DoublingCover besicovitch_with_doubling(const MetricSpace& space, const std::vector<Point>& A,
                                        const OpenSet& U, const SignedMeasure& mu,
                                        const ReferenceMeasure& reference,
                                        const DoublingParams& params, double delta) {
  require(mu.nonnegative(), "besicovitch_with_doubling: mu must be nonnegative");
  DoublingCover out;

  struct Entry {
    Point point;
    std::vector<double> radii;  // admissible: doubling, <= delta, ball inside U
  };
  std::vector<Entry> entries;
  for (const Point& a : A) {
    if (!U.contains(space, a)) continue;
    Entry e{a, {}};
    const DoublingRadii dr = doubling_radii(mu, reference, a, params);
    for (double r : dr.radii) {
      if (r <= delta && U.contains_ball(space, {a, r}, 0.0)) e.radii.push_back(r);
    }
    std::sort(e.radii.begin(), e.radii.end(), std::greater<>());
    entries.push_back(std::move(e));
  }

  std::vector<char> covered(entries.size(), 0);
  std::vector<char> skipped(entries.size(), 0);
  while (true) {
    // Uncovered point with the largest admissible radius goes first.
    int pick = -1;
    double pick_r = -1.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (covered[i] || skipped[i] || entries[i].radii.empty()) continue;
      if (entries[i].radii.front() > pick_r) {
        pick_r = entries[i].radii.front();
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) break;
    Entry& e = entries[static_cast<std::size_t>(pick)];

    // Largest admissible radius disjoint from everything chosen so far,
    // falling back to smaller grid radii.
    int found = -1;
    for (std::size_t k = 0; k < e.radii.size(); ++k) {
      Ball b{e.point, e.radii[k]};
      bool ok = true;
      for (const Ball& c : out.chosen) {
        if (!disjoint(space, b, c)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        found = static_cast<int>(k);
        break;
      }
    }
    if (found < 0) {
      skipped[static_cast<std::size_t>(pick)] = 1;  // may still be covered later
      continue;
    }
    const Ball chosen{e.point, e.radii[static_cast<std::size_t>(found)]};
    out.chosen.push_back(chosen);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!covered[i] && covers(space, chosen, entries[i].point)) covered[i] = 1;
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!covered[i]) out.uncovered.push_back(entries[i].point);
  }

  double uncovered_mass = 0.0;
  for (const Point& p : out.uncovered) {
    for (const Atom& a : mu.atoms) {
      if (same_point(a.position, p, kSlack)) uncovered_mass += a.weight;
    }
  }
  out.success = uncovered_mass == 0.0;
  return out;
}

}  // namespace ballrecon
