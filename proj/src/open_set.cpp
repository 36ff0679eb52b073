#include "ballrecon/open_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ballrecon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void push_clamped(ParamIntervals& out, double t0, double t1) {
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, 1.0);
  if (t1 > t0) out.emplace_back(t0, t1);
}

// Solutions of a t^2 + b t + c <= 0 clamped to [lo, hi].
void quadratic_sublevel(double a, double b, double c, double lo, double hi, ParamIntervals& out) {
  if (a <= 0.0) {
    // Degenerate direction: linear or constant condition.
    if (b == 0.0) {
      if (c <= 0.0) push_clamped(out, lo, hi);
      return;
    }
    const double root = -c / b;
    if (b > 0.0) {
      push_clamped(out, lo, std::min(hi, root));
    } else {
      push_clamped(out, std::max(lo, root), hi);
    }
    return;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return;  // empty or a single tangent point
  const double sq = std::sqrt(disc);
  const double t0 = (-b - sq) / (2.0 * a);
  const double t1 = (-b + sq) / (2.0 * a);
  push_clamped(out, std::max(t0, lo), std::min(t1, hi));
}

double capsule_distance(const OpenSet::Capsule& c, const Eigen::VectorXd& x) {
  double d = kInf;
  for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
    d = std::min(d, point_segment_distance(x, c.vertices[i].coords, c.vertices[i + 1].coords));
  }
  return d;
}

}  // namespace

double intervals_total_length(const ParamIntervals& iv) {
  double total = 0.0;
  for (const auto& [a, b] : iv) total += b - a;
  return total;
}

ParamIntervals intervals_union(ParamIntervals iv) {
  std::sort(iv.begin(), iv.end());
  ParamIntervals out;
  for (const auto& [a, b] : iv) {
    if (!out.empty() && a <= out.back().second) {
      out.back().second = std::max(out.back().second, b);
    } else {
      out.emplace_back(a, b);
    }
  }
  return out;
}

ParamIntervals clip_segment_ball(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                                 const Eigen::VectorXd& center, double radius) {
  const Eigen::VectorXd d = p1 - p0;
  const double dd = d.squaredNorm();
  if (dd == 0.0) {
    return ((p0 - center).norm() <= radius) ? ParamIntervals{{0.0, 1.0}} : ParamIntervals{};
  }
  // Foot-of-perpendicular form; the textbook discriminant cancels badly when
  // the center sits near the carrier line and the radius is tiny.
  const double t0 = d.dot(center - p0) / dd;
  const double h2 = (p0 + t0 * d - center).squaredNorm();
  const double r2 = radius * radius;
  if (h2 >= r2) return {};
  const double half = std::sqrt((r2 - h2) / dd);
  ParamIntervals out;
  push_clamped(out, t0 - half, t0 + half);
  return out;
}

ParamIntervals clip_segment_box(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                                const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  double t0 = 0.0;
  double t1 = 1.0;
  for (Eigen::Index i = 0; i < p0.size(); ++i) {
    const double d = p1[i] - p0[i];
    if (d == 0.0) {
      if (p0[i] < lo[i] || p0[i] > hi[i]) return {};
      continue;
    }
    double a = (lo[i] - p0[i]) / d;
    double b = (hi[i] - p0[i]) / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    if (t0 >= t1) return {};
  }
  return {{t0, t1}};
}

ParamIntervals clip_segment_capsule(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                                    const Eigen::VectorXd& q0, const Eigen::VectorXd& q1,
                                    double eps) {
  const Eigen::VectorXd w = q1 - q0;
  const double ww = w.squaredNorm();
  if (ww == 0.0) return clip_segment_ball(p0, p1, q0, eps);

  const Eigen::VectorXd v = p1 - p0;
  const Eigen::VectorXd m = p0 - q0;
  // Projection parameter of P(t) onto [q0,q1] is s(t) = s0 + s1 t, linear in t.
  const double s0 = w.dot(m) / ww;
  const double s1 = w.dot(v) / ww;

  auto s_range = [&](double s_lo, double s_hi) -> std::pair<double, double> {
    if (s1 == 0.0) {
      return (s0 >= s_lo && s0 <= s_hi) ? std::make_pair(-kInf, kInf) : std::make_pair(1.0, 0.0);
    }
    double a = (s_lo - s0) / s1;
    double b = (s_hi - s0) / s1;
    if (a > b) std::swap(a, b);
    return {a, b};
  };

  ParamIntervals pieces;
  {  // projection before q0: distance to the q0 cap
    auto [lo, hi] = s_range(-kInf, 0.0);
    if (lo < hi) {
      quadratic_sublevel(v.squaredNorm(), 2.0 * v.dot(m), m.squaredNorm() - eps * eps,
                         std::max(lo, 0.0), std::min(hi, 1.0), pieces);
    }
  }
  {  // projection inside [q0,q1]: perpendicular distance to the axis
    auto [lo, hi] = s_range(0.0, 1.0);
    if (lo < hi) {
      const double A = v.squaredNorm() - ww * s1 * s1;
      const double B = 2.0 * (v.dot(m) - ww * s0 * s1);
      const double C = m.squaredNorm() - ww * s0 * s0 - eps * eps;
      quadratic_sublevel(std::max(A, 0.0), B, C, std::max(lo, 0.0), std::min(hi, 1.0), pieces);
    }
  }
  {  // projection beyond q1: distance to the q1 cap
    auto [lo, hi] = s_range(1.0, kInf);
    if (lo < hi) {
      const Eigen::VectorXd m1 = p0 - q1;
      quadratic_sublevel(v.squaredNorm(), 2.0 * v.dot(m1), m1.squaredNorm() - eps * eps,
                         std::max(lo, 0.0), std::min(hi, 1.0), pieces);
    }
  }
  return intervals_union(std::move(pieces));
}

double point_segment_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& q0,
                              const Eigen::VectorXd& q1) {
  const Eigen::VectorXd w = q1 - q0;
  const double ww = w.squaredNorm();
  if (ww == 0.0) return (x - q0).norm();
  const double s = std::clamp(w.dot(x - q0) / ww, 0.0, 1.0);
  return (x - (q0 + s * w)).norm();
}

OpenSet OpenSet::ball_union(std::vector<Ball> balls) {
  if (balls.empty()) throw std::invalid_argument("OpenSet: empty ball union");
  for (const Ball& b : balls) {
    if (!(b.radius > 0.0) || !std::isfinite(b.radius)) {
      throw std::invalid_argument("OpenSet: ball radius must be positive and finite");
    }
  }
  OpenSet u;
  u.space_id_ = balls.front().center.space_id;
  u.balls_ = std::move(balls);
  return u;
}

OpenSet OpenSet::box_union(std::vector<Box> boxes, int space_id) {
  if (boxes.empty()) throw std::invalid_argument("OpenSet: empty box union");
  for (const Box& b : boxes) {
    if (b.lo.size() != b.hi.size() || ((b.hi - b.lo).array() <= 0.0).any()) {
      throw std::invalid_argument("OpenSet: box must have positive extent");
    }
  }
  OpenSet u;
  u.space_id_ = space_id;
  u.boxes_ = std::move(boxes);
  return u;
}

OpenSet OpenSet::point_neighborhood(const std::vector<Point>& points, double eps) {
  if (points.empty()) throw std::invalid_argument("OpenSet: empty point neighborhood");
  if (!(eps > 0.0)) throw std::invalid_argument("OpenSet: eps must be > 0");
  std::vector<Ball> balls;
  balls.reserve(points.size());
  for (const Point& p : points) balls.push_back({p, eps});
  return ball_union(std::move(balls));
}

OpenSet OpenSet::polyline_neighborhood(std::vector<Point> vertices, double eps) {
  if (vertices.size() < 2) throw std::invalid_argument("OpenSet: polyline needs >= 2 vertices");
  if (!(eps > 0.0)) throw std::invalid_argument("OpenSet: eps must be > 0");
  OpenSet u;
  u.space_id_ = vertices.front().space_id;
  u.capsules_.push_back({std::move(vertices), eps});
  return u;
}

OpenSet OpenSet::merged(const OpenSet& a, const OpenSet& b) {
  if (a.space_id_ != b.space_id_) throw std::invalid_argument("OpenSet: space mismatch in merge");
  OpenSet u = a;
  u.balls_.insert(u.balls_.end(), b.balls_.begin(), b.balls_.end());
  u.boxes_.insert(u.boxes_.end(), b.boxes_.begin(), b.boxes_.end());
  u.capsules_.insert(u.capsules_.end(), b.capsules_.begin(), b.capsules_.end());
  return u;
}

bool OpenSet::contains(const MetricSpace& space, const Point& p) const {
  return clearance(space, p) > 0.0;
}

double OpenSet::clearance(const MetricSpace& space, const Point& p) const {
  double best = -kInf;
  for (const Ball& b : balls_) {
    best = std::max(best, b.radius - distance(space, p, b.center));
  }
  for (const Box& b : boxes_) {
    double c = kInf;
    for (Eigen::Index i = 0; i < b.lo.size(); ++i) {
      c = std::min(c, std::min(p.coords[i] - b.lo[i], b.hi[i] - p.coords[i]));
    }
    best = std::max(best, c);
  }
  for (const Capsule& c : capsules_) {
    best = std::max(best, c.eps - capsule_distance(c, p.coords));
  }
  return best;
}

bool OpenSet::contains_ball(const MetricSpace& space, const Ball& b, double margin) const {
  const double c = clearance(space, b.center);
  return c > b.radius && c >= b.radius + margin;
}

ParamIntervals OpenSet::clip_segment(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1) const {
  ParamIntervals pieces;
  for (const Ball& b : balls_) {
    for (auto iv : clip_segment_ball(p0, p1, b.center.coords, b.radius)) pieces.push_back(iv);
  }
  for (const Box& b : boxes_) {
    for (auto iv : clip_segment_box(p0, p1, b.lo, b.hi)) pieces.push_back(iv);
  }
  for (const Capsule& c : capsules_) {
    for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      for (auto iv : clip_segment_capsule(p0, p1, c.vertices[i].coords, c.vertices[i + 1].coords,
                                          c.eps)) {
        pieces.push_back(iv);
      }
    }
  }
  return intervals_union(std::move(pieces));
}

void OpenSet::bounding_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
  auto init = [&](const Eigen::VectorXd& v) {
    if (lo.size() == 0) {
      lo = v;
      hi = v;
    } else {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  };
  lo.resize(0);
  hi.resize(0);
  for (const Ball& b : balls_) {
    init((b.center.coords.array() - b.radius).matrix());
    init((b.center.coords.array() + b.radius).matrix());
  }
  for (const Box& b : boxes_) {
    init(b.lo);
    init(b.hi);
  }
  for (const Capsule& c : capsules_) {
    for (const Point& p : c.vertices) {
      init((p.coords.array() - c.eps).matrix());
      init((p.coords.array() + c.eps).matrix());
    }
  }
  if (lo.size() == 0) throw std::logic_error("OpenSet: bounding box of empty set");
}

OpenSet OpenSet::inflated(double delta) const {
  OpenSet u = *this;
  for (Ball& b : u.balls_) b.radius += delta;
  for (Box& b : u.boxes_) {
    b.lo.array() -= delta;
    b.hi.array() += delta;
  }
  for (Capsule& c : u.capsules_) c.eps += delta;
  return u;
}

}  // namespace ballrecon
