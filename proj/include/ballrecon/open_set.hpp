#pragma once

#include "ballrecon/metric_space.hpp"

#include <utility>
#include <vector>

namespace ballrecon {

// Sorted, disjoint parameter intervals within [0,1]; building block for exact
// segment clipping against open-set descriptors.
using ParamIntervals = std::vector<std::pair<double, double>>;

double intervals_total_length(const ParamIntervals& iv);
ParamIntervals intervals_union(ParamIntervals iv);

// Parameters t in [0,1] with |p0 + t (p1 - p0) - center| <= radius.
ParamIntervals clip_segment_ball(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                                 const Eigen::VectorXd& center, double radius);
// Axis-aligned closed box [lo, hi].
ParamIntervals clip_segment_box(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                                const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
// Capsule of radius eps around the segment [q0, q1].
ParamIntervals clip_segment_capsule(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                                    const Eigen::VectorXd& q0, const Eigen::VectorXd& q1,
                                    double eps);

double point_segment_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& q0,
                              const Eigen::VectorXd& q1);

// Open set given as a finite union of open balls, open axis-aligned boxes and
// open eps-neighborhoods of polylines. Boxes and polyline neighborhoods are
// Euclidean-only; balls work in any space model.
class OpenSet {
 public:
  struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
  };

  struct Capsule {
    std::vector<Point> vertices;  // >= 2
    double eps = 0.0;
  };

  static OpenSet ball_union(std::vector<Ball> balls);
  static OpenSet box_union(std::vector<Box> boxes, int space_id = 0);
  static OpenSet point_neighborhood(const std::vector<Point>& points, double eps);
  static OpenSet polyline_neighborhood(std::vector<Point> vertices, double eps);
  static OpenSet merged(const OpenSet& a, const OpenSet& b);

  const std::vector<Ball>& balls() const { return balls_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  const std::vector<Capsule>& capsules() const { return capsules_; }
  int space_id() const { return space_id_; }
  bool empty() const { return balls_.empty() && boxes_.empty() && capsules_.empty(); }

  // Open membership (strict inequalities on all component boundaries).
  bool contains(const MetricSpace& space, const Point& p) const;

  // Lower bound on the distance from p to the complement, evaluated per
  // component; a closed ball B_r(p) with r < clearance lies inside the set.
  double clearance(const MetricSpace& space, const Point& p) const;

  bool contains_ball(const MetricSpace& space, const Ball& b, double margin) const;

  // Parameter intervals of [p0,p1] inside the set (Euclidean only).
  ParamIntervals clip_segment(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1) const;

  // Axis-aligned bounding box of the descriptor (Euclidean only).
  void bounding_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const;

  // The same set grown by delta.
  OpenSet inflated(double delta) const;

 private:
  std::vector<Ball> balls_;
  std::vector<Box> boxes_;
  std::vector<Capsule> capsules_;
  int space_id_ = 0;
};

}  // namespace ballrecon
