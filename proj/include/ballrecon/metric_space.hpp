#pragma once

#include <Eigen/Dense>

#include <vector>

namespace ballrecon {

enum class SpaceKind { Euclidean, StarGraph, FiniteMetric };

// A point in one of the supported space models. Only the fields of the owning
// space kind are meaningful: coords for Euclidean, (ray, arc) for star graphs,
// node for finite metric matrices.
struct Point {
  int space_id = 0;
  Eigen::VectorXd coords;
  int ray = -1;
  double arc = 0.0;
  int node = -1;

  static Point euclidean(int space_id, Eigen::VectorXd x);
  static Point on_ray(int space_id, int ray, double arc);
  static Point at_node(int space_id, int node);
};

bool same_point(const Point& p, const Point& q, double tol = 0.0);

// Deterministic total order used for tie-breaking in solvers.
bool point_less(const Point& p, const Point& q);

class MetricSpace {
 public:
  MetricSpace() = default;

  static MetricSpace euclidean(int dim, int id = 0);
  // Finite truncation of the geodesic star graph: ray_count half-lines glued
  // at a hub, arc lengths capped at max_arc.
  static MetricSpace star_graph(int ray_count, double max_arc, int id = 0);
  // Symmetric, zero-diagonal matrix satisfying the triangle inequality
  // within 1e-12.
  static MetricSpace finite(Eigen::MatrixXd distances, int id = 0);

  SpaceKind kind() const { return kind_; }
  int id() const { return id_; }
  int dim() const { return dim_; }
  int ray_count() const { return ray_count_; }
  double max_arc() const { return max_arc_; }
  const Eigen::MatrixXd& distance_matrix() const { return dist_; }

  // Throws std::invalid_argument on space mismatch or malformed payload.
  void validate_point(const Point& p) const;

 private:
  SpaceKind kind_ = SpaceKind::Euclidean;
  int id_ = 0;
  int dim_ = 0;
  int ray_count_ = 0;
  double max_arc_ = 0.0;
  Eigen::MatrixXd dist_;
};

// Closed metric ball {y : d(y, center) <= radius}, radius > 0.
struct Ball {
  Point center;
  double radius = 0.0;
};

double distance(const MetricSpace& space, const Point& p, const Point& q);

// The point at distance t from a along the geodesic a -> b (star graphs route
// through the hub). Requires 0 <= t <= d(a,b).
Point walk_toward(const MetricSpace& space, const Point& a, const Point& b, double t);

// All x with d(a,x) = d(a,c) and d(a,x) + d(x,b) = d(a,b), both equalities
// within 1e-9. Euclidean and star-graph models have a unique witness; finite
// metric models enumerate nodes. Requires d(a,b) >= d(a,c) > 0.
std::vector<Point> directional_witness_set(const MetricSpace& space, const Point& a,
                                           const Point& c, const Point& b);

struct DirectionalProbeParams {
  double xi = 1.0;         // candidates must lie in the open ball U_xi(a)
  double eta = 1.0 / 3.0;  // in (0, 1/3]
  Point base_point;
  std::vector<Point> candidates;
  // Exact clique search up to this many candidates; multi-start greedy with a
  // coloring upper bound beyond.
  int exact_threshold = 24;
};

struct DirectionalProbeResult {
  int max_card = 0;
  std::vector<Point> witness_subset;  // realizes max_card
  int upper_bound = 0;                // == max_card iff exact
  bool exact = false;
};

// Largest candidate subset whose pairs all satisfy the separation condition
// d(x,c)/d(a,c) >= eta for every witness x of the ordered pair.
DirectionalProbeResult directional_limited_probe(const MetricSpace& space,
                                                 const DirectionalProbeParams& params);

}  // namespace ballrecon
