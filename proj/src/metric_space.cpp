#include "ballrecon/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ballrecon {

namespace {

constexpr double kWitnessTol = 1e-9;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool finite_coords(const Eigen::VectorXd& v) {
  return v.allFinite();
}

}  // namespace

Point Point::euclidean(int space_id, Eigen::VectorXd x) {
  Point p;
  p.space_id = space_id;
  p.coords = std::move(x);
  require(finite_coords(p.coords), "Point: non-finite coordinates");
  return p;
}

Point Point::on_ray(int space_id, int ray, double arc) {
  require(ray >= 0, "Point: ray index must be >= 0");
  require(std::isfinite(arc) && arc >= 0.0, "Point: arc length must be >= 0");
  Point p;
  p.space_id = space_id;
  p.ray = ray;
  p.arc = arc;
  return p;
}

Point Point::at_node(int space_id, int node) {
  require(node >= 0, "Point: node index must be >= 0");
  Point p;
  p.space_id = space_id;
  p.node = node;
  return p;
}

bool same_point(const Point& p, const Point& q, double tol) {
  if (p.space_id != q.space_id) return false;
  if (p.coords.size() != q.coords.size()) return false;
  if (p.coords.size() > 0) {
    return (p.coords - q.coords).lpNorm<Eigen::Infinity>() <= tol;
  }
  if (p.node >= 0 || q.node >= 0) return p.node == q.node;
  if (p.ray >= 0 || q.ray >= 0) {
    // Hub is the same point on every ray.
    if (p.arc <= tol && q.arc <= tol) return true;
    return p.ray == q.ray && std::abs(p.arc - q.arc) <= tol;
  }
  return true;
}

bool point_less(const Point& p, const Point& q) {
  if (p.space_id != q.space_id) return p.space_id < q.space_id;
  if (p.coords.size() != q.coords.size()) return p.coords.size() < q.coords.size();
  for (Eigen::Index i = 0; i < p.coords.size(); ++i) {
    if (p.coords[i] != q.coords[i]) return p.coords[i] < q.coords[i];
  }
  if (p.ray != q.ray) return p.ray < q.ray;
  if (p.arc != q.arc) return p.arc < q.arc;
  return p.node < q.node;
}

MetricSpace MetricSpace::euclidean(int dim, int id) {
  require(dim >= 1, "MetricSpace: Euclidean dimension must be >= 1");
  MetricSpace s;
  s.kind_ = SpaceKind::Euclidean;
  s.id_ = id;
  s.dim_ = dim;
  return s;
}

MetricSpace MetricSpace::star_graph(int ray_count, double max_arc, int id) {
  require(ray_count >= 1, "MetricSpace: star graph needs >= 1 ray");
  require(std::isfinite(max_arc) && max_arc > 0.0, "MetricSpace: max_arc must be > 0");
  MetricSpace s;
  s.kind_ = SpaceKind::StarGraph;
  s.id_ = id;
  s.ray_count_ = ray_count;
  s.max_arc_ = max_arc;
  return s;
}

MetricSpace MetricSpace::finite(Eigen::MatrixXd distances, int id) {
  const Eigen::Index n = distances.rows();
  require(n >= 1 && distances.cols() == n, "MetricSpace: distance matrix must be square");
  constexpr double tol = 1e-12;
  for (Eigen::Index i = 0; i < n; ++i) {
    require(std::abs(distances(i, i)) <= tol, "MetricSpace: nonzero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      require(std::isfinite(distances(i, j)), "MetricSpace: non-finite distance entry");
      require(distances(i, j) >= 0.0, "MetricSpace: negative distance entry");
      require(std::abs(distances(i, j) - distances(j, i)) <= tol,
              "MetricSpace: distance matrix not symmetric");
      require(i == j || distances(i, j) > 0.0, "MetricSpace: zero off-diagonal distance");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        require(distances(i, j) <= distances(i, k) + distances(k, j) + tol,
                "MetricSpace: triangle inequality violated");
      }
    }
  }
  MetricSpace s;
  s.kind_ = SpaceKind::FiniteMetric;
  s.id_ = id;
  s.dist_ = std::move(distances);
  return s;
}

void MetricSpace::validate_point(const Point& p) const {
  require(p.space_id == id_, "Point: space identifier mismatch");
  switch (kind_) {
    case SpaceKind::Euclidean:
      require(p.coords.size() == dim_, "Point: coordinate dimension mismatch");
      require(finite_coords(p.coords), "Point: non-finite coordinates");
      break;
    case SpaceKind::StarGraph:
      require(p.ray >= 0 && p.ray < ray_count_, "Point: ray index out of range");
      require(p.arc >= 0.0 && p.arc <= max_arc_, "Point: arc length out of range");
      break;
    case SpaceKind::FiniteMetric:
      require(p.node >= 0 && p.node < dist_.rows(), "Point: node index out of range");
      break;
  }
}

double distance(const MetricSpace& space, const Point& p, const Point& q) {
  space.validate_point(p);
  space.validate_point(q);
  switch (space.kind()) {
    case SpaceKind::Euclidean:
      return (p.coords - q.coords).norm();
    case SpaceKind::StarGraph:
      if (p.ray == q.ray) return std::abs(p.arc - q.arc);
      if (p.arc == 0.0 || q.arc == 0.0) return p.arc + q.arc;  // hub on either side
      return p.arc + q.arc;  // geodesic through the hub
    case SpaceKind::FiniteMetric:
      return space.distance_matrix()(p.node, q.node);
  }
  throw std::logic_error("distance: unknown space kind");
}

Point walk_toward(const MetricSpace& space, const Point& a, const Point& b, double t) {
  const double dab = distance(space, a, b);
  require(t >= 0.0 && t <= dab + kWitnessTol, "walk_toward: t outside [0, d(a,b)]");
  t = std::min(t, dab);
  switch (space.kind()) {
    case SpaceKind::Euclidean: {
      if (dab == 0.0) return a;
      return Point::euclidean(a.space_id, a.coords + (t / dab) * (b.coords - a.coords));
    }
    case SpaceKind::StarGraph: {
      if (a.ray == b.ray || a.arc == 0.0) {
        const double dir = (b.arc >= a.arc) ? 1.0 : -1.0;
        const int ray = (a.arc == 0.0) ? b.ray : a.ray;
        const double arc = (a.arc == 0.0) ? t : a.arc + dir * t;
        return Point::on_ray(a.space_id, ray, arc);
      }
      // Distinct rays: down a's ray to the hub, then up b's ray.
      if (t <= a.arc) return Point::on_ray(a.space_id, a.ray, a.arc - t);
      return Point::on_ray(a.space_id, b.ray, t - a.arc);
    }
    case SpaceKind::FiniteMetric:
      throw std::invalid_argument("walk_toward: finite metric spaces have no geodesic interpolation");
  }
  throw std::logic_error("walk_toward: unknown space kind");
}

std::vector<Point> directional_witness_set(const MetricSpace& space, const Point& a,
                                           const Point& c, const Point& b) {
  const double dac = distance(space, a, c);
  const double dab = distance(space, a, b);
  require(dac > 0.0, "directional_witness_set: d(a,c) must be > 0");
  require(dab >= dac - kWitnessTol, "directional_witness_set: requires d(a,b) >= d(a,c)");

  std::vector<Point> out;
  switch (space.kind()) {
    case SpaceKind::Euclidean: {
      // Strictly convex norm: the two equalities pin x on the segment [a,b].
      out.push_back(Point::euclidean(a.space_id, a.coords + (dac / dab) * (b.coords - a.coords)));
      break;
    }
    case SpaceKind::StarGraph: {
      out.push_back(walk_toward(space, a, b, std::min(dac, dab)));
      break;
    }
    case SpaceKind::FiniteMetric: {
      const Eigen::Index n = space.distance_matrix().rows();
      for (Eigen::Index i = 0; i < n; ++i) {
        Point x = Point::at_node(a.space_id, static_cast<int>(i));
        const double dax = distance(space, a, x);
        const double dxb = distance(space, x, b);
        if (std::abs(dax - dac) <= kWitnessTol && std::abs(dax + dxb - dab) <= kWitnessTol) {
          out.push_back(x);
        }
      }
      break;
    }
  }
  return out;
}

namespace {

// Ordered pair (b,c) with d(a,b) >= d(a,c): every witness x must satisfy
// d(x,c)/d(a,c) >= eta.
bool ordered_pair_admissible(const MetricSpace& space, const Point& a, const Point& b,
                             const Point& c, double eta) {
  const double dac = distance(space, a, c);
  for (const Point& x : directional_witness_set(space, a, c, b)) {
    if (distance(space, x, c) / dac < eta - kWitnessTol) return false;
  }
  return true;
}

// Exact maximum clique by branch and bound with a greedy coloring bound.
class MaxCliqueSolver {
 public:
  explicit MaxCliqueSolver(const std::vector<std::vector<bool>>& adj) : adj_(adj), n_(adj.size()) {}

  std::vector<int> solve() {
    std::vector<int> cand(n_);
    for (size_t i = 0; i < n_; ++i) cand[i] = static_cast<int>(i);
    std::vector<int> current;
    expand(cand, current);
    return best_;
  }

 private:
  void expand(std::vector<int> cand, std::vector<int>& current) {
    while (!cand.empty()) {
      if (current.size() + cand.size() <= best_.size()) return;
      const int v = cand.back();
      cand.pop_back();
      current.push_back(v);
      std::vector<int> next;
      for (int u : cand) {
        if (adj_[v][u]) next.push_back(u);
      }
      if (current.size() + next.size() > best_.size()) {
        if (next.empty()) {
          if (current.size() > best_.size()) best_ = current;
        } else {
          expand(next, current);
        }
      }
      current.pop_back();
      if (current.size() + cand.size() <= best_.size()) return;
    }
    if (current.size() > best_.size()) best_ = current;
  }

  const std::vector<std::vector<bool>>& adj_;
  size_t n_;
  std::vector<int> best_;
};

// Greedy clique grown in index order from a fixed start; exact on circulant
// instances like equally spaced circle candidates.
std::vector<int> greedy_clique_from(const std::vector<std::vector<bool>>& adj, int start) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> chosen;
  for (int k = 0; k < n; ++k) {
    const int v = (start + k) % n;
    bool ok = true;
    for (int u : chosen) {
      if (!adj[v][u]) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(v);
  }
  return chosen;
}

// Clique upper bound: size of a greedy proper coloring of the graph.
int coloring_upper_bound(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> color(n, -1);
  int n_colors = 0;
  for (int v = 0; v < n; ++v) {
    std::vector<bool> used(n_colors + 1, false);
    for (int u = 0; u < n; ++u) {
      if (u != v && adj[v][u] && color[u] >= 0) used[color[u]] = true;
    }
    int c = 0;
    while (c < n_colors && used[c]) ++c;
    color[v] = c;
    n_colors = std::max(n_colors, c + 1);
  }
  return n_colors;
}

}  // namespace

DirectionalProbeResult directional_limited_probe(const MetricSpace& space,
                                                 const DirectionalProbeParams& params) {
  require(!params.candidates.empty(), "directional_limited_probe: empty candidate list");
  require(params.eta > 0.0 && params.eta <= 1.0 / 3.0,
          "directional_limited_probe: eta must be in (0, 1/3]");
  require(params.xi > 0.0, "directional_limited_probe: xi must be > 0");
  const Point& a = params.base_point;
  for (const Point& p : params.candidates) {
    const double d = distance(space, a, p);
    require(d > 0.0, "directional_limited_probe: candidate coincides with base point");
    require(d < params.xi, "directional_limited_probe: candidate outside U_xi(a)");
  }

  const int n = static_cast<int>(params.candidates.size());
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Point& b = params.candidates[i];
      const Point& c = params.candidates[j];
      const double db = distance(space, a, b);
      const double dc = distance(space, a, c);
      bool ok = true;
      if (db >= dc) ok = ok && ordered_pair_admissible(space, a, b, c, params.eta);
      if (dc >= db) ok = ok && ordered_pair_admissible(space, a, c, b, params.eta);
      adj[i][j] = adj[j][i] = ok;
    }
  }

  DirectionalProbeResult result;
  std::vector<int> best;
  if (n <= params.exact_threshold) {
    best = MaxCliqueSolver(adj).solve();
    result.exact = true;
    result.upper_bound = static_cast<int>(best.size());
  } else {
    for (int s = 0; s < n; ++s) {
      std::vector<int> trial = greedy_clique_from(adj, s);
      if (trial.size() > best.size()) best = trial;
    }
    result.exact = false;
    result.upper_bound = std::max(coloring_upper_bound(adj), static_cast<int>(best.size()));
  }
  std::sort(best.begin(), best.end());
  result.max_card = static_cast<int>(best.size());
  for (int idx : best) result.witness_subset.push_back(params.candidates[idx]);
  if (result.exact) result.upper_bound = result.max_card;
  return result;
}

}  // namespace ballrecon
