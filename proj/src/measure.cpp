#include "ballrecon/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ballrecon {

namespace {

constexpr double kBoundarySlack = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double PolylineChain::length() const {
  double total = 0.0;
  for (size_t i = 0; i + 1 < vertices.size(); ++i) {
    total += (vertices[i + 1].coords - vertices[i].coords).norm();
  }
  return total;
}

bool SignedMeasure::nonnegative() const {
  for (const Atom& a : atoms) {
    if (a.weight < 0.0) return false;
  }
  for (const PolylineChain& c : chains) {
    if (c.density < 0.0) return false;
  }
  return true;
}

double SignedMeasure::total_variation() const {
  double tv = 0.0;
  for (const Atom& a : atoms) tv += std::abs(a.weight);
  for (const PolylineChain& c : chains) tv += c.length() * std::abs(c.density);
  return tv;
}

SignedMeasure make_signed_measure(MetricSpace space, std::vector<Atom> atoms,
                                  std::vector<PolylineChain> chains) {
  for (const Atom& a : atoms) {
    space.validate_point(a.position);
    require(std::isfinite(a.weight) && a.weight != 0.0, "Atom: weight must be finite and nonzero");
  }
  for (const PolylineChain& c : chains) {
    require(space.kind() == SpaceKind::Euclidean, "PolylineChain: Euclidean spaces only");
    require(c.vertices.size() >= 2, "PolylineChain: needs >= 2 vertices");
    require(std::isfinite(c.density) && c.density != 0.0,
            "PolylineChain: density must be finite and nonzero");
    for (const Point& v : c.vertices) space.validate_point(v);
    for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      require((c.vertices[i + 1].coords - c.vertices[i].coords).norm() > 0.0,
              "PolylineChain: consecutive vertices must be distinct");
    }
  }
  SignedMeasure mu;
  mu.space = std::move(space);
  mu.atoms = std::move(atoms);
  mu.chains = std::move(chains);
  return mu;
}

double ball_mass(const SignedMeasure& mu, const Ball& b) {
  require(b.radius > 0.0 && std::isfinite(b.radius), "ball_mass: radius must be positive");
  mu.space.validate_point(b.center);
  double mass = 0.0;
  for (const Atom& a : mu.atoms) {
    if (distance(mu.space, a.position, b.center) <= b.radius + kBoundarySlack) {
      mass += a.weight;
    }
  }
  for (const PolylineChain& c : mu.chains) {
    for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      const Eigen::VectorXd& p0 = c.vertices[i].coords;
      const Eigen::VectorXd& p1 = c.vertices[i + 1].coords;
      const ParamIntervals iv = clip_segment_ball(p0, p1, b.center.coords, b.radius);
      mass += intervals_total_length(iv) * (p1 - p0).norm() * c.density;
    }
  }
  return mass;
}

std::pair<SignedMeasure, SignedMeasure> hahn_split(const SignedMeasure& mu) {
  SignedMeasure plus;
  SignedMeasure minus;
  plus.space = mu.space;
  minus.space = mu.space;
  for (const Atom& a : mu.atoms) {
    if (a.weight > 0.0) {
      plus.atoms.push_back(a);
    } else {
      minus.atoms.push_back({a.position, -a.weight});
    }
  }
  for (const PolylineChain& c : mu.chains) {
    if (c.density == 0.0) {
      throw std::invalid_argument("hahn_split: chain with zero density");
    }
    if (c.density > 0.0) {
      plus.chains.push_back(c);
    } else {
      minus.chains.push_back({c.vertices, -c.density});
    }
  }
  return {std::move(plus), std::move(minus)};
}

double total_mass(const SignedMeasure& mu) {
  double mass = 0.0;
  for (const Atom& a : mu.atoms) mass += a.weight;
  for (const PolylineChain& c : mu.chains) mass += c.length() * c.density;
  return mass;
}

double total_mass(const SignedMeasure& mu, const OpenSet& region) {
  double mass = 0.0;
  for (const Atom& a : mu.atoms) {
    if (region.contains(mu.space, a.position)) mass += a.weight;
  }
  for (const PolylineChain& c : mu.chains) {
    for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      const Eigen::VectorXd& p0 = c.vertices[i].coords;
      const Eigen::VectorXd& p1 = c.vertices[i + 1].coords;
      const ParamIntervals iv = region.clip_segment(p0, p1);
      mass += intervals_total_length(iv) * (p1 - p0).norm() * c.density;
    }
  }
  return mass;
}

std::vector<Point> chain_sample_points(const SignedMeasure& mu, double pitch) {
  require(pitch > 0.0, "chain_sample_points: pitch must be > 0");
  std::vector<Point> out;
  for (const PolylineChain& c : mu.chains) {
    for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      const Eigen::VectorXd& p0 = c.vertices[i].coords;
      const Eigen::VectorXd& p1 = c.vertices[i + 1].coords;
      const double len = (p1 - p0).norm();
      const int n = std::max(1, static_cast<int>(std::ceil(len / pitch)));
      for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / n;
        out.push_back(Point::euclidean(mu.space.id(), p0 + t * (p1 - p0)));
      }
    }
  }
  return out;
}

std::vector<Point> support_points(const SignedMeasure& mu, double chain_pitch) {
  std::vector<Point> out;
  for (const Atom& a : mu.atoms) out.push_back(a.position);
  for (Point& p : chain_sample_points(mu, chain_pitch)) out.push_back(std::move(p));
  return out;
}

double min_pairwise_atom_distance(const SignedMeasure& mu) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < mu.atoms.size(); ++i) {
    for (size_t j = i + 1; j < mu.atoms.size(); ++j) {
      best = std::min(best, distance(mu.space, mu.atoms[i].position, mu.atoms[j].position));
    }
  }
  return best;
}

GammaCertificate gamma_for_reference(const ReferenceMeasure& ref, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "gamma_for_reference: alpha must be in (0,1]");
  GammaCertificate cert;
  if (ref.kind == ReferenceMeasure::Kind::Lebesgue) {
    cert.gamma = std::pow(alpha, -static_cast<double>(ref.lebesgue_dim));
    cert.exact = true;
    return cert;
  }
  require(ref.self.has_value(), "gamma_for_reference: missing self measure");
  const SignedMeasure& nu = *ref.self;
  require(nu.nonnegative(), "gamma_for_reference: self measure must be nonnegative");
  cert.radii = {1e-2, 1e-3, 1e-4, 1e-5};
  cert.restricted_to_support = true;
  std::vector<Point> centers = support_points(nu, std::max(nu.total_variation(), 1.0) / 50.0);
  cert.n_centers = centers.size();
  double sup_ratio = 1.0;
  for (const Point& x : centers) {
    for (double r : cert.radii) {
      const double num = ball_mass(nu, {x, r});
      const double den = ball_mass(nu, {x, alpha * r});
      if (den > 0.0) sup_ratio = std::max(sup_ratio, num / den);
    }
  }
  cert.gamma = sup_ratio;
  return cert;
}

ReferenceMeasure make_lebesgue_reference(int dim, double alpha) {
  require(dim >= 1, "make_lebesgue_reference: dim must be >= 1");
  ReferenceMeasure ref;
  ref.kind = ReferenceMeasure::Kind::Lebesgue;
  ref.lebesgue_dim = dim;
  ref.alpha = alpha;
  ref.gamma = gamma_for_reference(ref, alpha).gamma;
  return ref;
}

ReferenceMeasure make_self_reference(SignedMeasure positive, double alpha) {
  require(positive.nonnegative(), "make_self_reference: measure must be nonnegative");
  ReferenceMeasure ref;
  ref.kind = ReferenceMeasure::Kind::SelfMeasure;
  ref.self = std::move(positive);
  ref.alpha = alpha;
  ref.gamma = gamma_for_reference(ref, alpha).gamma;
  return ref;
}

}  // namespace ballrecon
