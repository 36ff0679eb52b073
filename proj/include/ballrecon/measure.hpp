#pragma once

#include "ballrecon/metric_space.hpp"
#include "ballrecon/open_set.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ballrecon {

// Dirac mass with a signed weight.
struct Atom {
  Point position;
  double weight = 0.0;
};

// 1-dimensional Hausdorff piece supported on a Euclidean polyline, with a
// constant signed density per unit length.
struct PolylineChain {
  std::vector<Point> vertices;
  double density = 1.0;

  double length() const;
};

// Finite signed Borel measure: atoms plus polyline chains, all supported in
// one space, evaluable exactly on closed balls.
struct SignedMeasure {
  MetricSpace space;
  std::vector<Atom> atoms;
  std::vector<PolylineChain> chains;

  bool nonnegative() const;
  double total_variation() const;
};

SignedMeasure make_signed_measure(MetricSpace space, std::vector<Atom> atoms,
                                  std::vector<PolylineChain> chains = {});

// Exact mass of the closed ball: atom weights within radius (boundary atoms
// count as inside, 1e-12 slack) plus chord lengths times densities.
double ball_mass(const SignedMeasure& mu, const Ball& b);

// Hahn decomposition into mutually singular nonnegative parts.
std::pair<SignedMeasure, SignedMeasure> hahn_split(const SignedMeasure& mu);

double total_mass(const SignedMeasure& mu);
double total_mass(const SignedMeasure& mu, const OpenSet& region);

// Points spread along every chain at the given arc pitch (vertices included);
// the desk-scale surrogate for the continuous support.
std::vector<Point> chain_sample_points(const SignedMeasure& mu, double pitch);
std::vector<Point> support_points(const SignedMeasure& mu, double chain_pitch);

double min_pairwise_atom_distance(const SignedMeasure& mu);

struct ReferenceMeasure {
  enum class Kind { Lebesgue, SelfMeasure };
  Kind kind = Kind::Lebesgue;
  int lebesgue_dim = 1;
  std::optional<SignedMeasure> self;  // nonnegative when present
  double alpha = 1.0;                 // in (0, 1]
  double gamma = 1.0;
};

struct GammaCertificate {
  double gamma = 1.0;
  bool exact = false;  // Lebesgue volume ratio vs sampled certificate
  std::vector<double> radii;
  size_t n_centers = 0;
  // Sampled certificates are restricted to the support of the measure.
  bool restricted_to_support = false;
};

// Lebesgue: exact volume ratio alpha^-n. SelfMeasure: empirical sup of
// mu(B_r)/mu(B_ar) over support points and a small-radius grid.
GammaCertificate gamma_for_reference(const ReferenceMeasure& ref, double alpha);

ReferenceMeasure make_lebesgue_reference(int dim, double alpha);
ReferenceMeasure make_self_reference(SignedMeasure positive, double alpha);

}  // namespace ballrecon
