#include <doctest.h>

#include "ballrecon/measure.hpp"

#include <cmath>
#include <random>

using namespace ballrecon;

namespace {

const MetricSpace kPlane = MetricSpace::euclidean(2);

Point p2(double x, double y) { return Point::euclidean(0, Eigen::Vector2d(x, y)); }

PolylineChain segment(double x0, double y0, double x1, double y1, double density = 1.0) {
  PolylineChain c;
  c.vertices = {p2(x0, y0), p2(x1, y1)};
  c.density = density;
  return c;
}

// Monte-Carlo mass oracle: jittered stratified samples along each segment.
double mc_ball_mass(const SignedMeasure& mu, const Ball& b, std::mt19937_64& rng, int n = 400000) {
  double mass = 0.0;
  for (const Atom& a : mu.atoms) {
    if (distance(mu.space, a.position, b.center) <= b.radius) mass += a.weight;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const PolylineChain& c : mu.chains) {
    for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      const Eigen::VectorXd& q0 = c.vertices[i].coords;
      const Eigen::VectorXd& q1 = c.vertices[i + 1].coords;
      const double len = (q1 - q0).norm();
      int hits = 0;
      for (int k = 0; k < n; ++k) {
        const double t = (k + unif(rng)) / n;
        if ((q0 + t * (q1 - q0) - b.center.coords).norm() <= b.radius) ++hits;
      }
      mass += c.density * len * hits / n;
    }
  }
  return mass;
}

SignedMeasure random_mixed_measure(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> w(0.2, 2.0);
  std::vector<Atom> atoms;
  const int n_atoms = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n_atoms; ++i) {
    atoms.push_back({p2(unif(rng), unif(rng)), (rng() % 2 ? 1.0 : -1.0) * w(rng)});
  }
  std::vector<PolylineChain> chains;
  if (rng() % 2) {
    chains.push_back(segment(unif(rng), unif(rng), unif(rng), unif(rng),
                             (rng() % 2 ? 1.0 : -1.0) * w(rng)));
  }
  return make_signed_measure(kPlane, std::move(atoms), std::move(chains));
}

}  // namespace

TEST_CASE("ball_mass: atoms and chords") {
  const SignedMeasure dirac = make_signed_measure(kPlane, {{p2(0, 0), 1.0}});
  CHECK(ball_mass(dirac, {p2(0.1, 0), 0.5}) == 1.0);
  CHECK(ball_mass(dirac, {p2(1.0, 0), 0.5}) == 0.0);
  // Boundary atom counts as inside (closed ball).
  CHECK(ball_mass(dirac, {p2(0.5, 0), 0.5}) == 1.0);

  const SignedMeasure seg = make_signed_measure(kPlane, {}, {segment(0, 0, 1, 0)});
  CHECK(ball_mass(seg, {p2(0.5, 0), 0.2}) == doctest::Approx(0.4).epsilon(1e-13));

  CHECK_THROWS_AS(ball_mass(seg, {p2(0, 0), -1.0}), std::invalid_argument);
}

TEST_CASE("ball_mass: line plus dirac against the Monte-Carlo oracle") {
  // mu = H^1 on a line through x plus a Dirac at x; B_0.1(x) has mass 1.2.
  const SignedMeasure mu =
      make_signed_measure(kPlane, {{p2(0, 0), 1.0}}, {segment(-2, 0, 2, 0)});
  const Ball b{p2(0, 0), 0.1};
  CHECK(ball_mass(mu, b) == doctest::Approx(1.2).epsilon(1e-13));
  std::mt19937_64 rng(12345);
  CHECK(ball_mass(mu, b) == doctest::Approx(mc_ball_mass(mu, b, rng)).epsilon(1e-4));

  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  for (int i = 0; i < 5; ++i) {
    const Ball rb{p2(unif(rng), unif(rng)), 0.2 + 0.3 * std::abs(unif(rng))};
    CHECK(ball_mass(mu, rb) == doctest::Approx(mc_ball_mass(mu, rb, rng)).epsilon(2e-4));
  }
}

TEST_CASE("ball_mass is monotone in the radius for nonnegative measures") {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const SignedMeasure mu = make_signed_measure(
      kPlane, {{p2(0.3, 0.1), 1.0}, {p2(-0.4, 0.2), 0.5}}, {segment(-1, -1, 1, 1, 2.0)});
  for (int i = 0; i < 1000; ++i) {
    const Point c = p2(unif(rng), unif(rng));
    const double r1 = 0.05 + 0.5 * std::abs(unif(rng));
    const double r2 = r1 + 0.5 * std::abs(unif(rng));
    CHECK(ball_mass(mu, {c, r1}) <= ball_mass(mu, {c, r2}) + 1e-12);
  }
}

TEST_CASE("hahn_split: examples and the ball identity") {
  const SignedMeasure mu =
      make_signed_measure(kPlane, {{p2(0, 0), 2.0}, {p2(1, 0), -1.0}});
  const auto [plus, minus] = hahn_split(mu);
  REQUIRE(plus.atoms.size() == 1);
  REQUIRE(minus.atoms.size() == 1);
  CHECK(plus.atoms[0].weight == 2.0);
  CHECK(minus.atoms[0].weight == 1.0);

  const SignedMeasure positive = make_signed_measure(kPlane, {{p2(0, 0), 1.0}});
  const auto [p_plus, p_minus] = hahn_split(positive);
  CHECK(p_plus.atoms.size() == 1);
  CHECK(p_minus.atoms.empty());
  CHECK(p_minus.chains.empty());

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const SignedMeasure m = random_mixed_measure(rng);
    const auto [mp, mm] = hahn_split(m);
    CHECK(mp.nonnegative());
    CHECK(mm.nonnegative());
    for (int i = 0; i < 100; ++i) {
      const Ball b{p2(unif(rng), unif(rng)), 0.05 + std::abs(unif(rng))};
      CHECK(ball_mass(m, b) ==
            doctest::Approx(ball_mass(mp, b) - ball_mass(mm, b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pure atoms: small balls isolate single weights") {
  const SignedMeasure mu = make_signed_measure(
      kPlane, {{p2(0, 0), 1.5}, {p2(1, 0), -0.5}, {p2(0, 1), 2.0}});
  const double r = 0.49 * min_pairwise_atom_distance(mu);
  for (const Atom& a : mu.atoms) {
    CHECK(ball_mass(mu, {a.position, r}) == a.weight);
  }
}

TEST_CASE("gamma_for_reference") {
  CHECK(gamma_for_reference(make_lebesgue_reference(2, 0.5), 0.5).gamma == doctest::Approx(4.0));
  CHECK(gamma_for_reference(make_lebesgue_reference(3, 0.5), 0.5).gamma == doctest::Approx(8.0));
  CHECK_THROWS_AS(make_lebesgue_reference(2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_lebesgue_reference(2, 0.0), std::invalid_argument);

  // H^1 on a segment: interior and endpoint ratios both approach 1/alpha.
  const SignedMeasure seg = make_signed_measure(kPlane, {}, {segment(0, 0, 1, 0)});
  const ReferenceMeasure self = make_self_reference(seg, 0.5);
  CHECK(self.gamma == doctest::Approx(2.0).epsilon(1e-9));
  const GammaCertificate cert = gamma_for_reference(self, 0.5);
  CHECK(cert.restricted_to_support);
  CHECK(cert.n_centers > 0);

  // Volume scaling identity for the exact Lebesgue gamma, alpha = 1/2.
  for (int n = 1; n <= 4; ++n) {
    const double gamma = gamma_for_reference(make_lebesgue_reference(n, 0.5), 0.5).gamma;
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> rad(0.1, 2.0);
    for (int i = 0; i < 20; ++i) {
      const double r = rad(rng);
      double vol_r = 1.0;
      double vol_ar = 1.0;
      for (int k = 0; k < n; ++k) {
        vol_r *= r;
        vol_ar *= 0.5 * r;
      }
      CHECK(gamma * vol_ar == vol_r);  // exact in dyadic arithmetic
    }
  }
}

TEST_CASE("total_mass: whole space and clipped regions") {
  const SignedMeasure mu =
      make_signed_measure(kPlane, {{p2(0, 0), 2.0}, {p2(1, 0), -1.0}});
  CHECK(total_mass(mu) == 1.0);

  const OpenSet far = OpenSet::ball_union({{p2(10, 10), 0.5}});
  CHECK(total_mass(mu, far) == 0.0);

  // Box clipping a segment against the bisection oracle.
  const SignedMeasure seg = make_signed_measure(kPlane, {}, {segment(-1, -0.2, 1, 0.4, 1.5)});
  OpenSet::Box box;
  box.lo = Eigen::Vector2d(-0.5, -0.5);
  box.hi = Eigen::Vector2d(0.5, 0.5);
  const OpenSet region = OpenSet::box_union({box});
  const Eigen::VectorXd q0 = seg.chains[0].vertices[0].coords;
  const Eigen::VectorXd q1 = seg.chains[0].vertices[1].coords;
  const double len = (q1 - q0).norm();
  int inside_hits = 0;
  const int n = 2000000;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) / n;
    const Eigen::VectorXd x = q0 + t * (q1 - q0);
    if (x[0] >= box.lo[0] && x[0] <= box.hi[0] && x[1] >= box.lo[1] && x[1] <= box.hi[1]) {
      ++inside_hits;
    }
  }
  const double oracle = 1.5 * len * inside_hits / n;
  CHECK(total_mass(seg, region) == doctest::Approx(oracle).epsilon(1e-5));

  // Exact expected value: the box clips x to [-0.5, 0.5], i.e. t to [0.25, 0.75].
  CHECK(total_mass(seg, region) == doctest::Approx(0.5 * len * 1.5).epsilon(1e-12));
}

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(make_signed_measure(kPlane, {{p2(0, 0), 0.0}}), std::invalid_argument);
  PolylineChain degenerate;
  degenerate.vertices = {p2(0, 0), p2(0, 0)};
  degenerate.density = 1.0;
  CHECK_THROWS_AS(make_signed_measure(kPlane, {}, {degenerate}), std::invalid_argument);
  const MetricSpace star = MetricSpace::star_graph(3, 5.0);
  PolylineChain chain = segment(0, 0, 1, 0);
  CHECK_THROWS_AS(make_signed_measure(star, {}, {chain}), std::invalid_argument);
  // Atoms are fine on the star graph.
  const SignedMeasure sm = make_signed_measure(star, {{Point::on_ray(0, 1, 2.0), 1.0}});
  CHECK(ball_mass(sm, {Point::on_ray(0, 0, 0.0), 2.5}) == 1.0);
}
