#include "ballrecon/premeasure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace ballrecon {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Mass of the chain part only, exact chord evaluation.
double chains_ball_mass(const SignedMeasure& mu, const Point& center, double s) {
  double mass = 0.0;
  for (const PolylineChain& c : mu.chains) {
    for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      const Eigen::VectorXd& p0 = c.vertices[i].coords;
      const Eigen::VectorXd& p1 = c.vertices[i + 1].coords;
      const ParamIntervals iv = clip_segment_ball(p0, p1, center.coords, s);
      mass += intervals_total_length(iv) * (p1 - p0).norm() * c.density;
    }
  }
  return mass;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, tol, 40);
}

// Breakpoints of s -> mu(B_s(x)) coming from the chain geometry: perpendicular
// foot distances and vertex distances, where the chord length has kinks.
std::vector<double> chain_breakpoints(const SignedMeasure& mu, const Point& center, double r) {
  std::vector<double> cuts;
  for (const PolylineChain& c : mu.chains) {
    for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      const Eigen::VectorXd& p0 = c.vertices[i].coords;
      const Eigen::VectorXd& p1 = c.vertices[i + 1].coords;
      cuts.push_back(point_segment_distance(center.coords, p0, p1));
      cuts.push_back((center.coords - p0).norm());
      cuts.push_back((center.coords - p1).norm());
    }
  }
  std::vector<double> out{0.0, r};
  for (double s : cuts) {
    if (s > 0.0 && s < r) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double averaged_chain_part(const SignedMeasure& mu, const Ball& b, const StepKernel* omega) {
  if (mu.chains.empty()) return 0.0;
  const double r = b.radius;
  std::vector<double> cuts = chain_breakpoints(mu, b.center, r);
  if (omega != nullptr) {
    const int m = static_cast<int>(omega->values.size());
    for (int k = 1; k < m; ++k) {
      const double s = r * static_cast<double>(k) / m;
      if (s > 0.0 && s < r) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }
  std::function<double(double)> f;
  if (omega == nullptr) {
    f = [&](double s) { return chains_ball_mass(mu, b.center, s); };
  } else {
    const int m = static_cast<int>(omega->values.size());
    f = [&, m](double s) {
      const double z = s / r;
      int k = std::min(static_cast<int>(z * m), m - 1);
      return chains_ball_mass(mu, b.center, s) * omega->values[static_cast<size_t>(k)];
    };
  }
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double share = (cuts[i + 1] - cuts[i]) / r;
    total += integrate(f, cuts[i], cuts[i + 1], 1e-10 * std::max(share, 1e-3));
  }
  return total / r;
}

}  // namespace

double StepKernel::tail_integral(double z) const {
  // integral of the step density over (max(z,0), 1)
  const int m = static_cast<int>(values.size());
  if (z >= 1.0) return 0.0;
  z = std::max(z, 0.0);
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    const double lo = static_cast<double>(k) / m;
    const double hi = static_cast<double>(k + 1) / m;
    if (hi <= z) continue;
    total += (hi - std::max(lo, z)) * values[static_cast<size_t>(k)];
  }
  return total;
}

StepKernel StepKernel::uniform(int pieces) {
  StepKernel k;
  k.values.assign(static_cast<size_t>(std::max(pieces, 1)), 1.0);
  return k;
}

StepKernel validate_kernel(StepKernel omega) {
  require(!omega.values.empty(), "StepKernel: empty partition");
  double sum = 0.0;
  for (size_t i = 0; i < omega.values.size(); ++i) {
    require(omega.values[i] >= 0.0, "StepKernel: negative weight");
    if (i > 0) {
      require(omega.values[i] <= omega.values[i - 1] + 1e-12, "StepKernel: weights must be nonincreasing");
    }
    sum += omega.values[i];
  }
  require(std::abs(sum / static_cast<double>(omega.values.size()) - 1.0) <= 1e-9,
          "StepKernel: density must integrate to 1");
  return omega;
}

PremeasureModel PremeasureModel::exact(SignedMeasure mu) {
  require(mu.nonnegative(), "PremeasureModel: premeasures need a nonnegative base; use signed_part");
  PremeasureModel q;
  q.kind = PremeasureKind::Exact;
  q.base = std::move(mu);
  return q;
}

PremeasureModel PremeasureModel::averaged(SignedMeasure mu) {
  require(mu.nonnegative(), "PremeasureModel: premeasures need a nonnegative base; use signed_part");
  PremeasureModel q;
  q.kind = PremeasureKind::Averaged;
  q.base = std::move(mu);
  return q;
}

PremeasureModel PremeasureModel::kernel(SignedMeasure mu, StepKernel omega) {
  require(mu.nonnegative(), "PremeasureModel: premeasures need a nonnegative base; use signed_part");
  PremeasureModel q;
  q.kind = PremeasureKind::Kernel;
  q.base = std::move(mu);
  q.omega = validate_kernel(std::move(omega));
  return q;
}

PremeasureModel PremeasureModel::noisy(SignedMeasure mu, double C, std::uint64_t seed) {
  require(C >= 1.0, "PremeasureModel: noise C must be >= 1");
  require(mu.nonnegative(), "PremeasureModel: premeasures need a nonnegative base; use signed_part");
  PremeasureModel q;
  q.kind = PremeasureKind::Noisy;
  q.base = std::move(mu);
  q.noise_C = C;
  q.noise_seed = seed;
  return q;
}

PremeasureModel PremeasureModel::signed_part(SignedMeasure mu, int sign, PremeasureKind base,
                                             StepKernel omega) {
  require(sign == +1 || sign == -1, "PremeasureModel: sign must be +1 or -1");
  require(base == PremeasureKind::Exact || base == PremeasureKind::Averaged ||
              base == PremeasureKind::Kernel,
          "PremeasureModel: signed base must be Exact, Averaged or Kernel");
  PremeasureModel q;
  q.kind = PremeasureKind::SignedPart;
  q.base = std::move(mu);
  q.sign = sign;
  q.signed_base = base;
  q.omega = validate_kernel(std::move(omega));
  return q;
}

double signed_base_value(const SignedMeasure& mu, const Ball& b, PremeasureKind base,
                         const StepKernel& omega) {
  require(b.radius > 0.0 && std::isfinite(b.radius), "evaluate: radius must be positive");
  const double r = b.radius;
  switch (base) {
    case PremeasureKind::Exact:
      return ball_mass(mu, b);
    case PremeasureKind::Averaged: {
      double value = 0.0;
      for (const Atom& a : mu.atoms) {
        const double d = distance(mu.space, a.position, b.center);
        value += a.weight * std::max(0.0, r - d) / r;
      }
      return value + averaged_chain_part(mu, b, nullptr);
    }
    case PremeasureKind::Kernel: {
      double value = 0.0;
      for (const Atom& a : mu.atoms) {
        const double d = distance(mu.space, a.position, b.center);
        if (d <= r) value += a.weight * omega.tail_integral(d / r);
      }
      return value + averaged_chain_part(mu, b, &omega);
    }
    default:
      throw std::invalid_argument("signed_base_value: base must be Exact, Averaged or Kernel");
  }
}

double noise_multiplier(const Point& center, double radius, double C, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed ^ 0x5bf03635u);
  auto mix = [&h](std::uint64_t v) { h = splitmix64(h ^ v); };
  mix(std::bit_cast<std::uint64_t>(radius));
  for (Eigen::Index i = 0; i < center.coords.size(); ++i) {
    mix(std::bit_cast<std::uint64_t>(center.coords[i]));
  }
  mix(static_cast<std::uint64_t>(center.ray + 1));
  mix(std::bit_cast<std::uint64_t>(center.arc));
  mix(static_cast<std::uint64_t>(center.node + 1));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0,1)
  return std::exp((2.0 * u - 1.0) * std::log(C));
}

double evaluate(const PremeasureModel& q, const Ball& b) {
  switch (q.kind) {
    case PremeasureKind::Exact:
    case PremeasureKind::Averaged:
    case PremeasureKind::Kernel:
      return signed_base_value(q.base, b, q.kind, q.omega);
    case PremeasureKind::Noisy:
      return ball_mass(q.base, b) * noise_multiplier(b.center, b.radius, q.noise_C, q.noise_seed);
    case PremeasureKind::SignedPart: {
      const double v = signed_base_value(q.base, b, q.signed_base, q.omega);
      return std::max(q.sign > 0 ? v : -v, 0.0);
    }
  }
  throw std::logic_error("evaluate: unknown premeasure kind");
}

SampleSpec default_sample_spec(const SignedMeasure& mu, double r0, std::uint64_t seed,
                               int jitter_per_center) {
  require(r0 > 0.0, "default_sample_spec: r0 must be > 0");
  SampleSpec spec;
  const double pitch = std::max(mu.total_variation(), 1.0) / 20.0;
  spec.centers = support_points(mu, pitch);
  if (mu.space.kind() == SpaceKind::Euclidean && jitter_per_center > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const size_t n_base = spec.centers.size();
    for (size_t i = 0; i < n_base; ++i) {
      for (int j = 0; j < jitter_per_center; ++j) {
        Eigen::VectorXd dir(mu.space.dim());
        for (Eigen::Index k = 0; k < dir.size(); ++k) dir[k] = gauss(rng);
        const double len = dir.norm();
        if (len == 0.0) continue;
        dir *= (unif(rng) * 0.5 * r0) / len;
        spec.centers.push_back(Point::euclidean(mu.space.id(), spec.centers[i].coords + dir));
      }
    }
  }
  for (double r = 0.8 * r0; r > 1e-4 * r0; r *= 0.5) spec.radii.push_back(r);
  return spec;
}

BoundCertificate certify_bounds(const PremeasureModel& q, const SignedMeasure& mu, double alpha,
                                double C, double r0, const SampleSpec& spec) {
  require(mu.nonnegative(), "certify_bounds: mu must be nonnegative");
  require(alpha > 0.0 && alpha <= 1.0, "certify_bounds: alpha must be in (0,1]");
  require(C >= 1.0, "certify_bounds: C must be >= 1");
  require(!spec.centers.empty() && !spec.radii.empty(), "certify_bounds: empty sample spec");
  BoundCertificate cert;
  cert.alpha = alpha;
  cert.C = C;
  cert.r0 = r0;
  cert.n_centers = spec.centers.size();
  cert.radii = spec.radii;
  double lower = std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (const Point& x : spec.centers) {
    for (double r : spec.radii) {
      if (!(r < r0)) continue;
      const double qv = evaluate(q, {x, r});
      lower = std::min(lower, qv - ball_mass(mu, {x, alpha * r}) / C);
      upper = std::min(upper, C * ball_mass(mu, {x, r}) - qv);
    }
  }
  cert.worst_lower_margin = lower;
  cert.worst_upper_margin = upper;
  cert.passed = lower >= -1e-12 && upper >= -1e-12;
  return cert;
}

std::pair<BoundCertificate, BoundCertificate> certify_signed_bounds(
    const PremeasureModel& q_plus, const PremeasureModel& q_minus, const SignedMeasure& mu,
    double alpha, double C, const SampleSpec& spec) {
  require(alpha > 0.0 && alpha <= 1.0, "certify_signed_bounds: alpha must be in (0,1]");
  require(C >= 1.0, "certify_signed_bounds: C must be >= 1");
  require(!spec.centers.empty() && !spec.radii.empty(), "certify_signed_bounds: empty sample spec");
  const auto [mu_plus, mu_minus] = hahn_split(mu);
  const double r0 = *std::max_element(spec.radii.begin(), spec.radii.end()) * (1.0 + 1e-12);

  auto one_side = [&](const PremeasureModel& q, const SignedMeasure& same,
                      const SignedMeasure& other) {
    BoundCertificate cert;
    cert.alpha = alpha;
    cert.C = C;
    cert.r0 = r0;
    cert.n_centers = spec.centers.size();
    cert.radii = spec.radii;
    double lower = std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (const Point& x : spec.centers) {
      for (double r : spec.radii) {
        const double qv = evaluate(q, {x, r});
        const double lhs = ball_mass(same, {x, alpha * r}) / C - ball_mass(other, {x, r});
        lower = std::min(lower, qv - lhs);
        upper = std::min(upper, C * ball_mass(same, {x, r}) - qv);
      }
    }
    cert.worst_lower_margin = lower;
    cert.worst_upper_margin = upper;
    cert.passed = lower >= -1e-12 && upper >= -1e-12;
    return cert;
  };

  return {one_side(q_plus, mu_plus, mu_minus), one_side(q_minus, mu_minus, mu_plus)};
}

}  // namespace ballrecon
