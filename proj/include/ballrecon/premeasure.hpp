#pragma once

#include "ballrecon/measure.hpp"

#include <cstdint>
#include <vector>

namespace ballrecon {

enum class PremeasureKind { Exact, Averaged, Kernel, Noisy, SignedPart };

// Nonincreasing step density on (0,1) with unit integral, on a uniform
// partition; the weight profile of the kernel-averaged premeasure.
struct StepKernel {
  std::vector<double> values;

  // integral of the density over (z, 1)
  double tail_integral(double z) const;
  static StepKernel uniform(int pieces = 1);
};

StepKernel validate_kernel(StepKernel omega);

struct PremeasureModel {
  PremeasureKind kind = PremeasureKind::Exact;
  SignedMeasure base;
  StepKernel omega;            // Kernel
  double noise_C = 1.0;        // Noisy: multiplier range [1/C, C]
  std::uint64_t noise_seed = 0;
  int sign = +1;                                        // SignedPart
  PremeasureKind signed_base = PremeasureKind::Averaged;  // Exact | Averaged | Kernel

  static PremeasureModel exact(SignedMeasure mu);
  static PremeasureModel averaged(SignedMeasure mu);
  static PremeasureModel kernel(SignedMeasure mu, StepKernel omega);
  static PremeasureModel noisy(SignedMeasure mu, double C, std::uint64_t seed);
  static PremeasureModel signed_part(SignedMeasure mu, int sign,
                                     PremeasureKind base = PremeasureKind::Averaged,
                                     StepKernel omega = StepKernel::uniform());
};

// Premeasure value on a closed ball; nonnegative for all models (SignedPart
// clamps the signed base value by its sign).
double evaluate(const PremeasureModel& q, const Ball& b);

// Signed base value before SignedPart clamping: exact ball mass, the radial
// average (1/r) int_0^r mu(B_s) ds, or its omega-weighted version. Atom
// contributions are closed-form; chains use adaptive quadrature (abs tol
// 1e-10) split at the breakpoints of s -> mu(B_s).
double signed_base_value(const SignedMeasure& mu, const Ball& b, PremeasureKind base,
                         const StepKernel& omega);

// Deterministic per-ball noise multiplier in [1/C, C].
double noise_multiplier(const Point& center, double radius, double C, std::uint64_t seed);

struct SampleSpec {
  std::vector<Point> centers;
  std::vector<double> radii;
};

SampleSpec default_sample_spec(const SignedMeasure& mu, double r0, std::uint64_t seed,
                               int jitter_per_center = 2);

// Empirical two-sided certificate for
//   C^-1 mu(B_{alpha r}(x)) <= q(B_r(x)) <= C mu(B_r(x))
// over the sampled (x, r) with r < r0. Margins are the minimum slacks; the
// certificate speaks only about its grid.
struct BoundCertificate {
  double alpha = 1.0;
  double C = 1.0;
  double r0 = 0.0;
  double worst_lower_margin = 0.0;
  double worst_upper_margin = 0.0;
  std::size_t n_centers = 0;
  std::vector<double> radii;
  bool passed = false;
};

BoundCertificate certify_bounds(const PremeasureModel& q, const SignedMeasure& mu, double alpha,
                                double C, double r0, const SampleSpec& spec);

// Signed variants: certificates for
//   C^-1 mu+(B_{ar}) - mu-(B_r) <= q+(B_r) <= C mu+(B_r)
// and the mirrored inequality for q-.
std::pair<BoundCertificate, BoundCertificate> certify_signed_bounds(
    const PremeasureModel& q_plus, const PremeasureModel& q_minus, const SignedMeasure& mu,
    double alpha, double C, const SampleSpec& spec);

}  // namespace ballrecon
