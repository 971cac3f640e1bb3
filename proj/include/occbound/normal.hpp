#pragma once

namespace occbound {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;  // 1 / sqrt(2 pi)
inline constexpr double kInvSqrt2 = 0.707106781186547524400844362105;

/// Standard normal density.
double normal_pdf(double z) noexcept;

/// Standard normal distribution function via erfc; accepts +-infinity.
/// Negative arguments use erfc directly so the lower tail keeps full relative
/// accuracy down to the subnormal range.
double normal_cdf(double z) noexcept;

/// Phi(z) - 1/2 without cancellation near zero.
double normal_cdf_centered(double z) noexcept;

/// Sign with the convention sign(0) = -1.
constexpr double signum(double x) noexcept { return x > 0.0 ? 1.0 : -1.0; }

}  // namespace occbound
