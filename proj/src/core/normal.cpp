#include "occbound/normal.hpp"

#include <cmath>

namespace occbound {

double normal_pdf(double z) noexcept {
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) noexcept {
    if (std::isnan(z)) return z;
    if (z < 0.0) return 0.5 * std::erfc(-z * kInvSqrt2);
    return 1.0 - 0.5 * std::erfc(z * kInvSqrt2);
}

double normal_cdf_centered(double z) noexcept {
    return 0.5 * std::erf(z * kInvSqrt2);
}

}  // namespace occbound
