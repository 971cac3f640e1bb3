#pragma once

#include <cmath>
#include <cstddef>

namespace occbound {

/**
 * Admissible coefficient class: sigma in [a, b] and |beta| <= k * sigma^2.
 *
 * Units: a and b carry length / sqrt(time), k carries 1 / length. Occupation
 * densities computed against a box carry 1 / length. Units are documented,
 * not enforced.
 */
class CoefficientBox {
public:
    /// Throws DomainError unless 0 < a <= b, k >= 0 and all finite.
    CoefficientBox(double a, double b, double k);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double k() const noexcept { return k_; }

    /// Largest admissible drift magnitude, k * b^2.
    double max_drift() const noexcept { return k_ * b_ * b_; }

    /// True iff (beta, sigma) lies in the control rectangle U, up to `tol`.
    bool contains(double beta, double sigma, double tol = 0.0) const noexcept;

    friend bool operator==(const CoefficientBox&, const CoefficientBox&) = default;

private:
    double a_;
    double b_;
    double k_;
};

/// Evaluation point of the bound: start x, level y, horizon T.
class Query {
public:
    /// Throws DomainError unless T >= 0 and x, y finite.
    Query(double x, double y, double T);

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double T() const noexcept { return T_; }
    double r() const noexcept { return std::abs(x_ - y_); }

private:
    double x_;
    double y_;
    double T_;
};

struct BoundReport {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

}  // namespace occbound
