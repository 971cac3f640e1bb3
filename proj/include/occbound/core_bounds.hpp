#pragma once

#include "occbound/coefficient_box.hpp"
#include "occbound/quadrature.hpp"

#include <cstddef>

/**
 * Sharp bound G(x, y, T) = H_T(|x - y|) on the expected occupation density
 * of Ito processes whose coefficients stay in a CoefficientBox, its
 * exponentially stopped counterpart Q_lambda, and the r-derivatives of H.
 *
 * Every integral over time is taken after substituting t = u^2, which turns
 * the 1/sqrt(t) endpoint behaviour into a bounded smooth integrand.
 */
namespace occbound::bounds {

inline constexpr double kDefaultTol = 1e-10;

/// k b sqrt(t) - r / (b sqrt(t)). Throws DomainError for t <= 0.
double v_argument(const CoefficientBox& box, double r, double t);

/// Rate dH_T(r)/dT = b/(a^2 sqrt t) phi(v) + b^2 k / a^2 Phi(v). Throws DomainError for t <= 0.
double density_rate(const CoefficientBox& box, double r, double t);

/// G(x, y, T). Throws DomainError (via Query) on T < 0 and ToleranceError if
/// the quadrature cannot reach `tol`.
BoundReport occupation_bound(const CoefficientBox& box, const Query& q, double tol = kDefaultTol);

/// H_T(r) for r >= 0; T = 0 and r = 0 are evaluated in closed form.
BoundReport occupation_bound_at_distance(const CoefficientBox& box, double r, double T,
                                         const quad::Options& opts = {});

/// H_T(0) in closed form:
/// (Phi(S) - 1/2 + S^2 Phi(S) + S phi(S)) / (a^2 k) with S = k b sqrt(T),
/// and 2 b sqrt(T) phi(0) / a^2 when k = 0.
double occupation_bound_at_level(const CoefficientBox& box, double T);

/// Same integral as occupation_bound_at_distance but always by quadrature,
/// including r = 0. Used to cross-check the closed forms.
BoundReport occupation_bound_quadrature(const CoefficientBox& box, double r, double T,
                                        const quad::Options& opts = {});

/// Q_lambda(r) = exp(kappa r) / (-kappa a^2), kappa = k - sqrt(k^2 + 2 lambda / b^2),
/// with kappa evaluated as -2 lambda / (b^2 (k + sqrt(...))) to avoid cancellation.
/// Throws DomainError for lambda <= 0 or r < 0.
double resolvent_bound(const CoefficientBox& box, double r, double lambda);

/// Exponent kappa of the resolvent, always < 0 for lambda > 0.
double resolvent_exponent(const CoefficientBox& box, double lambda);

struct ResolventDerivatives {
    double value;
    double d_r;   ///< -exp(kappa r) / a^2
    double d_rr;  ///< kappa^2 Q
};

/// Q and its r-derivatives on the branch r > 0.
ResolventDerivatives resolvent_derivatives(const CoefficientBox& box, double r, double lambda);

enum class Side { left, right };

/// One-sided x-derivative of x -> Q_lambda(x, y) at x (the limit from `side` when x == y).
double resolvent_dx(const CoefficientBox& box, double x, double y, double lambda, Side side);

/// How the r-derivative integrals are evaluated.
///  - direct:     integral over [0, T] of the derivative integrand.
///  - complement: limit at T = infinity minus the integral over [T, infinity);
///                the limits are -1/a^2 for dH/dr and 0 for d2H/dr2.
///  - automatic:  direct for dH/dr; for d2H/dr2 whichever range keeps the
///                integrand single-signed.
enum class DerivativeRoute { automatic, direct, complement };

/// dH_T(r)/dr for r > 0. Throws DomainError for r <= 0 or T < 0.
BoundReport dH_dr(const CoefficientBox& box, double r, double T, double tol = kDefaultTol,
                  DerivativeRoute route = DerivativeRoute::automatic);

/// d2H_T(r)/dr2 for r > 0. Throws DomainError for r <= 0 or T < 0.
BoundReport d2H_dr2(const CoefficientBox& box, double r, double T, double tol = kDefaultTol,
                    DerivativeRoute route = DerivativeRoute::automatic);

struct LaplaceCheck {
    double transform = 0.0;    ///< truncated integral of exp(-lambda t) density_rate(r, t)
    double closed_form = 0.0;  ///< resolvent_bound(r, lambda)
    double residual = 0.0;     ///< |transform - closed_form|
    double truncation_time = 0.0;
    std::size_t evaluations = 0;
};

/// Compares the Laplace transform of the rate with Q_lambda. The tail beyond the
/// truncation time and the quadrature each get tol / 10 of the error budget;
/// the check passes when residual < tol.
LaplaceCheck laplace_consistency(const CoefficientBox& box, double r, double lambda,
                                 double tol = 1e-8);

/// Integral of H_T(s) over s in [R, infinity), i.e. the bound mass on one side
/// beyond distance R. Uses the exact inner r-integral of the rate.
BoundReport occupation_mass_beyond(const CoefficientBox& box, double R, double T,
                                   double tol = kDefaultTol);

}  // namespace occbound::bounds
