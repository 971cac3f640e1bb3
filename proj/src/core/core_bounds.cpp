#include "occbound/core_bounds.hpp"

#include "occbound/errors.hpp"
#include "occbound/normal.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace occbound::bounds {

namespace {

// Geometric breakpoints scale * 4^j inside (0, upper); the integrands below
// change shape over u ~ r / b and vary slowly elsewhere.
std::vector<double> geometric_breakpoints(double scale, double upper) {
    std::vector<double> cuts;
    if (!(scale > 0.0) || !std::isfinite(scale)) return cuts;
    for (double p = 0.25 * scale; p < upper; p *= 4.0) cuts.push_back(p);
    return cuts;
}

std::vector<double> time_breakpoints(const CoefficientBox& box, double r, double u_max) {
    auto cuts = geometric_breakpoints(r / box.b(), u_max);
    if (box.k() > 0.0 && r > 0.0) {
        const double peak = std::sqrt(r / box.k()) / box.b();  // v = 0
        if (peak < u_max) cuts.push_back(peak);
    }
    return cuts;
}

// v(r, u^2) with the u -> 0 limit made explicit.
double v_of_u(const CoefficientBox& box, double r, double u) {
    if (u <= 0.0) return r > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
    return box.k() * box.b() * u - r / (box.b() * u);
}

// 2u * density_rate(r, u^2).
double rate_in_u(const CoefficientBox& box, double r, double u) {
    const double a2 = box.a() * box.a();
    const double v = v_of_u(box, r, u);
    return (2.0 * box.b() * normal_pdf(v) + 2.0 * u * box.b() * box.b() * box.k() * normal_cdf(v)) / a2;
}

// v(r, T / w^2) for the tail substitution t = T / w^2.
double v_of_w(const CoefficientBox& box, double r, double T, double w) {
    const double sqrt_T = std::sqrt(T);
    const double drift_part = box.k() == 0.0 ? 0.0
                              : (w <= 0.0 ? std::numeric_limits<double>::infinity()
                                           : box.k() * box.b() * sqrt_T / w);
    return drift_part - r * w / (box.b() * sqrt_T);
}

std::vector<double> tail_breakpoints(const CoefficientBox& box, double r, double T) {
    std::vector<double> cuts;
    const double b = box.b();
    std::vector<double> centers{b * std::sqrt(T) / r};
    if (box.k() > 0.0) centers.push_back(b * std::sqrt(box.k() * T / r));
    for (double c : centers) {
        for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const double w = c * f;
            if (w > 0.0 && w < 1.0) cuts.push_back(w);
        }
    }
    return cuts;
}

void require_derivative_domain(double r, double T, const char* what) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError(std::string(what) + ": requires r > 0, got r=" + std::to_string(r));
    }
    if (!(T >= 0.0) || !std::isfinite(T)) {
        throw DomainError(std::string(what) + ": requires finite T >= 0");
    }
}

BoundReport from_quad(const quad::Result& q) {
    return {q.value, q.abs_error, q.evaluations};
}

}  // namespace

double v_argument(const CoefficientBox& box, double r, double t) {
    if (!(t > 0.0)) throw DomainError("v_argument: requires t > 0, got t=" + std::to_string(t));
    const double st = std::sqrt(t);
    return box.k() * box.b() * st - r / (box.b() * st);
}

double density_rate(const CoefficientBox& box, double r, double t) {
    if (!(t > 0.0)) throw DomainError("density_rate: requires t > 0, got t=" + std::to_string(t));
    const double v = v_argument(box, r, t);
    const double a2 = box.a() * box.a();
    return box.b() / (a2 * std::sqrt(t)) * normal_pdf(v) +
           box.b() * box.b() * box.k() / a2 * normal_cdf(v);
}

double occupation_bound_at_level(const CoefficientBox& box, double T) {
    if (!(T >= 0.0)) throw DomainError("occupation_bound_at_level: requires T >= 0");
    const double a2 = box.a() * box.a();
    if (box.k() == 0.0) return 2.0 * box.b() * std::sqrt(T) * kInvSqrt2Pi / a2;
    const double S = box.k() * box.b() * std::sqrt(T);
    // All four terms are nonnegative, so small k does not cancel.
    return (normal_cdf_centered(S) + S * S * normal_cdf(S) + S * normal_pdf(S)) / (a2 * box.k());
}

BoundReport occupation_bound_quadrature(const CoefficientBox& box, double r, double T,
                                        const quad::Options& opts) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("occupation_bound: requires r >= 0");
    if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("occupation_bound: requires T >= 0");
    if (T == 0.0) return {};
    const double u_max = std::sqrt(T);
    const auto cuts = time_breakpoints(box, r, u_max);
    auto f = [&](double u) { return rate_in_u(box, r, u); };
    return from_quad(quad::integrate(f, 0.0, u_max, opts, cuts));
}

BoundReport occupation_bound_at_distance(const CoefficientBox& box, double r, double T,
                                         const quad::Options& opts) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("occupation_bound: requires T >= 0");
    if (T == 0.0) return {};
    if (r == 0.0) {
        const double value = occupation_bound_at_level(box, T);
        return {value, 8.0 * std::numeric_limits<double>::epsilon() * value, 0};
    }
    return occupation_bound_quadrature(box, r, T, opts);
}

BoundReport occupation_bound(const CoefficientBox& box, const Query& q, double tol) {
    quad::Options opts;
    opts.abs_tol = tol;
    return occupation_bound_at_distance(box, q.r(), q.T(), opts);
}

double resolvent_exponent(const CoefficientBox& box, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("resolvent: requires lambda > 0, got lambda=" + std::to_string(lambda));
    }
    const double b2 = box.b() * box.b();
    const double root = std::sqrt(box.k() * box.k() + 2.0 * lambda / b2);
    return -2.0 * lambda / (b2 * (box.k() + root));
}

double resolvent_bound(const CoefficientBox& box, double r, double lambda) {
    if (!(r >= 0.0)) throw DomainError("resolvent: requires r >= 0");
    const double kappa = resolvent_exponent(box, lambda);
    return std::exp(kappa * r) / (-kappa * box.a() * box.a());
}

ResolventDerivatives resolvent_derivatives(const CoefficientBox& box, double r, double lambda) {
    const double kappa = resolvent_exponent(box, lambda);
    const double q = resolvent_bound(box, r, lambda);
    return {q, -std::exp(kappa * r) / (box.a() * box.a()), kappa * kappa * q};
}

double resolvent_dx(const CoefficientBox& box, double x, double y, double lambda, Side side) {
    const double kappa = resolvent_exponent(box, lambda);
    double direction;  // d|x - y| / dx on the requested side
    if (x > y) direction = 1.0;
    else if (x < y) direction = -1.0;
    else direction = side == Side::right ? 1.0 : -1.0;
    return -direction * std::exp(kappa * std::abs(x - y)) / (box.a() * box.a());
}

BoundReport dH_dr(const CoefficientBox& box, double r, double T, double tol, DerivativeRoute route) {
    require_derivative_domain(r, T, "dH_dr");
    if (T == 0.0) return {};
    const double a2 = box.a() * box.a();
    const double b = box.b();
    quad::Options opts;
    opts.abs_tol = tol;
    if (route == DerivativeRoute::complement) {
        const double scale = 2.0 * r / (a2 * b * std::sqrt(T));
        auto g = [&](double w) { return scale * normal_pdf(v_of_w(box, r, T, w)); };
        const auto cuts = tail_breakpoints(box, r, T);
        auto tail = quad::integrate(g, 0.0, 1.0, opts, cuts);
        return {-1.0 / a2 + tail.value, tail.abs_error, tail.evaluations};
    }
    const double u_max = std::sqrt(T);
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double p = normal_pdf(v_of_u(box, r, u));
        if (p == 0.0) return 0.0;
        return -2.0 * r * p / (a2 * b * u * u);
    };
    return from_quad(quad::integrate(f, 0.0, u_max, opts, time_breakpoints(box, r, u_max)));
}

BoundReport d2H_dr2(const CoefficientBox& box, double r, double T, double tol, DerivativeRoute route) {
    require_derivative_domain(r, T, "d2H_dr2");
    if (T == 0.0) return {};
    const double a2 = box.a() * box.a();
    const double b = box.b();
    const double k = box.k();
    if (route == DerivativeRoute::automatic) {
        // The integrand in t changes sign once, at r^2 / (b^2 (1 + k r)).
        const double sign_change = r * r / (b * b * (1.0 + k * r));
        route = T <= sign_change ? DerivativeRoute::direct : DerivativeRoute::complement;
    }
    quad::Options opts;
    opts.abs_tol = tol;
    if (route == DerivativeRoute::complement) {
        const double scale = 2.0 / (a2 * b * std::sqrt(T));
        auto g = [&](double w) {
            const double p = normal_pdf(v_of_w(box, r, T, w));
            if (p == 0.0) return 0.0;
            return scale * p * (r * r * w * w / (b * b * T) - k * r - 1.0);
        };
        auto tail = quad::integrate(g, 0.0, 1.0, opts, tail_breakpoints(box, r, T));
        return {-tail.value, tail.abs_error, tail.evaluations};
    }
    const double u_max = std::sqrt(T);
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double p = normal_pdf(v_of_u(box, r, u));
        if (p == 0.0) return 0.0;
        const double u2 = u * u;
        return 2.0 * p / (a2 * b * u2) * (r * r / (b * b * u2) - k * r - 1.0);
    };
    return from_quad(quad::integrate(f, 0.0, u_max, opts, time_breakpoints(box, r, u_max)));
}

LaplaceCheck laplace_consistency(const CoefficientBox& box, double r, double lambda, double tol) {
    if (!(lambda > 0.0)) throw DomainError("laplace_consistency: requires lambda > 0");
    if (!(r >= 0.0)) throw DomainError("laplace_consistency: requires r >= 0");
    if (!(tol > 0.0)) throw DomainError("laplace_consistency: requires tol > 0");
    const double a2 = box.a() * box.a();
    const double b = box.b();
    // Integral over [t, inf) of (b / (a^2 sqrt s) + b^2 k / a^2) exp(-lambda s) is at most this.
    auto envelope_tail = [&](double t) {
        return (b / (a2 * std::sqrt(t)) + b * b * box.k() / a2) * std::exp(-lambda * t) / lambda;
    };
    const double budget = tol / 10.0;
    double hi = 1.0 / lambda;
    while (envelope_tail(hi) >= budget) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid > 0.0 && envelope_tail(mid) < budget) hi = mid;
        else lo = mid;
    }
    const double t_star = hi;
    const double u_max = std::sqrt(t_star);

    quad::Options opts;
    opts.abs_tol = budget;
    auto f = [&](double u) { return std::exp(-lambda * u * u) * rate_in_u(box, r, u); };
    auto cuts = time_breakpoints(box, r, u_max);
    cuts.push_back(std::min(u_max, 1.0 / std::sqrt(lambda)));
    const auto integral = quad::integrate(f, 0.0, u_max, opts, cuts);

    LaplaceCheck out;
    out.transform = integral.value;
    out.closed_form = resolvent_bound(box, r, lambda);
    out.residual = std::abs(out.transform - out.closed_form);
    out.truncation_time = t_star;
    out.evaluations = integral.evaluations;
    return out;
}

BoundReport occupation_mass_beyond(const CoefficientBox& box, double R, double T, double tol) {
    if (!(R >= 0.0)) throw DomainError("occupation_mass_beyond: requires R >= 0");
    if (!(T >= 0.0)) throw DomainError("occupation_mass_beyond: requires T >= 0");
    if (T == 0.0) return {};
    const double b = box.b();
    const double scale = b * b / (box.a() * box.a());
    // 2u * integral over r >= R of density_rate(r, u^2).
    auto f = [&](double u) {
        const double v = v_of_u(box, R, u);
        const double partial = std::max(0.0, v * normal_cdf(v) + normal_pdf(v));
        return 2.0 * u * scale * (normal_cdf(v) + box.k() * b * u * (std::isfinite(v) ? partial : 0.0));
    };
    quad::Options opts;
    opts.abs_tol = tol;
    const double u_max = std::sqrt(T);
    return from_quad(quad::integrate(f, 0.0, u_max, opts, time_breakpoints(box, R, u_max)));
}

}  // namespace occbound::bounds
