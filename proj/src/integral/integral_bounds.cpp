#include "occbound/integral_bounds.hpp"

#include "occbound/core_bounds.hpp"
#include "occbound/detail/ensemble.hpp"
#include "occbound/errors.hpp"
#include "occbound/normal.hpp"
#include "occbound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace occbound::integral {

namespace {

void check_horizon(double T) {
    if (!std::isfinite(T) || T < 0.0) throw DomainError("horizon T must be finite and >= 0");
}

std::vector<double> outer_breakpoints(double x, const std::vector<double>& declared) {
    std::vector<double> cuts = declared;
    cuts.push_back(x);
    return cuts;
}

/// Bound mass of G(x, ., T) on (-inf, edge] (left = true) or [edge, inf).
double side_mass(const CoefficientBox& box, double x, double T, double edge, bool left) {
    const double d = left ? x - edge : edge - x;
    if (d >= 0.0) return bounds::occupation_mass_beyond(box, d, T).value;
    return 2.0 * bounds::occupation_mass_beyond(box, 0.0, T).value -
           bounds::occupation_mass_beyond(box, -d, T).value;
}

double inner_tolerance(double tol, double width, double f_sup) {
    return std::max(1e-14, 0.01 * tol / std::max(1.0, width * f_sup));
}

}  // namespace

double tail_certificate(const CoefficientBox& box, double x, double T, double lo, double hi, double tail_sup) {
    check_horizon(T);
    if (tail_sup == 0.0 || T == 0.0) return 0.0;
    return tail_sup * (side_mass(box, x, T, lo, true) + side_mass(box, x, T, hi, false));
}

BoundReport path_integral_bound(const CoefficientBox& box, double x, double T, const ProfileFunction& f,
                                double tol) {
    f.validate();
    check_horizon(T);
    if (T == 0.0) return {0.0, 0.0, 0};
    const double f_sup = f.sup_estimate();
    quad::Options inner;
    inner.abs_tol = inner_tolerance(tol, f.hi - f.lo, f_sup);
    inner.rel_tol = 4e-14;

    std::unordered_map<double, double> cache;
    std::size_t inner_evals = 0;
    double inner_err = 0.0;
    auto H = [&](double r) {
        auto it = cache.find(r);
        if (it != cache.end()) return it->second;
        const auto rep = bounds::occupation_bound_at_distance(box, r, T, inner);
        inner_evals += rep.evaluations;
        inner_err = std::max(inner_err, rep.abs_error_estimate);
        cache.emplace(r, rep.value);
        return rep.value;
    };
    auto integrand = [&](double y) {
        const double fy = f(y);
        return fy == 0.0 ? 0.0 : fy * H(std::abs(x - y));
    };
    quad::Options outer;
    outer.abs_tol = 0.5 * tol;
    const auto cuts = outer_breakpoints(x, f.breakpoints);
    const auto res = quad::integrate(integrand, f.lo, f.hi, outer, cuts);
    const double tail = tail_certificate(box, x, T, f.lo, f.hi, f.tail_sup);
    return {res.value + tail, res.abs_error + inner_err * (f.hi - f.lo) * f_sup, res.evaluations + inner_evals};
}

namespace {

void check_time_hypothesis(const TimeProfileFunction& f, double T) {
    std::vector<double> ts, ys;
    constexpr std::size_t nt = 65, ny = 129;
    for (std::size_t i = 0; i < nt; ++i) ts.push_back(T * static_cast<double>(i) / (nt - 1));
    for (double t : f.time_breakpoints) {
        if (t > 0.0 && t < T) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t j = 0; j < ny; ++j) ys.push_back(f.lo + (f.hi - f.lo) * static_cast<double>(j) / (ny - 1));
    for (double y : f.breakpoints) {
        if (y >= f.lo && y <= f.hi) ys.push_back(y);
    }
    for (double y : ys) {
        double prev = f(ts.front(), y);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double cur = f(ts[i], y);
            if (!(cur >= 0.0)) {
                std::ostringstream os;
                os << "time profile: f(" << ts[i] << ", " << y << ") = " << cur << " is not >= 0";
                throw DomainError(os.str());
            }
            if (cur > prev + 1e-12 * std::max(1.0, std::abs(prev))) {
                std::ostringstream os;
                os << "time profile increases in t at y = " << y << " between t = " << ts[i - 1] << " and "
                   << ts[i] << " (" << prev << " -> " << cur << "); the time-refined bound needs f nonincreasing";
                throw HypothesisError(os.str());
            }
            prev = cur;
        }
    }
}

}  // namespace

BoundReport time_integral_bound(const CoefficientBox& box, double x, double T, const TimeProfileFunction& f,
                                double tol) {
    f.validate();
    check_horizon(T);
    if (T == 0.0) return {0.0, 0.0, 0};
    check_time_hypothesis(f, T);
    const double a2 = box.a() * box.a(), b = box.b(), k = box.k();
    const double f_sup = f.sup_estimate(T);
    const double U = std::sqrt(T);
    quad::Options inner;
    inner.abs_tol = inner_tolerance(tol, f.hi - f.lo, f_sup);
    inner.rel_tol = 4e-14;

    std::vector<double> time_cuts;
    for (double t : f.time_breakpoints) {
        if (t > 0.0 && t < T) time_cuts.push_back(std::sqrt(t));
    }
    std::size_t inner_evals = 0;
    double inner_err = 0.0;
    // after t = u^2 the rate times dt/du is (2 b phi(v) + 2 u b^2 k Phi(v)) / a^2
    auto over_time = [&](double y) {
        const double r = std::abs(x - y);
        auto kernel = [&](double u) {
            const double ft = f(u * u, y);
            if (ft == 0.0) return 0.0;
            const double v = k * b * u - r / (b * u);
            return ft * (2.0 * b * normal_pdf(v) + 2.0 * u * b * b * k * normal_cdf(v)) / a2;
        };
        std::vector<double> cuts = time_cuts;
        if (r > 0.0) {
            for (int j = -2; j <= 3; ++j) cuts.push_back(std::ldexp(r / b, j));
        }
        const auto rep = quad::integrate(kernel, 0.0, U, inner, cuts);
        inner_evals += rep.evaluations;
        inner_err = std::max(inner_err, rep.abs_error);
        return rep.value;
    };
    quad::Options outer;
    outer.abs_tol = 0.5 * tol;
    const auto res = quad::integrate(over_time, f.lo, f.hi, outer, outer_breakpoints(x, f.breakpoints));
    const double tail = tail_certificate(box, x, T, f.lo, f.hi, f.tail_sup);
    return {res.value + tail, res.abs_error + inner_err * (f.hi - f.lo), res.evaluations + inner_evals};
}

namespace {

template <class Eval>
PathIntegralEstimate run_mc(const sim::FeedbackControl& ctrl, const sim::SimConfig& cfg, const Eval& eval) {
    const double dt = cfg.effective_dt();
    const auto r = sim::detail::run_ensemble(ctrl, cfg, 1, [&](double t, double x, double, double* acc) {
        acc[0] += eval(t, x) * dt;
    });
    PathIntegralEstimate e;
    e.mean = r.moments.mean[0];
    e.std_error = r.moments.std_error(0);
    e.n_paths = r.moments.n;
    e.failed_paths = r.failed;
    if (r.failed > 0) e.warnings.push_back(std::to_string(r.failed) + " path(s) aborted on a non-finite state");
    return e;
}

}  // namespace

PathIntegralEstimate mc_path_integral(const sim::FeedbackControl& ctrl, const sim::SimConfig& cfg,
                                      const ProfileFunction& f) {
    if (!f.f) throw std::invalid_argument("profile: missing evaluation map");
    return run_mc(ctrl, cfg, [&](double, double x) { return f(x); });
}

PathIntegralEstimate mc_path_integral(const sim::FeedbackControl& ctrl, const sim::SimConfig& cfg,
                                      const TimeProfileFunction& f) {
    if (!f.f) throw std::invalid_argument("time profile: missing evaluation map");
    return run_mc(ctrl, cfg, [&](double t, double x) { return f(t, x); });
}

double path_integral_budget(const CoefficientBox& box, double T, double dt, double f_sup) {
    check_horizon(T);
    if (!(dt > 0.0)) throw DomainError("path_integral_budget: dt must be > 0");
    const double b = box.b();
    return 4.0 * f_sup * (b * std::sqrt(dt) + b * b * box.k() * dt) * bounds::occupation_bound_at_level(box, T);
}

}  // namespace occbound::integral
