#include "occbound/core_bounds.hpp"
#include "occbound/errors.hpp"
#include "occbound/normal.hpp"
#include "occbound/verification.hpp"
#include "recorder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace occbound::verify {

AnalyticGrid AnalyticGrid::defaults() {
    return {{CoefficientBox(1, 1, 0), CoefficientBox(1, 2, 0), CoefficientBox(1, 2, 1), CoefficientBox(0.5, 1.5, 2)},
            {0.0, 0.1, 1.0, 5.0},
            {0.1, 1.0, 4.0},
            {0.5, 1.0, 3.0}};
}

namespace {

std::string fmt_point(const CoefficientBox& box, const char* extra_name = nullptr, double extra = 0.0,
                      const char* extra2_name = nullptr, double extra2 = 0.0) {
    char buf[200];
    int n = std::snprintf(buf, sizeof buf, "a=%g b=%g k=%g", box.a(), box.b(), box.k());
    if (extra_name) n += std::snprintf(buf + n, sizeof buf - n, " %s=%g", extra_name, extra);
    if (extra2_name) std::snprintf(buf + n, sizeof buf - n, " %s=%g", extra2_name, extra2);
    return buf;
}

quad::Options tight() {
    quad::Options o;
    o.abs_tol = 1e-13;
    o.rel_tol = 4e-14;
    return o;
}

double H(const CoefficientBox& box, double r, double T) {
    return bounds::occupation_bound_at_distance(box, r, T, tight()).value;
}

double brownian_closed_form(const CoefficientBox& box, double r, double T) {
    const double a2 = box.a() * box.a(), b = box.b();
    const double z = r / (b * std::sqrt(T));
    return 2.0 * std::sqrt(T) * (b / a2) * normal_pdf(z) - (2.0 * r / a2) * normal_cdf(-z);
}

std::string describe(const char* label, double v) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%s=%.10g", label, v);
    return buf;
}

}  // namespace

std::vector<CheckReport> run_analytic_suite(const AnalyticGrid& grid, const SuiteOptions& opts) {
    std::vector<CheckReport> out;
    if (grid.empty()) return out;
    detail::Recorder rec(out);
    auto tolv = [&](double nominal) { return opts.tolerance_override.value_or(nominal); };
    const auto& t = opts.tol;

    for (const auto& box : grid.boxes) {
        const double a2 = box.a() * box.a(), b = box.b(), k = box.k();
        for (double T : grid.T) {
            for (double r_grid : grid.r) {
                const bool zero_plus = r_grid == 0.0;
                const double r = zero_plus ? kZeroPlus : r_grid;
                const auto point = fmt_point(box, "r", r, "T", T);

                rec.run("boundary_T0", point, CheckKind::exact, 0.0, [&] {
                    const double g0 = bounds::occupation_bound(box, Query(0.0, r, 0.0)).value;
                    return detail::Outcome{std::abs(g0), describe("G0", g0)};
                });

                rec.run("translation_invariance", point, CheckKind::exact, 0.0, [&] {
                    // dyadic r and shift keep both differences exact
                    const double rd = std::ldexp(std::nearbyint(std::ldexp(r, 24)), -24);
                    const double g = bounds::occupation_bound(box, Query(0.0, rd, T)).value;
                    const double g_shift = bounds::occupation_bound(box, Query(1.25, 1.25 + rd, T)).value;
                    const double g_mirror = bounds::occupation_bound(box, Query(rd, 0.0, T)).value;
                    return detail::Outcome{std::max(std::abs(g - g_shift), std::abs(g - g_mirror)), describe("G", g)};
                });

                if (k == 0.0) {
                    rec.run("k0_reduction", point, CheckKind::residual, tolv(t.k0_reduction), [&] {
                        const double h = H(box, r, T);
                        return detail::Outcome{std::abs(h - brownian_closed_form(box, r, T)), describe("H", h)};
                    });
                }

                rec.run("dH_sign", point, CheckKind::residual, tolv(t.sign), [&] {
                    const double d = bounds::dH_dr(box, r, T).value;
                    return detail::Outcome{d, describe("dH", d)};
                });
                rec.run("d2H_sign", point, CheckKind::residual, tolv(t.sign), [&] {
                    const double d2 = bounds::d2H_dr2(box, r, T).value;
                    return detail::Outcome{-d2, describe("d2H", d2)};
                });

                rec.run("time_derivative_fd", point, CheckKind::residual, tolv(t.hjb_fd), [&] {
                    const double hT = 1e-4 * T;
                    const double dT = (H(box, r, T + hT) - H(box, r, T - hT)) / (2.0 * hT);
                    const double rate = bounds::density_rate(box, r, T);
                    return detail::Outcome{std::abs(dT - rate), describe("rate", rate)};
                });

                if (zero_plus) continue;
                const double h = 1e-4 * std::max(1.0, r);

                rec.run("convexity_fd", point, CheckKind::residual, tolv(t.convexity_fd), [&] {
                    const double second = H(box, r + h, T) - 2.0 * H(box, r, T) + H(box, r - h, T);
                    return detail::Outcome{-second / (h * h), describe("d2H_fd", second / (h * h))};
                });

                rec.run("hjb_time_fd", point, CheckKind::residual, tolv(t.hjb_fd), [&] {
                    const double hT = 1e-4 * T;
                    const double dT = (H(box, r, T + hT) - H(box, r, T - hT)) / (2.0 * hT);
                    const double hp = H(box, r + h, T), h0 = H(box, r, T), hm = H(box, r - h, T);
                    const double dr = (hp - hm) / (2.0 * h);
                    const double drr = (hp - 2.0 * h0 + hm) / (h * h);
                    const double res = dT + k * b * b * dr - 0.5 * b * b * drr;
                    return detail::Outcome{std::abs(res), describe("dT", dT)};
                });

                rec.run("hjb_time_integral", point, CheckKind::residual, tolv(t.hjb_integral), [&] {
                    const double dT = bounds::density_rate(box, r, T);
                    const double dr = bounds::dH_dr(box, r, T, 1e-12).value;
                    const double drr = bounds::d2H_dr2(box, r, T, 1e-12).value;
                    const double res = dT + k * b * b * dr - 0.5 * b * b * drr;
                    return detail::Outcome{std::abs(res), describe("dT", dT)};
                });
            }

            rec.run("monotone_in_r", fmt_point(box, "T", T), CheckKind::residual, tolv(t.sign), [&] {
                std::vector<double> rs;
                for (double r : grid.r) rs.push_back(r == 0.0 ? kZeroPlus : r);
                std::sort(rs.begin(), rs.end());
                double worst = -std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i + 1 < rs.size(); ++i) worst = std::max(worst, H(box, rs[i + 1], T) - H(box, rs[i], T));
                return detail::Outcome{rs.size() < 2 ? 0.0 : worst, std::string("max H(r_next) - H(r)")};
            });

            rec.run("derivative_limit", fmt_point(box, "T", T), CheckKind::residual, tolv(t.derivative_limit), [&] {
                const double h0 = bounds::occupation_bound_at_level(box, T);
                auto D = [&](double hh) { return (H(box, 2.0 * hh, T) - h0) / (2.0 * hh); };
                const double d1 = D(1e-2), d2 = D(1e-3), d3 = D(1e-4);
                const double r1 = (10.0 * d2 - d1) / 9.0;
                const double r2 = (10.0 * d3 - d2) / 9.0;
                const double lim = (100.0 * r2 - r1) / 99.0;
                return detail::Outcome{std::abs(lim + 1.0 / a2), describe("limit", lim)};
            });
        }

        for (double r_grid : grid.r) {
            const double r = r_grid == 0.0 ? kZeroPlus : r_grid;
            rec.run("monotone_in_T", fmt_point(box, "r", r), CheckKind::residual, tolv(t.sign), [&] {
                std::vector<double> Ts = grid.T;
                std::sort(Ts.begin(), Ts.end());
                double worst = -std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i + 1 < Ts.size(); ++i) worst = std::max(worst, H(box, r, Ts[i]) - H(box, r, Ts[i + 1]));
                return detail::Outcome{Ts.size() < 2 ? 0.0 : worst, std::string("max H(T) - H(T_next)")};
            });
        }

        for (double lambda : grid.lambda) {
            for (double r_grid : grid.r) {
                const double r = r_grid == 0.0 ? kZeroPlus : r_grid;
                const auto point = fmt_point(box, "r", r, "lambda", lambda);
                rec.run("laplace_consistency", point, CheckKind::residual, tolv(t.laplace), [&] {
                    const auto lc = bounds::laplace_consistency(box, r, lambda, t.laplace);
                    return detail::Outcome{lc.residual, describe("Q", lc.closed_form)};
                });
                rec.run("laplace_hjb", point, CheckKind::residual, tolv(t.laplace_hjb), [&] {
                    const auto q = bounds::resolvent_derivatives(box, r, lambda);
                    const double res = -lambda * q.value + k * b * b * std::abs(q.d_r) + 0.5 * b * b * q.d_rr;
                    return detail::Outcome{std::abs(res), describe("Q", q.value)};
                });
            }
            rec.run("pasting", fmt_point(box, "lambda", lambda), CheckKind::residual, tolv(t.pasting), [&] {
                const double y = 0.3;
                const double jump = bounds::resolvent_dx(box, y, y, lambda, bounds::Side::right) -
                                    bounds::resolvent_dx(box, y, y, lambda, bounds::Side::left);
                return detail::Outcome{std::abs(jump + 2.0 / a2), describe("jump", jump)};
            });
        }
    }
    return out;
}

}  // namespace occbound::verify
