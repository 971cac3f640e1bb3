#include "occbound/core_bounds.hpp"
#include "occbound/integral_bounds.hpp"
#include "occbound/verification.hpp"
#include "recorder.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace occbound::verify {

namespace {

std::string point_label(const std::string& control, double x, double y, double T, const char* extra = nullptr,
                        double extra_value = 0.0) {
    char buf[256];
    int n = std::snprintf(buf, sizeof buf, "control=%s x=%g y=%g T=%g", control.c_str(), x, y, T);
    if (extra) std::snprintf(buf + n, sizeof buf - n, " %s=%g", extra, extra_value);
    return buf;
}

void apply_strict(CheckReport& rep, const ExperimentOptions& opts) {
    if (opts.strict && !rep.warnings.empty()) rep.passed = false;
}

std::string kv(std::initializer_list<std::pair<const char*, double>> fields) {
    std::string s;
    char buf[64];
    for (const auto& [k, v] : fields) {
        std::snprintf(buf, sizeof buf, "%s%s=%.10g", s.empty() ? "" : " ", k, v);
        s += buf;
    }
    return s;
}

}  // namespace

std::vector<CheckReport> run_sharpness_experiment(const CoefficientBox& box, double x, double y, double T,
                                                  const std::vector<int>& Ms, sim::SimConfig cfg,
                                                  const ExperimentOptions& opts) {
    std::vector<CheckReport> out;
    detail::Recorder rec(out);
    cfg.x0 = x;
    cfg.T = T;
    for (int M : Ms) {
        const auto label = point_label("extremal", x, y, T, "M", M);
        sim::OccupationEstimate est;
        double G = 0.0, bias = 0.0, subopt = 0.0;
        auto& main = rec.run("sharpness", label, CheckKind::margin, 0.0, [&] {
            const sim::MollificationParams m(M);
            const auto ctrl = sim::make_extremal_control(box, y, m);
            est = sim::estimate_occupation_density(ctrl, cfg, y);
            G = bounds::occupation_bound(box, Query(x, y, T)).value;
            bias = sim::bias_budget(box, cfg.effective_dt(), cfg.N);
            subopt = sim::suboptimality_budget(box, T, m);
            const double lower = G - 3.0 * est.std_error - bias - subopt;
            return detail::Outcome{est.mean - lower,
                                   kv({{"G", G}, {"mean", est.mean}, {"se", est.std_error}, {"bias", bias},
                                       {"subopt", subopt}, {"ratio", est.mean / G}}),
                                   est.warnings};
        });
        apply_strict(main, opts);
        if (std::isnan(main.value)) continue;

        if (opts.min_ratio) {
            auto& ratio = rec.run("sharpness_ratio", label, CheckKind::margin, 0.0, [&] {
                return detail::Outcome{est.mean - *opts.min_ratio * G,
                                       kv({{"ratio", est.mean / G}, {"min_ratio", *opts.min_ratio}}), est.warnings};
            });
            apply_strict(ratio, opts);
        }

        if (box.a() == box.b()) {
            const double slack = 3.0 * est.std_error + bias;
            auto& two = rec.run("sharpness_two_sided", label, CheckKind::residual, slack, [&] {
                return detail::Outcome{std::abs(est.mean - G), kv({{"G", G}, {"mean", est.mean}}), est.warnings};
            });
            apply_strict(two, opts);
        }
    }
    return out;
}

std::vector<CheckReport> run_validity_experiment(const CoefficientBox& box,
                                                 const std::vector<sim::FeedbackControl>& controls,
                                                 const std::vector<std::pair<double, double>>& queries,
                                                 sim::SimConfig cfg, const ExperimentOptions& opts) {
    std::vector<CheckReport> out;
    detail::Recorder rec(out);
    std::map<double, std::vector<double>> by_start;
    for (const auto& [x, y] : queries) by_start[x].push_back(y);
    const double bias = sim::bias_budget(box, cfg.effective_dt(), cfg.N);

    for (const auto& ctrl : controls) {
        for (const auto& [x, levels] : by_start) {
            cfg.x0 = x;
            sim::OccupationProfile prof;
            std::string error;
            try {
                prof = sim::estimate_occupation_profile(ctrl, cfg, levels);
            } catch (const std::exception& e) {
                error = e.what();
            }
            for (std::size_t i = 0; i < levels.size(); ++i) {
                const double y = levels[i];
                auto& rep = rec.run("validity", point_label(ctrl.label, x, y, cfg.T), CheckKind::margin, 0.0, [&] {
                    if (!error.empty()) throw std::runtime_error(error);
                    const auto& est = prof.window[i];
                    const double G = bounds::occupation_bound(box, Query(x, y, cfg.T)).value;
                    return detail::Outcome{G + 3.0 * est.std_error + bias - est.mean,
                                           kv({{"G", G}, {"mean", est.mean}, {"se", est.std_error}, {"bias", bias}}),
                                           est.warnings};
                });
                apply_strict(rep, opts);
            }
        }
    }
    return out;
}

std::vector<CheckReport> run_integral_experiment(const CoefficientBox& box,
                                                 const std::vector<sim::FeedbackControl>& controls,
                                                 const std::vector<integral::ProfileFunction>& profiles,
                                                 sim::SimConfig cfg, const ExperimentOptions& opts) {
    std::vector<CheckReport> out;
    detail::Recorder rec(out);
    const double x = cfg.x0, T = cfg.T;
    for (const auto& f : profiles) {
        double bound = 0.0;
        rec.run("time_reduction", point_label(f.label, x, 0.0, T), CheckKind::residual, 1e-8, [&] {
            bound = integral::path_integral_bound(box, x, T, f).value;
            const double timed =
                integral::time_integral_bound(box, x, T, integral::TimeProfileFunction::from_profile(f)).value;
            return detail::Outcome{std::abs(timed - bound), kv({{"path", bound}, {"time", timed}})};
        });
        for (const auto& ctrl : controls) {
            char label[256];
            std::snprintf(label, sizeof label, "control=%s profile=%s x=%g T=%g", ctrl.label.c_str(), f.label.c_str(),
                          x, T);
            auto& rep = rec.run("integral_validity", label, CheckKind::margin, 0.0, [&] {
                if (bound == 0.0) bound = integral::path_integral_bound(box, x, T, f).value;
                const auto mc = integral::mc_path_integral(ctrl, cfg, f);
                const double budget = integral::path_integral_budget(box, T, cfg.effective_dt(), f.sup_estimate());
                return detail::Outcome{bound + 3.0 * mc.std_error + budget - mc.mean,
                                       kv({{"bound", bound}, {"mean", mc.mean}, {"se", mc.std_error}, {"budget", budget}}),
                                       mc.warnings};
            });
            apply_strict(rep, opts);
        }
    }
    return out;
}

}  // namespace occbound::verify
