#include "occbound/cli.hpp"
#include "occbound/core_bounds.hpp"
#include "occbound/integral_bounds.hpp"
#include "occbound/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace occbound;

namespace {

struct Outcome {
    bool passed = true;
    std::string summary;
    std::vector<std::string> failures;
};

double ref_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double ref_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

template <class F>
double simpson(F&& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

std::vector<CoefficientBox> grid_boxes() {
    return {CoefficientBox(1, 1, 0), CoefficientBox(1, 2, 0), CoefficientBox(1, 2, 1), CoefficientBox(0.5, 1.5, 2)};
}

Outcome from_reports(const std::vector<verify::CheckReport>& reports, const std::set<std::string>& names) {
    Outcome o;
    std::size_t n = 0;
    for (const auto& r : reports) {
        if (!names.count(r.name)) continue;
        ++n;
        if (!r.passed) {
            o.passed = false;
            o.failures.push_back(verify::to_json_line(r));
        }
    }
    if (n == 0) o.passed = false;
    o.summary = std::to_string(n) + " checks";
    return o;
}

void absorb(Outcome& o, const std::vector<verify::CheckReport>& reports) {
    for (const auto& r : reports) {
        if (!r.passed) {
            o.passed = false;
            o.failures.push_back(verify::to_json_line(r));
        }
    }
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Outcome closed_form() {
    const CoefficientBox box(1, 1, 0);
    const double g0 = bounds::occupation_bound(box, Query(0, 0, 1)).value;
    const double g1 = bounds::occupation_bound(box, Query(0, 1, 1)).value;
    const double oracle0 = std::sqrt(2.0 / M_PI);
    const double oracle1 = 2.0 * ref_pdf(1.0) - 2.0 * ref_cdf(-1.0);
    Outcome o;
    o.passed = std::abs(g0 - oracle0) < 1e-9 && std::abs(g1 - oracle1) < 1e-7;
    o.summary = fmt("G(r=0)=%.12f err %.1e, G(r=1)=%.12f", g0, std::abs(g0 - oracle0), g1) +
                fmt(" err %.1e", std::abs(g1 - oracle1));
    return o;
}

Outcome laplace() {
    Outcome o;
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& box : grid_boxes()) {
        for (double r : {verify::kZeroPlus, 0.1, 1.0, 5.0}) {
            for (double lambda : {0.5, 1.0, 3.0}) {
                const auto lc = bounds::laplace_consistency(box, r, lambda, 1e-8);
                worst = std::max(worst, lc.residual);
                ++n;
                if (!(lc.residual < 1e-8)) {
                    o.passed = false;
                    o.failures.push_back(fmt("a=%g b=%g k=%g", box.a(), box.b(), box.k()) +
                                         fmt(" r=%g lambda=%g residual=%.3e", r, lambda, lc.residual));
                }
            }
        }
    }
    o.summary = std::to_string(n) + " points, worst residual " + fmt("%.2e", worst);
    return o;
}

std::vector<verify::CheckReport> suite(std::vector<double> r, std::vector<double> T) {
    verify::AnalyticGrid g{grid_boxes(), std::move(r), std::move(T), {0.5, 1.0, 3.0}};
    return verify::run_analytic_suite(g);
}

Outcome hjb() {
    const auto reports = suite({0.1, 1.0, 5.0}, {0.5, 2.0});
    return from_reports(reports, {"hjb_time_fd", "laplace_hjb", "pasting"});
}

Outcome monotone() {
    auto o = from_reports(suite({0.0, 0.1, 1.0, 5.0}, {0.5, 2.0}), {"dH_sign", "d2H_sign"});
    verify::AnalyticGrid g{grid_boxes(), {0.1}, {0.5, 2.0}, {1.0}};
    const auto limit = from_reports(verify::run_analytic_suite(g), {"derivative_limit"});
    o.passed = o.passed && limit.passed;
    o.failures.insert(o.failures.end(), limit.failures.begin(), limit.failures.end());
    o.summary += " + " + limit.summary + " (derivative limit)";
    return o;
}

std::string warnings_note(const std::vector<verify::CheckReport>& reports) {
    std::size_t warned = 0;
    for (const auto& r : reports) warned += !r.warnings.empty();
    return warned ? ", " + std::to_string(warned) + " with resolution warnings (lenient)" : std::string();
}

Outcome validity() {
    const CoefficientBox box(1, 2, 1);
    sim::SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-4;
    cfg.N = 50;
    cfg.n_paths = 20000;
    cfg.seed = 2024;
    cfg.threads = 0;
    const auto ctrls = sim::adversarial_suite(box, 0.0, cfg.T, sim::MollificationParams(50));
    std::vector<std::pair<double, double>> queries;
    for (double x : {0.0, 0.3}) {
        for (double y : {0.0, 0.2, -0.5}) queries.emplace_back(x, y);
    }
    const auto reports = verify::run_validity_experiment(box, ctrls, queries, cfg);
    Outcome o;
    absorb(o, reports);
    double tightest = INFINITY;
    for (const auto& r : reports) tightest = std::min(tightest, r.value);
    o.summary = std::to_string(ctrls.size()) + " controls x " + std::to_string(queries.size()) + " queries, min margin " +
                fmt("%.4f", tightest) + warnings_note(reports);
    return o;
}

Outcome sharpness() {
    sim::SimConfig cfg;
    cfg.dt = 1e-5;
    cfg.N = 100;
    cfg.n_paths = 50000;
    cfg.seed = 77;
    cfg.threads = 0;
    verify::ExperimentOptions opts;
    opts.min_ratio = 0.8;
    Outcome o;
    std::vector<verify::CheckReport> all;
    for (const auto& box : {CoefficientBox(1, 2, 0), CoefficientBox(1, 2, 1), CoefficientBox(1, 1, 1)}) {
        const auto reports = verify::run_sharpness_experiment(box, 0.0, 0.0, 1.0, {50}, cfg, opts);
        absorb(o, reports);
        for (const auto& r : reports) {
            if (r.name != "sharpness") continue;
            if (!o.summary.empty()) o.summary += "; ";
            o.summary += fmt("[a=%g b=%g k=%g] ", box.a(), box.b(), box.k()) + r.details;
        }
        all.insert(all.end(), reports.begin(), reports.end());
    }
    o.summary += warnings_note(all);
    return o;
}

Outcome integrals() {
    Outcome o;
    sim::SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-4;
    cfg.n_paths = 20000;
    cfg.x0 = 0.1;
    cfg.seed = 5;
    cfg.threads = 0;
    const CoefficientBox box(1, 2, 1);
    const sim::MollificationParams m(50);
    std::vector<sim::FeedbackControl> ctrls;
    for (const char* name : {"extremal", "sinusoidal", "bang_bang"}) ctrls.push_back(sim::make_preset(name, box, 0.0, cfg.T, m));
    const std::vector profiles{integral::ProfileFunction::indicator(-0.3, 0.4),
                               integral::ProfileFunction::tent(0.0, 0.5, 2.0)};
    const auto reports = verify::run_integral_experiment(box, ctrls, profiles, cfg);
    absorb(o, reports);

    // Brownian motion, indicator of [c, d]: E int_0^T 1{x + W_s in [c, d]} ds against the heat kernel
    const CoefficientBox unit(1, 1, 0);
    const double c = -0.3, d = 0.4, x = cfg.x0, T = cfg.T;
    const double oracle = simpson(
        [&](double u) {
            if (u == 0.0) return 0.0;
            return 2.0 * u * (ref_cdf((d - x) / u) - ref_cdf((c - x) / u));  // s = u^2
        },
        0.0, std::sqrt(T), 20000);
    const auto mc = integral::mc_path_integral(sim::make_constant_control(0.0, 1.0, "brownian"), cfg,
                                               integral::ProfileFunction::indicator(c, d));
    const double dev = std::abs(mc.mean - oracle);
    if (!(dev <= 3.0 * mc.std_error)) {
        o.passed = false;
        o.failures.push_back(fmt("heat kernel: mc %.6f oracle %.6f se %.2e", mc.mean, oracle, mc.std_error));
    }
    const double bound = integral::path_integral_bound(unit, x, T, integral::ProfileFunction::indicator(c, d)).value;
    o.summary = std::to_string(reports.size()) + " checks; heat kernel " + fmt("%.5f vs mc %.5f (%.2f SE)", oracle, mc.mean, dev / mc.std_error) +
                fmt(", Brownian bound %.5f", bound);
    return o;
}

Outcome determinism() {
    auto run = [](const char* threads) {
        std::ostringstream out, err;
        const int code = cli::run({"simulate", "--a", "1", "--b", "2", "--k", "1", "--control", "extremal", "--M", "20",
                                   "--y", "0,0.1,-0.4", "--N", "20", "--n-paths", "3000", "--dt", "1e-3", "--seed",
                                   "31337", "--estimator", "both", "--threads", threads},
                                  out, err);
        return std::make_pair(code, out.str());
    };
    const auto one = run("1"), four = run("4"), eight = run("8");
    Outcome o;
    o.passed = one.first == 0 && one.second == four.second && one.second == eight.second && !one.second.empty();
    o.summary = std::to_string(one.second.size()) + " bytes, identical at 1/4/8 threads: " + (o.passed ? "yes" : "no");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "closed-form reduction", 1, closed_form},
        {2, "Laplace consistency", 10, laplace},
        {3, "HJB residuals", 10, hjb},
        {4, "monotonicity and derivative limit", 10, monotone},
        {5, "validity under admissible controls", 300, validity},
        {6, "sharpness of the extremal control", 600, sharpness},
        {7, "integral bounds", 300, integrals},
        {8, "determinism across threads", 600, determinism},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.passed = false;
            o.summary = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_s;
        const bool ok = o.passed && in_time;
        all = all && ok;
        std::printf("criterion %d %s: %s (%.2f s of %.0f s) %s\n", c.id, c.name, ok ? "PASS" : "FAIL", secs, c.budget_s,
                    o.summary.c_str());
        if (!in_time) std::printf("  over the runtime budget\n");
        for (const auto& f : o.failures) std::printf("  %s\n", f.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
