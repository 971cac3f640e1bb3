#include "occbound/simulation.hpp"

#include "occbound/core_bounds.hpp"
#include "occbound/detail/ensemble.hpp"
#include "occbound/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace occbound::sim {

void SimConfig::validate() const {
    auto fail = [](const std::string& what) { throw DomainError("SimConfig: " + what); };
    if (!std::isfinite(T) || T < 0.0) fail("T must be finite and >= 0");
    if (!std::isfinite(dt) || dt <= 0.0) fail("dt must be finite and > 0");
    if (!std::isfinite(N) || N <= 0.0) fail("N must be finite and > 0");
    if (n_paths == 0) fail("n_paths must be >= 1");
    if (!std::isfinite(x0)) fail("x0 must be finite");
    if (T / dt > 1e12) fail("T / dt exceeds 1e12 steps");
}

std::size_t SimConfig::steps() const {
    if (T == 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(T / dt * (1.0 - 1e-12)));
}

double SimConfig::effective_dt() const {
    const std::size_t n = steps();
    return n == 0 ? dt : T / static_cast<double>(n);
}

double window_resolution(double dt, double N, double b) noexcept { return dt * N * N * b * b; }

double bias_budget(const CoefficientBox& box, double dt, double N) {
    if (!(dt > 0.0) || !(N > 0.0)) throw DomainError("bias_budget: dt and N must be > 0");
    const double b = box.b();
    return 2.0 * (N * b * std::sqrt(dt) + b * b * box.k() * dt * N);
}

double suboptimality_constant(const CoefficientBox& box, double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("suboptimality_constant: T must be > 0");
    const double a = box.a(), b = box.b(), k = box.k();
    const double h0 = bounds::occupation_bound_at_level(box, T);
    const double first = std::pow(2.0, 2.5) * b * std::pow(T, 1.0 / 6.0) * std::cbrt(h0) / (a * a * std::sqrt(M_PI));
    const double second = 8.0 * b * b * k * h0 / (a * a);
    return 2.0 * std::max(first, second);
}

double suboptimality_budget(const CoefficientBox& box, double T, const MollificationParams& m) {
    return suboptimality_constant(box, T) / std::cbrt(static_cast<double>(m.M()));
}

namespace {

std::vector<std::string> resolution_warnings(const SimConfig& cfg, double max_sigma) {
    std::vector<std::string> out;
    const double res = window_resolution(cfg.effective_dt(), cfg.N, max_sigma);
    if (res > kResolutionThreshold) {
        std::ostringstream os;
        os << "under-resolved window: dt*N^2*b^2 = " << res << " > " << kResolutionThreshold;
        out.push_back(os.str());
    }
    return out;
}

OccupationEstimate make_estimate(EstimatorKind kind, double level, const detail::EnsembleResult& r, std::size_t j,
                                 const std::vector<std::string>& warnings) {
    OccupationEstimate e;
    e.kind = kind;
    e.level = level;
    e.mean = r.moments.mean.empty() ? 0.0 : r.moments.mean[j];
    e.std_error = r.moments.std_error(j);
    e.n_paths = r.moments.n;
    e.failed_paths = r.failed;
    e.warnings = warnings;
    if (r.failed > 0) e.warnings.push_back(std::to_string(r.failed) + " path(s) aborted on a non-finite state");
    return e;
}

}  // namespace

OccupationProfile estimate_occupation_profile(const FeedbackControl& ctrl, const SimConfig& cfg,
                                              const std::vector<double>& levels) {
    const std::size_t L = levels.size();
    const double half_width = 1.0 / cfg.N;
    const double scale = 0.5 * cfg.N * cfg.effective_dt();
    // acc[0..L) window, acc[L..2L) local time
    auto observe = [&](double t, double x, double sigma, double* acc) {
        for (std::size_t j = 0; j < L; ++j) {
            if (std::abs(x - levels[j]) <= half_width) {
                acc[j] += scale;
                const double sy = ctrl.diffusion(t, levels[j]);
                acc[L + j] += scale * (sigma * sigma) / (sy * sy);
            }
        }
    };
    const auto result = detail::run_ensemble(ctrl, cfg, 2 * L, observe);
    const auto warnings = resolution_warnings(cfg, result.max_sigma);
    OccupationProfile profile;
    for (std::size_t j = 0; j < L; ++j) {
        profile.window.push_back(make_estimate(EstimatorKind::window, levels[j], result, j, warnings));
        profile.local_time.push_back(make_estimate(EstimatorKind::local_time, levels[j], result, L + j, warnings));
    }
    return profile;
}

OccupationEstimate estimate_occupation_density(const FeedbackControl& ctrl, const SimConfig& cfg, double y) {
    const double half_width = 1.0 / cfg.N;
    const double scale = 0.5 * cfg.N * cfg.effective_dt();
    const auto result = detail::run_ensemble(ctrl, cfg, 1, [&](double, double x, double, double* acc) {
        acc[0] += std::abs(x - y) <= half_width ? scale : 0.0;
    });
    return make_estimate(EstimatorKind::window, y, result, 0, resolution_warnings(cfg, result.max_sigma));
}

OccupationEstimate estimate_local_time(const FeedbackControl& ctrl, const SimConfig& cfg, double y) {
    return estimate_occupation_profile(ctrl, cfg, {y}).local_time.front();
}

PathSummary simulate_paths(const FeedbackControl& ctrl, const SimConfig& cfg, const PathVisitor& visit) {
    cfg.validate();
    const std::size_t n = cfg.steps();
    const double dt = cfg.effective_dt();
    PathSummary summary;
    double max_sigma = 0.0;
    for (std::size_t p = 0; p < cfg.n_paths; ++p) {
        bool ok[1];
        detail::run_paths<1>(
            ctrl, cfg, n, dt, p, 1, max_sigma, ok,
            [&](std::size_t, std::size_t i, double t, double x, double) { visit(p, i, t, x); },
            [&](std::size_t, double x) { visit(p, n, cfg.T, x); });
        ok[0] ? ++summary.completed : ++summary.failed;
    }
    return summary;
}

std::vector<std::vector<double>> materialize_paths(const FeedbackControl& ctrl, const SimConfig& cfg,
                                                   std::size_t max_values) {
    cfg.validate();
    const std::size_t per_path = cfg.steps() + 1;
    if (per_path > max_values / cfg.n_paths) {
        throw std::length_error("materialize_paths: ensemble exceeds " + std::to_string(max_values) + " states");
    }
    std::vector<std::vector<double>> paths(cfg.n_paths);
    simulate_paths(ctrl, cfg, [&](std::size_t p, std::size_t, double, double x) { paths[p].push_back(x); });
    return paths;
}

}  // namespace occbound::sim
