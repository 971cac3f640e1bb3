#pragma once

#include "occbound/coefficient_box.hpp"
#include "occbound/control.hpp"
#include "occbound/profile.hpp"
#include "occbound/simulation.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace occbound::verify {

/// residual: passes when value <= tolerance.
/// margin:   passes when value >= 0 (tolerance already folded in).
/// exact:    passes when value == 0.
enum class CheckKind { residual, margin, exact };

struct CheckReport {
    std::string name;
    std::string point;
    CheckKind kind = CheckKind::residual;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double runtime_s = 0.0;
    std::string details;
    std::vector<std::string> warnings;
};

/// Fills `passed` from kind, value and tolerance.
CheckReport make_check(std::string name, std::string point, CheckKind kind, double value, double tolerance,
                       std::string details = {});

bool all_passed(const std::vector<CheckReport>& reports);

/// One JSON object per line, in report order.
std::string to_json_lines(const std::vector<CheckReport>& reports);
std::string to_json_line(const CheckReport& report);

/// Fixed-width human summary with per-check totals.
std::string summary_table(const std::vector<CheckReport>& reports);

struct AnalyticGrid {
    std::vector<CoefficientBox> boxes;
    std::vector<double> r;  ///< 0 stands for the one-sided point 0+ (evaluated at 1e-6)
    std::vector<double> T;
    std::vector<double> lambda;

    /// (1,1,0), (1,2,0), (1,2,1), (0.5,1.5,2) x r {0+, 0.1, 1, 5} x T {0.1, 1, 4} x lambda {0.5, 1, 3}.
    static AnalyticGrid defaults();
    bool empty() const noexcept { return boxes.empty() || r.empty() || T.empty() || lambda.empty(); }
};

inline constexpr double kZeroPlus = 1e-6;

struct AnalyticTolerances {
    double hjb_fd = 1e-5;          ///< finite-difference HJB residual and T-derivative
    double hjb_integral = 1e-8;    ///< HJB residual with the derivative integrals
    double sign = 1e-12;           ///< slack on dH <= 0, d2H >= 0
    double convexity_fd = 1e-6;    ///< slack on second differences of H in r
    double derivative_limit = 1e-4;
    double laplace = 1e-8;
    double laplace_hjb = 1e-10;
    double pasting = 1e-12;
    double k0_reduction = 1e-9;
};

struct SuiteOptions {
    AnalyticTolerances tol{};
    /// Replaces every tolerance when set.
    std::optional<double> tolerance_override{};
};

/**
 * Analytic battery over the grid, in declaration order per point:
 *  boundary_T0, translation_invariance, k0_reduction (k = 0 boxes), dH_sign, d2H_sign,
 *  convexity_fd, time_derivative_fd, hjb_time_fd, hjb_time_integral (r > 0+),
 *  monotone_in_T, monotone_in_r, derivative_limit (per box, T),
 *  laplace_consistency, laplace_hjb (per box, r, lambda), pasting (per box, lambda).
 * Failures are recorded, never thrown; numerical exceptions become failed checks.
 */
std::vector<CheckReport> run_analytic_suite(const AnalyticGrid& grid, const SuiteOptions& opts = {});

struct ExperimentOptions {
    bool strict = false;  ///< warnings (under-resolved window, failed paths) fail the check
    /// Sharpness only: also require mean >= min_ratio * G.
    std::optional<double> min_ratio{};
};

/// Extremal control per M: margin mean - (G - 3 SE - bias - suboptimality(M)),
/// plus mean - min_ratio G when min_ratio is set. For a = b also the two-sided check |mean - G| <= 3 SE + bias.
std::vector<CheckReport> run_sharpness_experiment(const CoefficientBox& box, double x, double y, double T,
                                                  const std::vector<int>& Ms, sim::SimConfig cfg,
                                                  const ExperimentOptions& opts = {});

/// Every control and query (x, y): margin G + 3 SE + bias - mean. cfg.x0 and cfg.T
/// are overridden per query; queries sharing x share one ensemble.
std::vector<CheckReport> run_validity_experiment(const CoefficientBox& box,
                                                 const std::vector<sim::FeedbackControl>& controls,
                                                 const std::vector<std::pair<double, double>>& queries,
                                                 sim::SimConfig cfg, const ExperimentOptions& opts = {});

/// Every control and profile: margin path_integral_bound + 3 SE + path budget - mc mean,
/// plus the time-constant reduction of time_integral_bound per profile.
std::vector<CheckReport> run_integral_experiment(const CoefficientBox& box,
                                                 const std::vector<sim::FeedbackControl>& controls,
                                                 const std::vector<integral::ProfileFunction>& profiles,
                                                 sim::SimConfig cfg, const ExperimentOptions& opts = {});

}  // namespace occbound::verify
