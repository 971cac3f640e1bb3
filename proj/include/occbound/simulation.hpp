#pragma once

#include "occbound/coefficient_box.hpp"
#include "occbound/control.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace occbound::sim {

enum class NoiseMode { gaussian, zero };

/**
 * Euler-Maruyama ensemble settings. The step is shrunk to T / ceil(T / dt) so
 * the grid ends exactly at T. `threads` only changes wall time: paths are
 * processed in fixed blocks reduced in block order, and path i always draws
 * from Philox stream i under `seed`.
 */
struct SimConfig {
    double T = 1.0;
    double dt = 1e-4;
    std::size_t n_paths = 1000;
    double x0 = 0.0;
    double N = 50.0;  ///< window half-width is 1/N
    std::uint64_t seed = 1;
    unsigned threads = 1;  ///< 0 means hardware concurrency
    NoiseMode noise = NoiseMode::gaussian;

    /// Throws DomainError on non-positive dt, N or n_paths, negative or non-finite T.
    void validate() const;
    std::size_t steps() const;
    double effective_dt() const;
};

enum class EstimatorKind { window, local_time };

struct OccupationEstimate {
    EstimatorKind kind = EstimatorKind::window;
    double level = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;       ///< paths that finished with a finite state
    std::size_t failed_paths = 0;  ///< paths aborted on a non-finite state
    std::vector<std::string> warnings;
};

struct OccupationProfile {
    std::vector<OccupationEstimate> window;
    std::vector<OccupationEstimate> local_time;
};

/// (N/2) * sum_i 1{|X_i - y| <= 1/N} dt, averaged over paths.
OccupationEstimate estimate_occupation_density(const FeedbackControl& ctrl, const SimConfig& cfg, double y);

/// Window estimator with each visit weighted by sigma(t_i, X_i)^2 / sigma(t_i, y)^2.
OccupationEstimate estimate_local_time(const FeedbackControl& ctrl, const SimConfig& cfg, double y);

/// Both estimators at every level from a single pass over the ensemble.
OccupationProfile estimate_occupation_profile(const FeedbackControl& ctrl, const SimConfig& cfg,
                                              const std::vector<double>& levels);

/// dt N^2 b^2 with b the largest diffusion seen; the window is under-resolved above 0.1.
double window_resolution(double dt, double N, double b) noexcept;
inline constexpr double kResolutionThreshold = 0.1;

/// Discretization slack c_b (N b sqrt(dt) + b^2 k dt N) with c_b = 2.
double bias_budget(const CoefficientBox& box, double dt, double N);

/// Gap C_3 / M^(1/3) between the extremal control and the bound, C_3 from the
/// second derivative of H over [0, T].
double suboptimality_constant(const CoefficientBox& box, double T);
double suboptimality_budget(const CoefficientBox& box, double T, const MollificationParams& m);

struct PathSummary {
    std::size_t completed = 0;
    std::size_t failed = 0;
};

/// Called once per grid point (t_0 = 0 ... t_n = T) of every path, paths in index order.
using PathVisitor = std::function<void(std::size_t path, std::size_t step, double t, double x)>;

/// Streams the ensemble through `visit` one state at a time, single threaded.
PathSummary simulate_paths(const FeedbackControl& ctrl, const SimConfig& cfg, const PathVisitor& visit);

/// Debug helper holding whole paths in memory; throws std::length_error above max_values states.
std::vector<std::vector<double>> materialize_paths(const FeedbackControl& ctrl, const SimConfig& cfg,
                                                   std::size_t max_values = 10'000'000);

}  // namespace occbound::sim
