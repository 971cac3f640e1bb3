#pragma once

#include "occbound/coefficient_box.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace occbound::sim {

using CoefficientMap = std::function<double(double t, double x)>;

struct Coefficients {
    double beta;
    double sigma;
};

/// State-and-time feedback control (beta, sigma) driving dX = beta dt + sigma dW.
struct FeedbackControl {
    CoefficientMap drift;
    CoefficientMap diffusion;
    std::string label;
    /// Optional fused evaluation of both maps; must agree with them exactly.
    std::function<Coefficients(double t, double x)> joint = {};

    Coefficients operator()(double t, double x) const {
        return joint ? joint(t, x) : Coefficients{drift(t, x), diffusion(t, x)};
    }
};

/// Width scale 1/M of the ramp joining sigma = a at the level to sigma = b away from it.
class MollificationParams {
public:
    /// Throws DomainError for M < 1.
    explicit MollificationParams(int M);
    int M() const noexcept { return M_; }

private:
    int M_;
};

/// g_M(s) = clamp(M s - 1, 0, 1): 0 on [0, 1/M], 1 on [2/M, inf), linear between.
double ramp(double s, const MollificationParams& m) noexcept;

/**
 * Near-optimal feedback control
 *   sigma_M(x) = a + (b - a) g_M(|x - y|),
 *   beta(x)    = -k sigma_M(x)^2 sign(x - y),   sign(0) = -1.
 */
FeedbackControl make_extremal_control(const CoefficientBox& box, double y, const MollificationParams& m);

FeedbackControl make_constant_control(double beta, double sigma, std::string label);

/// Piecewise-linear state feedback from a table of nodes, constant beyond the ends.
struct ControlNode {
    double x;
    double beta;
    double sigma;
};
/// Throws std::invalid_argument unless nodes are nonempty with strictly increasing x.
FeedbackControl make_table_control(std::vector<ControlNode> nodes, std::string label);

/// Cartesian grid of (t, x) points on which admissibility is checked.
struct SamplingGrid {
    std::vector<double> times;
    std::vector<double> positions;

    static SamplingGrid uniform(double t0, double t1, std::size_t nt, double x0, double x1, std::size_t nx);
    bool empty() const noexcept { return times.empty() || positions.empty(); }
};

struct Violation {
    enum class Kind { diffusion_range, drift_bound };
    Kind kind;
    double t;
    double x;
    double amount;  ///< distance outside the admissible set
};

struct AdmissibilityReport {
    bool passed = true;
    double worst_violation = 0.0;
    std::size_t points_checked = 0;
    std::vector<Violation> violations;  ///< capped at max_listed entries
};

/// Checks sigma in [a, b] and |beta| <= k sigma^2 on every grid point with
/// tolerance `tol`. Reports violations; never throws on them.
/// Throws std::invalid_argument on an empty grid.
AdmissibilityReport validate_admissible(const CoefficientBox& box, const FeedbackControl& ctrl,
                                        const SamplingGrid& grid, double tol = 1e-12,
                                        std::size_t max_listed = 32);

/// Names accepted by make_preset.
const std::vector<std::string>& preset_names();

/**
 * Built-in admissible controls targeting level y over horizon T:
 *  extremal     near-optimal control with ramp parameter M
 *  brownian     beta = 0, sigma = a
 *  drift_plus   beta = +k b^2, sigma = b
 *  drift_minus  beta = -k b^2, sigma = b
 *  sinusoidal   sigma and beta oscillate in x - y, beta clipped to the drift bound
 *  bang_bang    switches every T/4 between full pull towards y at sigma = b and
 *               full push away from y at sigma = a
 * Throws std::invalid_argument for an unknown name.
 */
FeedbackControl make_preset(const std::string& name, const CoefficientBox& box, double y, double T,
                            const MollificationParams& m);

/// Every preset, in preset_names() order.
std::vector<FeedbackControl> adversarial_suite(const CoefficientBox& box, double y, double T,
                                               const MollificationParams& m);

}  // namespace occbound::sim
