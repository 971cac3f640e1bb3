#include "occbound/control.hpp"

#include "occbound/errors.hpp"
#include "occbound/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

namespace occbound::sim {

MollificationParams::MollificationParams(int M) : M_(M) {
    if (M < 1) throw DomainError("MollificationParams: M must be >= 1, got " + std::to_string(M));
}

double ramp(double s, const MollificationParams& m) noexcept {
    return std::clamp(m.M() * s - 1.0, 0.0, 1.0);
}

FeedbackControl make_extremal_control(const CoefficientBox& box, double y, const MollificationParams& m) {
    const double a = box.a();
    const double spread = box.b() - box.a();
    const double k = box.k();
    const double M = m.M();
    auto sigma = [=](double x) {
        // branch-free clamp(Ms - 1, 0, 1); paths sit on the kinks, so branches mispredict
        const double ms = M * std::abs(x - y);
        return a + spread * 0.5 * (std::abs(ms - 1.0) - std::abs(ms - 2.0) + 1.0);
    };
    FeedbackControl ctrl;
    ctrl.diffusion = [sigma](double, double x) { return sigma(x); };
    ctrl.drift = [sigma, k, y](double, double x) {
        const double s = sigma(x);
        // copysign(., +0) is +, matching sign(0) = -1
        return std::copysign(k * s * s, y - x);
    };
    ctrl.joint = [sigma, k, y](double, double x) {
        const double s = sigma(x);
        return Coefficients{std::copysign(k * s * s, y - x), s};
    };
    ctrl.label = "extremal(M=" + std::to_string(m.M()) + ")";
    return ctrl;
}

FeedbackControl make_constant_control(double beta, double sigma, std::string label) {
    return {[beta](double, double) { return beta; }, [sigma](double, double) { return sigma; }, std::move(label)};
}

FeedbackControl make_table_control(std::vector<ControlNode> nodes, std::string label) {
    if (nodes.empty()) throw std::invalid_argument("control table: no nodes");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i].x > nodes[i - 1].x)) {
            throw std::invalid_argument("control table: x column must be strictly increasing");
        }
    }
    auto shared = std::make_shared<const std::vector<ControlNode>>(std::move(nodes));
    auto interpolate = [shared](double x, double ControlNode::*field) {
        const auto& n = *shared;
        if (x <= n.front().x) return n.front().*field;
        if (x >= n.back().x) return n.back().*field;
        auto hi = std::upper_bound(n.begin(), n.end(), x, [](double v, const ControlNode& c) { return v < c.x; });
        auto lo = hi - 1;
        const double w = (x - lo->x) / (hi->x - lo->x);
        return (1.0 - w) * (*lo).*field + w * (*hi).*field;
    };
    FeedbackControl ctrl;
    ctrl.drift = [interpolate](double, double x) { return interpolate(x, &ControlNode::beta); };
    ctrl.diffusion = [interpolate](double, double x) { return interpolate(x, &ControlNode::sigma); };
    ctrl.label = std::move(label);
    return ctrl;
}

SamplingGrid SamplingGrid::uniform(double t0, double t1, std::size_t nt, double x0, double x1, std::size_t nx) {
    auto linspace = [](double lo, double hi, std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        return v;
    };
    return {linspace(t0, t1, nt), linspace(x0, x1, nx)};
}

AdmissibilityReport validate_admissible(const CoefficientBox& box, const FeedbackControl& ctrl,
                                        const SamplingGrid& grid, double tol, std::size_t max_listed) {
    if (grid.empty()) throw std::invalid_argument("validate_admissible: empty sampling grid");
    AdmissibilityReport report;
    auto record = [&](Violation::Kind kind, double t, double x, double amount) {
        report.passed = false;
        report.worst_violation = std::max(report.worst_violation, amount);
        if (report.violations.size() < max_listed) report.violations.push_back({kind, t, x, amount});
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (double t : grid.times) {
        for (double x : grid.positions) {
            ++report.points_checked;
            const auto [beta, sigma] = ctrl(t, x);
            if (!std::isfinite(sigma)) {
                record(Violation::Kind::diffusion_range, t, x, inf);
                continue;
            }
            const double outside = std::max(box.a() - sigma, sigma - box.b());
            if (outside > tol) record(Violation::Kind::diffusion_range, t, x, outside);
            const double excess = std::isfinite(beta) ? std::abs(beta) - box.k() * sigma * sigma : inf;
            if (excess > tol) record(Violation::Kind::drift_bound, t, x, excess);
        }
    }
    return report;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"extremal",   "brownian",   "drift_plus",
                                                "drift_minus", "sinusoidal", "bang_bang"};
    return names;
}

FeedbackControl make_preset(const std::string& name, const CoefficientBox& box, double y, double T,
                            const MollificationParams& m) {
    const double a = box.a(), b = box.b(), k = box.k();
    if (name == "extremal") return make_extremal_control(box, y, m);
    if (name == "brownian") return make_constant_control(0.0, a, "brownian");
    if (name == "drift_plus") return make_constant_control(k * b * b, b, "drift_plus");
    if (name == "drift_minus") return make_constant_control(-k * b * b, b, "drift_minus");
    if (name == "sinusoidal") {
        auto sigma = [=](double x) { return a + 0.5 * (b - a) * (1.0 + std::sin(3.0 * (x - y))); };
        FeedbackControl ctrl;
        ctrl.diffusion = [sigma](double, double x) { return sigma(x); };
        ctrl.drift = [sigma, k, y](double, double x) {
            const double s = sigma(x);
            const double bound = k * s * s;
            return std::clamp(1.5 * bound * std::sin(5.0 * (x - y)), -bound, bound);
        };
        ctrl.label = "sinusoidal";
        return ctrl;
    }
    if (name == "bang_bang") {
        const double period = T > 0.0 ? T / 4.0 : 1.0;
        auto pulling = [period](double t) { return static_cast<long long>(std::floor(t / period)) % 2 == 0; };
        FeedbackControl ctrl;
        ctrl.diffusion = [=](double t, double) { return pulling(t) ? b : a; };
        ctrl.drift = [=](double t, double x) {
            return pulling(t) ? -k * b * b * signum(x - y) : k * a * a * signum(x - y);
        };
        ctrl.label = "bang_bang";
        return ctrl;
    }
    throw std::invalid_argument("unknown control preset '" + name + "'");
}

std::vector<FeedbackControl> adversarial_suite(const CoefficientBox& box, double y, double T,
                                               const MollificationParams& m) {
    std::vector<FeedbackControl> out;
    for (const auto& name : preset_names()) out.push_back(make_preset(name, box, y, T, m));
    return out;
}

}  // namespace occbound::sim
