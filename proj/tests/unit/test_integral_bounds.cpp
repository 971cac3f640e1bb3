#include "occbound/core_bounds.hpp"
#include "occbound/errors.hpp"
#include "occbound/integral_bounds.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace occbound;
using namespace occbound::integral;
using occbound::testing::brownian_bound;
using occbound::testing::ref_cdf;
using occbound::testing::simpson;

namespace {

// Simpson over [lo, hi] split at the kink y = x.
template <class F>
double simpson_split(F&& f, double lo, double hi, double x, int n) {
    if (x <= lo || x >= hi) return simpson(f, lo, hi, n);
    return simpson(f, lo, x, n) + simpson(f, x, hi, n);
}

const CoefficientBox kBrownian(1.0, 1.0, 0.0);
const CoefficientBox kDrift(1.0, 2.0, 1.0);

}  // namespace

TEST(Profile, Validation) {
    ProfileFunction f = ProfileFunction::indicator(0, 1);
    EXPECT_NO_THROW(f.validate());
    f.hi = std::numeric_limits<double>::infinity();
    EXPECT_THROW(f.validate(), UnboundedSupportError);
    f = ProfileFunction::indicator(0, 1);
    f.tail_sup = NAN;
    EXPECT_THROW(f.validate(), UnboundedSupportError);
    ProfileFunction neg{[](double) { return -1.0; }, 0, 1, 0, {}, "neg"};
    EXPECT_THROW(neg.validate(), DomainError);
    EXPECT_THROW(path_integral_bound(kBrownian, 0, 1, neg), DomainError);
}

TEST(Profile, Shapes) {
    const auto tent = ProfileFunction::tent(1.0, 0.5, 2.0);
    EXPECT_DOUBLE_EQ(tent(1.0), 2.0);
    EXPECT_DOUBLE_EQ(tent(1.25), 1.0);
    EXPECT_EQ(tent(2.0), 0.0);
    EXPECT_DOUBLE_EQ(tent.sup_estimate(), 2.0);
    const auto g = ProfileFunction::gaussian(0.0, 0.5, 1.0, 6.0);
    EXPECT_NEAR(g.tail_sup, std::exp(-18.0), 1e-22);
    const auto pl = ProfileFunction::piecewise_linear({{0, 0}, {1, 2}, {3, 0}});
    EXPECT_DOUBLE_EQ(pl(0.5), 1.0);
    EXPECT_DOUBLE_EQ(pl(2.0), 1.0);
    EXPECT_EQ(pl(-1.0), 0.0);
    EXPECT_THROW(ProfileFunction::piecewise_linear({{0, 0}, {0, 1}}), std::invalid_argument);
}

TEST(PathIntegralBound, ZeroProfile) {
    EXPECT_EQ(path_integral_bound(kDrift, 0.3, 1.0, ProfileFunction::zero()).value, 0.0);
}

TEST(PathIntegralBound, ZeroHorizon) {
    EXPECT_EQ(path_integral_bound(kDrift, 0.3, 0.0, ProfileFunction::indicator(0, 1)).value, 0.0);
}

TEST(PathIntegralBound, IndicatorMatchesBrownianOracle) {
    for (auto [c, d] : {std::pair{-1.0, 0.5}, std::pair{0.2, 1.7}, std::pair{-5.0, 5.0}}) {
        const double x = 0.0, T = 1.0;
        const auto rep = path_integral_bound(kBrownian, x, T, ProfileFunction::indicator(c, d), 1e-10);
        const double oracle =
            simpson_split([&](double y) { return brownian_bound(1, 1, std::abs(x - y), T); }, c, d, x, 4000);
        EXPECT_NEAR(rep.value, oracle, 1e-9) << c << " " << d;
        EXPECT_LT(rep.abs_error_estimate, 1e-9);
    }
}

TEST(PathIntegralBound, ConstantOneGivesHorizonForEqualDiffusionBounds) {
    // whole-line mass of G is T b^2 / a^2 when k = 0
    ProfileFunction one{[](double) { return 1.0; }, -3.0, 3.0, 1.0, {}, "one"};
    EXPECT_NEAR(path_integral_bound(kBrownian, 0.0, 2.0, one).value, 2.0, 1e-8);
    const CoefficientBox spread(1.0, 1.5, 0.0);
    const double v = path_integral_bound(spread, 0.0, 2.0, one).value;
    EXPECT_NEAR(v, 2.0 * 2.25, 1e-8);
    EXPECT_GT(v, 2.0);
}

TEST(PathIntegralBound, ConstantOneExceedsHorizonWithDrift) {
    ProfileFunction one{[](double) { return 1.0; }, -4.0, 4.0, 1.0, {}, "one"};
    EXPECT_GE(path_integral_bound(kDrift, 0.0, 1.0, one).value, 1.0);
}

TEST(PathIntegralBound, DriftCaseAgainstNestedSimpson) {
    const double x = 0.4, T = 0.7;
    const auto f = ProfileFunction::tent(0.0, 1.0, 3.0);
    const auto rep = path_integral_bound(kDrift, x, T, f, 1e-10);
    auto integrand = [&](double y) {
        return f(y) * bounds::occupation_bound_at_distance(kDrift, std::abs(x - y), T).value;
    };
    const double oracle = simpson(integrand, -1.0, 0.0, 400) + simpson(integrand, 0.0, x, 400) +
                          simpson(integrand, x, 1.0, 400);
    EXPECT_NEAR(rep.value, oracle, 1e-9);
}

TEST(PathIntegralBound, TailCertificate) {
    const auto g = ProfileFunction::gaussian(0.0, 0.3, 1.0, 4.0);
    const auto rep = path_integral_bound(kDrift, 0.0, 1.0, g);
    const double cert = tail_certificate(kDrift, 0.0, 1.0, g.lo, g.hi, g.tail_sup);
    EXPECT_GT(cert, 0.0);
    EXPECT_LT(cert, 1e-2);
    ProfileFunction bare = g;
    bare.tail_sup = 0.0;
    EXPECT_NEAR(rep.value - path_integral_bound(kDrift, 0.0, 1.0, bare).value, cert, 1e-12);
    // the certificate dominates the actual tail contribution
    const double far = simpson([&](double y) {
        return g(y) * bounds::occupation_bound_at_distance(kDrift, y, 1.0).value;
    }, g.hi, 12.0, 4000);
    EXPECT_GE(cert, 2 * far);
}

TEST(PathIntegralBound, TailMassOutsideSupportOnEitherSide) {
    // x left of the support: the left tail contains the whole left half line
    const double m0 = bounds::occupation_mass_beyond(kDrift, 0.0, 1.0).value;
    const double inside = 2 * m0 - tail_certificate(kDrift, -0.5, 1.0, 0.0, 1.0, 1.0);
    const double direct = simpson([&](double y) {
        return bounds::occupation_bound_at_distance(kDrift, y + 0.5, 1.0).value;
    }, 0.0, 1.0, 400);
    EXPECT_NEAR(inside, direct, 1e-9);
}

TEST(PathIntegralBound, Linearity) {
    const auto f = ProfileFunction::indicator(-0.5, 0.25);
    const auto g = ProfileFunction::tent(0.5, 0.75);
    const double bf = path_integral_bound(kDrift, 0.1, 1.0, f).value;
    const double bg = path_integral_bound(kDrift, 0.1, 1.0, g).value;
    const double bc = path_integral_bound(kDrift, 0.1, 1.0, ProfileFunction::combine(2.0, f, 0.5, g)).value;
    EXPECT_NEAR(bc, 2.0 * bf + 0.5 * bg, 1e-8);
}

TEST(PathIntegralBound, Monotone) {
    const auto small = ProfileFunction::indicator(-0.2, 0.2);
    const auto large = ProfileFunction::tent(0.0, 0.5, 2.0);  // >= 1 on [-0.25, 0.25]
    EXPECT_LE(path_integral_bound(kDrift, 0.3, 1.0, small).value,
              path_integral_bound(kDrift, 0.3, 1.0, large).value + 1e-8);
}

TEST(PathIntegralBound, UnboundedSupportRefused) {
    ProfileFunction f{[](double) { return 1.0; }, -std::numeric_limits<double>::infinity(), 0.0, 0.0, {}, "half"};
    EXPECT_THROW(path_integral_bound(kDrift, 0, 1, f), UnboundedSupportError);
}

TEST(TimeIntegralBound, TimeConstantMatchesPathBound) {
    for (const auto& g : {ProfileFunction::indicator(-0.3, 0.6), ProfileFunction::tent(1.0, 0.5)}) {
        for (const auto& box : {kBrownian, kDrift}) {
            const double p = path_integral_bound(box, 0.2, 1.3, g, 1e-10).value;
            const double t = time_integral_bound(box, 0.2, 1.3, TimeProfileFunction::from_profile(g), 1e-10).value;
            EXPECT_NEAR(t, p, 1e-8);
        }
    }
}

TEST(TimeIntegralBound, ZeroCases) {
    const auto z = TimeProfileFunction::from_profile(ProfileFunction::zero());
    EXPECT_EQ(time_integral_bound(kDrift, 0, 1, z).value, 0.0);
    EXPECT_EQ(time_integral_bound(kDrift, 0, 0, TimeProfileFunction::from_profile(ProfileFunction::tent(0, 1))).value,
              0.0);
}

TEST(TimeIntegralBound, LinearDecayAgainstSwappedOrder) {
    // int_0^T (T - t) rate(r, t) dt = int_0^T H_s(r) ds
    const double T = 1.0, c = -0.4, d = 0.9, x = 0.1;
    const auto f = TimeProfileFunction::separable([T](double t) { return T - t; }, ProfileFunction::indicator(c, d));
    const double v = time_integral_bound(kDrift, x, T, f, 1e-10).value;
    auto inner = [&](double y) {
        const double r = std::abs(x - y);
        // s = T w^2 removes the sqrt(s) endpoint behaviour of H_s
        return simpson([&](double w) {
            return 2.0 * T * w * bounds::occupation_bound_at_distance(kDrift, r, T * w * w).value;
        }, 0.0, 1.0, 200);
    };
    const double swapped = simpson_split(inner, c, d, x, 200);
    EXPECT_NEAR(v, swapped, 1e-7);
}

TEST(TimeIntegralBound, DominatedByInitialProfile) {
    const auto g = ProfileFunction::tent(0.0, 1.0, 2.0);
    const auto f = TimeProfileFunction::separable([](double t) { return std::exp(-3.0 * t); }, g);
    const double refined = time_integral_bound(kDrift, 0.2, 1.0, f).value;
    const double coarse = path_integral_bound(kDrift, 0.2, 1.0, f.at_time(0.0)).value;
    EXPECT_LE(refined, coarse + 1e-8);
    EXPECT_LT(refined, 0.7 * coarse);
}

TEST(TimeIntegralBound, IncreasingProfileRefused) {
    const auto f = TimeProfileFunction::separable([](double t) { return t; }, ProfileFunction::indicator(0, 1));
    EXPECT_THROW(time_integral_bound(kDrift, 0, 1, f), HypothesisError);
}

TEST(TimeIntegralBound, NegativeProfileRefused) {
    TimeProfileFunction f;
    f.f = [](double, double y) { return y; };
    f.lo = -1;
    f.hi = 1;
    EXPECT_THROW(time_integral_bound(kDrift, 0, 1, f), DomainError);
}

TEST(TimeProfileGrid, BilinearAndShape) {
    std::vector<TimeProfileNode> rows;
    for (double t : {0.0, 1.0}) {
        for (double y : {-1.0, 0.0, 1.0}) rows.push_back({t, y, (2.0 - t) * (y == 0.0 ? 1.0 : 0.0)});
    }
    const auto f = time_profile_from_grid(rows);
    EXPECT_DOUBLE_EQ(f(0.0, 0.0), 2.0);
    EXPECT_DOUBLE_EQ(f(0.5, 0.0), 1.5);
    EXPECT_DOUBLE_EQ(f(0.5, 0.5), 0.75);
    EXPECT_DOUBLE_EQ(f(3.0, 0.0), 1.0);
    EXPECT_EQ(f(0.0, 2.0), 0.0);
    EXPECT_NO_THROW(time_integral_bound(kDrift, 0, 1, f));
    rows.pop_back();
    EXPECT_THROW(time_profile_from_grid(rows), std::invalid_argument);
}

TEST(MonteCarlo, ConstantOneIsHorizon) {
    sim::SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.n_paths = 100;
    ProfileFunction one{[](double) { return 1.0; }, -1, 1, 1, {}, "one"};
    const auto ctrl = sim::make_preset("bang_bang", kDrift, 0.0, 1.0, sim::MollificationParams(1));
    const auto e = mc_path_integral(ctrl, cfg, one);
    EXPECT_NEAR(e.mean, 1.0, 1e-12);
    EXPECT_LT(e.std_error, 1e-12);
}

TEST(MonteCarlo, IndicatorMatchesHeatKernel) {
    sim::SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.n_paths = 20000;
    cfg.x0 = 0.1;
    const double c = -0.5, d = 0.3, s = 1.3;
    const auto e = mc_path_integral(sim::make_constant_control(0.0, s, "bm"), cfg, ProfileFunction::indicator(c, d));
    // int_0^T P(X_t in [c, d]) dt with t = T w^2
    const double oracle = simpson([&](double w) {
        if (w == 0.0) return 0.0;
        const double sd = s * std::sqrt(cfg.T) * w;
        return 2.0 * cfg.T * w * (ref_cdf((d - cfg.x0) / sd) - ref_cdf((c - cfg.x0) / sd));
    }, 0.0, 1.0, 2000);
    EXPECT_LE(std::abs(e.mean - oracle), 3 * e.std_error + 2 * cfg.dt);
}

TEST(MonteCarlo, ZeroNoiseIsDeterministicRiemannSum) {
    sim::SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 0.01;
    cfg.n_paths = 3;
    cfg.x0 = -0.5;
    cfg.noise = sim::NoiseMode::zero;
    const auto f = ProfileFunction::tent(0.0, 0.4);
    const auto e = mc_path_integral(sim::make_constant_control(0.8, 1.0, "c"), cfg, f);
    double expected = 0.0, x = cfg.x0;
    for (int i = 0; i < 100; ++i) {
        expected += f(x) * cfg.dt;
        x += 0.8 * cfg.dt;
    }
    EXPECT_NEAR(e.mean, expected, 1e-14);
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(MonteCarlo, TimeProfileZeroHorizon) {
    sim::SimConfig cfg;
    cfg.T = 0.0;
    const auto f = TimeProfileFunction::from_profile(ProfileFunction::indicator(-1, 1));
    EXPECT_EQ(mc_path_integral(sim::make_constant_control(0, 1, "bm"), cfg, f).mean, 0.0);
}

TEST(Domination, PresetsUnderBounds) {
    sim::SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.n_paths = 1000;
    cfg.x0 = 0.1;
    const auto profiles = {ProfileFunction::indicator(-0.2, 0.2), ProfileFunction::tent(0.0, 0.3, 2.0),
                           ProfileFunction::gaussian(0.1, 0.2)};
    for (const auto& ctrl : sim::adversarial_suite(kDrift, 0.0, cfg.T, sim::MollificationParams(20))) {
        for (const auto& f : profiles) {
            const auto e = mc_path_integral(ctrl, cfg, f);
            const double bound = path_integral_bound(kDrift, cfg.x0, cfg.T, f).value;
            const double budget = path_integral_budget(kDrift, cfg.T, cfg.dt, f.sup_estimate());
            EXPECT_LE(e.mean, bound + 3 * e.std_error + budget) << ctrl.label << " " << f.label;
        }
        const auto decaying = TimeProfileFunction::separable([](double t) { return 1.0 - 0.5 * t; },
                                                             ProfileFunction::tent(0.0, 0.5));
        const auto e = mc_path_integral(ctrl, cfg, decaying);
        const double bound = time_integral_bound(kDrift, cfg.x0, cfg.T, decaying).value;
        EXPECT_LE(e.mean, bound + 3 * e.std_error + path_integral_budget(kDrift, cfg.T, cfg.dt, 1.0)) << ctrl.label;
    }
}

TEST(Budget, Formula) {
    const double h0 = bounds::occupation_bound_at_level(kDrift, 1.0);
    EXPECT_DOUBLE_EQ(path_integral_budget(kDrift, 1.0, 1e-4, 2.0), 4 * 2.0 * (2 * 1e-2 + 4 * 1e-4) * h0);
    EXPECT_THROW(path_integral_budget(kDrift, 1.0, 0.0, 1.0), DomainError);
}
