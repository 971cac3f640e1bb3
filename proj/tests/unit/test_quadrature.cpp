#include "occbound/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace occbound;

TEST(Quadrature, PolynomialExactOnFirstPass) {
    auto r = quad::integrate([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 2.0);
    EXPECT_NEAR(r.value, 3.75 - 3.0 + 3.0, 1e-14);
    EXPECT_EQ(r.evaluations, 15u);
}

TEST(Quadrature, SmoothTranscendental) {
    auto r = quad::integrate([](double x) { return std::exp(-x) * std::cos(3.0 * x); }, 0.0, 10.0);
    const double exact = (1.0 - std::exp(-10.0) * (std::cos(30.0) - 3.0 * std::sin(30.0))) / 10.0;
    EXPECT_NEAR(r.value, exact, 1e-12);
    EXPECT_LE(r.abs_error, 1e-10);
}

TEST(Quadrature, ReversedLimitsFlipSign) {
    auto f = [](double x) { return std::sin(x); };
    EXPECT_NEAR(quad::integrate(f, 1.0, 0.0).value, -quad::integrate(f, 0.0, 1.0).value, 1e-15);
}

TEST(Quadrature, BreakpointsResolveNarrowPeak) {
    const double c = 0.123456;
    const double w = 1e-7;
    auto f = [&](double x) { return std::exp(-0.5 * (x - c) * (x - c) / (w * w)); };
    const double exact = w * std::sqrt(2.0 * M_PI);
    std::vector<double> cuts{c - 10 * w, c, c + 10 * w};
    auto r = quad::integrate(f, 0.0, 1.0, {.abs_tol = 1e-16}, cuts);
    EXPECT_NEAR(r.value, exact, 1e-14);
}

TEST(Quadrature, DepthCapRaises) {
    // Discontinuity that an absolute tolerance of 0 can never satisfy.
    auto f = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
    quad::Options opts;
    opts.abs_tol = 0.0;
    opts.max_depth = 20;
    EXPECT_THROW(quad::integrate(f, 0.0, 1.0, opts), ToleranceError);
}

TEST(Quadrature, NonFiniteIntegrandRaises) {
    EXPECT_THROW(quad::integrate([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0), ToleranceError);
}

TEST(Quadrature, RelativeToleranceStops) {
    auto f = [](double x) { return 1e6 * std::exp(x); };
    auto r = quad::integrate(f, 0.0, 1.0, {.abs_tol = 0.0, .rel_tol = 1e-13});
    EXPECT_NEAR(r.value / (1e6 * (std::exp(1.0) - 1.0)), 1.0, 1e-13);
}
