#pragma once

#include "occbound/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace occbound::quad {

struct Options {
    double abs_tol = 1e-10;
    /// Also accept once the error is below rel_tol * |value|; 0 disables.
    double rel_tol = 0.0;
    int max_depth = 60;
    std::size_t max_intervals = 50000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 constants).
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double lo;
    double hi;
    double value;
    double error;
    int depth;
    bool operator<(const Interval& other) const { return error < other.error; }
};

template <class F>
Interval gk15(F& f, double lo, double hi, int depth) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> f_lo{};
    std::array<double, 7> f_hi{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        f_lo[j] = f(center - dx);
        f_hi[j] = f(center + dx);
        const double pair = f_lo[j] + f_hi[j];
        kronrod += kKronrodWeights[j] * pair;
        abs_sum += kKronrodWeights[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        asc += kKronrodWeights[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
    }
    const double value = kronrod * half;
    const double res_abs = abs_sum * std::abs(half);
    const double res_asc = asc * std::abs(half);
    double error = std::abs((kronrod - gauss) * half);
    if (res_asc != 0.0 && error != 0.0) {
        error = res_asc * std::min(1.0, std::pow(200.0 * error / res_asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        error = std::max(50.0 * eps * res_abs, error);
    }
    if (!std::isfinite(value) || !std::isfinite(error)) {
        throw ToleranceError("adaptive quadrature: non-finite integrand value on [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return {lo, hi, value, error, depth};
}

}  // namespace detail

/**
 * Globally adaptive Gauss-Kronrod (7/15) integration of f over [lo, hi].
 *
 * The interval with the largest error estimate is bisected until the summed
 * estimate drops below max(abs_tol, rel_tol * |value|). Interior breakpoints
 * seed the initial partition; use them where the integrand changes scale.
 * Throws ToleranceError when an interval would exceed max_depth bisections or
 * the partition grows past max_intervals.
 */
template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opts = {},
                 std::span<const double> breakpoints = {}) {
    Result out;
    if (lo == hi) return out;
    double sign = 1.0;
    if (hi < lo) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    std::size_t evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };

    std::vector<double> cuts{lo};
    for (double p : breakpoints) {
        if (p > lo && p < hi) cuts.push_back(p);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Interval> heap;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto piece = detail::gk15(counted, cuts[i], cuts[i + 1], 0);
        total += piece.value;
        total_error += piece.error;
        heap.push(piece);
    }

    auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (total_error > target()) {
        if (heap.size() >= opts.max_intervals) {
            throw ToleranceError("adaptive quadrature: subdivision limit reached, error estimate " +
                                 std::to_string(total_error));
        }
        const auto worst = heap.top();
        if (worst.depth >= opts.max_depth) {
            throw ToleranceError("adaptive quadrature: depth cap reached near x=" +
                                 std::to_string(worst.lo) + ", error estimate " +
                                 std::to_string(total_error));
        }
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        auto left = detail::gk15(counted, worst.lo, mid, worst.depth + 1);
        auto right = detail::gk15(counted, mid, worst.hi, worst.depth + 1);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    total_error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_error += heap.top().error;
        heap.pop();
    }
    out.value = sign * total;
    out.abs_error = total_error;
    out.evaluations = evals;
    return out;
}

}  // namespace occbound::quad
