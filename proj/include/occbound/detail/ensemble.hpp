#pragma once

#include "occbound/control.hpp"
#include "occbound/rng.hpp"
#include "occbound/simulation.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

namespace occbound::sim::detail {

inline constexpr std::size_t kBlockPaths = 64;

/// Per-coordinate running mean and centred second moment (Chan et al. merge).
struct Moments {
    std::size_t n = 0;
    std::vector<double> mean;
    std::vector<double> m2;

    explicit Moments(std::size_t width = 0) : mean(width, 0.0), m2(width, 0.0) {}

    void add(const double* v) {
        ++n;
        for (std::size_t j = 0; j < mean.size(); ++j) {
            const double d = v[j] - mean[j];
            mean[j] += d / static_cast<double>(n);
            m2[j] += d * (v[j] - mean[j]);
        }
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
        for (std::size_t j = 0; j < mean.size(); ++j) {
            const double d = o.mean[j] - mean[j];
            mean[j] += d * nb / nt;
            m2[j] += o.m2[j] + d * d * na * nb / nt;
        }
        n += o.n;
    }

    double std_error(std::size_t j) const {
        if (n < 2) return 0.0;
        const double var = std::max(0.0, m2[j] / static_cast<double>(n - 1));
        return std::sqrt(var / static_cast<double>(n));
    }
};

struct EnsembleResult {
    Moments moments;
    std::size_t failed = 0;
    double max_sigma = 0.0;
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(block) for every block index, spreading blocks over worker threads.
template <class Fn>
void parallel_blocks(std::size_t n_blocks, unsigned threads, const Fn& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n_blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) fn(b);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

/**
 * Euler-Maruyama for `count` <= Lanes paths starting at index `first`, advanced
 * in lockstep so that the serial state updates of different paths overlap.
 * step(lane, i, t_i, x_i, sigma_i) sees each state before its increment and
 * finish(lane, x_n) the terminal state. ok[lane] turns false once the state or
 * the coefficients stop being finite; that path is then frozen. max_sigma is
 * raised to the largest diffusion used.
 */
template <std::size_t Lanes, class Step, class Finish>
void run_paths(const FeedbackControl& ctrl, const SimConfig& cfg, std::size_t n_steps, double dt,
               std::size_t first, std::size_t count, double& max_sigma, bool (&ok)[Lanes], Step&& step,
               Finish&& finish) {
    constexpr std::size_t kBatch = 128;
    const double sqdt = std::sqrt(dt);
    const bool noisy = cfg.noise == NoiseMode::gaussian;
    rng::PhiloxStream engines[Lanes] = {};
    boost::random::normal_distribution<double> normal;
    double x[Lanes];
    double z[Lanes][kBatch] = {};
    for (std::size_t p = 0; p < Lanes; ++p) {
        engines[p] = rng::PhiloxStream(cfg.seed, first + p);
        x[p] = cfg.x0;
        ok[p] = p < count;
    }
    std::size_t alive = count;
    for (std::size_t i0 = 0; i0 < n_steps && alive > 0; i0 += kBatch) {
        const std::size_t len = std::min(kBatch, n_steps - i0);
        if (noisy) {
            for (std::size_t p = 0; p < count; ++p) {
                for (std::size_t j = 0; j < len; ++j) z[p][j] = normal(engines[p]);
            }
        }
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t i = i0 + j;
            const double t = static_cast<double>(i) * dt;
            for (std::size_t p = 0; p < count; ++p) {
                if (!ok[p]) continue;
                const auto [beta, sigma] = ctrl(t, x[p]);
                max_sigma = std::max(max_sigma, std::abs(sigma));
                step(p, i, t, x[p], sigma);
                x[p] += beta * dt + sigma * sqdt * z[p][j];
                if (!std::isfinite(x[p]) || !std::isfinite(sigma) || !std::isfinite(beta)) {
                    ok[p] = false;
                    --alive;
                }
            }
        }
    }
    for (std::size_t p = 0; p < count; ++p) {
        if (ok[p]) finish(p, x[p]);
    }
}

/**
 * Per-path vector functional of width `width`. observe(t, x, sigma, acc) is
 * called before every increment with acc zeroed at the start of each path;
 * accumulated values from completed paths enter the moments in path order.
 */
template <class Observe>
EnsembleResult run_ensemble(const FeedbackControl& ctrl, const SimConfig& cfg, std::size_t width,
                            const Observe& observe) {
    constexpr std::size_t kLanes = 8;
    static_assert(kBlockPaths % kLanes == 0);
    cfg.validate();
    const std::size_t n_steps = cfg.steps();
    const double dt = cfg.effective_dt();
    const std::size_t n_blocks = (cfg.n_paths + kBlockPaths - 1) / kBlockPaths;
    std::vector<EnsembleResult> blocks(n_blocks, EnsembleResult{Moments(width)});
    parallel_blocks(n_blocks, cfg.threads, [&](std::size_t b) {
        EnsembleResult& out = blocks[b];
        std::vector<double> acc(width * kLanes);
        const std::size_t end = std::min(cfg.n_paths, (b + 1) * kBlockPaths);
        for (std::size_t first = b * kBlockPaths; first < end; first += kLanes) {
            const std::size_t count = std::min(kLanes, end - first);
            std::fill(acc.begin(), acc.end(), 0.0);
            bool ok[kLanes];
            run_paths<kLanes>(
                ctrl, cfg, n_steps, dt, first, count, out.max_sigma, ok,
                [&](std::size_t p, std::size_t, double t, double x, double sigma) {
                    observe(t, x, sigma, acc.data() + p * width);
                },
                [](std::size_t, double) {});
            for (std::size_t p = 0; p < count; ++p) {
                if (ok[p]) {
                    out.moments.add(acc.data() + p * width);
                } else {
                    ++out.failed;
                }
            }
        }
    });
    EnsembleResult total{Moments(width)};
    for (const auto& b : blocks) {
        total.moments.merge(b.moments);
        total.failed += b.failed;
        total.max_sigma = std::max(total.max_sigma, b.max_sigma);
    }
    return total;
}

}  // namespace occbound::sim::detail
