#include "occbound/profile.hpp"

#include "occbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>

namespace occbound::integral {

namespace {

void check_support(double lo, double hi, double tail_sup, const char* what) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw UnboundedSupportError(std::string(what) + ": support [lo, hi] must be finite with lo < hi");
    }
    if (!std::isfinite(tail_sup) || tail_sup < 0.0) {
        throw UnboundedSupportError(std::string(what) + ": tail bound outside the support must be finite and >= 0");
    }
}

std::vector<double> sample_points(double lo, double hi, std::size_t n, const std::vector<double>& extra) {
    std::vector<double> pts;
    pts.reserve(n + extra.size());
    for (std::size_t i = 0; i < n; ++i) pts.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
    for (double b : extra) {
        if (b >= lo && b <= hi) pts.push_back(b);
    }
    return pts;
}

}  // namespace

void ProfileFunction::validate() const {
    if (!f) throw std::invalid_argument("profile: missing evaluation map");
    check_support(lo, hi, tail_sup, "profile");
    for (double y : sample_points(lo, hi, 257, breakpoints)) {
        const double v = f(y);
        if (!(v >= 0.0)) throw DomainError("profile: f(" + std::to_string(y) + ") = " + std::to_string(v) + " is not >= 0");
    }
}

double ProfileFunction::sup_estimate(std::size_t samples) const {
    double m = tail_sup;
    for (double y : sample_points(lo, hi, std::max<std::size_t>(samples, 2), breakpoints)) m = std::max(m, f(y));
    return m;
}

ProfileFunction ProfileFunction::zero() {
    return {[](double) { return 0.0; }, 0.0, 1.0, 0.0, {}, "zero"};
}

ProfileFunction ProfileFunction::indicator(double c, double d) {
    if (!(c < d)) throw std::invalid_argument("indicator: need c < d");
    return {[c, d](double y) { return (y >= c && y <= d) ? 1.0 : 0.0; }, c, d, 0.0, {}, "indicator"};
}

ProfileFunction ProfileFunction::tent(double center, double half_width, double height) {
    if (!(half_width > 0.0) || !(height >= 0.0)) throw std::invalid_argument("tent: need half_width > 0, height >= 0");
    return {[=](double y) { return height * std::max(0.0, 1.0 - std::abs(y - center) / half_width); },
            center - half_width,
            center + half_width,
            0.0,
            {center},
            "tent"};
}

ProfileFunction ProfileFunction::gaussian(double mean, double sd, double height, double cutoff) {
    if (!(sd > 0.0) || !(height >= 0.0) || !(cutoff > 0.0)) {
        throw std::invalid_argument("gaussian: need sd > 0, height >= 0, cutoff > 0");
    }
    return {[=](double y) {
                const double z = (y - mean) / sd;
                return height * std::exp(-0.5 * z * z);
            },
            mean - cutoff * sd,
            mean + cutoff * sd,
            height * std::exp(-0.5 * cutoff * cutoff),
            {mean},
            "gaussian"};
}

ProfileFunction ProfileFunction::piecewise_linear(std::vector<std::pair<double, double>> nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("piecewise profile: need at least two nodes");
    std::vector<double> ys;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0 && !(nodes[i].first > nodes[i - 1].first)) {
            throw std::invalid_argument("piecewise profile: y column must be strictly increasing");
        }
        if (!(nodes[i].second >= 0.0)) throw DomainError("piecewise profile: f values must be >= 0");
        ys.push_back(nodes[i].first);
    }
    const double lo = nodes.front().first, hi = nodes.back().first;
    auto shared = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(nodes));
    return {[shared](double y) {
                const auto& n = *shared;
                if (y < n.front().first || y > n.back().first) return 0.0;
                auto it = std::upper_bound(n.begin(), n.end(), y,
                                           [](double v, const std::pair<double, double>& p) { return v < p.first; });
                if (it == n.end()) return n.back().second;
                const auto& [y1, f1] = *it;
                const auto& [y0, f0] = *(it - 1);
                const double w = (y - y0) / (y1 - y0);
                return (1.0 - w) * f0 + w * f1;
            },
            lo, hi, 0.0, std::move(ys), "piecewise"};
}

ProfileFunction ProfileFunction::combine(double alpha, const ProfileFunction& f, double beta, const ProfileFunction& g) {
    if (!(alpha >= 0.0) || !(beta >= 0.0)) throw std::invalid_argument("combine: weights must be >= 0");
    ProfileFunction out;
    out.f = [alpha, beta, ff = f.f, gf = g.f](double y) { return alpha * ff(y) + beta * gf(y); };
    out.lo = std::min(f.lo, g.lo);
    out.hi = std::max(f.hi, g.hi);
    out.tail_sup = alpha * f.tail_sup + beta * g.tail_sup;
    out.breakpoints = f.breakpoints;
    out.breakpoints.insert(out.breakpoints.end(), g.breakpoints.begin(), g.breakpoints.end());
    for (double e : {f.lo, f.hi, g.lo, g.hi}) out.breakpoints.push_back(e);
    out.label = "combination";
    return out;
}

void TimeProfileFunction::validate() const {
    if (!f) throw std::invalid_argument("time profile: missing evaluation map");
    check_support(lo, hi, tail_sup, "time profile");
}

double TimeProfileFunction::sup_estimate(double T, std::size_t samples) const {
    double m = tail_sup;
    const auto ys = sample_points(lo, hi, std::max<std::size_t>(samples, 2), breakpoints);
    const auto ts = sample_points(0.0, T, std::max<std::size_t>(samples / 8, 2), time_breakpoints);
    for (double t : ts) {
        for (double y : ys) m = std::max(m, f(t, y));
    }
    return m;
}

TimeProfileFunction TimeProfileFunction::from_profile(const ProfileFunction& g) {
    TimeProfileFunction out;
    out.f = [gf = g.f](double, double y) { return gf(y); };
    out.lo = g.lo;
    out.hi = g.hi;
    out.tail_sup = g.tail_sup;
    out.breakpoints = g.breakpoints;
    out.label = g.label;
    return out;
}

TimeProfileFunction TimeProfileFunction::separable(std::function<double(double)> w, const ProfileFunction& g) {
    TimeProfileFunction out = from_profile(g);
    out.tail_sup = g.tail_sup * w(0.0);
    out.f = [w = std::move(w), gf = g.f](double t, double y) { return w(t) * gf(y); };
    out.label = "separable(" + g.label + ")";
    return out;
}

ProfileFunction TimeProfileFunction::at_time(double t0) const {
    return {[ff = f, t0](double y) { return ff(t0, y); }, lo, hi, tail_sup, breakpoints, label + "@t"};
}

TimeProfileFunction time_profile_from_grid(const std::vector<TimeProfileNode>& rows) {
    std::vector<double> ts, ys;
    for (const auto& r : rows) {
        ts.push_back(r.t);
        ys.push_back(r.y);
    }
    auto unique_sorted = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    unique_sorted(ts);
    unique_sorted(ys);
    if (ys.size() < 2 || ts.empty()) throw std::invalid_argument("time profile grid: need >= 2 distinct y and >= 1 t");
    const std::size_t nt = ts.size(), ny = ys.size();
    if (rows.size() != nt * ny) throw std::invalid_argument("time profile grid: rows do not form a full t x y grid");
    std::map<std::pair<double, double>, double> cell;
    for (const auto& r : rows) {
        if (!(r.f >= 0.0)) throw DomainError("time profile grid: f values must be >= 0");
        if (!cell.emplace(std::make_pair(r.t, r.y), r.f).second) {
            throw std::invalid_argument("time profile grid: duplicate (t, y) row");
        }
    }
    auto values = std::make_shared<std::vector<double>>(nt * ny);
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < ny; ++j) (*values)[i * ny + j] = cell.at({ts[i], ys[j]});
    }
    auto tgrid = std::make_shared<const std::vector<double>>(ts);
    auto ygrid = std::make_shared<const std::vector<double>>(ys);
    TimeProfileFunction out;
    out.f = [values, tgrid, ygrid](double t, double y) {
        const auto& T = *tgrid;
        const auto& Y = *ygrid;
        if (y < Y.front() || y > Y.back()) return 0.0;
        auto locate = [](const std::vector<double>& g, double v, std::size_t& i, double& w) {
            if (g.size() == 1 || v <= g.front()) {
                i = 0;
                w = 0.0;
                return;
            }
            if (v >= g.back()) {
                i = g.size() - 2;
                w = 1.0;
                return;
            }
            i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), v) - g.begin()) - 1;
            w = (v - g[i]) / (g[i + 1] - g[i]);
        };
        std::size_t it = 0, iy = 0;
        double wt = 0.0, wy = 0.0;
        locate(T, t, it, wt);
        locate(Y, y, iy, wy);
        const std::size_t ny = Y.size();
        auto at = [&](std::size_t i, std::size_t j) { return (*values)[i * ny + j]; };
        const double row0 = (1.0 - wy) * at(it, iy) + wy * at(it, iy + 1);
        if (T.size() == 1) return row0;
        const double row1 = (1.0 - wy) * at(it + 1, iy) + wy * at(it + 1, iy + 1);
        return (1.0 - wt) * row0 + wt * row1;
    };
    out.lo = ys.front();
    out.hi = ys.back();
    out.breakpoints = ys;
    out.time_breakpoints = ts;
    out.label = "grid";
    return out;
}

}  // namespace occbound::integral
