#pragma once

// Small one-dimensional numerical kernels shared by the geometry, comparison
// and bounds layers: Gauss-Legendre rules, bracketed scalar minimization and
// scan-then-polish suprema.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/minima.hpp>

#include "sticky/error.hpp"

namespace sticky::numerics {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Nodes and weights of the q-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline const GaussRule& gauss_legendre(int order) {
    require(order >= 2, "quadrature order must be at least 2");
    static std::mutex guard;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(guard);
    if (auto it = cache.find(order); it != cache.end()) return it->second;

    GaussRule rule;
    const auto positive = boost::math::legendre_p_zeros<double>(order);
    for (double x : positive) {
        const double dp = boost::math::legendre_p_prime(order, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        if (x == 0.0) {
            rule.nodes.push_back(0.0);
            rule.weights.push_back(w);
        } else {
            rule.nodes.push_back(-x);
            rule.weights.push_back(w);
            rule.nodes.push_back(x);
            rule.weights.push_back(w);
        }
    }
    std::vector<std::size_t> idx(rule.nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return rule.nodes[a] < rule.nodes[b]; });
    GaussRule sorted;
    for (auto i : idx) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return cache.emplace(order, std::move(sorted)).first->second;
}

/// Composite Gauss-Legendre integral of f over [a, b], split at every
/// breakpoint that falls strictly inside and then into `panels` equal pieces
/// per sub-interval.
template <class F>
double integrate(F&& f, double a, double b, int order = 16, int panels = 8,
                 const std::vector<double>& breakpoints = {}) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const GaussRule& rule = gauss_legendre(order);
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double lo = cuts[s], hi = cuts[s + 1];
        const double width = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double pa = lo + p * width;
            const double half = 0.5 * width, mid = pa + half;
            double acc = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) acc += rule.weights[q] * f(mid + half * rule.nodes[q]);
            total += half * acc;
        }
    }
    return total;
}

struct Extremum {
    double x;
    double value;
};

/// Minimizes f on [lo, hi] by Brent's method (golden section with parabolic steps).
template <class F>
Extremum minimize_bracketed(F&& f, double lo, double hi, int bits = 52, std::uintmax_t max_iter = 200) {
    if (!(hi > lo)) return {lo, f(lo)};
    auto r = boost::math::tools::brent_find_minima(f, lo, hi, bits, max_iter);
    return {r.first, r.second};
}

/// Supremum of f over [lo, hi]: uniform scan with `samples` points followed by
/// a bracketed polish around the best sample.
template <class F>
Extremum scan_sup(F&& f, double lo, double hi, int samples = 2001) {
    require(samples >= 2, "scan needs at least two samples");
    if (!(hi > lo)) return {lo, f(lo)};
    Extremum best{lo, -kInf};
    const double step = (hi - lo) / (samples - 1);
    int best_i = 0;
    for (int i = 0; i < samples; ++i) {
        const double x = (i == samples - 1) ? hi : lo + i * step;
        const double v = f(x);
        if (v > best.value) {
            best = {x, v};
            best_i = i;
        }
    }
    const double a = lo + std::max(0, best_i - 1) * step;
    const double b = std::min(hi, lo + (best_i + 1) * step);
    auto polished = minimize_bracketed([&](double x) { return -f(x); }, a, b);
    if (-polished.value > best.value) best = {polished.x, -polished.value};
    return best;
}

/// Log-spaced grid of `count` points on [lo, hi], endpoints included.
inline std::vector<double> log_grid(double lo, double hi, int count) {
    require(lo > 0.0 && hi > lo && count >= 2, "log grid needs 0 < lo < hi and at least two points");
    std::vector<double> grid(count);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < count; ++i) grid[i] = std::exp(a + (b - a) * i / (count - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

/// Result of minimizing over a log grid followed by a bracketed polish.
struct GridSearch {
    double x = 0.0;
    double value = kInf;
    double grid_x = 0.0;
    double grid_value = kInf;
    int grid_size = 0;
    double grid_ratio = 0.0;  ///< ratio between consecutive grid points
};

template <class F>
GridSearch minimize_on_log_grid(F&& f, double lo, double hi, int count) {
    const auto grid = log_grid(lo, hi, count);
    GridSearch out;
    out.grid_size = count;
    out.grid_ratio = grid[1] / grid[0];
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        if (v < out.grid_value) {
            out.grid_value = v;
            out.grid_x = grid[i];
            best = i;
        }
    }
    out.x = out.grid_x;
    out.value = out.grid_value;
    const double a = std::log(grid[best == 0 ? 0 : best - 1]);
    const double b = std::log(grid[std::min(best + 1, grid.size() - 1)]);
    auto polished = minimize_bracketed([&](double s) { return f(std::exp(s)); }, a, b);
    const double xp = std::exp(polished.x);
    const double vp = f(xp);
    if (vp < out.value) {
        out.x = xp;
        out.value = vp;
    }
    return out;
}

}  // namespace sticky::numerics
