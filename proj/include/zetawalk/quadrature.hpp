#pragma once

// Globally adaptive Gauss-Kronrod (G7/K15) integration on finite intervals.
//
// The interval with the largest error estimate is bisected until the summed
// estimate drops below max(abs_tol, rel_tol * |integral|). The error estimate
// of a panel is |K15 - G7|, which is conservative for smooth integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stop_token>
#include <string>
#include <vector>

#include "zetawalk/errors.hpp"

namespace zetawalk::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    std::size_t max_intervals = 4000;
    std::stop_token stop{};
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights belong to the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

template <class F>
Panel gk15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[j] * pair;
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * pair;
    }
    return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrates f over [a, b]. Throws ConvergenceError if the tolerance is not
/// met within opts.max_intervals panels, Cancelled if opts.stop is requested.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
    if (a == b) return {};
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw DomainError("quadrature bounds must be finite");
    }

    std::vector<detail::Panel> panels;
    panels.reserve(64);
    panels.push_back(detail::gk15(f, a, b));

    auto by_error = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };

    double total = panels.front().value;
    double error = panels.front().error;
    while (true) {
        if (!std::isfinite(total)) {
            throw ConvergenceError("quadrature produced a non-finite value");
        }
        const double target = std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
        if (error <= target) break;
        if (panels.size() >= opts.max_intervals) {
            throw ConvergenceError("quadrature did not reach tolerance: error " + std::to_string(error) +
                                   " > " + std::to_string(target));
        }
        if (opts.stop.stop_requested()) throw Cancelled();

        std::pop_heap(panels.begin(), panels.end(), by_error);
        const detail::Panel worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw ConvergenceError("quadrature interval underflow");
        }
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), by_error);
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), by_error);

        // Re-sum from scratch so accumulated update drift never masks the
        // stopping test.
        total = 0.0;
        error = 0.0;
        for (const auto& p : panels) {
            total += p.value;
            error += p.error;
        }
    }
    return {total, error, panels.size()};
}

}  // namespace zetawalk::quad
