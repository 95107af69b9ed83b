#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "wmlab/error.hpp"

namespace wmlab {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

namespace detail {

inline GaussRule build_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace detail

inline constexpr int max_gauss_points = 64;

/// n-point Gauss-Legendre rule, 1 <= n <= 64. Rules are built once.
inline const GaussRule& gauss_legendre(int n) {
    require(n >= 1 && n <= max_gauss_points, ErrorKind::contract, "gauss_legendre: 1 <= n <= 64");
    static const auto rules = [] {
        std::array<GaussRule, max_gauss_points + 1> all;
        for (int k = 1; k <= max_gauss_points; ++k) all[k] = detail::build_gauss_legendre(k);
        return all;
    }();
    return rules[n];
}

/// Integrate f over [a, b] with an n-point rule.
template <class F>
double gauss_integrate(F&& f, double a, double b, int n = 20) {
    const auto& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

}  // namespace wmlab
