#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <span>
#include <vector>

#include "wmlab/error.hpp"
#include "wmlab/grid.hpp"
#include "wmlab/summation.hpp"

namespace wmlab {

/// (sum_i m_i |v_i|^p)^{1/p} for sample magnitudes v with cell masses m.
inline double lp_from_masses(std::span<const double> values, std::span<const double> masses, double p) {
    require(values.size() == masses.size(), ErrorKind::contract, "lp_from_masses: length mismatch");
    require(p > 0.0, ErrorKind::contract, "Lebesgue exponent must be positive");
    CompensatedSum s;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != 0.0) s.add(masses[i] * std::pow(std::abs(values[i]), p));
    return std::pow(s.value(), 1.0 / p);
}

/// sup_lambda lambda W({|v| > lambda})^{1/p}. The level-set mass is a step
/// function of lambda, so the sup is the max over sample values v_k of
/// v_k W({|v| >= v_k})^{1/p}.
inline double weak_from_masses(std::span<const double> values, std::span<const double> masses, double p) {
    require(values.size() == masses.size(), ErrorKind::contract, "weak_from_masses: length mismatch");
    require(p > 0.0, ErrorKind::contract, "Lebesgue exponent must be positive");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
    CompensatedSum mass;
    double best = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        const double v = std::abs(values[order[i]]);
        if (v == 0.0) break;
        while (i < order.size() && std::abs(values[order[i]]) == v) mass.add(masses[order[i++]]);
        best = std::max(best, v * std::pow(mass.value(), 1.0 / p));
    }
    return best;
}

namespace detail {

inline std::vector<double> magnitudes(const SampledFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = std::abs(f[i]);
    return v;
}

}  // namespace detail

/// (\int |f|^p |x|^a dx)^{1/p} with exact per-cell weight masses.
inline double weighted_lp_norm(const SampledFunction& f, double a, double p) {
    require(f.side() == Side::physical, ErrorKind::contract, "weighted_lp_norm: expected a physical-side function");
    const auto m = power_cell_masses(f.spec(), a);
    return lp_from_masses(detail::magnitudes(f), m, p);
}

/// weighted_lp_norm without the origin cell; allows a <= -1 in d = 1 for
/// functions that vanish at 0 fast enough.
inline double weighted_lp_norm_punctured(const SampledFunction& f, double a, double p) {
    require(f.side() == Side::physical, ErrorKind::contract, "weighted_lp_norm: expected a physical-side function");
    const auto m = punctured_power_cell_masses(f.spec(), a);
    return lp_from_masses(detail::magnitudes(f), m, p);
}

inline double weak_lp_norm(const SampledFunction& f, double a, double p) {
    require(f.side() == Side::physical, ErrorKind::contract, "weak_lp_norm: expected a physical-side function");
    const auto m = power_cell_masses(f.spec(), a);
    return weak_from_masses(detail::magnitudes(f), m, p);
}

namespace detail {

/// |F^|^2 on the transform grid together with the transform-side nodes.
/// For a frequency-side F the transform variable is x: F^(x) equals
/// (2 pi)^d inverse_ft(F)(-x), and the radial weights below make the sign
/// of x irrelevant.
inline SampledFunction transform_for_sobolev(const SampledFunction& F) {
    if (F.side() == Side::physical) return forward_ft(F);
    auto g = inverse_ft(F);
    const double c = std::pow(2.0 * std::numbers::pi, F.spec().dim());
    for (auto& z : g.samples()) z *= c;
    return g;
}

inline double transform_cell(const SampledFunction& F) {
    return F.side() == Side::physical ? std::pow(F.spec().freq_spacing(), F.spec().dim()) : F.spec().cell_volume();
}

}  // namespace detail

/// (\int (1 + |xi|^2)^s |F^(xi)|^2 d xi)^{1/2}, hat over all variables.
inline double sobolev_norm(const SampledFunction& F, double s) {
    const auto G = detail::transform_for_sobolev(F);
    CompensatedSum acc;
    for (std::size_t i = 0; i < G.size(); ++i) {
        const auto x = G.point(i);
        const double r2 = x[0] * x[0] + x[1] * x[1];
        acc.add(std::pow(1.0 + r2, s) * std::norm(G[i]));
    }
    return std::sqrt(acc.value() * detail::transform_cell(F));
}

/// Product-type norm with weight prod_k (1 + |xi_k|^2)^{s_k}; the grid
/// dimension is split into N equal blocks.
inline double product_sobolev_norm(const SampledFunction& F, std::span<const double> s) {
    const int d = F.spec().dim();
    const int N = static_cast<int>(s.size());
    require(N >= 1 && d % N == 0, ErrorKind::contract, "product_sobolev_norm: dimension is not N n");
    const int n = d / N;
    const auto G = detail::transform_for_sobolev(F);
    CompensatedSum acc;
    for (std::size_t i = 0; i < G.size(); ++i) {
        const auto x = G.point(i);
        double w = 1.0;
        for (int k = 0; k < N; ++k) {
            double r2 = 0.0;
            for (int j = 0; j < n; ++j) r2 += x[k * n + j] * x[k * n + j];
            w *= std::pow(1.0 + r2, s[k]);
        }
        acc.add(w * std::norm(G[i]));
    }
    return std::sqrt(acc.value() * detail::transform_cell(F));
}

}  // namespace wmlab
