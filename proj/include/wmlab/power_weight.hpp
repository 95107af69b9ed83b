#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wmlab/error.hpp"
#include "wmlab/gauss.hpp"

// Exact (closed-form or machine-precision) integrals of the power weight
// |x|^a over intervals in R and axis-parallel rectangles in R^2.

namespace wmlab::power_weight {

namespace detail {

// \int_0^t x^a dx, a > -1.
inline double from_origin_1d(double t, double a) { return std::pow(t, a + 1.0) / (a + 1.0); }

// \int_lo^hi x^a dx for 0 < lo <= hi.
inline double positive_interval(double lo, double hi, double a) {
    if (hi <= lo) return 0.0;
    const double rel = std::log1p((hi - lo) / lo);
    if (a == -1.0) return rel;
    return std::pow(lo, a + 1.0) * std::expm1((a + 1.0) * rel) / (a + 1.0);
}

inline void check_local(double a, int dim) {
    if (!(a > -dim))
        fail(ErrorKind::non_integrable,
             "power weight |x|^" + std::to_string(a) + " is not integrable near the origin in dimension " +
                 std::to_string(dim));
}

// \int_0^U (1+u^2)^{a/2} du by geometric composite Gauss panels.
inline double radial_profile_integral(double U, double a) {
    if (U <= 0.0) return 0.0;
    auto f = [a](double u) { return std::pow(1.0 + u * u, 0.5 * a); };
    double s = 0.0, lo = 0.0, hi = std::min(U, 1.0);
    while (true) {
        s += gauss_integrate(f, lo, hi, 24);
        if (hi >= U) break;
        lo = hi;
        hi = std::min(U, 2.0 * hi);
    }
    return s;
}

}  // namespace detail

/// \int_lo^hi |x|^a dx. Throws non_integrable when the interval reaches
/// the origin and a <= -1.
inline double interval(double lo, double hi, double a) {
    if (hi <= lo) return 0.0;
    if (lo >= 0.0) {
        if (lo == 0.0) {
            detail::check_local(a, 1);
            return detail::from_origin_1d(hi, a);
        }
        return detail::positive_interval(lo, hi, a);
    }
    if (hi <= 0.0) return interval(-hi, -lo, a);
    detail::check_local(a, 1);
    return detail::from_origin_1d(-lo, a) + detail::from_origin_1d(hi, a);
}

/// \int_{[0,A]x[0,B]} |x|^a dx, a > -2. Polar split along the diagonal gives
/// (A^{a+2} J(B/A) + B^{a+2} J(A/B)) / (a+2) with J(U) = \int_0^U (1+u^2)^{a/2}.
inline double corner_rectangle(double A, double B, double a) {
    if (A <= 0.0 || B <= 0.0) return 0.0;
    detail::check_local(a, 2);
    return (std::pow(A, a + 2.0) * detail::radial_profile_integral(B / A, a) +
            std::pow(B, a + 2.0) * detail::radial_profile_integral(A / B, a)) /
           (a + 2.0);
}

namespace detail {

// first-quadrant rectangle not touching the origin; adaptive tensor Gauss
inline double quadrant_off_origin(double u0, double u1, double v0, double v1, double a, int depth = 0) {
    const double size = std::max(u1 - u0, v1 - v0);
    const double dist = std::hypot(u0, v0);
    if (size <= 0.5 * dist || depth > 60) {
        const auto& rule = gauss_legendre(12);
        const double um = 0.5 * (u0 + u1), uh = 0.5 * (u1 - u0);
        const double vm = 0.5 * (v0 + v1), vh = 0.5 * (v1 - v0);
        double s = 0.0;
        for (int i = 0; i < 12; ++i) {
            const double u = um + uh * rule.nodes[i];
            double row = 0.0;
            for (int j = 0; j < 12; ++j) {
                const double v = vm + vh * rule.nodes[j];
                row += rule.weights[j] * std::pow(u * u + v * v, 0.5 * a);
            }
            s += rule.weights[i] * row;
        }
        return s * uh * vh;
    }
    const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
    return quadrant_off_origin(u0, um, v0, vm, a, depth + 1) + quadrant_off_origin(um, u1, v0, vm, a, depth + 1) +
           quadrant_off_origin(u0, um, vm, v1, a, depth + 1) + quadrant_off_origin(um, u1, vm, v1, a, depth + 1);
}

inline double quadrant(double u0, double u1, double v0, double v1, double a) {
    if (u1 <= u0 || v1 <= v0) return 0.0;
    if (u0 == 0.0 && v0 == 0.0) return corner_rectangle(u1, v1, a);
    if (a > -2.0 && std::max(u1 - u0, v1 - v0) > 0.5 * std::hypot(u0, v0)) {
        return corner_rectangle(u1, v1, a) - corner_rectangle(u0, v1, a) - corner_rectangle(u1, v0, a) +
               corner_rectangle(u0, v0, a);
    }
    return quadrant_off_origin(u0, u1, v0, v1, a);
}

}  // namespace detail

/// \int over [x0,x1]x[y0,y1] of |x|^a. Throws non_integrable when the
/// closed rectangle contains the origin and a <= -2.
inline double rectangle(double x0, double x1, double y0, double y1, double a) {
    if (x1 <= x0 || y1 <= y0) return 0.0;
    // fold into the first quadrant
    auto pieces = [](double lo, double hi, double out[2][2]) {
        int k = 0;
        if (lo < 0.0) {
            out[k][0] = std::max(0.0, -hi);
            out[k][1] = -lo;
            ++k;
        }
        if (hi > 0.0) {
            out[k][0] = std::max(0.0, lo);
            out[k][1] = hi;
            ++k;
        }
        return k;
    };
    double px[2][2], py[2][2];
    const int nx = pieces(x0, x1, px), ny = pieces(y0, y1, py);
    double s = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) s += detail::quadrant(px[i][0], px[i][1], py[j][0], py[j][1], a);
    return s;
}

/// \int over the cube centered at c (dim 1 or 2) with side `side`, minus the
/// open cube (-cutoff, cutoff)^dim. cutoff = 0 means no excision.
inline double cube_minus_core(const double* center, double side, int dim, double a, double cutoff = 0.0) {
    const double h = 0.5 * side;
    if (dim == 1) {
        const double lo = center[0] - h, hi = center[0] + h;
        if (cutoff <= 0.0) return interval(lo, hi, a);
        return interval(lo, std::min(hi, -cutoff), a) + interval(std::max(lo, cutoff), hi, a);
    }
    const double x0 = center[0] - h, x1 = center[0] + h, y0 = center[1] - h, y1 = center[1] + h;
    if (cutoff <= 0.0) return rectangle(x0, x1, y0, y1, a);
    const double c = cutoff;
    double s = 0.0;
    s += rectangle(x0, std::min(x1, -c), y0, y1, a);  // x <= -c
    s += rectangle(std::max(x0, c), x1, y0, y1, a);   // x >= c
    const double mx0 = std::max(x0, -c), mx1 = std::min(x1, c);
    s += rectangle(mx0, mx1, std::max(y0, c), y1, a);   // |x| < c, y >= c
    s += rectangle(mx0, mx1, y0, std::min(y1, -c), a);  // |x| < c, y <= -c
    return s;
}

}  // namespace wmlab::power_weight
