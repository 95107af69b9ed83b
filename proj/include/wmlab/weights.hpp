#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wmlab/error.hpp"
#include "wmlab/power_weight.hpp"

namespace wmlab {

enum class RegularityMode { standard, generalized };

/// Exponents of the counterexample. In standard mode the regularity is a
/// scalar s split evenly as s/N per variable; in generalized mode each
/// variable carries its own s_k.
struct ExponentConfig {
    int N = 2;
    int n = 1;
    RegularityMode mode = RegularityMode::standard;
    double s = 2.0;
    std::vector<double> s_vec;
    std::vector<double> p{2.0, 2.0};
    double alpha1 = std::numeric_limits<double>::quiet_NaN();
    double alpha2 = std::numeric_limits<double>::quiet_NaN();
    int ell = 0;
    double r = 0.0;  // 0 selects 1/(10N)
    double gamma = 0.05;

    bool has_alphas() const noexcept { return std::isfinite(alpha1) && std::isfinite(alpha2); }
    double s_k(int k) const { return mode == RegularityMode::standard ? s / N : s_vec.at(k); }
    double radius() const noexcept { return r > 0.0 ? r : 1.0 / (10.0 * N); }

    double p_total() const {
        double inv = 0.0;
        for (double pk : p) inv += 1.0 / pk;
        return 1.0 / inv;
    }

    /// Q_k: Nn/s in standard mode, n/s_k in generalized mode.
    double q_divisor(int k) const { return mode == RegularityMode::standard ? N * n / s : n / s_vec.at(k); }

    /// Exponents of the weight class: q_k = p_k / Q_k.
    std::vector<double> class_exponents() const {
        std::vector<double> q(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) q[k] = p[k] / q_divisor(static_cast<int>(k));
        return q;
    }
    double q_total() const {
        double inv = 0.0;
        for (double qk : class_exponents()) inv += 1.0 / qk;
        return 1.0 / inv;
    }

    std::vector<double> alphas() const {
        std::vector<double> a(static_cast<std::size_t>(N), 0.0);
        a[0] = alpha1;
        a[1] = alpha2;
        return a;
    }

    /// Exponent of nu = prod w_k^{p/p_k}.
    double a_nu() const { return p_total() * (alpha1 / p[0] + alpha2 / p[1]); }
};

inline const char* to_string(RegularityMode m) { return m == RegularityMode::standard ? "standard" : "generalized"; }

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream o;
    o.precision(12);
    o << x;
    return o.str();
}

inline void hypothesis(bool ok, const std::string& inequality, const std::string& values) {
    if (!ok) fail(ErrorKind::infeasible, "violated: " + inequality + " (" + values + ")");
}

}  // namespace detail

/// Hypotheses on (N, n, s, p) only.
inline void validate_hypotheses(const ExponentConfig& c) {
    using detail::fmt;
    using detail::hypothesis;
    hypothesis(c.N >= 2, "N >= 2", "N = " + std::to_string(c.N));
    hypothesis(c.n == 1 || c.n == 2, "n in {1, 2}", "n = " + std::to_string(c.n));
    hypothesis(static_cast<int>(c.p.size()) == c.N, "len(p) = N",
               "len(p) = " + std::to_string(c.p.size()) + ", N = " + std::to_string(c.N));
    const double Nn = c.N * c.n;
    if (c.mode == RegularityMode::standard) {
        hypothesis(Nn / 2 < c.s, "Nn/2 < s", "Nn/2 = " + fmt(Nn / 2) + ", s = " + fmt(c.s));
        hypothesis(c.s <= Nn, "s <= Nn", "s = " + fmt(c.s) + ", Nn = " + fmt(Nn));
        for (int k = 0; k < c.N; ++k)
            hypothesis(c.p[k] > Nn / c.s && std::isfinite(c.p[k]), "Nn/s < p_k < inf",
                       "k = " + std::to_string(k + 1) + ", Nn/s = " + fmt(Nn / c.s) + ", p_k = " + fmt(c.p[k]));
    } else {
        hypothesis(static_cast<int>(c.s_vec.size()) == c.N, "len(s_vec) = N",
                   "len(s_vec) = " + std::to_string(c.s_vec.size()));
        for (int k = 0; k < c.N; ++k) {
            const double sk = c.s_vec[k];
            hypothesis(c.n / 2.0 < sk, "n/2 < s_k", "k = " + std::to_string(k + 1) + ", s_k = " + fmt(sk));
            hypothesis(sk <= c.n, "s_k <= n", "k = " + std::to_string(k + 1) + ", s_k = " + fmt(sk));
            hypothesis(c.p[k] > c.n / sk && std::isfinite(c.p[k]), "n/s_k < p_k < inf",
                       "k = " + std::to_string(k + 1) + ", n/s_k = " + fmt(c.n / sk) + ", p_k = " + fmt(c.p[k]));
        }
    }
    for (double q : c.class_exponents())
        hypothesis(q > 1.0, "q_k > 1", "q_k = " + fmt(q));
    hypothesis(c.gamma > 0.0 && c.gamma < 0.25, "0 < gamma < 1/4", "gamma = " + fmt(c.gamma));
    hypothesis(c.ell >= 0, "ell >= 0", "ell = " + std::to_string(c.ell));
}

/// Every constraint of the construction, including those on alpha and ell.
inline void validate(const ExponentConfig& c) {
    using detail::fmt;
    using detail::hypothesis;
    validate_hypotheses(c);
    hypothesis(c.has_alphas(), "alpha1, alpha2 finite", "alpha1 = " + fmt(c.alpha1) + ", alpha2 = " + fmt(c.alpha2));
    const double n = c.n, p = c.p_total(), p1 = c.p[0], p2 = c.p[1];
    const double a1 = c.alpha1, a2 = c.alpha2, s1 = c.s_k(0), s2 = c.s_k(1);
    hypothesis(a1 / p1 + a2 / p2 > -n / p, "alpha1/p1 + alpha2/p2 > -n/p",
               "lhs = " + fmt(a1 / p1 + a2 / p2) + ", -n/p = " + fmt(-n / p));
    hypothesis(a1 / p1 < s1 - n / p1, "alpha1/p1 < s_1 - n/p1", "lhs = " + fmt(a1 / p1) + ", rhs = " + fmt(s1 - n / p1));
    hypothesis(a2 / p2 < s2 - n / p2, "alpha2/p2 < s_2 - n/p2", "lhs = " + fmt(a2 / p2) + ", rhs = " + fmt(s2 - n / p2));
    hypothesis(a1 / p1 < -n / p1 - s1 + n / 2, "alpha1/p1 < -n/p1 - s_1 + n/2",
               "lhs = " + fmt(a1 / p1) + ", rhs = " + fmt(-n / p1 - s1 + n / 2));
    hypothesis(a1 < -n, "alpha1 < -n", "alpha1 = " + fmt(a1));
    hypothesis(a2 > -n, "alpha2 > -n", "alpha2 = " + fmt(a2));
    hypothesis(p1 * (c.ell + 1) + a1 > -n, "p1 (ell + 1) + alpha1 > -n",
               "lhs = " + fmt(p1 * (c.ell + 1) + a1) + ", ell = " + std::to_string(c.ell));
}

/// Midpoints of the admissible intervals: first alpha2, then alpha1.
inline std::pair<double, double> choose_counterexample_exponents(const ExponentConfig& c) {
    validate_hypotheses(c);
    const double n = c.n, p = c.p_total(), p1 = c.p[0], p2 = c.p[1];
    const double s1 = c.s_k(0), s2 = c.s_k(1);
    const double a2_lo = std::max(0.0, p2 * (-n / p + n / p1 + s1 - n / 2));
    const double a2_hi = p2 * (s2 - n / p2);
    if (!(a2_lo < a2_hi))
        fail(ErrorKind::infeasible, "violated: empty alpha2 interval (" + detail::fmt(a2_lo) + ", " +
                                        detail::fmt(a2_hi) + ")");
    const double a2 = 0.5 * (a2_lo + a2_hi);
    const double a1_lo = p1 * (-a2 / p2 - n / p);
    const double a1_hi = p1 * (-n / p1 - s1 + n / 2);
    if (!(a1_lo < a1_hi))
        fail(ErrorKind::infeasible, "violated: empty alpha1 interval (" + detail::fmt(a1_lo) + ", " +
                                        detail::fmt(a1_hi) + ")");
    return {0.5 * (a1_lo + a1_hi), a2};
}

/// Copy of c with alpha chosen when not set, then fully validated.
inline ExponentConfig resolve_exponents(ExponentConfig c) {
    if (!c.has_alphas()) std::tie(c.alpha1, c.alpha2) = choose_counterexample_exponents(c);
    validate(c);
    return c;
}

/// Smallest ell with p1 (ell + 1) + alpha1 > -n.
inline int minimal_ell(const ExponentConfig& c) {
    int ell = 0;
    while (c.p[0] * (ell + 1) + c.alpha1 <= -c.n) ++ell;
    return ell;
}

/// w_k = |x|^{exponents[k]}.
struct PowerWeightVector {
    std::vector<double> exponents;

    static PowerWeightVector from(const ExponentConfig& c) { return {c.alphas()}; }
    static PowerWeightVector ones(int N) { return {std::vector<double>(static_cast<std::size_t>(N), 0.0)}; }

    std::size_t size() const noexcept { return exponents.size(); }
    double nu_exponent(std::span<const double> p) const {
        require(p.size() == exponents.size(), ErrorKind::contract, "PowerWeightVector: exponent count mismatch");
        double inv = 0.0, s = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            inv += 1.0 / p[k];
            s += exponents[k] / p[k];
        }
        return s / inv;
    }
};

struct Cube {
    std::array<double, 2> center{0.0, 0.0};
    double side = 1.0;
    int dim = 1;

    double volume() const noexcept { return dim == 1 ? side : side * side; }
    double center_norm() const noexcept { return std::hypot(center[0], center[1]); }
    bool origin_centered() const noexcept { return center[0] == 0.0 && center[1] == 0.0; }
};

/// Dyadic sides 2^{-K}..2^K, centers j 2^{-K/2} with |j| <= J per axis.
struct CubeFamily {
    int dim = 1;
    int K = 12;
    int J = 0;  // 0 selects 64 in d = 1 and 8 in d = 2
    bool origin_only = false;

    int lattice_extent() const noexcept { return J > 0 ? J : (dim == 1 ? 64 : 8); }
    double inner_cutoff() const noexcept { return std::exp2(-2.0 * K); }

    CubeFamily refined(int dK = 2) const {
        CubeFamily f = *this;
        f.K += dK;
        return f;
    }
    CubeFamily origin() const {
        CubeFamily f = *this;
        f.origin_only = true;
        return f;
    }

    std::vector<Cube> cubes() const {
        std::vector<Cube> out;
        const int Jx = origin_only ? 0 : lattice_extent();
        const int Jy = dim == 2 ? Jx : 0;
        const double spacing = std::exp2(-0.5 * K);
        for (int k = -K; k <= K; ++k)
            for (int i = -Jx; i <= Jx; ++i)
                for (int j = -Jy; j <= Jy; ++j) out.push_back({{i * spacing, j * spacing}, std::exp2(k), dim});
        return out;
    }
};

namespace detail {

/// Average of |x|^b over the cube with (-cutoff, cutoff)^d removed.
inline double power_average(const Cube& q, double b, double cutoff = 0.0) {
    if (b == 0.0 && cutoff == 0.0) return 1.0;
    return power_weight::cube_minus_core(q.center.data(), q.side, q.dim, b, cutoff) / q.volume();
}

}  // namespace detail

/// (avg nu)^{1/p} prod (avg w_k^{1-p_k'})^{1/p_k'} on one cube.
inline double multilinear_expression(const PowerWeightVector& w, std::span<const double> p, const Cube& q,
                                     double cutoff = 0.0) {
    double inv = 0.0;
    for (double pk : p) {
        require(pk > 1.0, ErrorKind::contract, "multilinear class exponents must exceed 1");
        inv += 1.0 / pk;
    }
    double v = std::pow(detail::power_average(q, w.nu_exponent(p), cutoff), inv);
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double dual = -1.0 / (p[k] - 1.0);  // 1 - p'
        v *= std::pow(detail::power_average(q, w.exponents[k] * dual, cutoff), 1.0 - 1.0 / p[k]);
    }
    return v;
}

/// (avg nu)^{1/p} prod (avg w_k^{1-(p_k/q_k)'})^{1/q_k - 1/p_k} on one cube.
inline double pq_expression(const PowerWeightVector& w, std::span<const double> P, std::span<const double> Q,
                            const Cube& c, double cutoff = 0.0) {
    require(P.size() == Q.size() && P.size() == w.size(), ErrorKind::contract, "pq_expression: length mismatch");
    for (std::size_t k = 0; k < P.size(); ++k)
        require(Q[k] >= 1.0 && Q[k] < P[k], ErrorKind::contract, "pq_class_constant: need 1 <= q_k < p_k");
    double inv = 0.0;
    for (double pk : P) inv += 1.0 / pk;
    double v = std::pow(detail::power_average(c, w.nu_exponent(P), cutoff), inv);
    for (std::size_t k = 0; k < P.size(); ++k) {
        const double dual = -Q[k] / (P[k] - Q[k]);  // 1 - (p/q)'
        v *= std::pow(detail::power_average(c, w.exponents[k] * dual, cutoff), 1.0 / Q[k] - 1.0 / P[k]);
    }
    return v;
}

template <class Expr>
double family_sup(const CubeFamily& fam, Expr&& expr) {
    double best = 0.0;
    for (const auto& q : fam.cubes()) best = std::max(best, expr(q));
    return best;
}

inline double multilinear_constant(const PowerWeightVector& w, std::span<const double> p, const CubeFamily& fam) {
    return family_sup(fam, [&](const Cube& q) { return multilinear_expression(w, p, q); });
}

inline double pq_class_constant(const PowerWeightVector& w, std::span<const double> P, std::span<const double> Q,
                                const CubeFamily& fam) {
    return family_sup(fam, [&](const Cube& q) { return pq_expression(w, P, Q, q); });
}

/// Single-weight A_p estimate for |x|^a. Outside -d < a < d(p-1) the
/// origin-centered value is recomputed with the inner cutoffs
/// delta0, delta0/2, delta0/4 and divergence is flagged on steady growth.
struct ApEstimate {
    bool integrable = true;
    bool divergent = false;
    double value = 0.0;                  // sup over the family, or the last cutoff level
    std::array<double, 3> levels{};      // origin sup at each cutoff
    std::array<double, 2> growth{};      // successive level ratios
};

inline constexpr double divergence_ratio_threshold = 1.5;

/// (avg w)(avg w^{1-p'})^{p-1} for w = |x|^a on one cube.
inline double ap_expression(double a, double p, const Cube& q, double cutoff = 0.0) {
    const double dual = -1.0 / (p - 1.0);
    return detail::power_average(q, a, cutoff) * std::pow(detail::power_average(q, a * dual, cutoff), p - 1.0);
}

inline ApEstimate ap_constant(double a, double p, const CubeFamily& fam) {
    require(p > 1.0, ErrorKind::contract, "ap_constant: p must exceed 1");
    const double dual = -1.0 / (p - 1.0);
    auto expr = [&](const Cube& q, double cutoff) { return ap_expression(a, p, q, cutoff); };
    ApEstimate e;
    const int d = fam.dim;
    e.integrable = a > -d && a * dual > -d;
    if (e.integrable) {
        e.value = family_sup(fam, [&](const Cube& q) { return expr(q, 0.0); });
        e.levels.fill(e.value);
        e.growth.fill(1.0);
        return e;
    }
    const auto origin = fam.origin();
    double delta = fam.inner_cutoff();
    for (int l = 0; l < 3; ++l, delta *= 0.5)
        e.levels[l] = family_sup(origin, [&](const Cube& q) { return expr(q, delta); });
    e.growth = {e.levels[1] / e.levels[0], e.levels[2] / e.levels[1]};
    e.divergent = e.growth[0] >= divergence_ratio_threshold && e.growth[1] >= divergence_ratio_threshold;
    e.value = e.levels[2];
    return e;
}

/// Sup of the class expression split into far cubes (|x0| >= side, i.e.
/// distance at least twice the half side) and near cubes, at K, K+2, K+4.
struct TwoCaseReport {
    std::array<double, 3> off_origin_levels{};
    std::array<double, 3> origin_levels{};
    double off_origin_max = 0.0;
    double origin_max = 0.0;
    bool bounded = false;
};

inline constexpr double refinement_stability = 0.01;

inline TwoCaseReport verify_two_case_bound(const PowerWeightVector& w, std::span<const double> q, const CubeFamily& fam) {
    TwoCaseReport rep;
    bool integrable = w.nu_exponent(q) > -fam.dim;
    for (std::size_t k = 0; k < q.size(); ++k)
        integrable = integrable && w.exponents[k] * (-1.0 / (q[k] - 1.0)) > -fam.dim;
    CubeFamily f = fam;
    for (int level = 0; level < 3; ++level, f = f.refined(2)) {
        const double cutoff = integrable ? 0.0 : f.inner_cutoff();
        double far = 0.0, near = 0.0;
        for (const auto& c : f.cubes()) {
            const double v = multilinear_expression(w, q, c, cutoff);
            if (c.center_norm() >= c.side)
                far = std::max(far, v);
            else
                near = std::max(near, v);
        }
        rep.off_origin_levels[level] = far;
        rep.origin_levels[level] = near;
    }
    auto stable = [](const std::array<double, 3>& v) {
        return std::abs(v[1] / v[0] - 1.0) <= refinement_stability &&
               std::abs(v[2] / v[1] - 1.0) <= refinement_stability;
    };
    rep.off_origin_max = rep.off_origin_levels[2];
    rep.origin_max = rep.origin_levels[2];
    rep.bounded = stable(rep.off_origin_levels) && stable(rep.origin_levels);
    return rep;
}

inline TwoCaseReport verify_two_case_bound(const ExponentConfig& c, const CubeFamily& fam) {
    const auto q = c.class_exponents();
    return verify_two_case_bound(PowerWeightVector::from(c), q, fam);
}

}  // namespace wmlab
