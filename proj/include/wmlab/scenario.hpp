#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wmlab/bumps.hpp"
#include "wmlab/error.hpp"
#include "wmlab/fit.hpp"
#include "wmlab/grid.hpp"
#include "wmlab/multiplier.hpp"
#include "wmlab/norms.hpp"
#include "wmlab/summation.hpp"
#include "wmlab/weights.hpp"

namespace wmlab {

enum class SweepMode { standard, generalized, weak, contrast };

inline const char* to_string(SweepMode m) {
    switch (m) {
        case SweepMode::standard: return "standard";
        case SweepMode::generalized: return "generalized";
        case SweepMode::weak: return "weak";
        case SweepMode::contrast: return "contrast";
    }
    return "standard";
}

/// Which Sobolev norm of the pieces m_j enters the denominator.
enum class SymbolNorm { product, full };

struct ScenarioNumerics {
    double radial_step = 0.0;    // 0 selects 0.05 / r
    double radial_extent = 0.0;  // 0 selects 2000 / r
    int quadrature_points = default_radial_points;
    int j_min = -8;
    int j_max = 8;
    double floor_fraction = 0.5;               // |phi*phi(eps x)| >= fraction * phi*phi(0) on B_R
    std::size_t direct_points = std::size_t{1} << 20;
    double direct_box_scale = 131072.0;        // direct-grid box length is this / eps
    int jobs = 1;
    double bump_box = 0.0;       // bump grid box length; 0 selects 6553.6 / r (n = 1) or 819.2 / r
    std::size_t bump_points = 0; // bump grid points per axis; 0 selects 2^14 (n = 1) or 2^11
};

struct Tolerances {
    double f1_slope = 1e-3;
    double sobolev_slope = 0.05;
    double ratio_slope = 0.1;
    double weak_slope_max = -0.05;
    double contrast_slope_min = -0.05;
    double monotone_slack = 0.01;
    double crosscheck_sobolev = 1e-4;
    double crosscheck_f1 = 0.01;
    double crosscheck_lhs = 0.02;
    double closed_form = 1e-6;
    int exclude_largest = 2;
};

/// Exponents in effect for a mode: contrast replaces the weights by
/// alpha = (0, 0) and checks only the (N, n, s, p) hypotheses.
inline ExponentConfig effective_config(ExponentConfig cfg, SweepMode mode) {
    if (mode == SweepMode::generalized) {
        cfg.mode = RegularityMode::generalized;
        if (cfg.s_vec.empty()) cfg.s_vec.assign(static_cast<std::size_t>(cfg.N), cfg.s / cfg.N);
    }
    if (mode == SweepMode::contrast) {
        if (!cfg.has_alphas()) cfg.alpha1 = cfg.alpha2 = 0.0;
        validate_hypotheses(cfg);
        return cfg;
    }
    return resolve_exponents(cfg);
}

struct PredictedSlopes {
    double f1 = 0.0;
    double sobolev = 0.0;
    double lhs = 0.0;
    double ratio = 0.0;
};

/// Exponents of eps for each column: f1 -alpha1/p1, Sobolev n/2 - s_1
/// (s_1 = s/N in standard mode), lhs n/p1, ratio the sum of the three.
inline PredictedSlopes predicted_slopes(const ExponentConfig& cfg, SymbolNorm norm = SymbolNorm::product) {
    PredictedSlopes s;
    const double n = cfg.n, p1 = cfg.p[0];
    double reg = cfg.s_k(0);
    if (norm == SymbolNorm::full) {
        reg = 0.0;
        for (int k = 0; k < cfg.N; ++k) reg += cfg.s_k(k);
    }
    s.f1 = -cfg.alpha1 / p1;
    s.sobolev = n / 2 - reg;
    s.lhs = n / p1;
    s.ratio = s.lhs - s.f1 - s.sobolev;
    return s;
}

/// epsilon-independent radial tables on R^n: phi, psi and exact weight
/// masses on a uniform radial grid, plus the bump itself.
class ProfileTables {
public:
    ProfileTables(const ExponentConfig& cfg, const ScenarioNumerics& num, std::optional<BumpPair> bump = {})
        : cfg_(cfg),
          num_(num),
          bump_(bump ? std::move(*bump) : default_bump(cfg, num)),
          wide_(cfg.radius(), cfg.n, num.quadrature_points),
          grid_(cfg.n, step_for(cfg, num), static_cast<std::size_t>(std::ceil(extent_for(cfg, num) / step_for(cfg, num)))) {
        require(bump_.dim() == cfg.n, ErrorKind::contract, "ProfileTables: bump dimension must equal n");
        std::vector<double> rho(grid_.size());
        for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = grid_.node(k);
        phi_ = bump_.phi_profile(rho);
        u_ = bump_.reduced_profile(rho);
        psi_ = wide_.psi_profile(rho);
        m0_ = grid_.masses(0.0);
        phi_norm_ = phi_weighted_lp({}, 1, cfg.alpha1, cfg.p[0]);
        rest_ = lp_from_masses(psi_, masses(cfg.alpha2), cfg.p[1]);
        for (int k = 2; k < cfg.N; ++k) rest_ *= lp_from_masses(psi_, m0_, cfg.p[k]);
    }

    static BumpPair default_bump(const ExponentConfig& cfg, const ScenarioNumerics& num) {
        const double r = cfg.radius();
        BumpOptions opt;
        opt.radial_points = num.quadrature_points;
        const double L = num.bump_box > 0.0 ? num.bump_box : (cfg.n == 1 ? 6553.6 : 819.2) / r;
        const std::size_t M = num.bump_points > 0 ? num.bump_points : std::size_t{1} << (cfg.n == 1 ? 14 : 11);
        return make_moment_vanishing_bump(r, cfg.ell, GridSpec(cfg.n, L, M), opt);
    }

    const ExponentConfig& cfg() const noexcept { return cfg_; }
    const ScenarioNumerics& numerics() const noexcept { return num_; }
    const BumpPair& bump() const noexcept { return bump_; }
    const WideBump& wide() const noexcept { return wide_; }
    const RadialGrid& grid() const noexcept { return grid_; }
    std::span<const double> phi() const noexcept { return phi_; }
    std::span<const double> psi() const noexcept { return psi_; }

    /// Exact masses of |x|^a on the radial cells, cached per exponent.
    const std::vector<double>& masses(double a) const {
        std::lock_guard lock(cache_mutex_);
        auto it = mass_cache_.find(a);
        if (it == mass_cache_.end()) it = mass_cache_.emplace(a, grid_.masses(a)).first;
        return it->second;
    }

    /// (\int |g|^p |phi|^{jp} |x|^a dx)^{1/p} over the first `count` nodes
    /// (g empty means g = 1). With phi = |x|^{2q} u the weight becomes
    /// |x|^{a + 2qjp}, so a may lie below -n when phi^j compensates.
    double phi_weighted_lp(std::span<const double> g, int j, double a, double p,
                           std::size_t count = std::numeric_limits<std::size_t>::max()) const {
        count = std::min(count, u_.size());
        std::vector<double> v(count);
        for (std::size_t k = 0; k < count; ++k)
            v[k] = (g.empty() ? 1.0 : std::abs(g[k])) * std::pow(std::abs(u_[k]), j);
        const auto& m = masses(a + 2.0 * bump_.laplacian_power() * j * p);
        return lp_from_masses(v, std::span(m).first(count), p);
    }

    /// ||phi||_{L^{p1}(|x|^{alpha1})}.
    double phi_weighted_norm() const noexcept { return phi_norm_; }
    /// ||psi||_{L^{p2}(|x|^{alpha2})} prod_{k>=3} ||psi||_{L^{p_k}}.
    double rest_norm_product() const noexcept { return rest_; }

    /// ||phi_hat((. - c)/delta)||_{W^sigma}^2 = (2 pi)^{2n} delta^n \int (1 + |y|^2/delta^2)^sigma phi(y)^2 dy.
    double sobolev_sq(double delta, double sigma) const {
        CompensatedSum s;
        const double inv = 1.0 / (delta * delta);
        for (std::size_t k = 0; k < phi_.size(); ++k) {
            const double rho = grid_.node(k);
            s.add(m0_[k] * std::pow(1.0 + rho * rho * inv, sigma) * phi_[k] * phi_[k]);
        }
        return std::pow(2.0 * std::numbers::pi, 2 * cfg_.n) * std::pow(delta, cfg_.n) * s.value();
    }

    /// \int |y|^{2i} phi(y)^2 dy.
    double phi_moment(int i) const {
        CompensatedSum s;
        for (std::size_t k = 0; k < phi_.size(); ++k) s.add(m0_[k] * std::pow(grid_.node(k), 2 * i) * phi_[k] * phi_[k]);
        return s.value();
    }

    /// (phi * phi)(eps rho_k) for all nodes.
    std::vector<double> phiphi_scaled(double eps) const {
        std::vector<double> y(grid_.size());
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = eps * grid_.node(k);
        return bump_.phiphi_profile(y);
    }

    /// \int_{|x| > extent/4} |f| / \int |f| for the tabulated profiles.
    double relative_tail(std::span<const double> f) const {
        CompensatedSum all, tail;
        const double cut = 0.25 * grid_.extent();
        for (std::size_t k = 0; k < f.size(); ++k) {
            const double v = m0_[k] * std::abs(f[k]);
            all.add(v);
            if (grid_.node(k) > cut) tail.add(v);
        }
        return all.value() > 0.0 ? tail.value() / all.value() : 0.0;
    }

private:
    static double step_for(const ExponentConfig& c, const ScenarioNumerics& n) {
        return n.radial_step > 0.0 ? n.radial_step : 0.05 / c.radius();
    }
    static double extent_for(const ExponentConfig& c, const ScenarioNumerics& n) {
        return n.radial_extent > 0.0 ? n.radial_extent : 2000.0 / c.radius();
    }

    ExponentConfig cfg_;
    ScenarioNumerics num_;
    BumpPair bump_;
    WideBump wide_;
    RadialGrid grid_;
    std::vector<double> phi_;
    std::vector<double> u_;
    std::vector<double> psi_;
    std::vector<double> m0_;
    double phi_norm_ = 0.0;
    double rest_ = 0.0;
    mutable std::mutex cache_mutex_;
    mutable std::map<double, std::vector<double>> mass_cache_;
};

/// Radius of the ball B_R on which |phi*phi(eps x)| stays above the floor
/// for every eps <= eps_ref.
struct RadiusChoice {
    double R = 0.0;
    double c_floor = 0.0;
    std::size_t nodes = 0;  // radial nodes in B_R
};

inline RadiusChoice choose_radius(const ProfileTables& t, double eps_ref) {
    const double target = t.numerics().floor_fraction * std::abs(t.bump().phiphi0());
    const auto pp = t.phiphi_scaled(eps_ref);
    RadiusChoice c;
    c.c_floor = std::abs(pp[0]);
    std::size_t k = 0;
    while (k < pp.size() && std::abs(pp[k]) >= target) {
        c.c_floor = std::min(c.c_floor, std::abs(pp[k]));
        ++k;
    }
    c.nodes = k;
    c.R = k > 0 ? t.grid().node(k - 1) : 0.0;
    const auto& cfg = t.cfg();
    const double mass = k > 0 ? t.phi_weighted_lp({}, cfg.N - 1, cfg.a_nu(), cfg.p_total(), k) : 0.0;
    if (k < 2 || !(mass > 0.0) || !std::isfinite(mass))
        fail(ErrorKind::numerical, "R search failed: floor constant " + std::to_string(c.c_floor) + " over " +
                                       std::to_string(k) + " nodes");
    return c;
}

/// One eps-instance of the construction.
struct Scenario {
    ExponentConfig cfg;
    double epsilon = 0.0;
    std::shared_ptr<const ProfileTables> tables;
    AnnularCutoff Psi{0.05};
    MultiplierSymbol symbol;
    Factor f1_hat;    // eps^{n/p1 - n} phi_hat((xi - e1)/eps)
    Factor rest_hat;  // psi_hat, inputs k >= 2
    PowerWeightVector weights;
    Admissibility admissibility;
    RadiusChoice radius;
    std::vector<double> phiphi;  // (phi*phi)(eps rho_k)
};

inline Scenario build_scenario(std::shared_ptr<const ProfileTables> tables, double eps,
                               std::optional<double> eps_ref = std::nullopt) {
    const auto& cfg = tables->cfg();
    require(eps > 0.0, ErrorKind::contract, "build_scenario: eps must be positive");
    Scenario sc;
    sc.cfg = cfg;
    sc.epsilon = eps;
    sc.Psi = AnnularCutoff(cfg.gamma);
    sc.admissibility = check_admissible(eps, cfg.radius(), cfg.N, cfg.n, sc.Psi);
    if (!sc.admissibility.admissible)
        fail(ErrorKind::infeasible, "eps = " + std::to_string(eps) + " is not admissible: " + sc.admissibility.reason);
    const BumpPair* b = &tables->bump();
    const int n = cfg.n;
    auto shifted = [b, eps, n](std::span<const double> xi) {
        double y[2] = {0.0, 0.0};
        for (int d = 0; d < n; ++d) y[d] = (xi[d] - (d == 0 ? 1.0 : 0.0)) / eps;
        return cplx(b->phi_hat(std::span<const double>(y, n)));
    };
    auto plain = [b](std::span<const double> xi) { return cplx(b->phi_hat(xi)); };
    std::vector<Factor> factors{shifted};
    std::vector<BallSupport> supports;
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    supports.push_back({e1, eps * cfg.radius()});
    for (int k = 1; k < cfg.N; ++k) {
        factors.push_back(plain);
        supports.push_back({std::vector<double>(n, 0.0), cfg.radius()});
    }
    sc.symbol = MultiplierSymbol::tensor(n, std::move(factors), std::move(supports));
    const double amp = std::pow(eps, n / cfg.p[0] - n);
    sc.f1_hat = [shifted, amp](std::span<const double> xi) { return amp * shifted(xi); };
    const WideBump* w = &tables->wide();
    sc.rest_hat = [w](std::span<const double> xi) { return cplx(w->hat(xi)); };
    sc.weights = PowerWeightVector::from(cfg);
    sc.phiphi = tables->phiphi_scaled(eps);
    sc.radius = choose_radius(*tables, eps_ref.value_or(eps));
    sc.tables = std::move(tables);
    return sc;
}

namespace detail {

inline std::vector<double> product_profile(const Scenario& sc) {
    const auto phi = sc.tables->phi();
    const double c = std::pow(sc.epsilon, sc.cfg.n / sc.cfg.p[0]);
    std::vector<double> v(phi.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = c * std::abs(sc.phiphi[k]) * std::pow(std::abs(phi[k]), sc.cfg.N - 1);
    return v;
}

}  // namespace detail

/// ||T_m(f)||_{L^p(nu)} through the product form
/// eps^{n/p1} e^{i e1.x} (phi*phi)(eps x) phi(x)^{N-1}.
inline double lhs_strong(const Scenario& sc) {
    const double c = std::pow(sc.epsilon, sc.cfg.n / sc.cfg.p[0]);
    return c * sc.tables->phi_weighted_lp(sc.phiphi, sc.cfg.N - 1, sc.cfg.a_nu(), sc.cfg.p_total());
}

inline double lhs_weak(const Scenario& sc) {
    return weak_from_masses(detail::product_profile(sc), sc.tables->masses(sc.cfg.a_nu()), sc.cfg.p_total());
}

/// Lower bounds C_floor eps^{n/p1} ||phi^{N-1} 1_{B_R}|| (strong and weak).
struct LowerBounds {
    double strong = 0.0;
    double weak = 0.0;
};

inline LowerBounds lower_bounds(const Scenario& sc) {
    const auto k = sc.radius.nodes;
    std::vector<double> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = std::pow(std::abs(sc.tables->phi()[i]), sc.cfg.N - 1);
    const auto m = std::span(sc.tables->masses(sc.cfg.a_nu())).first(k);
    const double c = sc.radius.c_floor * std::pow(sc.epsilon, sc.cfg.n / sc.cfg.p[0]);
    return {c * sc.tables->phi_weighted_lp({}, sc.cfg.N - 1, sc.cfg.a_nu(), sc.cfg.p_total(), k),
            c * weak_from_masses(v, m, sc.cfg.p_total())};
}

/// ||m^(eps)||_{W^s(R^{Nn})} with the isotropic weight (1 + |x|^2)^S,
/// S = total regularity. Integer S expands the weight multinomially into
/// products of one-variable moments; otherwise (N = 2 only) a product
/// quadrature over block-compressed radial tables is used.
inline double full_sobolev_norm(const ProfileTables& t, double eps, double S) {
    const auto& cfg = t.cfg();
    const int n = cfg.n, N = cfg.N;
    const double c = std::pow(2.0 * std::numbers::pi, 2 * n);
    if (S == std::floor(S) && S >= 0.0) {
        const int Si = static_cast<int>(S);
        std::vector<double> mu(Si + 1);
        for (int i = 0; i <= Si; ++i) mu[i] = t.phi_moment(i);
        // sum over (i_0, ..., i_N) with total Si of Si!/prod i_k! prod M_k(i_k)
        CompensatedSum total;
        std::vector<int> idx(N, 0);
        while (true) {
            int used = 0;
            for (int v : idx) used += v;
            if (used <= Si) {
                double coef = std::tgamma(Si + 1.0) / std::tgamma(Si - used + 1.0);
                double term = 1.0;
                for (int k = 0; k < N; ++k) {
                    coef /= std::tgamma(idx[k] + 1.0);
                    const double scale = k == 0 ? std::pow(eps, n - 2 * idx[k]) : 1.0;
                    term *= c * scale * mu[idx[k]];
                }
                total.add(coef * term);
            }
            int d = 0;
            while (d < N && ++idx[d] > Si) idx[d++] = 0;
            if (d == N) break;
        }
        return std::sqrt(total.value());
    }
    require(N == 2, ErrorKind::contract, "full_sobolev_norm: non-integer regularity supported for N = 2 only");
    const auto phi = t.phi();
    const auto& m0 = t.masses(0.0);
    constexpr std::size_t block = 16;
    std::vector<double> mass, rho2;
    for (std::size_t k0 = 0; k0 < phi.size(); k0 += block) {
        CompensatedSum w, wr;
        for (std::size_t k = k0; k < std::min(phi.size(), k0 + block); ++k) {
            const double v = m0[k] * phi[k] * phi[k];
            w.add(v);
            wr.add(v * t.grid().node(k) * t.grid().node(k));
        }
        mass.push_back(w.value());
        rho2.push_back(w.value() > 0.0 ? wr.value() / w.value() : 0.0);
    }
    CompensatedSum total;
    for (std::size_t a = 0; a < mass.size(); ++a)
        for (std::size_t b = 0; b < mass.size(); ++b)
            total.add(mass[a] * mass[b] * std::pow(1.0 + rho2[a] / (eps * eps) + rho2[b], S));
    return std::sqrt(c * c * std::pow(eps, n) * total.value());
}

/// ||f_1||_{L^{p1}(w1)} = eps^{-alpha1/p1} ||phi||_{L^{p1}(w1)}.
inline double f1_norm(const ProfileTables& t, double eps) {
    const auto& cfg = t.cfg();
    return std::pow(eps, -cfg.alpha1 / cfg.p[0]) * t.phi_weighted_norm();
}

struct RhsValues {
    double sup_sobolev = 0.0;
    double f1_norm = 0.0;
    double rest_norm_product = 0.0;
    SupSobolevResult pieces;
};

/// Right-hand side ingredients. Pieces m_j with j != 0 are pruned by their
/// support; m_0 = m because Psi = 1 on the support of m.
inline RhsValues rhs(const Scenario& sc, SymbolNorm norm = SymbolNorm::product) {
    RhsValues r;
    const auto& t = *sc.tables;
    const auto& cfg = sc.cfg;
    r.f1_norm = f1_norm(t, sc.epsilon);
    r.rest_norm_product = t.rest_norm_product();
    PieceNorm piece_norm = [&](int j, const MultiplierSymbol&) -> double {
        if (j != 0)
            fail(ErrorKind::numerical, "Littlewood-Paley piece j = " + std::to_string(j) + " was not pruned");
        if (norm == SymbolNorm::full) {
            double S = 0.0;
            for (int k = 0; k < cfg.N; ++k) S += cfg.s_k(k);
            return full_sobolev_norm(t, sc.epsilon, S);
        }
        double v = std::sqrt(t.sobolev_sq(sc.epsilon, cfg.s_k(0)));
        for (int k = 1; k < cfg.N; ++k) v *= std::sqrt(t.sobolev_sq(1.0, cfg.s_k(k)));
        return v;
    };
    r.pieces = sup_sobolev_over_j(sc.symbol, sc.Psi, piece_norm, t.numerics().j_min, t.numerics().j_max);
    r.sup_sobolev = r.pieces.sup;
    return r;
}

struct SweepRow {
    double epsilon = 0.0;
    double lhs_strong = 0.0;
    double lhs_weak = 0.0;
    double sup_sobolev = 0.0;
    double f1_norm = 0.0;
    double rest_norm_product = 0.0;
    double ratio_strong = 0.0;
    double ratio_weak = 0.0;
    int sobolev_argmax = 0;
    int pruned_pieces = 0;
    LowerBounds lower;
};

struct SkippedEpsilon {
    double epsilon = 0.0;
    std::string reason;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

using FitTable = std::map<std::string, PowerLawFit>;

struct SweepReport {
    ExponentConfig cfg;
    SweepMode mode = SweepMode::standard;
    SymbolNorm norm = SymbolNorm::product;
    std::vector<SweepRow> rows;  // ordered by decreasing eps
    std::vector<SkippedEpsilon> skipped;
    FitTable fits_excluded;  // without the largest eps values
    FitTable fits_all;
    PredictedSlopes predicted;
    RadiusChoice radius;
    double phiphi0 = 0.0;
    double tail_phi = 0.0;
    double tail_psi = 0.0;
    std::vector<Check> checks;
    bool pass = false;
};

/// 2^{log2 max} .. 2^{log2 min} geometrically, largest first.
inline std::vector<double> geometric_eps(double eps_max, double eps_min, int steps) {
    require(eps_max > 0.0 && eps_min > 0.0 && eps_min <= eps_max, ErrorKind::config, "eps range must satisfy 0 < min <= max");
    require(steps >= 1, ErrorKind::config, "steps must be >= 1");
    std::vector<double> e(static_cast<std::size_t>(steps));
    const double a = std::log2(eps_max), b = std::log2(eps_min);
    for (int i = 0; i < steps; ++i) e[i] = steps == 1 ? eps_max : std::exp2(a + (b - a) * i / (steps - 1.0));
    return e;
}

namespace detail {

inline SweepRow compute_row(const Scenario& sc, SymbolNorm norm) {
    SweepRow row;
    row.epsilon = sc.epsilon;
    row.lhs_strong = lhs_strong(sc);
    row.lhs_weak = lhs_weak(sc);
    const auto r = rhs(sc, norm);
    row.sup_sobolev = r.sup_sobolev;
    row.f1_norm = r.f1_norm;
    row.rest_norm_product = r.rest_norm_product;
    const double denom = r.sup_sobolev * r.f1_norm * r.rest_norm_product;
    row.ratio_strong = row.lhs_strong / denom;
    row.ratio_weak = row.lhs_weak / denom;
    row.sobolev_argmax = r.pieces.argmax;
    for (const auto& p : r.pieces.table) row.pruned_pieces += p.pruned ? 1 : 0;
    row.lower = lower_bounds(sc);
    return row;
}

inline FitTable fit_columns(const std::vector<SweepRow>& rows, std::size_t skip) {
    FitTable t;
    if (rows.size() < skip + 3) return t;
    std::vector<double> x;
    std::map<std::string, std::vector<double>> y;
    for (std::size_t i = skip; i < rows.size(); ++i) {
        const auto& r = rows[i];
        x.push_back(r.epsilon);
        y["f1"].push_back(r.f1_norm);
        y["sobolev"].push_back(r.sup_sobolev);
        y["lhs"].push_back(r.lhs_strong);
        y["lhs_weak"].push_back(r.lhs_weak);
        y["ratio_strong"].push_back(r.ratio_strong);
        y["ratio_weak"].push_back(r.ratio_weak);
    }
    for (const auto& [k, v] : y) t[k] = fit_power_law(x, v);
    return t;
}

inline std::string fmt_check(double measured, double expected) {
    return "measured " + fmt(measured) + ", expected " + fmt(expected);
}

}  // namespace detail

inline void evaluate_checks(SweepReport& rep, const Tolerances& tol) {
    auto& c = rep.checks;
    const auto& fx = rep.fits_excluded;
    const auto& pr = rep.predicted;
    auto add = [&](std::string name, bool ok, std::string detail) { c.push_back({std::move(name), ok, std::move(detail)}); };
    if (fx.empty()) {
        add("enough_points", false, "fewer than 3 rows remain after excluding the largest eps");
        rep.pass = false;
        return;
    }
    bool argmax0 = true;
    for (const auto& r : rep.rows) argmax0 = argmax0 && r.sobolev_argmax == 0;
    add("sup_at_j0", argmax0, "argmax of the Littlewood-Paley sup is j = 0 on every row");
    const double ratio = fx.at("ratio_strong").slope;
    if (rep.mode == SweepMode::contrast) {
        add("ratio_slope_nonnegative", ratio >= tol.contrast_slope_min,
            "slope " + detail::fmt(ratio) + " >= " + detail::fmt(tol.contrast_slope_min));
    } else {
        add("f1_slope", std::abs(fx.at("f1").slope - pr.f1) <= tol.f1_slope, detail::fmt_check(fx.at("f1").slope, pr.f1));
        if (rep.norm == SymbolNorm::product)
            add("sobolev_slope", std::abs(fx.at("sobolev").slope - pr.sobolev) <= tol.sobolev_slope,
                detail::fmt_check(fx.at("sobolev").slope, pr.sobolev));
        add("ratio_slope", std::abs(ratio - pr.ratio) <= tol.ratio_slope, detail::fmt_check(ratio, pr.ratio));
        if (rep.norm == SymbolNorm::product) {
            add("ratio_slope_negative", ratio < 0.0, "slope " + detail::fmt(ratio));
            bool mono = true;
            for (std::size_t i = 1; i < rep.rows.size(); ++i)
                mono = mono && rep.rows[i].ratio_strong >= (1.0 - tol.monotone_slack) * rep.rows[i - 1].ratio_strong;
            add("ratio_increasing", mono, "ratio_strong non-decreasing as eps decreases (1% slack)");
            const auto& lo = rep.rows.back();
            const auto& hi = rep.rows.front();
            const double growth = lo.ratio_strong / hi.ratio_strong;
            const double bound = std::pow(lo.epsilon / hi.epsilon, pr.ratio + tol.ratio_slope);
            add("divergence_witness", growth >= bound,
                "ratio growth " + detail::fmt(growth) + " >= " + detail::fmt(bound));
        }
        bool lower = true, chebyshev = true;
        for (const auto& r : rep.rows) {
            lower = lower && r.lhs_strong >= r.lower.strong && r.lhs_weak >= r.lower.weak;
            chebyshev = chebyshev && r.lhs_weak <= r.lhs_strong;
        }
        add("lhs_lower_bounds", lower, "lhs >= C_floor eps^{n/p1} ||phi^{N-1} 1_{B_R}|| (strong and weak)");
        add("weak_below_strong", chebyshev, "lhs_weak <= lhs_strong on every row");
        if (rep.mode == SweepMode::weak) {
            const double w = fx.at("ratio_weak").slope;
            add("weak_ratio_slope", w <= tol.weak_slope_max, "slope " + detail::fmt(w) + " <= " + detail::fmt(tol.weak_slope_max));
        }
    }
    rep.pass = std::all_of(c.begin(), c.end(), [](const Check& k) { return k.passed; });
}

/// Rows in decreasing eps; inadmissible eps are skipped with a reason.
inline SweepReport sweep(std::shared_ptr<const ProfileTables> tables, std::vector<double> eps_list, SweepMode mode,
                         const Tolerances& tol = {}, SymbolNorm norm = SymbolNorm::product) {
    std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
    SweepReport rep;
    rep.cfg = tables->cfg();
    rep.mode = mode;
    rep.norm = norm;
    rep.predicted = predicted_slopes(rep.cfg, norm);
    rep.phiphi0 = tables->bump().phiphi0();
    rep.tail_phi = tables->relative_tail(tables->phi());
    rep.tail_psi = tables->relative_tail(tables->psi());
    AnnularCutoff psi(rep.cfg.gamma);
    std::vector<double> admissible;
    for (double e : eps_list) {
        const auto a = check_admissible(e, rep.cfg.radius(), rep.cfg.N, rep.cfg.n, psi);
        if (a.admissible)
            admissible.push_back(e);
        else
            rep.skipped.push_back({e, a.reason});
    }
    if (admissible.size() < 4)
        fail(ErrorKind::infeasible, "sweep needs at least 4 admissible eps, got " + std::to_string(admissible.size()));
    const double eps_ref = admissible.front();
    rep.radius = choose_radius(*tables, eps_ref);
    std::vector<std::optional<SweepRow>> rows(admissible.size());
    std::vector<std::string> errors(admissible.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < admissible.size();) {
            try {
                rows[i] = detail::compute_row(build_scenario(tables, admissible[i], eps_ref), norm);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(tables->numerics().jobs, static_cast<int>(admissible.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!errors[i].empty()) fail(ErrorKind::numerical, "row eps = " + std::to_string(admissible[i]) + ": " + errors[i]);
        rep.rows.push_back(*rows[i]);
    }
    const std::size_t skip = rep.rows.size() >= static_cast<std::size_t>(tol.exclude_largest) + 3
                                 ? static_cast<std::size_t>(tol.exclude_largest)
                                 : 0;
    rep.fits_excluded = detail::fit_columns(rep.rows, skip);
    rep.fits_all = detail::fit_columns(rep.rows, 0);
    evaluate_checks(rep, tol);
    return rep;
}

inline std::shared_ptr<const ProfileTables> make_tables(const ExponentConfig& cfg, const ScenarioNumerics& num = {}) {
    return std::make_shared<const ProfileTables>(cfg, num);
}

/// Direct-grid evaluation of the eps-dependent quantities (n = 1): the
/// symbol factors and inputs are sampled on a 1-D frequency grid with box
/// direct_box_scale / eps and transformed with the discrete FT.
struct CrossCheck {
    double epsilon = 0.0;
    double box_length = 0.0;
    std::size_t points = 0;
    double sobolev_direct = 0.0, sobolev_fast = 0.0;
    double f1_direct = 0.0, f1_fast = 0.0;
    double lhs_direct = 0.0, lhs_fast = 0.0;
    double lhs_weak_direct = 0.0, lhs_weak_fast = 0.0;
    double closed_form_error = 0.0;  // max |T - closed form| / max |closed form| on B_R
    double rel(double a, double b) const { return std::abs(a - b) / std::abs(b); }
};

inline CrossCheck crosscheck(std::shared_ptr<const ProfileTables> tables, double eps, std::optional<double> eps_ref = {}) {
    const auto& cfg = tables->cfg();
    require(cfg.n == 1, ErrorKind::contract, "crosscheck: direct grids are implemented for n = 1");
    const auto sc = build_scenario(tables, eps, eps_ref);
    const auto& num = tables->numerics();
    CrossCheck cc;
    cc.epsilon = eps;
    cc.box_length = num.direct_box_scale / eps;
    cc.points = num.direct_points;
    const GridSpec spec(1, cc.box_length, cc.points);
    require(std::abs(spec.freq(0)) > 1.0 + eps * cfg.radius(), ErrorKind::resolution,
            "crosscheck: frequency window does not contain the shifted bump; raise direct_points");
    const auto& factors = sc.symbol.factors();
    const auto g1 = SampledFunction::sample(spec, Side::frequency, factors[0]);
    const auto g0 = SampledFunction::sample(spec, Side::frequency, factors[1]);
    cc.sobolev_direct = sobolev_norm(g1, cfg.s_k(0));
    for (int k = 1; k < cfg.N; ++k) cc.sobolev_direct *= sobolev_norm(g0, cfg.s_k(k));
    const auto r = rhs(sc);
    cc.sobolev_fast = r.sup_sobolev;
    cc.f1_fast = r.f1_norm;
    const auto f1 = inverse_ft(SampledFunction::sample(spec, Side::frequency, sc.f1_hat));
    cc.f1_direct = cfg.alpha1 > -1.0 ? weighted_lp_norm(f1, cfg.alpha1, cfg.p[0])
                                     : weighted_lp_norm_punctured(f1, cfg.alpha1, cfg.p[0]);
    const auto fk = inverse_ft(SampledFunction::sample(spec, Side::frequency, sc.rest_hat));
    std::vector<SampledFunction> inputs{f1};
    for (int k = 1; k < cfg.N; ++k) inputs.push_back(fk);
    const auto T = apply_multilinear_tensor(sc.symbol, inputs);
    cc.lhs_direct = weighted_lp_norm(T, cfg.a_nu(), cfg.p_total());
    cc.lhs_weak_direct = weak_lp_norm(T, cfg.a_nu(), cfg.p_total());
    cc.lhs_fast = lhs_strong(sc);
    cc.lhs_weak_fast = lhs_weak(sc);
    // closed form on B_R at up to 512 nodes
    const double R = sc.radius.R;
    std::vector<std::size_t> pick;
    for (std::size_t k = 0; k < spec.points_per_axis(); ++k)
        if (std::abs(spec.node(k)) <= R) pick.push_back(k);
    const std::size_t stride = std::max<std::size_t>(1, pick.size() / 512);
    const auto& b = tables->bump();
    const double amp = std::pow(eps, 1.0 / cfg.p[0]);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < pick.size(); i += stride) {
        const double x = spec.node(pick[i]);
        const cplx closed = amp * std::polar(1.0, x) * b.phiphi(eps * std::abs(x)) *
                            std::pow(b.phi_radial(std::abs(x)), cfg.N - 1);
        err = std::max(err, std::abs(T[pick[i]] - closed));
        ref = std::max(ref, std::abs(closed));
    }
    cc.closed_form_error = err / ref;
    return cc;
}

/// One sweep per (norm, weight class) cell. Counterexample weights sit in
/// the multilinear class only; alpha = 0 sits in the product of single
/// classes. Only (product norm, multilinear class) is expected to diverge.
struct Table1Cell {
    std::string norm;
    std::string weight_class;
    double fitted_ratio_slope = 0.0;
    double predicted_ratio_slope = 0.0;
    bool diverges = false;
    bool expected_divergence = false;
};

struct Table1Report {
    std::vector<Table1Cell> cells;
    bool pass = false;
};

inline Table1Report table1_probe(const ExponentConfig& cfg, const ScenarioNumerics& num, const std::vector<double>& eps,
                                 const Tolerances& tol = {}) {
    Table1Report rep;
    const auto counter = effective_config(cfg, SweepMode::standard);
    auto unweighted = cfg;
    unweighted.alpha1 = unweighted.alpha2 = 0.0;
    const auto contrast = effective_config(unweighted, SweepMode::contrast);
    const auto t_counter = make_tables(counter, num);
    const auto t_contrast = make_tables(contrast, num);
    for (auto norm : {SymbolNorm::product, SymbolNorm::full}) {
        for (bool multilinear : {true, false}) {
            const auto sw = sweep(multilinear ? t_counter : t_contrast, eps,
                                  multilinear ? SweepMode::standard : SweepMode::contrast, tol, norm);
            Table1Cell cell;
            cell.norm = norm == SymbolNorm::product ? "W^(s/N,...,s/N)" : "W^s";
            cell.weight_class = multilinear ? "A_(q1,...,qN)" : "prod A_qk";
            cell.fitted_ratio_slope = sw.fits_excluded.at("ratio_strong").slope;
            cell.predicted_ratio_slope = sw.predicted.ratio;
            cell.diverges = cell.fitted_ratio_slope < tol.contrast_slope_min;
            cell.expected_divergence = norm == SymbolNorm::product && multilinear;
            rep.cells.push_back(cell);
        }
    }
    rep.pass = std::all_of(rep.cells.begin(), rep.cells.end(),
                           [](const Table1Cell& c) { return c.diverges == c.expected_divergence; });
    return rep;
}

}  // namespace wmlab
