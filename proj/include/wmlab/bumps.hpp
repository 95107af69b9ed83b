#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmlab/error.hpp"
#include "wmlab/gauss.hpp"
#include "wmlab/grid.hpp"
#include "wmlab/summation.hpp"

namespace wmlab {

inline double euclidean_norm(std::span<const double> v) noexcept {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Smooth monotone step: 0 for u <= 0, 1 for u >= 1, C-infinity in between.
inline double smooth_step(double u) noexcept {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

/// Decreasing profile equal to 1 on [0, lo] and 0 on [hi, inf).
inline double smooth_cutoff(double rho, double lo, double hi) noexcept {
    return smooth_step((hi - rho) / (hi - lo));
}

/// Functions of |eta| of the form Q(t, w) e^{-w}, t = |eta|^2/r^2,
/// w = 1/(1-t), supported in |eta| < r. Q is a polynomial in (t, w); the
/// family is closed under the Laplacian, which is applied symbolically.
class SeedPolynomial {
public:
    SeedPolynomial() = default;
    static SeedPolynomial one() {
        SeedPolynomial q;
        q.terms_[{0, 0}] = 1.0;
        return q;
    }

    /// d/dt of Q e^{-w}, as the polynomial multiplying e^{-w}.
    SeedPolynomial derivative() const {
        SeedPolynomial out;
        for (const auto& [ij, c] : terms_) {
            const auto [i, j] = ij;
            if (i > 0) out.terms_[{i - 1, j}] += c * i;
            if (j > 0) out.terms_[{i, j + 1}] += c * j;
            out.terms_[{i, j + 2}] -= c;
        }
        out.prune();
        return out;
    }

    /// (-Delta) in R^dim for radius r: -(4 t F'' + 2 dim F') / r^2.
    SeedPolynomial negative_laplacian(int dim, double r) const {
        const auto d1 = derivative();
        const auto d2 = d1.derivative();
        SeedPolynomial out;
        const double s = -1.0 / (r * r);
        for (const auto& [ij, c] : d2.terms_) out.terms_[{ij.first + 1, ij.second}] += 4.0 * s * c;
        for (const auto& [ij, c] : d1.terms_) out.terms_[ij] += 2.0 * dim * s * c;
        out.prune();
        return out;
    }

    double evaluate(double t) const noexcept {
        if (t >= 1.0) return 0.0;
        const double w = 1.0 / (1.0 - t);
        const double lw = std::log(w);
        double s = 0.0;
        for (const auto& [ij, c] : terms_)
            s += c * std::pow(t, ij.first) * std::exp(ij.second * lw - w);
        return s;
    }

    std::size_t term_count() const noexcept { return terms_.size(); }

private:
    void prune() {
        std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
    }
    std::map<std::pair<int, int>, double> terms_;
};

/// Nodes and weights for \int_{|eta| < R} F(|eta|) G(eta) d eta with radial F,
/// oscillatory kernels excluded: n = 1 midpoint on [0, R] with mirror weight,
/// n = 2 composite Gauss in rho with the 2 pi rho Jacobian folded in.
struct RadialRule {
    int n = 1;
    std::vector<double> nodes;
    std::vector<double> weights;

    static RadialRule make(int n, double R, int points) {
        RadialRule rule;
        rule.n = n;
        if (n == 1) {
            const double h = R / points;
            for (int j = 0; j < points; ++j) {
                rule.nodes.push_back((j + 0.5) * h);
                rule.weights.push_back(2.0 * h);
            }
            return rule;
        }
        constexpr int per_panel = 16;
        const int panels = std::max(1, points / per_panel);
        const auto& g = gauss_legendre(per_panel);
        const double ph = R / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * ph;
            for (int i = 0; i < per_panel; ++i) {
                const double rho = mid + 0.5 * ph * g.nodes[i];
                rule.nodes.push_back(rho);
                rule.weights.push_back(2.0 * std::numbers::pi * rho * 0.5 * ph * g.weights[i]);
            }
        }
        return rule;
    }

    /// \int e^{i x . eta} F(|eta|) d eta at |x| = rho, F given at the nodes.
    double fourier(std::span<const double> values, double rho) const {
        CompensatedSum s;
        if (n == 1) {
            for (std::size_t j = 0; j < nodes.size(); ++j) s.add(weights[j] * std::cos(rho * nodes[j]) * values[j]);
        } else {
            for (std::size_t j = 0; j < nodes.size(); ++j)
                s.add(weights[j] * std::cyl_bessel_j(0.0, rho * nodes[j]) * values[j]);
        }
        return s.value();
    }

    /// fourier() at many radii. For n = 1 the cosines come from a complex
    /// rotation re-seeded every 32 steps.
    std::vector<double> fourier_many(std::span<const double> values, std::span<const double> radii) const {
        std::vector<double> out(radii.size());
        if (n != 1) {
            for (std::size_t k = 0; k < radii.size(); ++k) out[k] = fourier(values, radii[k]);
            return out;
        }
        const std::size_t K = nodes.size();
        const double step = K > 1 ? nodes[1] - nodes[0] : 0.0;
        for (std::size_t k = 0; k < radii.size(); ++k) {
            const double x = radii[k];
            const std::complex<double> rot = std::polar(1.0, x * step);
            std::complex<double> z;
            double s = 0.0;
            for (std::size_t j = 0; j < K; ++j) {
                if (j % 32 == 0)
                    z = std::polar(1.0, x * nodes[j]);
                else
                    z *= rot;
                s += weights[j] * z.real() * values[j];
            }
            out[k] = s;
        }
        return out;
    }
};

inline constexpr int default_radial_points = 2048;

/// The moment-vanishing bump: phi_hat = (-Delta)^{ell+1} g with the seed
/// g(eta) = exp(-1/(1 - |eta/r|^2)), and its physical side
/// phi(x) = (2 pi)^{-n} |x|^{2(ell+1)} \int e^{i x.eta} g(eta) d eta.
class BumpPair {
public:
    BumpPair(double r, int ell, int laplacian_power, const GridSpec& spec, double amplitude = 1.0,
             int radial_points = default_radial_points)
        : r_(r),
          ell_(ell),
          power_(laplacian_power),
          n_(spec.dim()),
          amplitude_(amplitude),
          seed_(SeedPolynomial::one()),
          hat_(SeedPolynomial::one()),
          rule_(RadialRule::make(spec.dim(), r, radial_points)),
          phi_hat_(SampledFunction::zeros(spec, Side::frequency)) {
        require(r > 0.0, ErrorKind::contract, "bump radius must be positive");
        require(ell >= 0, ErrorKind::contract, "moment order ell must be >= 0");
        for (int k = 0; k < power_; ++k) hat_ = hat_.negative_laplacian(n_, r_);
        phi_hat_ = SampledFunction::sample(spec, Side::frequency,
                                           [this](std::span<const double> eta) { return cplx(phi_hat(eta)); });
        seed_nodes_.resize(rule_.nodes.size());
        hat_nodes_.resize(rule_.nodes.size());
        hat_sq_nodes_.resize(rule_.nodes.size());
        for (std::size_t j = 0; j < rule_.nodes.size(); ++j) {
            seed_nodes_[j] = seed_radial(rule_.nodes[j]);
            const double v = phi_hat_radial(rule_.nodes[j]);
            hat_nodes_[j] = hat_.evaluate(rule_.nodes[j] * rule_.nodes[j] / (r_ * r_));
            hat_sq_nodes_[j] = v * v;
        }
        phiphi0_ = phiphi(0.0);
    }

    double r() const noexcept { return r_; }
    int ell() const noexcept { return ell_; }
    int dim() const noexcept { return n_; }
    int laplacian_power() const noexcept { return power_; }
    double amplitude() const noexcept { return amplitude_; }
    const SampledFunction& phi_hat_samples() const noexcept { return phi_hat_; }
    const RadialRule& radial_rule() const noexcept { return rule_; }

    /// (phi * phi)(0) = (2 pi)^{-n} \int phi_hat^2.
    double phiphi0() const noexcept { return phiphi0_; }

    double seed_radial(double rho) const noexcept { return seed_.evaluate(rho * rho / (r_ * r_)); }
    double phi_hat_radial(double rho) const noexcept { return amplitude_ * hat_.evaluate(rho * rho / (r_ * r_)); }
    double phi_hat(std::span<const double> eta) const noexcept { return phi_hat_radial(euclidean_norm(eta)); }

    /// \int e^{i x.eta} g(eta) d eta at |x| = rho.
    double seed_transform(double rho) const { return rule_.fourier(seed_nodes_, rho); }

    // Near the origin phi comes from |x|^{2 power} times the seed transform,
    // which vanishes exactly at 0. Far out that product amplifies roundoff
    // in the tiny seed transform, so phi_hat is transformed directly.
    bool seed_route(double rho) const noexcept { return power_ == 0 || rho * r_ <= 1.0; }

    double phi_radial(double rho) const {
        const double t = seed_route(rho) ? std::pow(rho, 2 * power_) * seed_transform(rho) : rule_.fourier(hat_nodes_, rho);
        return amplitude_ * t / std::pow(2.0 * std::numbers::pi, n_);
    }
    double phi(std::span<const double> x) const { return phi_radial(euclidean_norm(x)); }

    /// phi(x) / |x|^{2 power}: smooth and nonzero at the origin.
    std::vector<double> reduced_profile(std::span<const double> radii) const {
        auto h = rule_.fourier_many(seed_nodes_, radii);
        const double c = amplitude_ / std::pow(2.0 * std::numbers::pi, n_);
        for (auto& v : h) v *= c;
        return h;
    }

    std::vector<double> phi_profile(std::span<const double> radii) const {
        std::vector<double> near, far;
        for (double rho : radii) (seed_route(rho) ? near : far).push_back(rho);
        const auto hn = rule_.fourier_many(seed_nodes_, near);
        const auto hf = rule_.fourier_many(hat_nodes_, far);
        const double c = amplitude_ / std::pow(2.0 * std::numbers::pi, n_);
        std::vector<double> out(radii.size());
        std::size_t a = 0, b = 0;
        for (std::size_t k = 0; k < radii.size(); ++k) {
            const double rho = radii[k];
            out[k] = seed_route(rho) ? c * std::pow(rho, 2 * power_) * hn[a++] : c * hf[b++];
        }
        return out;
    }

    /// (phi * phi)(y) at |y| = rho, i.e. (2 pi)^{-n} \int e^{i y.eta} phi_hat^2.
    double phiphi(double rho) const {
        return amplitude_ * amplitude_ * rule_.fourier(hat_sq_nodes_, rho) / std::pow(2.0 * std::numbers::pi, n_);
    }

    std::vector<double> phiphi_profile(std::span<const double> radii) const {
        auto v = rule_.fourier_many(hat_sq_nodes_, radii);
        const double c = amplitude_ * amplitude_ / std::pow(2.0 * std::numbers::pi, n_);
        for (auto& x : v) x *= c;
        return v;
    }

    /// Same bump with phi_hat multiplied by c.
    BumpPair scaled(double c) const {
        BumpPair b = *this;
        b.amplitude_ *= c;
        for (auto& z : b.phi_hat_.samples()) z *= c;
        b.phiphi0_ *= c * c;
        return b;
    }

private:
    double r_;
    int ell_;
    int power_;
    int n_;
    double amplitude_;
    SeedPolynomial seed_;
    SeedPolynomial hat_;
    RadialRule rule_;
    SampledFunction phi_hat_;
    std::vector<double> seed_nodes_;
    std::vector<double> hat_nodes_;
    std::vector<double> hat_sq_nodes_;
    double phiphi0_ = 0.0;
};

namespace detail {

inline void for_each_multi_index(int dim, int max_order, const std::function<void(int, int)>& f) {
    for (int b0 = 0; b0 <= max_order; ++b0)
        for (int b1 = 0; b1 <= (dim == 2 ? max_order - b0 : 0); ++b1) f(b0, b1);
}

inline double moment(const SampledFunction& hat, int b0, int b1, bool absolute) {
    CompensatedSum s;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const auto p = hat.point(i);
        double m = std::pow(p[0], b0) * (hat.spec().dim() == 2 ? std::pow(p[1], b1) : 1.0);
        const double v = hat[i].real();
        s.add(absolute ? std::abs(m * v) : m * v);
    }
    return s.value() * std::pow(hat.spec().freq_spacing(), hat.spec().dim());
}

}  // namespace detail

/// max over |beta| <= ell of |\int eta^beta phi_hat(eta) d eta| on the grid.
inline double check_moments(const BumpPair& b) {
    double worst = 0.0;
    detail::for_each_multi_index(b.dim(), b.ell(), [&](int b0, int b1) {
        worst = std::max(worst, std::abs(detail::moment(b.phi_hat_samples(), b0, b1, false)));
    });
    return worst;
}

/// max over |beta| <= ell of \int |eta^beta phi_hat(eta)| d eta; the scale
/// against which moment residuals are judged.
inline double moment_normalization(const BumpPair& b) {
    double worst = 0.0;
    detail::for_each_multi_index(b.dim(), b.ell(), [&](int b0, int b1) {
        worst = std::max(worst, detail::moment(b.phi_hat_samples(), b0, b1, true));
    });
    return worst;
}

/// Largest |eta| on the grid where phi_hat is nonzero.
inline double measured_support_radius(const BumpPair& b) {
    double m = 0.0;
    const auto& hat = b.phi_hat_samples();
    for (std::size_t i = 0; i < hat.size(); ++i)
        if (hat[i] != cplx(0.0)) {
            const auto p = hat.point(i);
            m = std::max(m, std::hypot(p[0], p[1]));
        }
    return m;
}

struct BumpOptions {
    double moment_tolerance = 1e-8;  // relative to moment_normalization
    double energy_floor = 1e-300;    // lower bound on \int phi_hat^2
    int radial_points = default_radial_points;
};

/// phi_hat = (-Delta)^{ell+1} g sampled on the frequency grid of `spec`.
inline BumpPair make_moment_vanishing_bump(double r, int ell, const GridSpec& spec, const BumpOptions& opt = {}) {
    require(r > 0.0, ErrorKind::contract, "make_moment_vanishing_bump: r must be positive");
    require(ell >= 0, ErrorKind::contract, "make_moment_vanishing_bump: ell must be >= 0");
    const double across = 2.0 * r / spec.freq_spacing();
    require(across >= 16.0, ErrorKind::resolution,
            "make_moment_vanishing_bump: only " + std::to_string(across) +
                " frequency samples across the support ball (need >= 16); enlarge the box");
    require(r < std::abs(spec.freq(0)), ErrorKind::resolution,
            "make_moment_vanishing_bump: support ball exceeds the frequency window; refine the grid");
    BumpPair b(r, ell, ell + 1, spec, 1.0, opt.radial_points);
    const double residual = check_moments(b);
    const double scale = moment_normalization(b);
    if (residual > opt.moment_tolerance * scale)
        fail(ErrorKind::numerical, "make_moment_vanishing_bump: moment residual " + std::to_string(residual) +
                                       " above tolerance (normalization " + std::to_string(scale) + ")");
    const double energy = b.phiphi0() * std::pow(2.0 * std::numbers::pi, b.dim());
    if (!(energy >= opt.energy_floor))
        fail(ErrorKind::numerical, "make_moment_vanishing_bump: \\int phi_hat^2 below floor");
    return b;
}

/// Psi(xi) = chi(|xi|) - chi(2|xi|), chi = 1 below 2^{1/2-gamma} and 0 above
/// 2^{1/2+gamma}. Sum_k Psi(xi/2^k) telescopes to 1 for xi != 0.
class AnnularCutoff {
public:
    explicit AnnularCutoff(double gamma) : gamma_(gamma) {
        require(gamma > 0.0 && gamma < 0.25, ErrorKind::contract, "AnnularCutoff: gamma must lie in (0, 1/4)");
        lo_ = std::exp2(0.5 - gamma);
        hi_ = std::exp2(0.5 + gamma);
    }

    double gamma() const noexcept { return gamma_; }
    double chi(double rho) const noexcept { return smooth_cutoff(rho, lo_, hi_); }
    double radial(double rho) const noexcept { return chi(rho) - chi(2.0 * rho); }
    double operator()(std::span<const double> xi) const noexcept { return radial(euclidean_norm(xi)); }

    double flat_inner() const noexcept { return 0.5 * hi_; }
    double flat_outer() const noexcept { return lo_; }
    double support_inner() const noexcept { return 0.5 * lo_; }
    double support_outer() const noexcept { return hi_; }

private:
    double gamma_;
    double lo_;
    double hi_;
};

inline AnnularCutoff make_annular_cutoff(double gamma) { return AnnularCutoff(gamma); }

/// psi_hat = 1 on |xi| <= r, 0 on |xi| >= 2r; psi is its inverse transform.
class WideBump {
public:
    WideBump(double r, int n, int radial_points = default_radial_points)
        : r_(r), n_(n), rule_(RadialRule::make(n, 2.0 * r, radial_points)) {
        require(r > 0.0, ErrorKind::contract, "WideBump: r must be positive");
        hat_nodes_.resize(rule_.nodes.size());
        for (std::size_t j = 0; j < hat_nodes_.size(); ++j) hat_nodes_[j] = hat_radial(rule_.nodes[j]);
    }

    double r() const noexcept { return r_; }
    int dim() const noexcept { return n_; }
    double hat_radial(double rho) const noexcept { return smooth_cutoff(rho, r_, 2.0 * r_); }
    double hat(std::span<const double> xi) const noexcept { return hat_radial(euclidean_norm(xi)); }
    double operator()(std::span<const double> xi) const noexcept { return hat(xi); }

    double psi_radial(double rho) const {
        return rule_.fourier(hat_nodes_, rho) / std::pow(2.0 * std::numbers::pi, n_);
    }
    std::vector<double> psi_profile(std::span<const double> radii) const {
        auto v = rule_.fourier_many(hat_nodes_, radii);
        for (auto& x : v) x /= std::pow(2.0 * std::numbers::pi, n_);
        return v;
    }

private:
    double r_;
    int n_;
    RadialRule rule_;
    std::vector<double> hat_nodes_;
};

inline WideBump make_wide_bump(double r, int n = 1) { return WideBump(r, n); }

/// Support of m^(eps) = phi_hat((xi_1 - e_1)/eps) prod phi_hat(xi_k) inside
/// the flat annulus of Psi.
struct Admissibility {
    bool admissible = false;
    double inner = 0.0;  // min |xi| over the support box
    double outer = 0.0;  // max |xi| over the support box
    std::string reason;
};

inline Admissibility check_admissible(double eps, double r, int N, int n, const AnnularCutoff& psi) {
    Admissibility a;
    const double er = eps * r;
    a.inner = std::max(0.0, 1.0 - er);
    a.outer = std::sqrt((1.0 + er) * (1.0 + er) + (N - 1) * r * r);
    if (a.inner < psi.flat_inner()) {
        a.reason = "support reaches |xi| = " + std::to_string(a.inner) + " below the flat annulus edge " +
                   std::to_string(psi.flat_inner());
        return a;
    }
    if (a.outer > psi.flat_outer()) {
        a.reason = "support reaches |xi| = " + std::to_string(a.outer) + " above the flat annulus edge " +
                   std::to_string(psi.flat_outer());
        return a;
    }
    // numerical confirmation on the corners and faces of the support box
    const int dim = N * n;
    std::vector<double> pt(dim, 0.0);
    const double levels[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    const int per = 5;
    const int total = static_cast<int>(std::pow(per, std::min(dim, 4)));
    for (int code = 0; code < total; ++code) {
        int c = code;
        for (int d = 0; d < dim; ++d) {
            const double u = d < 4 ? levels[c % per] : 1.0;
            if (d < 4) c /= per;
            pt[d] = d == 0 ? 1.0 + er * u : (d < n ? er * u : r * u);
        }
        if (psi(pt) != 1.0) {
            a.reason = "Psi != 1 on the support box";
            return a;
        }
    }
    a.admissible = true;
    return a;
}

}  // namespace wmlab
