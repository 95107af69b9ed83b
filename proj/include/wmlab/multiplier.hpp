#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmlab/bumps.hpp"
#include "wmlab/error.hpp"
#include "wmlab/grid.hpp"
#include "wmlab/norms.hpp"
#include "wmlab/summation.hpp"

namespace wmlab {

/// Function on R^n (one frequency variable).
using Factor = std::function<cplx(std::span<const double>)>;

/// Closed ball {|xi - center| <= radius} in R^n.
struct BallSupport {
    std::vector<double> center;
    double radius = 0.0;

    double min_norm() const { return std::max(0.0, euclidean_norm(center) - radius); }
    double max_norm() const { return euclidean_norm(center) + radius; }
};

/// Symbol m on R^{Nn}. Tensor symbols are products of factors in each
/// xi_k; full symbols are samples on an Nn-dimensional frequency grid
/// (multilinear interpolation off the nodes); evaluator symbols are
/// arbitrary pointwise functions. Optional per-factor ball supports and a
/// radial band bound the support and drive pruning.
class MultiplierSymbol {
public:
    enum class Kind { tensor, full, evaluator };

    static MultiplierSymbol tensor(int n, std::vector<Factor> factors, std::vector<BallSupport> supports = {}) {
        MultiplierSymbol m;
        m.kind_ = Kind::tensor;
        m.n_ = n;
        m.N_ = static_cast<int>(factors.size());
        m.factors_ = std::move(factors);
        m.set_supports(std::move(supports));
        return m;
    }

    static MultiplierSymbol full(SampledFunction samples, int N) {
        require(samples.side() == Side::frequency, ErrorKind::contract, "full symbol must be frequency-side");
        require(N >= 1 && samples.spec().dim() % N == 0, ErrorKind::contract, "full symbol: grid dimension is not N n");
        MultiplierSymbol m;
        m.kind_ = Kind::full;
        m.N_ = N;
        m.n_ = samples.spec().dim() / N;
        m.full_ = std::move(samples);
        return m;
    }

    static MultiplierSymbol evaluator(int N, int n, std::function<cplx(std::span<const double>)> f,
                                      std::vector<BallSupport> supports = {}) {
        MultiplierSymbol m;
        m.kind_ = Kind::evaluator;
        m.N_ = N;
        m.n_ = n;
        m.eval_ = std::move(f);
        m.set_supports(std::move(supports));
        return m;
    }

    static MultiplierSymbol zero(int N, int n) {
        auto m = evaluator(N, n, [](std::span<const double>) { return cplx(0.0); });
        m.zero_ = true;
        return m;
    }

    Kind kind() const noexcept { return kind_; }
    int N() const noexcept { return N_; }
    int n() const noexcept { return n_; }
    int dim() const noexcept { return N_ * n_; }
    const std::vector<Factor>& factors() const noexcept { return factors_; }
    const std::optional<std::vector<BallSupport>>& supports() const noexcept { return supports_; }
    bool known_zero() const noexcept { return zero_; }

    cplx operator()(std::span<const double> xi) const {
        if (zero_) return 0.0;
        if (band_) {
            const double r = euclidean_norm(xi);
            if (r < band_->first || r > band_->second) return 0.0;
        }
        switch (kind_) {
            case Kind::tensor: {
                cplx v = 1.0;
                for (int k = 0; k < N_; ++k) v *= factors_[k](xi.subspan(k * n_, n_));
                return v;
            }
            case Kind::full:
                return interpolate(xi);
            case Kind::evaluator:
                return eval_(xi);
        }
        return 0.0;
    }

    /// Samples on the frequency side of an Nn-dimensional grid.
    SampledFunction materialize(const GridSpec& spec) const {
        require(spec.dim() == dim(), ErrorKind::contract, "materialize: grid dimension must be N n");
        return SampledFunction::sample(spec, Side::frequency, [this](std::span<const double> xi) { return (*this)(xi); });
    }

    /// Bounds [lo, hi] on |xi| over the support, when known.
    std::optional<std::pair<double, double>> radial_bounds() const {
        if (zero_) return std::nullopt;
        std::optional<std::pair<double, double>> b;
        if (supports_) {
            double lo2 = 0.0, hi2 = 0.0;
            for (const auto& s : *supports_) {
                lo2 += s.min_norm() * s.min_norm();
                hi2 += s.max_norm() * s.max_norm();
            }
            b = {std::sqrt(lo2), std::sqrt(hi2)};
        }
        if (band_) {
            if (!b) return band_;
            b = {std::max(b->first, band_->first), std::min(b->second, band_->second)};
        }
        return b;
    }

    /// True when the support bounds prove m = 0 everywhere.
    bool certified_zero() const {
        if (zero_) return true;
        const auto b = radial_bounds();
        return b && b->first > b->second;
    }

    /// m(t xi).
    MultiplierSymbol dilate(double t) const {
        auto self = *this;
        MultiplierSymbol m = evaluator(N_, n_, [self, t](std::span<const double> xi) {
            std::vector<double> y(xi.begin(), xi.end());
            for (auto& v : y) v *= t;
            return self(y);
        });
        m.zero_ = zero_;
        if (supports_) {
            std::vector<BallSupport> s = *supports_;
            for (auto& b : s) {
                for (auto& c : b.center) c /= t;
                b.radius /= t;
            }
            m.supports_ = std::move(s);
        }
        if (band_) m.band_ = std::make_pair(band_->first / t, band_->second / t);
        return m;
    }

    /// m(xi) Psi(xi); the support band is intersected with that of Psi.
    MultiplierSymbol localize(const AnnularCutoff& psi) const {
        auto self = *this;
        MultiplierSymbol m = evaluator(N_, n_, [self, psi](std::span<const double> xi) { return self(xi) * psi(xi); });
        m.zero_ = zero_;
        m.supports_ = supports_;
        m.band_ = band_ ? std::make_pair(std::max(band_->first, psi.support_inner()),
                                         std::min(band_->second, psi.support_outer()))
                        : std::make_pair(psi.support_inner(), psi.support_outer());
        return m;
    }

    /// Points of R^{Nn} covering the product of the factor balls: a tensor
    /// grid with `per_axis` points per coordinate over each ball's bounding
    /// box. Outside these points' hull the symbol vanishes.
    std::vector<std::vector<double>> support_samples(int per_axis) const {
        require(supports_.has_value(), ErrorKind::contract, "support_samples: symbol has no support bounds");
        std::vector<std::vector<double>> axes;
        for (const auto& b : *supports_)
            for (int j = 0; j < n_; ++j) {
                std::vector<double> a(per_axis);
                for (int i = 0; i < per_axis; ++i)
                    a[i] = b.center[j] + b.radius * (-1.0 + 2.0 * i / (per_axis - 1.0));
                axes.push_back(std::move(a));
            }
        std::vector<std::vector<double>> pts;
        std::vector<int> idx(axes.size(), 0);
        while (true) {
            std::vector<double> p(axes.size());
            for (std::size_t d = 0; d < axes.size(); ++d) p[d] = axes[d][idx[d]];
            pts.push_back(std::move(p));
            std::size_t d = 0;
            while (d < idx.size() && ++idx[d] == per_axis) idx[d++] = 0;
            if (d == idx.size()) break;
        }
        return pts;
    }

private:
    void set_supports(std::vector<BallSupport> s) {
        if (s.empty()) return;
        require(static_cast<int>(s.size()) == N_, ErrorKind::contract, "one support ball per factor");
        for (const auto& b : s)
            require(static_cast<int>(b.center.size()) == n_, ErrorKind::contract, "support ball dimension mismatch");
        supports_ = std::move(s);
    }

    cplx interpolate(std::span<const double> xi) const {
        const auto& spec = full_->spec();
        const std::size_t M = spec.points_per_axis();
        const double dxi = spec.freq_spacing();
        std::size_t base[2] = {0, 0};
        double frac[2] = {0.0, 0.0};
        for (int d = 0; d < spec.dim(); ++d) {
            const double u = xi[d] / dxi + 0.5 * static_cast<double>(M);
            if (u < 0.0 || u > static_cast<double>(M - 1)) return 0.0;
            const double fl = std::min(std::floor(u), static_cast<double>(M - 2));
            base[d] = static_cast<std::size_t>(fl);
            frac[d] = u - fl;
        }
        auto at = [&](std::size_t i, std::size_t j) { return (*full_)[spec.dim() == 1 ? i : i * M + j]; };
        if (spec.dim() == 1) return (1.0 - frac[0]) * at(base[0], 0) + frac[0] * at(base[0] + 1, 0);
        const cplx a = (1.0 - frac[1]) * at(base[0], base[1]) + frac[1] * at(base[0], base[1] + 1);
        const cplx b = (1.0 - frac[1]) * at(base[0] + 1, base[1]) + frac[1] * at(base[0] + 1, base[1] + 1);
        return (1.0 - frac[0]) * a + frac[0] * b;
    }

    Kind kind_ = Kind::evaluator;
    int N_ = 1;
    int n_ = 1;
    bool zero_ = false;
    std::vector<Factor> factors_;
    std::optional<SampledFunction> full_;
    std::function<cplx(std::span<const double>)> eval_;
    std::optional<std::vector<BallSupport>> supports_;
    std::optional<std::pair<double, double>> band_;
};

/// F^{-1}[sigma f^] on the grid of f.
inline SampledFunction apply_linear_multiplier(const Factor& sigma, const SampledFunction& f) {
    require(f.side() == Side::physical, ErrorKind::contract, "apply_linear_multiplier: expected a physical-side input");
    auto F = forward_ft(f);
    double pt[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < F.size(); ++i) {
        const auto p = F.point(i);
        pt[0] = p[0];
        pt[1] = p[1];
        F[i] *= sigma(std::span<const double>(pt, f.spec().dim()));
    }
    return inverse_ft(F);
}

/// prod_k F^{-1}[sigma_k f_k^] for a tensor symbol.
inline SampledFunction apply_multilinear_tensor(std::span<const Factor> factors, std::span<const SampledFunction> f) {
    require(!f.empty() && factors.size() == f.size(), ErrorKind::contract,
            "apply_multilinear_tensor: one factor per input");
    auto out = apply_linear_multiplier(factors[0], f[0]);
    for (std::size_t k = 1; k < f.size(); ++k) {
        require(f[k].spec() == f[0].spec(), ErrorKind::contract, "apply_multilinear_tensor: grid mismatch");
        out = pointwise_product(out, apply_linear_multiplier(factors[k], f[k]));
    }
    return out;
}

inline SampledFunction apply_multilinear_tensor(const MultiplierSymbol& m, std::span<const SampledFunction> f) {
    require(m.kind() == MultiplierSymbol::Kind::tensor, ErrorKind::contract, "expected a tensor symbol");
    return apply_multilinear_tensor(std::span<const Factor>(m.factors()), f);
}

inline constexpr std::size_t direct_dimension_budget = 2;

/// (2 pi)^{-Nn} Riemann sum of e^{i x.(xi_1+...+xi_N)} m(xi) prod f_k^(xi_k)
/// over the joint frequency grid, at the given points x (N = 2, n = 1).
/// The joint grid is the product of the inputs' frequency grids.
inline std::vector<cplx> apply_multilinear_direct(const MultiplierSymbol& m, std::span<const SampledFunction> f,
                                                  std::span<const double> x_points) {
    require(f.size() == static_cast<std::size_t>(m.N()), ErrorKind::contract, "apply_multilinear_direct: arity mismatch");
    require(static_cast<std::size_t>(m.dim()) <= direct_dimension_budget && m.n() == 1, ErrorKind::resolution,
            "apply_multilinear_direct: dimension budget exceeded (need N n <= 2)");
    const auto& spec = f[0].spec();
    require(f[1].spec() == spec, ErrorKind::contract, "apply_multilinear_direct: grid mismatch");
    const auto F1 = forward_ft(f[0]);
    const auto F2 = forward_ft(f[1]);
    const std::size_t M = spec.points_per_axis();
    const GridSpec joint(2, spec.box_length(), M);
    const auto msamp = m.kind() == MultiplierSymbol::Kind::full ? std::optional<SampledFunction>{} : m.materialize(joint);
    auto mval = [&](std::size_t a, std::size_t b) {
        if (msamp) return (*msamp)[a * M + b];
        const double xi[2] = {spec.freq(a), spec.freq(b)};
        return m(xi);
    };
    // weights W(a, b) = m F1(a) F2(b); then sum over a, b of e^{ix(xi_a + xi_b)} W
    std::vector<cplx> W(M * M);
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = 0; b < M; ++b) W[a * M + b] = mval(a, b) * F1[a] * F2[b];
    const double scale = std::pow(spec.freq_spacing() / (2.0 * std::numbers::pi), 2);
    std::vector<cplx> out(x_points.size());
    for (std::size_t i = 0; i < x_points.size(); ++i) {
        const double x = x_points[i];
        std::vector<cplx> e(M);
        for (std::size_t a = 0; a < M; ++a) e[a] = std::polar(1.0, x * spec.freq(a));
        CompensatedComplexSum s;
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = 0; b < M; ++b) s.add(e[a] * e[b] * W[a * M + b]);
        out[i] = s.value() * scale;
    }
    return out;
}

/// m_j(xi) = m(2^j xi) Psi(xi).
inline MultiplierSymbol littlewood_paley_piece(const MultiplierSymbol& m, int j, const AnnularCutoff& psi) {
    return m.dilate(std::exp2(j)).localize(psi);
}

struct PieceRecord {
    int j = 0;
    double value = 0.0;
    bool pruned = false;
    std::string certificate;  // empty unless pruned
};

struct SupSobolevResult {
    double sup = 0.0;
    int argmax = 0;
    std::vector<PieceRecord> table;
};

/// Norm of one Littlewood-Paley piece; the default materializes m_j on the
/// given grid and takes product_sobolev_norm.
using PieceNorm = std::function<double(int j, const MultiplierSymbol& piece)>;

inline PieceNorm grid_piece_norm(const GridSpec& spec, std::vector<double> s) {
    return [spec, s](int, const MultiplierSymbol& piece) { return product_sobolev_norm(piece.materialize(spec), s); };
}

inline SupSobolevResult sup_sobolev_over_j(const MultiplierSymbol& m, const AnnularCutoff& psi, const PieceNorm& norm,
                                           int j_min = -8, int j_max = 8) {
    require(j_min <= j_max, ErrorKind::contract, "sup_sobolev_over_j: empty j range");
    SupSobolevResult r;
    r.argmax = j_min;
    r.sup = -1.0;
    for (int j = j_min; j <= j_max; ++j) {
        PieceRecord rec;
        rec.j = j;
        const auto piece = littlewood_paley_piece(m, j, psi);
        if (piece.certified_zero()) {
            rec.pruned = true;
            if (piece.known_zero()) {
                rec.certificate = "m = 0";
            } else {
                const auto mb = m.dilate(std::exp2(j)).radial_bounds();
                rec.certificate = "support of m(2^j .) in |xi| in [" + std::to_string(mb->first) + ", " +
                                  std::to_string(mb->second) + "], Psi supported in [" +
                                  std::to_string(psi.support_inner()) + ", " + std::to_string(psi.support_outer()) + "]";
            }
        } else {
            rec.value = norm(j, piece);
        }
        if (rec.value > r.sup) {
            r.sup = rec.value;
            r.argmax = j;
        }
        r.table.push_back(std::move(rec));
    }
    return r;
}

}  // namespace wmlab
