#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "wmlab/error.hpp"
#include "wmlab/fft.hpp"
#include "wmlab/power_weight.hpp"
#include "wmlab/summation.hpp"

namespace wmlab {

using cplx = std::complex<double>;

inline constexpr std::size_t default_sample_budget = std::size_t{1} << 26;

/// Uniform grid on the centered box [-L/2, L/2)^d, d in {1, 2}, with M
/// points per axis. Physical nodes x_k = -L/2 + k h; frequency nodes
/// xi_k = dxi (k - M/2).
class GridSpec {
public:
    GridSpec(int dim, double box_length, std::size_t points_per_axis,
             std::size_t sample_budget = default_sample_budget)
        : dim_(dim), length_(box_length), points_(points_per_axis) {
        require(dim == 1 || dim == 2, ErrorKind::contract, "GridSpec: dimension must be 1 or 2");
        require(box_length > 0.0 && std::isfinite(box_length), ErrorKind::contract,
                "GridSpec: box length must be positive");
        require(points_per_axis >= 2 && (points_per_axis & (points_per_axis - 1)) == 0, ErrorKind::contract,
                "GridSpec: points per axis must be a power of two");
        require(total() <= sample_budget, ErrorKind::resolution,
                "GridSpec: " + std::to_string(total()) + " samples exceed the memory budget");
    }

    int dim() const noexcept { return dim_; }
    double box_length() const noexcept { return length_; }
    std::size_t points_per_axis() const noexcept { return points_; }
    std::size_t total() const noexcept { return dim_ == 1 ? points_ : points_ * points_; }

    double cell_width() const noexcept { return length_ / static_cast<double>(points_); }
    double freq_spacing() const noexcept { return 2.0 * std::numbers::pi / length_; }
    double cell_volume() const noexcept { return std::pow(cell_width(), dim_); }

    double node(std::size_t k) const noexcept { return -0.5 * length_ + static_cast<double>(k) * cell_width(); }
    double freq(std::size_t k) const noexcept {
        return freq_spacing() * (static_cast<double>(k) - 0.5 * static_cast<double>(points_));
    }

    /// Axis indices of flat index `idx` (row-major, axis 0 slowest).
    std::array<std::size_t, 2> axis_index(std::size_t idx) const noexcept {
        if (dim_ == 1) return {idx, 0};
        return {idx / points_, idx % points_};
    }

    bool operator==(const GridSpec& o) const noexcept {
        return dim_ == o.dim_ && length_ == o.length_ && points_ == o.points_;
    }

private:
    int dim_;
    double length_;
    std::size_t points_;
};

enum class Side { physical, frequency };

inline const char* to_string(Side s) { return s == Side::physical ? "physical" : "frequency"; }

using PointFunction = std::function<cplx(std::span<const double>)>;

class SampledFunction {
public:
    SampledFunction(GridSpec spec, Side side, std::vector<cplx> samples)
        : spec_(spec), side_(side), samples_(std::move(samples)) {
        require(samples_.size() == spec_.total(), ErrorKind::contract, "SampledFunction: sample count mismatch");
        for (const auto& z : samples_)
            require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::contract,
                    "SampledFunction: non-finite sample");
    }

    static SampledFunction zeros(GridSpec spec, Side side) {
        return SampledFunction(spec, side, std::vector<cplx>(spec.total()));
    }

    /// Sample f at the nodes of the requested side.
    static SampledFunction sample(GridSpec spec, Side side, const PointFunction& f) {
        std::vector<cplx> v(spec.total());
        double pt[2] = {0.0, 0.0};
        for (std::size_t idx = 0; idx < v.size(); ++idx) {
            const auto ax = spec.axis_index(idx);
            for (int d = 0; d < spec.dim(); ++d)
                pt[d] = side == Side::physical ? spec.node(ax[d]) : spec.freq(ax[d]);
            v[idx] = f(std::span<const double>(pt, spec.dim()));
        }
        return SampledFunction(spec, side, std::move(v));
    }

    const GridSpec& spec() const noexcept { return spec_; }
    Side side() const noexcept { return side_; }
    std::span<const cplx> samples() const noexcept { return samples_; }
    std::span<cplx> samples() noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    cplx operator[](std::size_t i) const noexcept { return samples_[i]; }
    cplx& operator[](std::size_t i) noexcept { return samples_[i]; }

    /// Coordinates of sample idx on this function's side.
    std::array<double, 2> point(std::size_t idx) const noexcept {
        const auto ax = spec_.axis_index(idx);
        std::array<double, 2> p{0.0, 0.0};
        for (int d = 0; d < spec_.dim(); ++d)
            p[d] = side_ == Side::physical ? spec_.node(ax[d]) : spec_.freq(ax[d]);
        return p;
    }

private:
    GridSpec spec_;
    Side side_;
    std::vector<cplx> samples_;
};

inline SampledFunction operator*(cplx a, const SampledFunction& f) {
    auto out = f;
    for (auto& z : out.samples()) z *= a;
    return out;
}

inline SampledFunction operator+(const SampledFunction& f, const SampledFunction& g) {
    require(f.spec() == g.spec() && f.side() == g.side(), ErrorKind::contract, "operator+: grid mismatch");
    auto out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i];
    return out;
}

inline SampledFunction pointwise_product(const SampledFunction& f, const SampledFunction& g) {
    require(f.spec() == g.spec() && f.side() == g.side(), ErrorKind::contract, "pointwise_product: grid mismatch");
    auto out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= g[i];
    return out;
}

namespace detail {

inline double centered_sign(std::size_t k, std::size_t M) {
    // (-1)^{k - M/2}; M is even
    return ((k + M / 2) % 2 == 0) ? 1.0 : -1.0;
}

inline double parity(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

inline double node_sign(const GridSpec& spec, std::size_t idx) {
    const auto ax = spec.axis_index(idx);
    double s = parity(ax[0]);
    if (spec.dim() == 2) s *= parity(ax[1]);
    return s;
}

inline double freq_sign(const GridSpec& spec, std::size_t idx) {
    const auto ax = spec.axis_index(idx);
    const auto M = spec.points_per_axis();
    double s = centered_sign(ax[0], M);
    if (spec.dim() == 2) s *= centered_sign(ax[1], M);
    return s;
}

inline std::vector<std::size_t> shape_of(const GridSpec& spec) {
    return std::vector<std::size_t>(static_cast<std::size_t>(spec.dim()), spec.points_per_axis());
}

}  // namespace detail

/// Riemann-sum approximation of \int e^{-i x.xi} f(x) dx on the dual grid.
/// With x_k = -L/2 + k h and xi_m = dxi (m - M/2) the kernel factors as
/// (-1)^{k} (-1)^{m - M/2} e^{-2 pi i k m / M} per axis.
inline SampledFunction forward_ft(const SampledFunction& f) {
    require(f.side() == Side::physical, ErrorKind::contract, "forward_ft: expected a physical-side function");
    const auto& spec = f.spec();
    std::vector<cplx> data(f.samples().begin(), f.samples().end());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= detail::node_sign(spec, i);
    const auto shape = detail::shape_of(spec);
    fft::transform(data, shape, fft::Direction::forward);
    const double scale = spec.cell_volume();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * detail::freq_sign(spec, i);
    return SampledFunction(spec, Side::frequency, std::move(data));
}

/// Riemann-sum approximation of (2 pi)^{-d} \int e^{i x.xi} F(xi) dxi.
/// Exact inverse of forward_ft on the grid.
inline SampledFunction inverse_ft(const SampledFunction& F) {
    require(F.side() == Side::frequency, ErrorKind::contract, "inverse_ft: expected a frequency-side function");
    const auto& spec = F.spec();
    std::vector<cplx> data(F.samples().begin(), F.samples().end());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= detail::freq_sign(spec, i);
    const auto shape = detail::shape_of(spec);
    fft::transform(data, shape, fft::Direction::backward);
    const double scale = std::pow(1.0 / spec.box_length(), spec.dim());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * detail::node_sign(spec, i);
    return SampledFunction(spec, Side::physical, std::move(data));
}

/// Midpoint rule h^d sum f(x_k).
inline cplx quadrature_integral(const SampledFunction& f) {
    CompensatedComplexSum s;
    for (const auto& z : f.samples()) s.add(z);
    return s.value() * f.spec().cell_volume();
}

namespace detail {

// Cell of axis node k as pieces [b_lo, b_hi] of |x| in [0, L/2], expressed
// as indices into the boundary table {0, h/2, 3h/2, ..., L/2 - h/2, L/2}.
// Node 0 sits on the periodic seam and owns both half cells at +-L/2.
struct AxisPieces {
    int count = 0;
    std::size_t lo[2] = {0, 0};
    std::size_t hi[2] = {0, 0};
};

inline AxisPieces axis_pieces(std::size_t k, std::size_t M) {
    AxisPieces p;
    const std::size_t half = M / 2;
    if (k == half) {
        p.count = 2;
        p.lo[0] = p.lo[1] = 0;
        p.hi[0] = p.hi[1] = 1;
    } else if (k == 0) {
        p.count = 2;
        p.lo[0] = p.lo[1] = half;
        p.hi[0] = p.hi[1] = half + 1;
    } else {
        const std::size_t j = k > half ? k - half : half - k;
        p.count = 1;
        p.lo[0] = j;
        p.hi[0] = j + 1;
    }
    return p;
}

inline std::vector<double> abs_boundaries(const GridSpec& spec) {
    const std::size_t half = spec.points_per_axis() / 2;
    const double h = spec.cell_width();
    std::vector<double> b(half + 2);
    b[0] = 0.0;
    for (std::size_t j = 1; j <= half; ++j) b[j] = (static_cast<double>(j) - 0.5) * h;
    b[half + 1] = 0.5 * spec.box_length();
    return b;
}

}  // namespace detail

/// Exact integral of |x|^a over each grid cell (cells tile the box; the
/// seam node owns the two boundary half cells). Requires a > -d.
inline std::vector<double> power_cell_masses(const GridSpec& spec, double a) {
    require(a > -spec.dim(), ErrorKind::non_integrable,
            "power_cell_masses: |x|^a requires a > -d for local integrability");
    const std::size_t M = spec.points_per_axis();
    std::vector<double> masses(spec.total());
    if (a == 0.0) {
        std::fill(masses.begin(), masses.end(), spec.cell_volume());
        return masses;
    }
    const auto b = detail::abs_boundaries(spec);
    if (spec.dim() == 1) {
        for (std::size_t k = 0; k < M; ++k) {
            const auto p = detail::axis_pieces(k, M);
            double m = 0.0;
            for (int i = 0; i < p.count; ++i) m += power_weight::interval(b[p.lo[i]], b[p.hi[i]], a);
            masses[k] = m;
        }
        return masses;
    }
    const std::size_t nb = b.size();
    std::vector<double> corner(nb * nb);
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            corner[i * nb + j] = corner[j * nb + i] = power_weight::corner_rectangle(b[i], b[j], a);
    auto rect = [&](std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
        return corner[i1 * nb + j1] - corner[i0 * nb + j1] - corner[i1 * nb + j0] + corner[i0 * nb + j0];
    };
    for (std::size_t k0 = 0; k0 < M; ++k0) {
        const auto px = detail::axis_pieces(k0, M);
        for (std::size_t k1 = 0; k1 < M; ++k1) {
            const auto py = detail::axis_pieces(k1, M);
            double m = 0.0;
            for (int i = 0; i < px.count; ++i)
                for (int j = 0; j < py.count; ++j) m += rect(px.lo[i], px.hi[i], py.lo[j], py.hi[j]);
            masses[k0 * M + k1] = m;
        }
    }
    return masses;
}

/// power_cell_masses with the cell at the origin given mass 0, for weights
/// that fail to be integrable there applied to functions vanishing at 0
/// (d = 1 only).
inline std::vector<double> punctured_power_cell_masses(const GridSpec& spec, double a) {
    require(spec.dim() == 1, ErrorKind::contract, "punctured_power_cell_masses: d = 1 only");
    const std::size_t M = spec.points_per_axis();
    const auto b = detail::abs_boundaries(spec);
    std::vector<double> masses(M, 0.0);
    for (std::size_t k = 0; k < M; ++k) {
        if (k == M / 2) continue;
        const auto p = detail::axis_pieces(k, M);
        double m = 0.0;
        for (int i = 0; i < p.count; ++i) m += power_weight::interval(b[p.lo[i]], b[p.hi[i]], a);
        masses[k] = m;
    }
    return masses;
}

/// \int |f(x)| |x|^a dx with the weight integrated exactly per cell and |f|
/// taken at the cell's node.
inline double power_weighted_quadrature(const SampledFunction& f, double a) {
    require(f.side() == Side::physical, ErrorKind::contract,
            "power_weighted_quadrature: expected a physical-side function");
    const auto masses = power_cell_masses(f.spec(), a);
    CompensatedSum s;
    for (std::size_t i = 0; i < f.size(); ++i) s.add(std::abs(f[i]) * masses[i]);
    return s.value();
}

/// h^d sum of |f| over nodes with |x|_inf > L/4; reported alongside
/// results computed on truncated boxes.
inline double tail_mass(const SampledFunction& f) {
    const double cut = 0.25 * f.spec().box_length();
    CompensatedSum s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto p = f.point(i);
        if (std::max(std::abs(p[0]), std::abs(p[1])) > cut) s.add(std::abs(f[i]));
    }
    return s.value() * f.spec().cell_volume();
}

/// Radial nodes rho_k = k h, k = 0..count-1, on [0, (count-1/2) h] in R^n,
/// n in {1, 2}. Cell k is [(k-1/2)h, (k+1/2)h] (cell 0 is [0, h/2]); its
/// measure carries the factor omega_n rho^{n-1} with omega_1 = 2, omega_2 = 2 pi.
class RadialGrid {
public:
    RadialGrid(int n, double step, std::size_t count) : n_(n), step_(step), count_(count) {
        require(n == 1 || n == 2, ErrorKind::contract, "RadialGrid: n must be 1 or 2");
        require(step > 0.0 && count >= 2, ErrorKind::contract, "RadialGrid: need step > 0 and >= 2 nodes");
    }

    int n() const noexcept { return n_; }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return count_; }
    double node(std::size_t k) const noexcept { return static_cast<double>(k) * step_; }
    double extent() const noexcept { return (static_cast<double>(count_) - 0.5) * step_; }
    double sphere_area() const noexcept { return n_ == 1 ? 2.0 : 2.0 * std::numbers::pi; }

    /// \int_{cell k} |x|^a dx over R^n, exact. Requires a > -n.
    std::vector<double> masses(double a) const {
        require(a > -n_, ErrorKind::non_integrable, "RadialGrid::masses: |x|^a requires a > -n");
        const double e = a + n_ - 1.0;
        std::vector<double> m(count_);
        for (std::size_t k = 0; k < count_; ++k) {
            const double lo = k == 0 ? 0.0 : (static_cast<double>(k) - 0.5) * step_;
            const double hi = (static_cast<double>(k) + 0.5) * step_;
            m[k] = sphere_area() * power_weight::interval(lo, hi, e);
        }
        return m;
    }

private:
    int n_;
    double step_;
    std::size_t count_;
};

}  // namespace wmlab
