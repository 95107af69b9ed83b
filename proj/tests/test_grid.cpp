#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wmlab/grid.hpp"

using namespace wmlab;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs_diff(const SampledFunction& a, const SampledFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SampledFunction gaussian(const GridSpec& spec, double c = 0.5) {
    return SampledFunction::sample(spec, Side::physical, [c](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return cplx(std::exp(-c * r2));
    });
}

// random band-limited function: a few modes inside half the Nyquist band
SampledFunction band_limited(const GridSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto F = SampledFunction::zeros(spec, Side::frequency);
    const std::size_t M = spec.points_per_axis();
    for (std::size_t i = 0; i < F.size(); ++i) {
        const auto ax = spec.axis_index(i);
        bool inside = true;
        for (int d = 0; d < spec.dim(); ++d) {
            const long k = static_cast<long>(ax[d]) - static_cast<long>(M / 2);
            inside = inside && std::abs(k) < static_cast<long>(M / 8);
        }
        if (inside) F[i] = cplx(u(rng), u(rng));
    }
    return inverse_ft(F);
}

}  // namespace

TEST(GridSpec, Geometry) {
    const GridSpec s(1, 32.0, 512);
    EXPECT_DOUBLE_EQ(s.cell_width(), 1.0 / 16.0);
    EXPECT_DOUBLE_EQ(s.freq_spacing(), 2.0 * pi / 32.0);
    EXPECT_DOUBLE_EQ(s.node(0), -16.0);
    EXPECT_DOUBLE_EQ(s.node(256), 0.0);
    EXPECT_DOUBLE_EQ(s.freq(256), 0.0);
    EXPECT_THROW(GridSpec(1, 32.0, 500), Error);
    EXPECT_THROW(GridSpec(3, 32.0, 16), Error);
    EXPECT_THROW(GridSpec(1, -1.0, 16), Error);
}

TEST(SampledFunction, RejectsNonFinite) {
    const GridSpec s(1, 4.0, 8);
    std::vector<cplx> v(8, 1.0);
    v[3] = std::nan("");
    EXPECT_THROW(SampledFunction(s, Side::physical, v), Error);
}

TEST(ForwardFT, GaussianPair) {
    const GridSpec s(1, 32.0, 512);
    const auto F = forward_ft(gaussian(s));
    double err = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double xi = s.freq(k);
        err = std::max(err, std::abs(F[k] - std::sqrt(2.0 * pi) * std::exp(-0.5 * xi * xi)));
    }
    EXPECT_LE(err, 1e-8);
}

TEST(ForwardFT, ZeroAndLinearity) {
    const GridSpec s(1, 32.0, 256);
    const auto Z = forward_ft(SampledFunction::zeros(s, Side::physical));
    for (std::size_t k = 0; k < Z.size(); ++k) EXPECT_EQ(Z[k], cplx(0.0));
    std::mt19937_64 rng(7);
    const auto f = band_limited(s, rng), g = band_limited(s, rng);
    const cplx a(0.3, -1.2), b(2.0, 0.5);
    const auto lhs = forward_ft(a * f + b * g);
    const auto rhs = a * forward_ft(f) + b * forward_ft(g);
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
}

TEST(ForwardFT, RejectsFrequencySide) {
    const GridSpec s(1, 4.0, 8);
    EXPECT_THROW(forward_ft(SampledFunction::zeros(s, Side::frequency)), Error);
    EXPECT_THROW(inverse_ft(SampledFunction::zeros(s, Side::physical)), Error);
}

TEST(InverseFT, GaussianPair) {
    const GridSpec s(1, 32.0, 512);
    const auto F = SampledFunction::sample(s, Side::frequency, [](std::span<const double> xi) {
        return cplx(std::sqrt(2.0 * pi) * std::exp(-0.5 * xi[0] * xi[0]));
    });
    EXPECT_LE(max_abs_diff(inverse_ft(F), gaussian(s)), 1e-8);
}

TEST(InverseFT, RoundTrip) {
    std::mt19937_64 rng(11);
    for (int d : {1, 2}) {
        const GridSpec s(d, 20.0, d == 1 ? 1024 : 64);
        const auto f = band_limited(s, rng);
        EXPECT_LE(max_abs_diff(inverse_ft(forward_ft(f)), f), 1e-10) << "d = " << d;
    }
}

TEST(InverseFT, Plancherel) {
    std::mt19937_64 rng(5);
    for (int d : {1, 2}) {
        const GridSpec s(d, 16.0, d == 1 ? 512 : 64);
        const auto f = band_limited(s, rng);
        auto sq = f;
        for (auto& z : sq.samples()) z = std::norm(z);
        auto F = forward_ft(f);
        for (auto& z : F.samples()) z = std::norm(z);
        const double lhs = quadrature_integral(sq).real();
        double rhs = 0.0;
        for (const auto& z : F.samples()) rhs += z.real();
        rhs *= std::pow(s.freq_spacing(), d) / std::pow(2.0 * pi, d);
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-8) << "d = " << d;
    }
}

TEST(Quadrature, Examples) {
    const GridSpec s4(1, 4.0, 64);
    const auto one = SampledFunction::sample(s4, Side::physical, [](auto) { return cplx(1.0); });
    EXPECT_EQ(quadrature_integral(one).real(), 4.0);

    const GridSpec s(1, 32.0, 512);
    EXPECT_NEAR(quadrature_integral(gaussian(s, 1.0)).real(), std::sqrt(pi), 1e-10);

    const auto odd = SampledFunction::sample(s, Side::physical, [](std::span<const double> x) {
        return cplx(x[0] * std::exp(-x[0] * x[0]));
    });
    EXPECT_NEAR(std::abs(quadrature_integral(odd)), 0.0, 1e-12);
}

TEST(PowerWeightedQuadrature, Examples) {
    const GridSpec s(1, 2.0, 256);
    const auto one = SampledFunction::sample(s, Side::physical, [](auto) { return cplx(1.0); });
    EXPECT_NEAR(power_weighted_quadrature(one, -0.5), 4.0, 1e-12);
    EXPECT_NEAR(power_weighted_quadrature(one, 1.0), 1.0, 1e-12);

    const GridSpec g(1, 32.0, 512);
    const auto f = gaussian(g);
    const double plain = quadrature_integral(f).real();
    EXPECT_NEAR(power_weighted_quadrature(f, 0.0), plain, 1e-12);
}

TEST(PowerWeightedQuadrature, NonIntegrableWeight) {
    const GridSpec s(1, 2.0, 64);
    const auto one = SampledFunction::sample(s, Side::physical, [](auto) { return cplx(1.0); });
    try {
        power_weighted_quadrature(one, -1.0);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_integrable);
    }
    const GridSpec s2(2, 2.0, 16);
    EXPECT_THROW(power_cell_masses(s2, -2.0), Error);
    EXPECT_NO_THROW(power_cell_masses(s2, -1.5));
}

TEST(PowerWeightedQuadrature, MonotoneAndHomogeneous) {
    const GridSpec s(1, 16.0, 256);
    const auto f = gaussian(s);
    const auto g = gaussian(s, 0.25);  // pointwise >= f
    for (double a : {-0.5, 0.0, 0.7}) {
        EXPECT_LE(power_weighted_quadrature(f, a), power_weighted_quadrature(g, a));
        EXPECT_NEAR(power_weighted_quadrature(cplx(0.0, -3.0) * f, a), 3.0 * power_weighted_quadrature(f, a), 1e-12);
    }
}

TEST(PowerCellMasses, TileTheBox) {
    // d = 1: masses over [-L/2, L/2] sum to 2 (L/2)^{a+1} / (a+1)
    const GridSpec s(1, 6.0, 128);
    for (double a : {-0.75, 0.0, 1.5}) {
        double sum = 0.0;
        for (double m : power_cell_masses(s, a)) sum += m;
        EXPECT_NEAR(sum, 2.0 * std::pow(3.0, a + 1.0) / (a + 1.0), 1e-11) << "a = " << a;
    }
    // d = 2, a = 2: \int over [-1,1]^2 of x^2 + y^2 = 8/3
    const GridSpec s2(2, 2.0, 32);
    double sum = 0.0;
    for (double m : power_cell_masses(s2, 2.0)) sum += m;
    EXPECT_NEAR(sum, 8.0 / 3.0, 1e-12);
}

TEST(PowerCellMasses, PuncturedSkipsTheOrigin) {
    const GridSpec s(1, 4.0, 64);
    const auto m = punctured_power_cell_masses(s, -2.5);
    EXPECT_EQ(m[32], 0.0);
    // x^{-2.5} over [h/2, 2], both sides
    const double h = s.cell_width();
    double sum = 0.0;
    for (double v : m) sum += v;
    const double exact = 2.0 * (std::pow(2.0, -1.5) - std::pow(0.5 * h, -1.5)) / -1.5;
    EXPECT_NEAR(sum / exact, 1.0, 1e-12);
}

TEST(TailMass, ReportsOuterHalf) {
    const GridSpec s(1, 8.0, 64);
    const auto one = SampledFunction::sample(s, Side::physical, [](auto) { return cplx(1.0); });
    // nodes with |x| > 2: [-4, -2) and (2, 4)
    EXPECT_NEAR(tail_mass(one), 4.0 - s.cell_width(), 1e-12);
    EXPECT_LT(tail_mass(gaussian(GridSpec(1, 32.0, 512))), 1e-12);
}

TEST(RadialGrid, MassesMatchShellIntegrals) {
    const RadialGrid g1(1, 0.1, 101), g2(2, 0.1, 101);
    for (double a : {-0.5, 0.0, 2.0}) {
        double s1 = 0.0, s2 = 0.0;
        for (double m : g1.masses(a)) s1 += m;
        for (double m : g2.masses(a)) s2 += m;
        const double R = g1.extent();
        EXPECT_NEAR(s1, 2.0 * std::pow(R, a + 1.0) / (a + 1.0), 1e-12);
        EXPECT_NEAR(s2, 2.0 * pi * std::pow(R, a + 2.0) / (a + 2.0), 1e-10);
    }
    EXPECT_THROW(g1.masses(-1.0), Error);
    EXPECT_NO_THROW(g2.masses(-1.5));
}
