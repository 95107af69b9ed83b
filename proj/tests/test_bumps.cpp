#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wmlab/bumps.hpp"

using namespace wmlab;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double r = 0.05;

const GridSpec& bump_grid() {
    static const GridSpec s(1, 6553.6 / r, std::size_t{1} << 14);
    return s;
}

const BumpPair& default_bump() {
    static const BumpPair b = make_moment_vanishing_bump(r, 0, bump_grid());
    return b;
}

}  // namespace

// Reference values from tests/oracles/reference_values.py (independent
// Gauss-Legendre quadrature of the seed and its derivatives).
TEST(Bump, MatchesIndependentQuadrature) {
    const auto& b = default_bump();
    EXPECT_NEAR(b.phiphi0() / 1.379461821572812e+04, 1.0, 1e-10);
    EXPECT_NEAR(b.phi_radial(10.0) / 3.463845549238057e-01, 1.0, 1e-9);
    EXPECT_NEAR(b.phi_radial(100.0) / -1.689031153507318e-02, 1.0, 1e-9);
    EXPECT_NEAR(b.phi_radial(500.0) / 2.852959483228370e+00, 1.0, 1e-9);
}

TEST(Bump, MomentsVanishEll0) {
    EXPECT_LE(check_moments(default_bump()), 1e-10);
}

TEST(Bump, MomentsVanishEll2) {
    // absolute residual is roundoff on a normalization ~ r^{-5}; r = 2 keeps it below 1e-8
    const GridSpec s(1, 3276.8, std::size_t{1} << 14);
    const auto b = make_moment_vanishing_bump(2.0, 2, s);
    EXPECT_LE(check_moments(b), 1e-8);
    EXPECT_EQ(b.ell(), 2);
}

TEST(Bump, SeedAloneHasNonzeroMass) {
    // zero Laplacian powers: phi_hat = g > 0
    const BumpPair g(r, 0, 0, bump_grid());
    EXPECT_GT(check_moments(g), 0.01 * moment_normalization(g));
    EXPECT_GT(check_moments(g), 0.0);
}

TEST(Bump, SupportInsideBall) {
    const auto& b = default_bump();
    const auto& hat = b.phi_hat_samples();
    for (std::size_t i = 0; i < hat.size(); ++i)
        if (std::abs(hat.point(i)[0]) > r) {
            ASSERT_EQ(hat[i], cplx(0.0));
        }
    EXPECT_LE(measured_support_radius(b), r);
    EXPECT_GT(measured_support_radius(b), 0.99 * r);
    const double at_edge[] = {r};
    EXPECT_EQ(b.phi_hat(at_edge), 0.0);
}

TEST(Bump, PhiPhiZeroMatchesGridQuadrature) {
    const auto& b = default_bump();
    const auto& hat = b.phi_hat_samples();
    double s = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) s += std::norm(hat[i]);
    s *= hat.spec().freq_spacing() / (2.0 * pi);
    EXPECT_NEAR(b.phiphi0() / s, 1.0, 1e-10);
    EXPECT_GT(b.phiphi0(), 0.0);
}

TEST(Bump, VanishesToOrderTwoAtOrigin) {
    // |phi(x)| <= C |x|^{ell+1} on |x| <= 1, C fitted once
    const auto& b = default_bump();
    constexpr double C = 0.01;
    for (int k = 1; k <= 100; ++k) {
        const double x = k / 100.0;
        ASSERT_LE(std::abs(b.phi_radial(x)), C * x) << "x = " << x;
    }
    EXPECT_NEAR(b.phi_radial(0.0), 0.0, 1e-300);
}

TEST(Bump, CrossRepresentation) {
    // forward_ft of sampled phi against phi_hat = (-Delta) g
    const auto& b = default_bump();
    const auto& spec = bump_grid();
    const auto phi = SampledFunction::sample(spec, Side::physical, [&](std::span<const double> x) { return cplx(b.phi(x)); });
    const auto F = forward_ft(phi);
    double err = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double xi[] = {spec.freq(k)};
        err = std::max(err, std::abs(F[k] - b.phi_hat(xi)));
        peak = std::max(peak, std::abs(b.phi_hat(xi)));
    }
    EXPECT_LE(err, 1e-7);
    EXPECT_GT(peak, 1.0);
}

TEST(Bump, ReducedProfileFactorization) {
    const auto& b = default_bump();
    const std::vector<double> rho{0.5, 3.0, 40.0, 700.0};
    const auto u = b.reduced_profile(rho);
    const auto p = b.phi_profile(rho);
    for (std::size_t i = 0; i < rho.size(); ++i) EXPECT_NEAR(u[i] * rho[i] * rho[i], p[i], 1e-12 * std::abs(p[i]) + 1e-300);
}

TEST(Bump, RejectsUnderResolvedGrid) {
    try {
        make_moment_vanishing_bump(r, 0, GridSpec(1, 100.0, 1024));
        FAIL() << "expected a resolution error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::resolution);
    }
    EXPECT_THROW(make_moment_vanishing_bump(-1.0, 0, bump_grid()), Error);
}

TEST(AnnularCutoff, FlatAndSupport) {
    const auto psi = make_annular_cutoff(0.05);
    const double e1[] = {1.0};
    EXPECT_EQ(psi(e1), 1.0);
    EXPECT_EQ(psi.radial(2.0), 0.0);
    EXPECT_EQ(psi.radial(std::exp2(-0.5 + 0.05)), 1.0);
    EXPECT_EQ(psi.radial(std::exp2(0.5 - 0.05)), 1.0);
    EXPECT_EQ(psi.radial(std::exp2(0.5 + 0.05)), 0.0);
    EXPECT_EQ(psi.radial(std::exp2(-0.5 - 0.05)), 0.0);
    EXPECT_EQ(make_annular_cutoff(0.24).radial(2.0), 0.0);
}

TEST(AnnularCutoff, PartitionOfUnity) {
    const auto psi = make_annular_cutoff(0.05);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> lg(-8.0, 8.0), ang(0.0, 2.0 * pi);
    for (int t = 0; t < 100; ++t) {
        const double rho = std::exp2(lg(rng)), th = ang(rng);
        const double xi[] = {rho * std::cos(th), rho * std::sin(th)};
        double s = 0.0;
        for (int k = -10; k <= 10; ++k) {
            const double z[] = {xi[0] / std::exp2(k), xi[1] / std::exp2(k)};
            s += psi(z);
        }
        ASSERT_NEAR(s, 1.0, 1e-12) << "rho = " << rho;
    }
}

TEST(AnnularCutoff, GammaRange) {
    EXPECT_THROW(make_annular_cutoff(0.0), Error);
    EXPECT_THROW(make_annular_cutoff(0.25), Error);
}

TEST(WideBump, Profile) {
    const auto w = make_wide_bump(r);
    const double zero[] = {0.0}, three[] = {3.0 * r};
    EXPECT_EQ(w.hat(zero), 1.0);
    EXPECT_EQ(w.hat(three), 0.0);
    EXPECT_EQ(w.hat_radial(r), 1.0);
    EXPECT_EQ(w.hat_radial(2.0 * r), 0.0);
    EXPECT_GT(w.hat_radial(1.5 * r), 0.0);
    EXPECT_LT(w.hat_radial(1.5 * r), 1.0);
}

TEST(WideBump, IdentityOnBumpSupport) {
    const auto w = make_wide_bump(r);
    const auto& hat = default_bump().phi_hat_samples();
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double xi[] = {hat.point(i)[0]};
        ASSERT_EQ(w.hat(xi) * hat[i], hat[i]);
    }
}

TEST(Admissibility, EpsilonRange) {
    const auto psi = make_annular_cutoff(0.05);
    const auto a = check_admissible(0.125, r, 2, 1, psi);
    EXPECT_TRUE(a.admissible);
    EXPECT_NEAR(a.inner, 1.0 - 0.125 * r, 1e-15);
    EXPECT_TRUE(check_admissible(1.0, r, 2, 1, psi).admissible);
    const auto big = check_admissible(8.0, r, 2, 1, psi);
    EXPECT_FALSE(big.admissible);
    EXPECT_FALSE(big.reason.empty());
}
