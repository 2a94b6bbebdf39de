#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blext/extend.hpp"
#include "blext/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace blext;

namespace {

constexpr double kPi = kTwoPi / 2;

// central-difference Jacobian of the full plane map, one estimate per axis
Jacobian2 fd_jacobian(const PlaneExtension& F, cplx z, double h = 1e-6) {
    cplx dx = (F.eval(z + h) - F.eval(z - h)) / (2 * h);
    cplx dy = (F.eval(z + cplx(0, h)) - F.eval(z - cplx(0, h))) / (2 * h);
    Jacobian2 m;
    m << dx.real(), dy.real(), dx.imag(), dy.imag();
    return m;
}

}  // namespace

TEST_CASE("extensions of circles reproduce the scaling") {
    for (double R : {1.0, 2.5}) {
        auto f = circle_embedding(0, R, 64);
        auto F = extend_plane_symmetric(f);
        SplitMix64 rng(5);
        for (int k = 0; k < 120; ++k) {
            double r = k < 60 ? 0.05 + 0.90 * rng.uniform()
                              : 1.02 + 8.0 * rng.uniform();
            cplx z = std::polar(r, rng.uniform(0.0, kTwoPi));
            CHECK(std::abs(F.eval(z) - R * z) <= 1e-6 * R);
        }
        // the boundary band interpolates the same nodes f interpolates, so it
        // must match f's own chords, not the smooth circle through them
        for (int k = 0; k < 40; ++k) {
            double th = 0.161 * k;
            CHECK(std::abs(F.eval(std::polar(1.0, th)) - f.eval(th)) <=
                  1e-6 * R);
        }
        CHECK(std::abs(F.eval(0)) <= 1e-12 * R);
        // jacobians are R times a rotation-free identity
        for (int k = 0; k < 20; ++k) {
            cplx z = std::polar(k < 10 ? 0.5 : 1.8, 0.7 * k);
            Jacobian2 J = F.jacobian(z);
            CHECK((J - R * Jacobian2::Identity()).norm() <= 2e-5 * R);
        }
        CHECK(F.outer.mod_growth_lo >= std::exp(-8 * kPi));
        CHECK(F.outer.mod_growth_hi <= std::exp(8 * kPi));
        // an exactly conformal pair keeps |zeta| |z| == |zeta|^2 / R^0 ... the
        // identity correspondence makes z = 1/conj(zeta), so the product is 1
        CHECK(F.outer.mod_growth_lo == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(F.outer.mod_growth_hi == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("boundary agreement for an ellipse stays within tolerance") {
    auto f = ellipse_embedding(2.0, 1.0, 256);
    auto F = extend_plane_symmetric(f);
    double d = f.diam();
    auto ba = boundary_agreement(F, 4);
    CHECK(ba.inner <= 1e-3 * d);
    CHECK(ba.outer <= 1e-3 * d);
    CHECK(ba.across <= 1e-3 * d);
    // dense direct sweep of both band evaluators; the composed boundary map
    // interpolates the very nodes f interpolates, so only the small
    // symmetrization shift of the correspondence remains
    double worst = 0;
    for (int k = 0; k < 1024; ++k) {
        double th = kTwoPi * (k + 0.3) / 1024;
        cplx target = f.eval(th);
        worst = std::max(worst, std::abs(F.eval(std::polar(1.0, th)) - target));
        worst = std::max(worst,
                         std::abs(F.eval(std::polar(1.0005, th)) - target));
    }
    CHECK(worst <= 1e-4 * d);
}

TEST_CASE("central symmetry is transported to the extension") {
    auto f = ellipse_embedding(2.0, 1.0, 128);
    auto g = trig_embedding(0.15, 4, 0.1, 2, 128);
    for (const auto& src : {f, g}) {
        auto F = extend_plane_symmetric(src);
        double d = src.diam();
        SplitMix64 rng(9);
        for (int k = 0; k < 80; ++k) {
            double r = k < 40 ? 0.05 + 0.93 * rng.uniform()
                              : 1.02 + 30.0 * rng.uniform();
            cplx z = std::polar(r, rng.uniform(0.0, kTwoPi));
            CHECK(std::abs(F.eval(z) + F.eval(-z)) <= 1e-12 * d);
        }
        // also through the boundary band
        for (int k = 0; k < 64; ++k) {
            cplx z = std::polar(1.0, kTwoPi * k / 64 + 0.01);
            CHECK(std::abs(F.eval(z) + F.eval(-z)) <= 1e-12 * d);
        }
    }
}

TEST_CASE("jacobian chain matches finite differences") {
    auto f = ellipse_embedding(2.0, 1.0, 128);
    auto F = extend_plane_symmetric(f);
    SplitMix64 rng(31);
    for (int k = 0; k < 60; ++k) {
        double r = k < 30 ? 0.10 + 0.85 * rng.uniform()
                          : 1.05 + 4.0 * rng.uniform();
        cplx z = std::polar(r, rng.uniform(0.0, kTwoPi));
        Jacobian2 J = F.jacobian(z);
        Jacobian2 Jfd = fd_jacobian(F, z);
        CHECK((J - Jfd).norm() <= 1e-4 * J.norm() + 1e-8);
    }
}

TEST_CASE("jacobian grids respect the derivative constants") {
    auto f = ellipse_embedding(2.0, 1.0, 128);
    auto F = extend_plane_symmetric(f);
    auto bl = curve_bilipschitz(f, 1);
    GridSpec spec;
    spec.radii = 12;
    spec.angles = 48;
    std::vector<GridRow> rows;
    auto jr = jacobian_report(F, spec, &rows);
    CHECK(jr.points == rows.size());
    CHECK(jr.points == 6u * 12u * 48u);
    CHECK(jr.min_det > 0);
    CHECK(jr.sup_df > 0);
    CHECK(jr.inner_sup_df <= 1e13 * bl.upper_L);
    CHECK(jr.inner_sup_df_inv <= 1e11 / bl.lower_l);
    CHECK(jr.sup_df <= 1e27 * bl.upper_L);
    CHECK(jr.sup_df_inv <= 1e23 / bl.lower_l);
    // the measured norms are wildly below the theorem constants; record that
    // the slack is at least ten orders of magnitude
    CHECK(jr.sup_df <= 1e3 * bl.upper_L);
    CHECK(jr.sup_df_inv <= 1e3 / bl.lower_l);

    // report JSON carries the margins with the agreed keys
    auto ba = boundary_agreement(F);
    auto j = extension_report_json(F, jr, ba, spec);
    CHECK(j.at("paper_bound_margins").at("interior_df").get<double>() > 0);
    CHECK(j.at("paper_bound_margins").at("interior_df_inv").get<double>() > 0);
    CHECK(j.at("paper_bound_margins").at("global_df").get<double>() > 0);
    CHECK(j.at("paper_bound_margins").at("global_df_inv").get<double>() > 0);
    CHECK(j.at("sup_DF").get<double>() == jr.sup_df);
    CHECK(j.at("empirical_L").get<double>() == bl.upper_L);
    CHECK(j.at("boundary_agreement").at("across").get<double>() == ba.across);
}

TEST_CASE("grid norms are stable under refinement") {
    auto f = ellipse_embedding(2.0, 1.0, 128);
    auto F = extend_plane_symmetric(f);
    GridSpec coarse, fine;
    coarse.radii = 16;
    coarse.angles = 64;
    fine.radii = 32;
    fine.angles = 128;
    auto a = jacobian_report(F, coarse);
    auto b = jacobian_report(F, fine);
    CHECK(std::abs(a.sup_df - b.sup_df) <= 0.05 * b.sup_df);
    CHECK(std::abs(a.sup_df_inv - b.sup_df_inv) <= 0.05 * b.sup_df_inv);
}

TEST_CASE("extension of a wavy symmetric curve is bi-Lipschitz on grids") {
    auto f = trig_embedding(0.1, 4, 0.1, 2, 128);
    REQUIRE(f.symmetric);
    auto F = extend_plane_symmetric(f);
    auto bl = curve_bilipschitz(f, 1);
    // image samples over a polar grid spanning both sides of T
    std::vector<cplx> domain, image;
    for (int i = 0; i < 12; ++i) {
        double r = 0.15 + 0.8 * i / 11.0;
        for (int k = 0; k < 24; ++k) {
            cplx z = std::polar(r, kTwoPi * (k + 0.5) / 24);
            domain.push_back(z);
            image.push_back(F.eval(z));
            z = std::polar(1.02 + 2.0 * i / 11.0, kTwoPi * (k + 0.25) / 24);
            domain.push_back(z);
            image.push_back(F.eval(z));
        }
    }
    auto ext = bilipschitz_constants(domain, image);
    CHECK(ext.upper_L <= 1e27 * bl.upper_L);
    CHECK(ext.lower_l >= 1e-23 * bl.lower_l);
    CHECK(ext.upper_L > 0);
    CHECK(ext.lower_l > 0);
    // injectivity evidence at grid resolution
    int collisions = 0;
    for (std::size_t i = 0; i < domain.size(); ++i)
        for (std::size_t j = i + 1; j < domain.size(); ++j)
            if (std::abs(domain[i] - domain[j]) >= 1e-3 &&
                std::abs(image[i] - image[j]) <= 1e-9)
                ++collisions;
    CHECK(collisions == 0);
}

TEST_CASE("modulus growth of the reflected disk map is certified") {
    auto f = trig_embedding(0.15, 4, 0.1, 2, 128);
    auto s = extend_exterior(f);
    CHECK(s.mod_growth_lo >= std::exp(-8 * kPi));
    CHECK(s.mod_growth_hi <= std::exp(8 * kPi));
    CHECK(s.mod_growth_lo <= s.mod_growth_hi);
    // spot-check the certified range on fresh samples
    for (int k = 0; k < 24; ++k) {
        cplx zeta = std::polar(1.01 + 0.4 * k, 0.37 * k);
        cplx z = psi_inverse(s.chi, 1.0 / std::conj(zeta));
        double prod = std::norm(zeta) * std::norm(z);
        CHECK(prod >= std::exp(-8 * kPi));
        CHECK(prod <= std::exp(8 * kPi));
    }
}

TEST_CASE("domain guards reject out-of-side points and asymmetric sources") {
    std::vector<double> ts(64);
    std::vector<cplx> w(64);
    for (std::size_t j = 0; j < w.size(); ++j) {
        double t = kTwoPi * j / 64;
        ts[j] = t;
        // asymmetric bump on one side only
        w[j] = std::polar(1.0 + 0.2 * std::exp(-10 * std::pow(t - 1, 2)), t);
    }
    auto crooked = embedding_from_nodes(ts, w);
    REQUIRE(!crooked.symmetric);
    CHECK_THROWS_AS(extend_disk(crooked), std::invalid_argument);
    CHECK_THROWS_AS(extend_exterior(crooked), std::invalid_argument);
    CHECK_THROWS_AS(extend_plane_symmetric(crooked), std::invalid_argument);

    auto f = circle_embedding(0, 1.0, 64);
    auto F = extend_plane_symmetric(f);
    CHECK_THROWS_AS(F.inner.eval(cplx(1.1, 0)), std::domain_error);
    CHECK_THROWS_AS(F.outer.eval(cplx(0.5, 0)), std::domain_error);
    CHECK_THROWS_AS(F.inner.jacobian(std::polar(1.0, 0.3)), std::domain_error);
    CHECK_THROWS_AS(F.outer.jacobian(std::polar(1.0, 0.3)), std::domain_error);
    CHECK_THROWS_AS(F.inner.jacobian(cplx(0)), std::domain_error);
    CHECK_THROWS_AS(F.jacobian(std::polar(1.0, 1.1)), std::domain_error);
}

TEST_CASE("winding map values and derivative singular values") {
    CHECK(std::abs(winding_map(cplx(0, 1)) - cplx(-1, 0)) <= 1e-15);
    CHECK(std::abs(winding_map(std::polar(2.0, kPi / 3)) -
                   std::polar(2.0, 2 * kPi / 3)) <= 1e-14);
    CHECK(winding_map(cplx(0)) == cplx(0));
    CHECK_THROWS_AS(winding_jacobian(cplx(0)), std::domain_error);
    SplitMix64 rng(3);
    for (int k = 0; k < 40; ++k) {
        cplx z = std::polar(0.2 + 3 * rng.uniform(), rng.uniform(0.0, kTwoPi));
        Jacobian2 J = winding_jacobian(z);
        CHECK(op_norm(J) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(op_norm_inv(J) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(J.determinant() == doctest::Approx(2.0).epsilon(1e-12));
        // finite differences of the map itself
        double h = 1e-6;
        cplx dx = (winding_map(z + h) - winding_map(z - h)) / (2 * h);
        cplx dy = (winding_map(z + cplx(0, h)) - winding_map(z - cplx(0, h))) /
                  (2 * h);
        CHECK(std::abs(dx - cplx(J(0, 0), J(1, 0))) <= 1e-6);
        CHECK(std::abs(dy - cplx(J(0, 1), J(1, 1))) <= 1e-6);
        // section inverts the winding with arguments in the upper half turn
        cplx s = winding_section(z);
        CHECK(std::abs(winding_map(s) - z) <= 1e-13 * std::abs(z));
        CHECK(std::arg(s) >= -1e-15);
    }
}

TEST_CASE("desymmetrized wrapper reproduces a shifted identity") {
    // wrap the identity-circle core manually: W(core(s(z))) + w0 must be the
    // identity plus w0 because core commutes with the winding structure
    const cplx w0(0.3, -0.2);
    auto f = circle_embedding(0, 1.0, 64);
    auto core = std::make_shared<PlaneExtension>(extend_plane_symmetric(f));
    PlaneExtension F;
    F.source = circle_embedding(w0, 1.0, 64);
    F.desym = PlaneExtension::Desym{w0, 1.0, core};
    SplitMix64 rng(17);
    for (int k = 0; k < 80; ++k) {
        double r = k < 40 ? 0.05 + 0.90 * rng.uniform()
                          : 1.02 + 6.0 * rng.uniform();
        cplx z = std::polar(r, rng.uniform(0.0, kTwoPi));
        CHECK(std::abs(F.eval(z) - (z + w0)) <= 3e-6);
    }
    CHECK(std::abs(F.eval(cplx(0)) - w0) <= 1e-15);
    // continuity across the branch cut of the half-angle section
    for (double r : {0.4, 0.8, 1.3, 2.6}) {
        cplx above = F.eval(cplx(r, 1e-12));
        cplx below = F.eval(cplx(r, -1e-12));
        CHECK(std::abs(above - below) <= 1e-9);
    }
    for (int k = 0; k < 20; ++k) {
        cplx z = std::polar(k < 10 ? 0.6 : 1.7, 0.63 * k);
        Jacobian2 J = F.jacobian(z);
        CHECK((J - Jacobian2::Identity()).norm() <= 1e-4);
        Jacobian2 Jfd = fd_jacobian(F, z);
        CHECK((J - Jfd).norm() <= 1e-4 * J.norm() + 1e-8);
    }
    // the flipped section gives the same map because the core is odd
    PlaneExtension G = F;
    G.desym->section_sign = -1.0;
    for (int k = 0; k < 24; ++k) {
        cplx z = std::polar(0.3 + 0.1 * k, 0.9 * k);
        CHECK(std::abs(F.eval(z) - G.eval(z)) <= 1e-12);
    }
    // boundary agreement runs through the desym path against the shifted
    // circle the wrapper extends; the winding doubles the chord spacing of
    // the core, so the two polygonal boundaries dip out of phase and the gap
    // is the chord sagitta (2 pi/64)^2/8, not the node-level agreement
    auto ba = boundary_agreement(F, 2);
    CHECK(ba.worst() <= 2e-3);
    CHECK(ba.across <= 1e-4);
}

TEST_CASE("plane jacobian report rejects points on T") {
    auto f = circle_embedding(0, 1.0, 64);
    auto F = extend_plane_symmetric(f);
    GridSpec spec;
    spec.radii = 4;
    spec.angles = 8;
    auto jr = jacobian_report(F, spec);
    CHECK(jr.points == 6u * 4u * 8u);
    CHECK(jr.sup_df == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(jr.sup_df_inv == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(jr.min_det == doctest::Approx(1.0).epsilon(1e-4));
}
