// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Unit tests for the gap geometry: configuration validation, gap width and
// surface heights, the normalized height coordinate and its exact jet
// (cross-checked by finite differences), and the stratified sampler.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "gapflow/geometry.hpp"

using gapflow::GapConfig;
using gapflow::GeometryClass;
using gapflow::Point;

namespace {

GapConfig basic3d() {
    GapConfig cfg;
    cfg.d = 3;
    cfg.eps = 1e-3;
    cfg.kappa1 = 1.0;
    cfg.kappa2 = 1.0;
    cfg.kappa = 0.0;
    cfg.R = 0.5;
    cfg.finalize();
    return cfg;
}

}  // namespace

TEST_CASE("configuration validation enforces the invariants") {
    SECTION("well-formed isotropic config resolves to spherical") {
        const auto cfg = basic3d();
        CHECK(cfg.geometry == GeometryClass::Spherical);
    }
    SECTION("anisotropic d=3 resolves to ellipsoid") {
        GapConfig cfg;
        cfg.kappa1 = 2.0;
        cfg.kappa2 = 3.0;
        cfg.kappa = 1.0;
        cfg.eps = 1e-3;
        cfg.finalize();
        CHECK(cfg.geometry == GeometryClass::Ellipsoid);
    }
    SECTION("d >= 4 resolves to higher_d and copies kappa1 into kappa2") {
        GapConfig cfg;
        cfg.d = 4;
        cfg.kappa2 = 77.0;  // ignored for d >= 4
        cfg.finalize();
        CHECK(cfg.geometry == GeometryClass::HigherD);
        CHECK(cfg.kappa2 == cfg.kappa1);
    }
    SECTION("degenerate curvature is rejected with a recognizable message") {
        GapConfig cfg;
        cfg.kappa1 = 1.0;
        cfg.kappa2 = 1.0;
        cfg.kappa = 1.0;
        CHECK_THROWS_AS(cfg.finalize(), gapflow::DegenerateCurvature);
        try {
            cfg.finalize();
        } catch (const std::exception& e) {
            CHECK(std::string(e.what()).find("DegenerateCurvature") != std::string::npos);
        }
    }
    SECTION("invalid scalars are rejected") {
        GapConfig cfg;
        cfg.eps = 0.0;
        CHECK_THROWS_AS(cfg.finalize(), gapflow::ConfigError);
        cfg = GapConfig{};
        cfg.R = 1.5;
        CHECK_THROWS_AS(cfg.finalize(), gapflow::ConfigError);
        cfg = GapConfig{};
        cfg.d = 2;
        CHECK_THROWS_AS(cfg.finalize(), gapflow::ConfigError);
        cfg = GapConfig{};
        cfg.eps = 0.7;  // violates eps < R^2 (kappa1 - kappa) with R = 0.8
        CHECK_THROWS_AS(cfg.finalize(), gapflow::ConfigError);
    }
    SECTION("R = 1 is allowed") {
        GapConfig cfg;
        cfg.R = 1.0;
        cfg.eps = 1e-4;
        CHECK_NOTHROW(cfg.finalize());
    }
    SECTION("explicit geometry class is consistency-checked") {
        GapConfig cfg;
        cfg.geometry = GeometryClass::HigherD;  // but d = 3
        CHECK_THROWS_AS(cfg.finalize(), gapflow::ConfigError);
        cfg = GapConfig{};
        cfg.kappa1 = 2.0;
        cfg.kappa2 = 3.0;
        cfg.kappa = 1.0;
        cfg.geometry = GeometryClass::Spherical;  // but kappa1 != kappa2
        CHECK_THROWS_AS(cfg.finalize(), gapflow::ConfigError);
    }
}

TEST_CASE("gap width matches hand-evaluated values") {
    GapConfig cfg;
    cfg.eps = 1e-3;
    cfg.kappa1 = 2.0;
    cfg.kappa2 = 3.0;
    cfg.kappa = 1.0;
    cfg.finalize();

    CHECK(gapflow::delta(cfg, std::array<double, 2>{0.0, 0.0}) ==
          Catch::Approx(1e-3).epsilon(1e-15));
    CHECK(gapflow::delta(cfg, std::array<double, 2>{0.1, 0.0}) ==
          Catch::Approx(0.011).epsilon(1e-15));
    // eps + (k1-k) x1^2 + (k2-k) x2^2 = 1e-3 + 1*0.01 + 2*0.04
    CHECK(gapflow::delta(cfg, std::array<double, 2>{0.1, 0.2}) ==
          Catch::Approx(0.091).epsilon(1e-15));
}

TEST_CASE("surface heights match hand-evaluated values") {
    GapConfig cfg;
    cfg.eps = 1e-2;
    cfg.kappa1 = 2.0;
    cfg.kappa2 = 2.0;
    cfg.kappa = 1.0;
    cfg.finalize();

    const auto at_origin = gapflow::gap_surfaces(cfg, std::array<double, 2>{0.0, 0.0});
    CHECK(at_origin.first == 0.0);
    CHECK(at_origin.second == Catch::Approx(1e-2).epsilon(1e-15));

    // At |x'| = 1 with eps -> 0 the surfaces sit at kappa and kappa1.
    GapConfig wide = cfg;
    wide.eps = 1e-12;
    wide.R = 1.0;
    wide.finalize();
    const auto at_unit = gapflow::gap_surfaces(wide, std::array<double, 2>{1.0, 0.0});
    CHECK(at_unit.first == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(at_unit.second == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("normalized height coordinate: exact anchors and membership") {
    const auto cfg = basic3d();

    // Midpoint of the gap on the axis sits at k = 0 exactly.
    CHECK(gapflow::keller_k<3>(cfg, {0.0, 0.0, cfg.eps / 2.0}) == 0.0);
    // Bottom and top surfaces map to -1/2 and +1/2.
    CHECK(gapflow::keller_k<3>(cfg, {0.1, 0.0, 0.0}) == -0.5);
    const double top = cfg.eps + cfg.kappa1 * 0.01;
    CHECK(gapflow::keller_k<3>(cfg, {0.1, 0.0, top}) == Catch::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS((gapflow::keller_k<3>(cfg, {0.0, 0.0, -1e-9})), gapflow::OutsideNeck);
    CHECK_THROWS_AS((gapflow::keller_k<3>(cfg, {0.0, 0.0, cfg.eps + 1e-9})),
                    gapflow::OutsideNeck);
    CHECK_THROWS_AS((gapflow::keller_k<3>(cfg, {2.1 * cfg.R, 0.0, 1.0})),
                    gapflow::OutsideNeck);
}

TEST_CASE("height-coordinate jet: exact vertical derivative and identity") {
    GapConfig cfg;
    cfg.eps = 1e-3;
    cfg.kappa1 = 2.0;
    cfg.kappa2 = 3.0;
    cfg.kappa = 0.5;
    cfg.finalize();

    const Point<3> x{0.05, -0.08, 0.01};
    const auto f = gapflow::make_frame<3>(cfg, x);
    const double dl = f.delta.v;

    // d_d k = 1/delta exactly (jet division of an affine numerator).
    CHECK(f.k.g[2] == Catch::Approx(1.0 / dl).epsilon(1e-15));
    // delta * d_i k = -Ht_i for the planar directions.
    for (int i = 0; i < 2; ++i)
        CHECK(dl * f.k.g[i] == Catch::Approx(-f.Ht[i].v).epsilon(1e-13));
    // k itself matches the scalar evaluator.
    CHECK(f.k.v == Catch::Approx(gapflow::keller_k<3>(cfg, x)).epsilon(1e-15));
}

TEST_CASE("height-coordinate jet agrees with finite differences at 100 points") {
    GapConfig cfg;
    cfg.eps = 1e-3;
    cfg.kappa1 = 1.5;
    cfg.kappa2 = 1.5;
    cfg.kappa = 0.25;
    cfg.finalize();

    const auto pts = gapflow::sample_neck<3>(cfg, cfg.R, 100, 20260814ull);
    REQUIRE(pts.size() == 100);
    for (const auto& x : pts) {
        const auto jet = gapflow::keller_k_jet<3>(cfg, x);
        std::array<double, 2> xp{x[0], x[1]};
        const double step = 1e-5 * gapflow::delta(cfg, xp);
        for (int i = 0; i < 3; ++i) {
            Point<3> xl = x, xr = x;
            xl[i] -= step;
            xr[i] += step;
            // Disable membership checks: the FD stencil may poke just outside.
            const auto kl = gapflow::make_frame<3>(cfg, xl, false).k.v;
            const auto kr = gapflow::make_frame<3>(cfg, xr, false).k.v;
            const double fd = (kr - kl) / (2.0 * step);
            const double scale = std::abs(jet.g[i]) + 1.0 / jet.v + 1.0;
            CHECK(std::abs(jet.g[i] - fd) <=
                  1e-5 * (std::abs(jet.g[i]) + std::abs(fd) + scale * 1e-6) + 1e-12);
        }
    }
}

TEST_CASE("stratified sampler is deterministic and in-neck") {
    const auto cfg = basic3d();

    const auto a = gapflow::sample_neck<3>(cfg, 0.4, 500, 42);
    const auto b = gapflow::sample_neck<3>(cfg, 0.4, 500, 42);
    REQUIRE(a.size() == 500);
    CHECK(a == b);  // bitwise identical

    const auto c = gapflow::sample_neck<3>(cfg, 0.4, 500, 43);
    CHECK(a != c);  // a different seed moves the points

    CHECK(gapflow::sample_neck<3>(cfg, 0.4, 0, 42).empty());

    std::set<double> radii;
    for (const auto& x : a) {
        const double r = std::hypot(x[0], x[1]);
        CHECK(r < 0.4);
        std::array<double, 2> xp{x[0], x[1]};
        const auto [bottom, top] = gapflow::gap_surfaces(cfg, xp);
        CHECK(x[2] > bottom);
        CHECK(x[2] < top);
        radii.insert(r);
    }
    // Geometric strata reach well below the gap length scale sqrt(eps).
    CHECK(*radii.begin() < std::sqrt(cfg.eps) / 2.0);

    CHECK_THROWS_AS(gapflow::sample_neck<3>(cfg, 0.6, 10, 1), gapflow::ConfigError);
    CHECK_THROWS_AS(gapflow::sample_neck<3>(cfg, 0.0, 10, 1), gapflow::ConfigError);
}

TEST_CASE("sampler works in d = 4 with normalized directions") {
    GapConfig cfg;
    cfg.d = 4;
    cfg.eps = 1e-3;
    cfg.finalize();

    const auto pts = gapflow::sample_neck<4>(cfg, 0.3, 200, 7);
    REQUIRE(pts.size() == 200);
    for (const auto& x : pts) {
        double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        CHECK(r2 < 0.09);
        std::array<double, 3> xp{x[0], x[1], x[2]};
        const auto [bottom, top] = gapflow::gap_surfaces(cfg, xp);
        CHECK(x[3] > bottom);
        CHECK(x[3] < top);
    }
}
