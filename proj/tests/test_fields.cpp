// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Unit tests for the auxiliary fields: pointwise incompressibility, boundary
// values on both surfaces, jet consistency against finite differences,
// pressure-gradient consistency, exact cancellation identities, and the
// energy pairing.  Families are exercised across all geometry classes,
// including d = 4 instantiations.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "gapflow/fields.hpp"

using gapflow::FamilyKind;
using gapflow::FieldId;
using gapflow::GapConfig;
using gapflow::GeometryClass;
using gapflow::Point;

namespace {

GapConfig spherical(double eps = 1e-3) {
    GapConfig cfg;
    cfg.eps = eps;
    cfg.finalize();
    return cfg;
}

GapConfig ellipsoid(double eps = 1e-3) {
    GapConfig cfg;
    cfg.eps = eps;
    cfg.kappa1 = 2.0;
    cfg.kappa2 = 3.0;
    cfg.kappa = 1.0;
    cfg.finalize();
    return cfg;
}

template <int D>
GapConfig higher(double eps = 1e-3) {
    GapConfig cfg;
    cfg.d = D;
    cfg.eps = eps;
    cfg.finalize();
    return cfg;
}

FieldId rigid(int alpha) { return {FamilyKind::Rigid, alpha, 0, 1}; }
FieldId phi1(int l, int i = 1) { return {FamilyKind::Phi1, 0, l, i}; }
FieldId phi2(int l, int i = 1) { return {FamilyKind::Phi2, 0, l, i}; }
FieldId phi3(int l, int j) { return {FamilyKind::Phi3, 0, l, j}; }

// All wall-datum families exercised in the d = 3 test battery.
std::vector<FieldId> wall_families_3d() {
    std::vector<FieldId> out;
    for (int l = 0; l <= 3; ++l) out.push_back(phi1(l, 1));
    for (int l = 1; l <= 3; ++l) out.push_back(phi1(l, 2));
    for (int l = 0; l <= 3; ++l) out.push_back(phi2(l, 1));
    for (int l = 1; l <= 3; ++l) out.push_back(phi2(l, 2));
    for (int l = 1; l <= 2; ++l)
        for (int j = 1; j <= 3; ++j) out.push_back(phi3(l, j));
    return out;
}

template <int D>
void check_divergence_free(const GapConfig& cfg, const FieldId& id, int n, std::uint64_t seed) {
    const auto pts = gapflow::sample_neck<D>(cfg, cfg.R, n, seed);
    double worst = 0.0;
    for (const auto& x : pts) {
        const auto ev = gapflow::evaluate_field<D>(cfg, id, x);
        std::array<double, static_cast<std::size_t>(D - 1)> xp{};
        for (int i = 0; i + 1 < D; ++i) xp[i] = x[i];
        const double scaled = std::abs(gapflow::divergence(ev.v)) * gapflow::delta(cfg, xp);
        worst = std::max(worst, scaled);
    }
    INFO("family " << gapflow::family_name(cfg, id) << ", sup |div v| * delta = " << worst);
    CHECK(worst <= 1e-9);
}

template <int D>
void check_boundary_values(const GapConfig& cfg, const FieldId& id, int n, std::uint64_t seed) {
    const auto pts = gapflow::sample_neck<D>(cfg, cfg.R, n, seed);
    const bool wall = id.kind != FamilyKind::Rigid;
    for (const auto& x : pts) {
        std::array<double, static_cast<std::size_t>(D - 1)> xp{};
        for (int i = 0; i + 1 < D; ++i) xp[i] = x[i];
        const auto [bottom, top] = gapflow::gap_surfaces(cfg, xp);

        Point<D> xb = x, xt = x;
        xb[D - 1] = bottom;
        xt[D - 1] = top;
        const auto evb = gapflow::evaluate_field<D>(cfg, id, xb);
        const auto evt = gapflow::evaluate_field<D>(cfg, id, xt);
        const auto datum = gapflow::boundary_datum<D>(id, wall ? xb : xt);
        const auto datum_other = gapflow::boundary_datum<D>(id, wall ? xt : xb);

        // Relative scale: the datum's own magnitude over both surfaces (it
        // can vanish identically on one surface, e.g. x_d^l over a flat wall).
        double scale = 1e-30;
        for (int i = 0; i < D; ++i)
            scale = std::max({scale, std::abs(datum[i]), std::abs(datum_other[i])});
        for (int i = 0; i < D; ++i) {
            const double on = wall ? evb.v[i].v : evt.v[i].v;
            const double off = wall ? evt.v[i].v : evb.v[i].v;
            INFO("family " << gapflow::family_name(cfg, id) << " component " << i);
            CHECK(std::abs(on - datum[i]) <= 1e-12 * scale);
            CHECK(std::abs(off) <= 1e-12 * scale);
        }
    }
}

template <int D>
void check_jets_against_fd(const GapConfig& cfg, const FieldId& id, int n, std::uint64_t seed) {
    const auto pts = gapflow::sample_neck<D>(cfg, 0.5 * cfg.R, n, seed);
    for (const auto& x : pts) {
        std::array<double, static_cast<std::size_t>(D - 1)> xp{};
        for (int i = 0; i + 1 < D; ++i) xp[i] = x[i];
        const double step = 1e-4 * gapflow::delta(cfg, xp);
        const auto ev = gapflow::evaluate_field<D>(cfg, id, x);

        for (int dir = 0; dir < D; ++dir) {
            Point<D> xl = x, xr = x;
            xl[dir] -= step;
            xr[dir] += step;
            const auto evl = gapflow::evaluate_field<D>(cfg, id, xl, false);
            const auto evr = gapflow::evaluate_field<D>(cfg, id, xr, false);
            double scale = 1e-12;
            for (int c = 0; c < D; ++c)
                scale = std::max({scale, std::abs(evr.v[c].v), std::abs(evl.v[c].v)});
            scale /= step;
            for (int c = 0; c < D; ++c) {
                const double fd = (evr.v[c].v - evl.v[c].v) / (2.0 * step);
                INFO("family " << gapflow::family_name(cfg, id) << " d v[" << c << "]/d x[" << dir << "]");
                CHECK(std::abs(ev.v[c].g[dir] - fd) <=
                      1e-4 * (std::abs(ev.v[c].g[dir]) + std::abs(fd) + scale));
            }
            // Pressure gradient against the finite difference of the value.
            const double pfd = (evr.p - evl.p) / (2.0 * step);
            const double pscale = (std::abs(evr.p) + std::abs(evl.p)) / step + 1e-12;
            CHECK(std::abs(ev.grad_p[dir] - pfd) <=
                  1e-4 * (std::abs(ev.grad_p[dir]) + std::abs(pfd) + pscale));
        }
    }
}

}  // namespace

TEST_CASE("rigid generator values match hand-computed examples") {
    const Point<3> x{1.0, 2.0, 5.0};
    CHECK(gapflow::rigid_basis<3>(1, x) == Point<3>{1.0, 0.0, 0.0});
    CHECK(gapflow::rigid_basis<3>(4, x) == Point<3>{2.0, -1.0, 0.0});
    CHECK(gapflow::rigid_basis<3>(5, x) == Point<3>{5.0, 0.0, -1.0});
    CHECK(gapflow::rigid_basis<3>(6, x) == Point<3>{0.0, 5.0, -2.0});
    CHECK_THROWS_AS(gapflow::rigid_basis<3>(7, x), gapflow::ConfigError);

    // d = 4 rotation indexing: lexicographic pairs (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
    CHECK(gapflow::rotation_pair(4, 5) == std::pair<int, int>{1, 2});
    CHECK(gapflow::rotation_pair(4, 7) == std::pair<int, int>{1, 4});
    CHECK(gapflow::rotation_pair(4, 8) == std::pair<int, int>{2, 3});
    CHECK(gapflow::rotation_pair(4, 10) == std::pair<int, int>{3, 4});
}

TEST_CASE("wall-datum values match hand-computed examples") {
    CHECK(gapflow::boundary_datum<3>(phi1(2, 2), {0.1, 0.3, 0.0}) ==
          Point<3>{0.3 * 0.3, 0.0, 0.0});
    CHECK(gapflow::boundary_datum<3>(phi3(1, 3), {0.1, 0.3, 0.2}) ==
          Point<3>{0.0, 0.0, 0.2});
    CHECK(gapflow::boundary_datum<3>(phi2(1, 1), {0.1, 0.3, 0.2}) ==
          Point<3>{0.0, 0.0, 0.1});
}

TEST_CASE("spherical d=3: all families are divergence-free in the gap") {
    for (double eps : {1e-2, 1e-4}) {
        const auto cfg = spherical(eps);
        for (int a = 1; a <= 6; ++a) check_divergence_free<3>(cfg, rigid(a), 160, 11);
        for (const auto& id : wall_families_3d()) check_divergence_free<3>(cfg, id, 160, 12);
    }
}

TEST_CASE("spherical d=3: boundary values on both surfaces") {
    const auto cfg = spherical(1e-3);
    for (int a = 1; a <= 6; ++a) check_boundary_values<3>(cfg, rigid(a), 60, 21);
    for (const auto& id : wall_families_3d()) check_boundary_values<3>(cfg, id, 60, 22);
}

TEST_CASE("spherical d=3: jets and pressure gradients agree with finite differences") {
    const auto cfg = spherical(1e-2);
    for (int a : {1, 3, 4, 5}) check_jets_against_fd<3>(cfg, rigid(a), 12, 31);
    for (const auto& id : {phi1(2, 1), phi1(1, 2), phi2(1, 1), phi2(3, 2), phi3(1, 1), phi3(2, 3)})
        check_jets_against_fd<3>(cfg, id, 12, 32);
}

TEST_CASE("ellipsoid d=3: rigid families pass divergence, boundary, jets") {
    const auto cfg = ellipsoid(1e-3);
    REQUIRE(cfg.geometry == GeometryClass::Ellipsoid);
    for (int a = 1; a <= 6; ++a) {
        check_divergence_free<3>(cfg, rigid(a), 160, 41);
        check_boundary_values<3>(cfg, rigid(a), 50, 42);
    }
    for (int a : {1, 4, 6}) check_jets_against_fd<3>(cfg, rigid(a), 10, 43);
    CHECK_THROWS_AS(gapflow::evaluate_field<3>(cfg, phi1(1), {0.0, 0.0, 5e-4}),
                    gapflow::UnsupportedFamily);
}

TEST_CASE("forced ellipsoid formulas at equal curvatures are consistent") {
    GapConfig cfg;
    cfg.kappa1 = 2.0;
    cfg.kappa2 = 2.0;
    cfg.kappa = 0.5;
    cfg.eps = 1e-3;
    cfg.geometry = GeometryClass::Ellipsoid;
    cfg.finalize();
    GapConfig sph = cfg;
    sph.geometry = GeometryClass::Spherical;

    // Translations and vertical-axis rotations coincide between the two
    // formula sets; the in-plane rotation has a different (equally valid)
    // correction profile, so both are checked divergence-free instead.
    const auto pts = gapflow::sample_neck<3>(cfg, cfg.R, 40, 51);
    for (int a : {1, 2, 3, 5, 6}) {
        for (const auto& x : pts) {
            const auto ee = gapflow::evaluate_field<3>(cfg, rigid(a), x);
            const auto es = gapflow::evaluate_field<3>(sph, rigid(a), x);
            for (int c = 0; c < 3; ++c)
                CHECK(ee.v[c].v == Catch::Approx(es.v[c].v).margin(1e-12));
            CHECK(ee.p == Catch::Approx(es.p).margin(1e-9));
        }
    }
    check_divergence_free<3>(cfg, rigid(4), 160, 52);
}

TEST_CASE("d=4: rigid and wall-datum families stay divergence-free") {
    const auto cfg = higher<4>(1e-3);
    for (int a = 1; a <= 10; ++a) check_divergence_free<4>(cfg, rigid(a), 120, 61);
    for (const auto& id :
         {phi1(0, 1), phi1(1, 1), phi1(2, 1), phi1(1, 2), phi2(0, 1), phi2(1, 1), phi2(2, 1),
          phi3(1, 1), phi3(2, 3)})
        check_divergence_free<4>(cfg, id, 120, 62);
    CHECK_THROWS_AS(gapflow::evaluate_field<4>(cfg, phi3(1, 4), {0.0, 0.0, 0.0, 5e-4}),
                    gapflow::UnsupportedFamily);
}

TEST_CASE("d=4: boundary values for the acceptance modes") {
    const auto cfg = higher<4>(1e-3);
    for (int a : {1, 4, 5, 10}) check_boundary_values<4>(cfg, rigid(a), 40, 71);
    check_boundary_values<4>(cfg, phi1(1, 1), 40, 72);
}

TEST_CASE("d=5: translation and one rotation spot check") {
    const auto cfg = higher<5>(1e-3);
    check_divergence_free<5>(cfg, rigid(1), 80, 81);
    check_divergence_free<5>(cfg, rigid(5), 80, 82);    // vertical translation
    check_divergence_free<5>(cfg, rigid(6), 80, 83);    // in-plane rotation (1,2)
    check_divergence_free<5>(cfg, rigid(15), 80, 84);   // pair (4,5) hits the vertical axis
    check_boundary_values<5>(cfg, rigid(15), 30, 85);
}

TEST_CASE("exact identities: midpoint shear and rigid-complement cancellation") {
    const auto cfg = spherical(1e-3);
    const Point<3> mid{0.0, 0.0, cfg.eps / 2.0};

    // d_3 of the first translation's own component at the gap midpoint is
    // exactly 1/eps: the datum weight contributes, the correction does not.
    const auto ev1 = gapflow::evaluate_field<3>(cfg, rigid(1), mid);
    CHECK(ev1.v[0].g[2] == 1.0 / cfg.eps);

    // The degree-zero wall datum is the literal complement of the rigid
    // translation: values, derivatives, and pressures negate bitwise.
    const auto ev0 = gapflow::evaluate_field<3>(cfg, phi1(0, 1), mid);
    CHECK(ev0.v[0].g[2] == -1.0 / cfg.eps);
    const auto pts = gapflow::sample_neck<3>(cfg, cfg.R, 25, 91);
    for (const auto& x : pts) {
        const auto a = gapflow::evaluate_field<3>(cfg, phi1(0, 1), x);
        const auto b = gapflow::evaluate_field<3>(cfg, rigid(1), x);
        for (int c = 0; c < 3; ++c) {
            CHECK(a.v[c].v == (c == 0 ? 1.0 : 0.0) - b.v[c].v);
            for (int i = 0; i < 3; ++i) CHECK(a.v[c].g[i] == -b.v[c].g[i]);
        }
        CHECK(a.p == -b.p);
        const auto ea = gapflow::strain(a.v);
        const auto eb = gapflow::strain(b.v);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) CHECK(ea(i, j) == -eb(i, j));
    }

    // Same mechanism for the normal and vertical-direction data.
    const auto c2 = gapflow::evaluate_field<3>(cfg, phi2(0, 1), mid);
    const auto r3 = gapflow::evaluate_field<3>(cfg, rigid(3), mid);
    CHECK(c2.v[2].v == 1.0 - r3.v[2].v);
    CHECK(c2.p == -r3.p);
}

TEST_CASE("energy pairing is symmetric with nonnegative diagonal") {
    const auto cfg = spherical(1e-3);
    const auto pts = gapflow::sample_neck<3>(cfg, cfg.R, 30, 101);
    const std::vector<FieldId> ids{rigid(1), rigid(3), rigid(5), phi1(1, 1), phi2(1, 1)};
    for (const auto& x : pts) {
        for (std::size_t a = 0; a < ids.size(); ++a) {
            CHECK(gapflow::energy_density<3>(cfg, ids[a], ids[a], x) >= 0.0);
            for (std::size_t b = a + 1; b < ids.size(); ++b) {
                const double ab = gapflow::energy_density<3>(cfg, ids[a], ids[b], x);
                const double ba = gapflow::energy_density<3>(cfg, ids[b], ids[a], x);
                CHECK(ab == Catch::Approx(ba).margin(1e-20));
            }
        }
    }
}

TEST_CASE("residual stays bounded by the gap scaling on a coarse sweep") {
    // Pointwise sanity only; calibrated envelope verification lives in the
    // check battery.  The residual of the first translation scales like
    // 1/delta, so delta * |residual| stays of order one.
    const auto cfg = spherical(1e-4);
    const auto pts = gapflow::sample_neck<3>(cfg, cfg.R, 50, 111);
    for (const auto& x : pts) {
        const auto r = gapflow::residual<3>(cfg, rigid(1), x);
        std::array<double, 2> xp{x[0], x[1]};
        const double dl = gapflow::delta(cfg, xp);
        const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
        CHECK(norm * dl * dl / cfg.mu < 50.0);
    }
}

TEST_CASE("family names round-trip through the parser") {
    const auto cfg = spherical();
    for (const auto& id : {rigid(1), rigid(6), phi1(2, 1), phi1(0, 1), phi2(3, 2), phi3(1, 3)}) {
        const auto name = gapflow::family_name(cfg, id);
        const auto back = gapflow::parse_family(name);
        CHECK(back.kind == id.kind);
        if (id.kind == FamilyKind::Rigid) {
            CHECK(back.alpha == id.alpha);
        } else {
            CHECK(back.l == id.l);
            CHECK(back.idx == id.idx);
        }
    }
    CHECK(gapflow::family_name(cfg, phi1(2, 1)) == "spherical/phi1_l2_i1");
    CHECK_THROWS_AS(gapflow::parse_family("spherical/banana"), gapflow::ConfigError);
}
