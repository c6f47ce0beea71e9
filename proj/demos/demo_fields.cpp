// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Tour of the field library: builds the default d=3 spherical gap, evaluates
// a rigid-motion field and a wall-datum field at a neck point, and prints the
// pointwise quantities the verification battery is built from (velocity,
// pressure, divergence, Stokes residual, boundary values).

#include <cstdio>
#include <string>

#include <gapflow/gapflow.hpp>

using namespace gapflow;

namespace {

void show_field(const GapConfig& cfg, const FieldId& id, const Point<3>& x) {
    const auto ev = evaluate_field<3>(cfg, id, x);
    const auto res = residual<3>(cfg, id, x);
    std::printf("%s at (%g, %g, %g):\n", family_name(cfg, id).c_str(), x[0], x[1], x[2]);
    std::printf("  v        = (%.12g, %.12g, %.12g)\n", ev.v[0].v, ev.v[1].v, ev.v[2].v);
    std::printf("  p        = %.12g\n", ev.p);
    std::printf("  div v    = %.3e   (x delta = %.3e)\n", divergence(ev.v),
                divergence(ev.v) * delta<2>(cfg, {x[0], x[1]}));
    std::printf("  residual = (%.3e, %.3e, %.3e)\n", res[0], res[1], res[2]);
}

void show_boundary(const GapConfig& cfg, const FieldId& id, double x1, double x2) {
    const auto [bottom, top] = gap_surfaces(cfg, std::array<double, 2>{x1, x2});
    const auto datum = boundary_datum<3>(id, Point<3>{x1, x2, bottom});
    const auto on_wall = evaluate_field<3>(cfg, id, Point<3>{x1, x2, bottom});
    const auto on_top = evaluate_field<3>(cfg, id, Point<3>{x1, x2, top});
    std::printf("%s boundary values at x' = (%g, %g):\n", family_name(cfg, id).c_str(), x1, x2);
    std::printf("  wall  (x3 = %-12g): v = (%.12g, %.12g, %.12g), datum (%g, %g, %g)\n", bottom,
                on_wall.v[0].v, on_wall.v[1].v, on_wall.v[2].v, datum[0], datum[1], datum[2]);
    std::printf("  rigid (x3 = %-12g): v = (%.12g, %.12g, %.12g)\n", top, on_top.v[0].v,
                on_top.v[1].v, on_top.v[2].v);
}

}  // namespace

int main() {
    GapConfig cfg;
    cfg.eps = 1e-3;
    cfg.finalize();
    std::printf("gap: d=%d, eps=%g, kappa1=%g, kappa2=%g, kappa=%g, R=%g\n\n", cfg.d, cfg.eps,
                cfg.kappa1, cfg.kappa2, cfg.kappa, cfg.R);

    const Point<3> x{0.12, -0.07, 0.5 * cfg.eps + 0.3 * (0.12 * 0.12 + 0.07 * 0.07)};

    // Tangential rigid translation: the dominant |ln eps| mode.
    show_field(cfg, {FamilyKind::Rigid, 1, 0, 1}, x);
    std::printf("\n");
    // Vertical squeeze mode: the stiffest direction (~ 1/eps energy).
    show_field(cfg, {FamilyKind::Rigid, 3, 0, 1}, x);
    std::printf("\n");
    // Wall datum x1 e1: the first polynomial family.
    show_field(cfg, {FamilyKind::Phi1, 0, 1, 1}, x);
    std::printf("\n");

    // Boundary values are exact by construction (sandwich profiles vanish or
    // hit the datum bitwise on both surfaces).
    show_boundary(cfg, {FamilyKind::Rigid, 1, 0, 1}, 0.2, 0.1);
    std::printf("\n");
    show_boundary(cfg, {FamilyKind::Phi1, 0, 1, 1}, 0.2, 0.1);
    return 0;
}
