// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Closed-form auxiliary velocity/pressure pairs on the gap between the
// particle and the wall.  Every velocity has the sandwich form
//
//     v = b(x) w(k) + E(x) (k^2 - 1/4),
//
// where b is the boundary datum (a rigid-motion generator on the particle
// side, weight w = k + 1/2, or a wall datum, weight w = 1/2 - k) and E is a
// family-specific correction that makes the divergence vanish identically.
// Pressures have the form p = base(x) [+ mu d_d v^(d)] with a family-specific
// base; evaluation returns exact jets for v and value+gradient for p.
//
// Families:
//   rigid alpha        particle rigid motions; generic in d (translations,
//                      then rotation pairs (j,k) in lexicographic order)
//   rigid (ellipsoid)  d = 3 with distinct particle curvatures
//   phi1 (l, i)        wall datum x_i^l e_1        (tangential polynomial)
//   phi2 (l, i)        wall datum x_i^l e_d        (normal polynomial)
//   phi3 (l, j)        wall datum x_d^l e_j        (vertical-coordinate datum)

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "geometry.hpp"
#include "jet.hpp"

namespace gapflow {

struct UnsupportedFamily : std::runtime_error {
    explicit UnsupportedFamily(const std::string& what) : std::runtime_error(what) {}
};

enum class FamilyKind { Rigid, Phi1, Phi2, Phi3 };

// Identifies one auxiliary field.
//   Rigid: alpha in 1 .. d(d+1)/2.
//   Phi1/Phi2: l >= 0 and idx in {1, 2} selects the polynomial coordinate.
//   Phi3: l >= 0 and idx in {1, .., d} selects the datum direction.
struct FieldId {
    FamilyKind kind = FamilyKind::Rigid;
    int alpha = 1;
    int l = 0;
    int idx = 1;
};

inline int rigid_count(int d) { return d * (d + 1) / 2; }

// Rotation generators are indexed alpha = d+1, d+2, ... by the lexicographic
// pair sequence (1,2), (1,3), .., (1,d), (2,3), ..; returns the 1-based pair.
inline std::pair<int, int> rotation_pair(int d, int alpha) {
    int m = alpha - d;  // 1-based pair index
    for (int j = 1; j < d; ++j) {
        const int block = d - j;
        if (m <= block) return {j, j + m};
        m -= block;
    }
    throw ConfigError("rigid mode index out of range");
}

// Value of the rigid-motion generator alpha at x (e_alpha, then x_k e_j - x_j e_k).
template <int D>
inline Point<D> rigid_basis(int alpha, const Point<D>& x) {
    if (alpha < 1 || alpha > rigid_count(D)) throw ConfigError("rigid mode index out of range");
    Point<D> out{};
    if (alpha <= D) {
        out[alpha - 1] = 1.0;
    } else {
        const auto [j, k] = rotation_pair(D, alpha);
        out[j - 1] = x[k - 1];
        out[k - 1] = -x[j - 1];
    }
    return out;
}

// Velocity jets plus pressure value and gradient at one point.
template <int D>
struct FieldEval {
    VecJet2<D> v{};
    double p = 0.0;
    std::array<double, D> grad_p{};
};

namespace detail {

// Assembled ingredients of one field before the sandwich combination.
template <int D>
struct FieldParts {
    VecJet2<D> datum{};       // b(x) as jets
    bool wall_datum = false;  // weight 1/2 - k instead of k + 1/2
    VecJet2<D> E{};           // correction profile
    Jet2<D> p_base{};         // pressure base (already includes mu)
    bool p_dv = false;        // add mu d_d v^(d) to the pressure
};

// ----------------------------------------------------------- rigid, generic
// Spherical d = 3 is the d-generic construction evaluated at D = 3.
template <int D>
inline FieldParts<D> rigid_generic(const NeckFrame<D>& f, int alpha) {
    const GapConfig& cfg = f.cfg;
    const double P = f.P[0], Q = f.Q[0];
    const double mu = cfg.mu;
    const double c12 = 12.0 / (1.0 - 2.0 * D);     // negative
    const double c3 = -3.0 / (1.0 - 2.0 * D);      // positive
    const auto inv_delta = inverse(f.delta);

    FieldParts<D> out;
    if (alpha <= D) {
        out.datum[alpha - 1] = Jet2<D>::constant(1.0);
        if (alpha <= D - 1) {
            // Planar translation along axis a.
            const int a = alpha - 1;
            const auto Fa = c12 * P * (f.xj[a] * f.xj[a] * inv_delta) +
                            Jet2<D>::constant(c3 * P / Q);
            out.E[a] = Fa;
            auto vert = f.H[a] + f.Ht[a] * Fa;
            for (int i = 0; i + 1 < D; ++i) {
                if (i == a) continue;
                const auto Gi = c12 * P * (f.xj[a] * f.xj[i] * inv_delta);
                out.E[i] = Gi;
                vert = vert + f.Ht[i] * Gi;
            }
            out.E[D - 1] = vert;
            out.p_base = (6.0 * mu / (2.0 * D - 1.0)) * (P / Q) *
                         (f.xj[a] * inv_delta * inv_delta);
            out.p_dv = true;
        } else {
            // Normal translation.
            const double c = 6.0 / (D - 1.0);
            auto vert = -2.0 * f.k;
            for (int i = 0; i + 1 < D; ++i) {
                out.E[i] = c * (f.xj[i] * inv_delta);
                vert = vert + out.E[i] * f.Ht[i];
            }
            out.E[D - 1] = vert;
            out.p_base = Jet2<D>::constant(0.0) -
                         (3.0 * mu / ((D - 1.0) * Q)) * (inv_delta * inv_delta);
            out.p_dv = true;
        }
        return out;
    }

    const auto [j1, k1] = rotation_pair(D, alpha);
    const int j = j1 - 1, k = k1 - 1;
    out.datum[j] = f.xj[k];
    out.datum[k] = Jet2<D>::constant(0.0) - f.xj[j];
    if (k1 < D) return out;  // in-plane rotation: no correction, zero pressure

    // Rotation mixing planar axis j with the vertical axis.
    const auto xd = f.xj[D - 1];
    const auto F = c12 * (f.xj[j] * f.xj[j] * inv_delta) - 2.0 * (f.k * xd) -
                   3.0 * (xd * xd * inv_delta) + Jet2<D>::constant(3.0 / ((2.0 * D - 1.0) * Q));
    out.E[j] = F;
    auto vert = 2.0 * (f.k * f.xj[j]) + f.Ht[j] * (F + 2.0 * (f.k * xd));
    for (int i = 0; i + 1 < D; ++i) {
        if (i == j) continue;
        const auto Gi = c12 * (f.xj[i] * f.xj[j] * inv_delta);
        out.E[i] = Gi;
        vert = vert + f.Ht[i] * Gi;
    }
    out.E[D - 1] = vert;
    out.p_base = (6.0 * mu / ((2.0 * D - 1.0) * Q)) * (f.xj[j] * inv_delta * inv_delta);
    out.p_dv = true;
    return out;
}

// --------------------------------------------------------- rigid, ellipsoid
// d = 3 with distinct particle curvatures kappa1, kappa2.
inline FieldParts<3> rigid_ellipsoid(const NeckFrame<3>& f, int alpha) {
    const GapConfig& cfg = f.cfg;
    const double mu = cfg.mu;
    const double k1 = cfg.kappa1, k2 = cfg.kappa2, kw = cfg.kappa;
    const double P1 = f.P[0], Q1 = f.Q[0], P2 = f.P[1], Q2 = f.Q[1];
    const auto inv_delta = inverse(f.delta);
    const auto& x1 = f.xj[0];
    const auto& x2 = f.xj[1];

    FieldParts<3> out;
    switch (alpha) {
        case 1: {
            const double den = 3.0 * k1 + 2.0 * k2 - 5.0 * kw;
            out.datum[0] = Jet2<3>::constant(1.0);
            const auto E1 = (-12.0 * (k1 * k1 - kw * kw) / den) * (x1 * x1 * inv_delta) +
                            Jet2<3>::constant(3.0 * P1 / den);
            const auto E2 = (-12.0 * P1 * Q2 / den) * (x1 * x2 * inv_delta);
            out.E[0] = E1;
            out.E[1] = E2;
            out.E[2] = f.H[0] + f.Ht[0] * E1 + f.Ht[1] * E2;
            out.p_base = (6.0 * P1 * mu / den) * (x1 * inv_delta * inv_delta);
            out.p_dv = true;
            return out;
        }
        case 2: {
            const double den = 3.0 * k2 + 2.0 * k1 - 5.0 * kw;
            out.datum[1] = Jet2<3>::constant(1.0);
            const auto E2 = (-12.0 * (k2 * k2 - kw * kw) / den) * (x2 * x2 * inv_delta) +
                            Jet2<3>::constant(3.0 * P2 / den);
            const auto E1 = (-12.0 * P2 * Q1 / den) * (x1 * x2 * inv_delta);
            out.E[0] = E1;
            out.E[1] = E2;
            out.E[2] = f.H[1] + f.Ht[1] * E2 + f.Ht[0] * E1;
            out.p_base = (6.0 * P2 * mu / den) * (x2 * inv_delta * inv_delta);
            out.p_dv = true;
            return out;
        }
        case 3: {
            const double qs = Q1 + Q2;
            out.datum[2] = Jet2<3>::constant(1.0);
            const auto E1 = (6.0 * Q1 / qs) * (x1 * inv_delta);
            const auto E2 = (6.0 * Q2 / qs) * (x2 * inv_delta);
            out.E[0] = E1;
            out.E[1] = E2;
            out.E[2] = -2.0 * f.k + E1 * f.Ht[0] + E2 * f.Ht[1];
            out.p_base = Jet2<3>::constant(0.0) - (3.0 * mu / qs) * (inv_delta * inv_delta);
            out.p_dv = true;
            return out;
        }
        case 4: {
            // In-plane rotation; the vertical slot compensates the curvature
            // mismatch and the pressure is identically zero.
            out.datum[0] = x2;
            out.datum[1] = Jet2<3>::constant(0.0) - x1;
            out.E[0] = -3.0 * x2;
            out.E[1] = 3.0 * x1;
            out.E[2] = (k2 - k1) * ((2.0 * f.k + 1.0) * (x1 * x2)) - x2 * f.Ht[0] + x1 * f.Ht[1];
            return out;
        }
        case 5: {
            const double den = 3.0 * Q1 + 2.0 * Q2;
            const auto& x3 = f.xj[2];
            out.datum[0] = x3;
            out.datum[2] = Jet2<3>::constant(0.0) - x1;
            const auto F = (-12.0 * Q1 / den) * (x1 * x1 * inv_delta) - 2.0 * (f.k * x3) -
                           3.0 * (x3 * x3 * inv_delta) + Jet2<3>::constant(3.0 / den);
            const auto G = (-12.0 * Q2 / den) * (x1 * x2 * inv_delta);
            out.E[0] = F;
            out.E[1] = G;
            out.E[2] = 2.0 * (f.k * x1) + f.Ht[0] * (F + 2.0 * (f.k * x3)) + f.Ht[1] * G;
            out.p_base = (6.0 * mu / den) * (x1 * inv_delta * inv_delta);
            out.p_dv = true;
            return out;
        }
        case 6: {
            const double den = 3.0 * Q2 + 2.0 * Q1;
            const auto& x3 = f.xj[2];
            out.datum[1] = x3;
            out.datum[2] = Jet2<3>::constant(0.0) - x2;
            const auto F = (-12.0 * Q2 / den) * (x2 * x2 * inv_delta) - 2.0 * (f.k * x3) -
                           3.0 * (x3 * x3 * inv_delta) + Jet2<3>::constant(3.0 / den);
            const auto G = (-12.0 * Q1 / den) * (x1 * x2 * inv_delta);
            out.E[0] = G;
            out.E[1] = F;
            out.E[2] = 2.0 * (f.k * x2) + f.Ht[1] * (F + 2.0 * (f.k * x3)) + f.Ht[0] * G;
            out.p_base = (6.0 * mu / den) * (x2 * inv_delta * inv_delta);
            out.p_dv = true;
            return out;
        }
        default:
            throw ConfigError("rigid mode index out of range");
    }
}

template <int D>
inline FieldParts<D> rigid_parts(const NeckFrame<D>& f, int alpha) {
    if (alpha < 1 || alpha > rigid_count(D)) throw ConfigError("rigid mode index out of range");
    if constexpr (D == 3) {
        if (f.cfg.geometry == GeometryClass::Ellipsoid) return rigid_ellipsoid(f, alpha);
    }
    return rigid_generic<D>(f, alpha);
}

// --------------------------------------------------------- wall-datum fields
// Datum x_i^l e_1 (tangential direction, polynomial in a planar coordinate).
template <int D>
inline FieldParts<D> phi1_parts(const NeckFrame<D>& f, int l, int idx) {
    if (idx < 1 || idx > 2 || (idx == 2 && D < 3))
        throw UnsupportedFamily("phi1 polynomial coordinate must be 1 or 2");
    FieldParts<D> out;
    out.wall_datum = true;
    const auto inv_delta = inverse(f.delta);
    if (idx == 1) {
        const double P = f.P[0], Q = f.Q[0], kw = f.cfg.kappa;
        const auto& x1 = f.xj[0];
        out.datum[0] = pow(x1, l);
        const auto E1 = (32.0 * Q / (l + 2.0)) * (pow(x1, l + 2) * f.k * inv_delta) +
                        (12.0 * kw / (l + 2.0)) * (pow(x1, l + 2) * inv_delta) -
                        8.0 * (pow(x1, l) * f.k) + 3.0 * pow(x1, l);
        out.E[0] = E1;
        const auto slope = l >= 1 ? static_cast<double>(l) * pow(x1, l - 1) : Jet2<D>::constant(0.0);
        out.E[D - 1] = ((2.0 * f.k - 1.0) * f.k * f.delta) * slope -
                       2.0 * (pow(x1, l + 1) * f.k * (P + 2.0 * Q * f.k)) + f.Ht[0] * E1;
    } else {
        const double P = f.P[1], Q = f.Q[1];
        const auto& x1 = f.xj[0];
        const auto& x2 = f.xj[1];
        out.datum[0] = pow(x2, l);
        const auto E1 = 2.0 * (pow(x2, l) * f.k) -
                        (6.0 * P / (l + 1.0)) * (pow(x2, l + 2) * inv_delta) -
                        (12.0 * Q / (l + 1.0)) * (pow(x2, l + 2) * f.k * inv_delta);
        const auto E2 = (6.0 * P / (l + 1.0)) * (x1 * pow(x2, l + 1) * inv_delta) +
                        (12.0 * Q / (l + 1.0)) * (x1 * pow(x2, l + 1) * f.k * inv_delta);
        out.E[0] = E1;
        out.E[1] = E2;
    }
    return out;
}

// Datum x_i^l e_d (normal direction, polynomial in a planar coordinate).
template <int D>
inline FieldParts<D> phi2_parts(const NeckFrame<D>& f, int l, int idx) {
    if (idx < 1 || idx > 2 || (idx == 2 && D < 3))
        throw UnsupportedFamily("phi2 polynomial coordinate must be 1 or 2");
    const int a = idx - 1;
    const double Q = f.Q[a];
    const double mu = f.cfg.mu;
    const auto inv_delta = inverse(f.delta);
    const auto& xa = f.xj[a];

    FieldParts<D> out;
    out.wall_datum = true;
    out.datum[D - 1] = pow(xa, l);
    if (l == 1) {
        const double c = 12.0 / (2.0 * D - 1.0);
        auto vert = 2.0 * (f.k * xa);
        out.E[a] = -c * (xa * xa * inv_delta) + Jet2<D>::constant(3.0 / ((2.0 * D - 1.0) * Q));
        vert = vert + f.Ht[a] * out.E[a];
        for (int i = 0; i + 1 < D; ++i) {
            if (i == a) continue;
            out.E[i] = -c * (xa * f.xj[i] * inv_delta);
            vert = vert + f.Ht[i] * out.E[i];
        }
        out.E[D - 1] = vert;
        out.p_base = (6.0 * mu / ((2.0 * D - 1.0) * Q)) * (xa * inv_delta * inv_delta);
        out.p_dv = true;
    } else {  // l >= 2
        out.E[a] = (-6.0 / (l + 1.0)) * (pow(xa, l + 1) * inv_delta);
        out.E[D - 1] = 2.0 * (f.k * pow(xa, l)) + f.Ht[a] * out.E[a];
    }
    return out;
}

// Datum x_d^l e_j.
template <int D>
inline FieldParts<D> phi3_parts(const NeckFrame<D>& f, int l, int idx) {
    if (idx < 1 || idx > D) throw UnsupportedFamily("phi3 datum direction out of range");
    const auto inv_delta = inverse(f.delta);
    const auto xd = f.xj[D - 1];

    FieldParts<D> out;
    out.wall_datum = true;
    out.datum[idx - 1] = pow(xd, l);
    if (idx < D) {
        const int j = idx - 1;
        const auto slab = (6.0 / (l + 1.0)) * (pow(xd, l + 1) * inv_delta);
        out.E[j] = 2.0 * (pow(xd, l) * f.k) + slab;
        out.E[D - 1] = f.Ht[j] * slab;
        return out;
    }
    if constexpr (D == 3) {
        // Vertical datum x_3^l e_3 over the curved wall x_3 = h(x').
        const auto& h = f.h;
        const auto hl = pow(h, l);
        auto vert = 2.0 * (hl * f.k) -
                    (3.0 / (l + 1.0)) * (hl * inv_delta * (f.xj[0] * f.Ht[0] + f.xj[1] * f.Ht[1]));
        double binom = 1.0;
        for (int m = 1; m <= l; ++m) {
            binom = binom * (l - m + 1) / m;
            vert = vert + binom * (pow(h, l - m) * pow(f.delta, m) * pow(f.k + 0.5, m - 1));
        }
        out.E[0] = (-3.0 / (l + 1.0)) * (hl * f.xj[0] * inv_delta);
        out.E[1] = (-3.0 / (l + 1.0)) * (hl * f.xj[1] * inv_delta);
        out.E[2] = vert;
        return out;
    }
    throw UnsupportedFamily("phi3 with vertical datum direction requires d = 3");
}

template <int D>
inline FieldParts<D> field_parts(const NeckFrame<D>& f, const FieldId& id) {
    switch (id.kind) {
        case FamilyKind::Rigid:
            return rigid_parts<D>(f, id.alpha);
        case FamilyKind::Phi1:
            if (id.l < 0) throw UnsupportedFamily("phi1 degree must be nonnegative");
            return phi1_parts<D>(f, id.l, id.idx);
        case FamilyKind::Phi2:
            if (id.l < 1) throw UnsupportedFamily("phi2 degree must be at least 1 (0 is the rigid complement)");
            return phi2_parts<D>(f, id.l, id.idx);
        case FamilyKind::Phi3:
            if (id.l < 1) throw UnsupportedFamily("phi3 degree must be at least 1 (0 is the rigid complement)");
            return phi3_parts<D>(f, id.l, id.idx);
    }
    throw ConfigError("unknown family kind");
}

}  // namespace detail

// True when the field is the exact complement e_j - v_rigid(j) of a rigid
// translation (constant wall datum); these are assembled by literal
// subtraction so the cancellation identities hold bitwise.
inline bool is_rigid_complement(const FieldId& id) {
    return (id.kind == FamilyKind::Phi1 && id.l == 0) ||
           (id.kind == FamilyKind::Phi2 && id.l == 0) ||
           (id.kind == FamilyKind::Phi3 && id.l == 0);
}

// Rigid translation index complemented by a degree-zero wall datum.
inline int complement_translation(int d, const FieldId& id) {
    switch (id.kind) {
        case FamilyKind::Phi1: return 1;
        case FamilyKind::Phi2: return d;
        case FamilyKind::Phi3: return id.idx;
        default: throw ConfigError("not a wall-datum family");
    }
}

// Boundary datum b(x) of a field: the rigid generator for rigid families and
// the wall polynomial for the phi families.
template <int D>
inline Point<D> boundary_datum(const FieldId& id, const Point<D>& x) {
    Point<D> out{};
    switch (id.kind) {
        case FamilyKind::Rigid:
            return rigid_basis<D>(id.alpha, x);
        case FamilyKind::Phi1:
            out[0] = std::pow(x[id.idx - 1], id.l);
            return out;
        case FamilyKind::Phi2:
            out[D - 1] = std::pow(x[id.idx - 1], id.l);
            return out;
        case FamilyKind::Phi3:
            out[id.idx - 1] = std::pow(x[D - 1], id.l);
            return out;
    }
    throw ConfigError("unknown family kind");
}

// Evaluate velocity jets and pressure (value + gradient) at one point.  The
// pressure Hessian is not produced; nothing downstream requires it.
template <int D>
inline FieldEval<D> evaluate_field(const GapConfig& cfg, const FieldId& id, const Point<D>& x,
                                   bool check_membership = true) {
    if (cfg.geometry == GeometryClass::Ellipsoid && id.kind != FamilyKind::Rigid)
        throw UnsupportedFamily("wall-datum families are available for equal particle curvatures only");
    const auto f = make_frame<D>(cfg, x, check_membership);

    if (is_rigid_complement(id)) {
        FieldId rid;
        rid.kind = FamilyKind::Rigid;
        rid.alpha = complement_translation(D, id);
        auto r = evaluate_field<D>(cfg, rid, x, false);
        FieldEval<D> out;
        for (int i = 0; i < D; ++i) out.v[i] = Jet2<D>::constant(i == rid.alpha - 1 ? 1.0 : 0.0) - r.v[i];
        out.p = -r.p;
        for (int i = 0; i < D; ++i) out.grad_p[i] = -r.grad_p[i];
        return out;
    }

    const auto parts = detail::field_parts<D>(f, id);
    const auto w = parts.wall_datum ? (0.5 - f.k) : (f.k + 0.5);
    const auto q = f.k * f.k - Jet2<D>::constant(0.25);

    FieldEval<D> out;
    for (int i = 0; i < D; ++i) out.v[i] = parts.datum[i] * w + parts.E[i] * q;
    out.p = parts.p_base.v;
    for (int i = 0; i < D; ++i) out.grad_p[i] = parts.p_base.g[i];
    if (parts.p_dv) {
        out.p += cfg.mu * out.v[D - 1].g[D - 1];
        for (int i = 0; i < D; ++i) out.grad_p[i] += cfg.mu * out.v[D - 1].hess(i, D - 1);
    }
    return out;
}

// Stokes residual  mu lap(v) - grad(p)  of a field at x.
template <int D>
inline std::array<double, D> residual(const GapConfig& cfg, const FieldId& id, const Point<D>& x,
                                      bool check_membership = true) {
    const auto ev = evaluate_field<D>(cfg, id, x, check_membership);
    const auto lap = laplacian(ev.v);
    std::array<double, D> out{};
    for (int i = 0; i < D; ++i) out[i] = cfg.mu * lap[i] - ev.grad_p[i];
    return out;
}

// Symmetric energy pairing  2 mu e(v_a) : e(v_b)  at x; nonnegative on the
// diagonal, and its neck integral is the stiffness entry.
template <int D>
inline double energy_density(const GapConfig& cfg, const FieldId& a, const FieldId& b,
                             const Point<D>& x, bool check_membership = true) {
    const auto ea = strain(evaluate_field<D>(cfg, a, x, check_membership).v);
    const auto eb = strain(evaluate_field<D>(cfg, b, x, check_membership).v);
    return 2.0 * cfg.mu * contract(ea, eb);
}

// ----------------------------------------------------------- family naming
// Canonical CSV-safe name: "<class>/<family>", e.g. "spherical/rigid3",
// "spherical/phi1_l2_i1", "higher_d/rigid10", "ellipsoid/rigid4".
inline std::string family_name(const GapConfig& cfg, const FieldId& id) {
    std::string cls = to_string(cfg.geometry);
    switch (id.kind) {
        case FamilyKind::Rigid:
            return cls + "/rigid" + std::to_string(id.alpha);
        case FamilyKind::Phi1:
            return cls + "/phi1_l" + std::to_string(id.l) + "_i" + std::to_string(id.idx);
        case FamilyKind::Phi2:
            return cls + "/phi2_l" + std::to_string(id.l) + "_i" + std::to_string(id.idx);
        case FamilyKind::Phi3:
            return cls + "/phi3_l" + std::to_string(id.l) + "_j" + std::to_string(id.idx);
    }
    throw ConfigError("unknown family kind");
}

// Parse the family part (after the class prefix, if any) of a family name.
inline FieldId parse_family(std::string name) {
    const auto slash = name.find('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    FieldId id;
    auto tail_int = [](const std::string& s, std::size_t pos) {
        if (pos >= s.size()) throw ConfigError("malformed family name");
        return std::stoi(s.substr(pos));
    };
    if (name.rfind("rigid", 0) == 0) {
        id.kind = FamilyKind::Rigid;
        id.alpha = tail_int(name, 5);
        return id;
    }
    for (const auto& [prefix, kind] : {std::pair<std::string, FamilyKind>{"phi1", FamilyKind::Phi1},
                                       {"phi2", FamilyKind::Phi2},
                                       {"phi3", FamilyKind::Phi3}}) {
        if (name.rfind(prefix + "_l", 0) != 0) continue;
        id.kind = kind;
        const auto sep = name.find('_', 6);
        if (sep == std::string::npos) throw ConfigError("malformed family name");
        id.l = std::stoi(name.substr(6, sep - 6));
        id.idx = tail_int(name, sep + 2);
        return id;
    }
    throw ConfigError("unknown family name: " + name);
}

}  // namespace gapflow
