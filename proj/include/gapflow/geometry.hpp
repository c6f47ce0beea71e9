// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Gap geometry between a curved particle bottom and a curved wall top:
// configuration record with validation, gap-width and surface evaluators,
// the normalized height coordinate k in [-1/2, 1/2] with exact jets, the
// precomputed per-point frame used by all auxiliary fields, and the
// deterministic stratified neck sampler.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jet.hpp"

namespace gapflow {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when the two bounding surfaces have no positive separation to work
// with (wall curvature at least as large as the smallest particle curvature).
struct DegenerateCurvature : std::runtime_error {
    explicit DegenerateCurvature(const std::string& what)
        : std::runtime_error("DegenerateCurvature: " + what) {}
};

// Thrown when a point lies outside the closed strip between the surfaces or
// beyond the lateral validity radius.
struct OutsideNeck : std::runtime_error {
    explicit OutsideNeck(const std::string& what)
        : std::runtime_error("OutsideNeck: " + what) {}
};

// Which set of closed-form auxiliary fields applies.
enum class GeometryClass { Auto, Spherical, Ellipsoid, HigherD };

inline const char* to_string(GeometryClass c) {
    switch (c) {
        case GeometryClass::Spherical: return "spherical";
        case GeometryClass::Ellipsoid: return "ellipsoid";
        case GeometryClass::HigherD: return "higher_d";
        default: return "auto";
    }
}

// ---------------------------------------------------------------------------
// Configuration of one gap problem.
//
//   bottom surface:  x_d = kappa |x'|^2                        (wall-side)
//   top surface:     x_d = eps + kappa1 x_1^2 + kappa2 x_2^2   (d = 3)
//                    x_d = eps + kappa1 |x'|^2                 (d >= 4)
//
// finalize() checks the invariants, resolves GeometryClass::Auto, and for
// d >= 4 forces kappa2 = kappa1 (the particle is isotropic there).
struct GapConfig {
    int d = 3;
    double eps = 1e-3;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    double kappa = 0.0;
    double R = 0.8;
    double mu = 1.0;
    GeometryClass geometry = GeometryClass::Auto;

    void finalize() {
        if (d < 3) throw ConfigError("dimension d must be at least 3");
        if (d >= 4) kappa2 = kappa1;
        if (!(eps > 0.0)) throw ConfigError("eps must be positive");
        if (!(mu > 0.0)) throw ConfigError("mu must be positive");
        if (!(R > 0.0) || R > 1.0) throw ConfigError("R must lie in (0, 1]");
        if (!(kappa1 > kappa) || !(kappa2 > kappa))
            throw DegenerateCurvature("require min(kappa1, kappa2) > kappa");
        if (!(eps < R * R * (kappa1 - kappa)))
            throw ConfigError("require eps < R^2 (kappa1 - kappa)");
        switch (geometry) {
            case GeometryClass::Auto:
                geometry = (d >= 4) ? GeometryClass::HigherD
                           : (kappa1 == kappa2) ? GeometryClass::Spherical
                                                : GeometryClass::Ellipsoid;
                break;
            case GeometryClass::Spherical:
                if (d != 3 || kappa1 != kappa2)
                    throw ConfigError("spherical geometry needs d = 3 and kappa1 = kappa2");
                break;
            case GeometryClass::Ellipsoid:
                if (d != 3) throw ConfigError("ellipsoid geometry needs d = 3");
                break;
            case GeometryClass::HigherD:
                if (d < 4) throw ConfigError("higher_d geometry needs d >= 4");
                break;
        }
    }

    // Per-axis curvature of the top surface for planar axis i (0-based).
    double kappa_axis(int i) const { return i == 0 ? kappa1 : kappa2; }
};

template <int D>
using Point = std::array<double, D>;

// ------------------------------------------------------------ gap functions
// Vertical gap width delta(x') = top(x') - bottom(x').
template <std::size_t N>
inline double delta(const GapConfig& cfg, const std::array<double, N>& xp) {
    double s = cfg.eps;
    for (std::size_t i = 0; i < N; ++i)
        s += (cfg.kappa_axis(i ? 1 : 0) - cfg.kappa) * xp[i] * xp[i];
    return s;
}

// Heights (bottom, top) of the two bounding surfaces over x'.
template <std::size_t N>
inline std::pair<double, double> gap_surfaces(const GapConfig& cfg,
                                              const std::array<double, N>& xp) {
    double bottom = 0.0, top = cfg.eps;
    for (std::size_t i = 0; i < N; ++i) {
        bottom += cfg.kappa * xp[i] * xp[i];
        top += cfg.kappa_axis(i ? 1 : 0) * xp[i] * xp[i];
    }
    return {bottom, top};
}

namespace detail {

template <int D>
inline void require_in_neck(const GapConfig& cfg, const Point<D>& x) {
    double r2 = 0.0;
    for (int i = 0; i + 1 < D; ++i) r2 += x[i] * x[i];
    if (r2 > 4.0 * cfg.R * cfg.R) throw OutsideNeck("|x'| exceeds 2R");
    double bottom = cfg.kappa * r2;
    double top = cfg.eps;
    for (int i = 0; i + 1 < D; ++i) top += cfg.kappa_axis(i ? 1 : 0) * x[i] * x[i];
    if (x[D - 1] < bottom || x[D - 1] > top)
        throw OutsideNeck("x_d outside the closed strip between the surfaces");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-point evaluation frame shared by every auxiliary field: coordinate
// jets, the gap width delta, the bottom surface h, the normalized height
//
//     k = (x_d - h) / delta - 1/2   in [-1/2, 1/2],
//
// and the curvature-weighted planar combinations (i = 0 .. D-2, 0-based)
//
//     Ht_i = (kappa_i + kappa) x_i + 2 (kappa_i - kappa) x_i k,
//     H_i  = (kappa_i - kappa) x_i + 2 (kappa_i + kappa) x_i k.
//
// They satisfy delta * d_i k = -Ht_i and delta * d_d k = 1 exactly, which is
// what makes the closed-form divergence cancellations verifiable to rounding.
template <int D>
struct NeckFrame {
    GapConfig cfg;
    Point<D> x{};
    std::array<Jet2<D>, D> xj{};
    Jet2<D> delta, h, k;
    std::array<Jet2<D>, D - 1> Ht{}, H{};
    std::array<double, D - 1> P{}, Q{};  // per-axis kappa_i + kappa, kappa_i - kappa
};

template <int D>
inline NeckFrame<D> make_frame(const GapConfig& cfg, const Point<D>& x,
                               bool check_membership = true) {
    if (cfg.d != D) throw ConfigError("config dimension does not match point dimension");
    if (check_membership) detail::require_in_neck<D>(cfg, x);
    NeckFrame<D> f;
    f.cfg = cfg;
    f.x = x;
    for (int i = 0; i < D; ++i) f.xj[i] = Jet2<D>::variable(x[i], i);
    f.delta = Jet2<D>::constant(cfg.eps);
    f.h = Jet2<D>::constant(0.0);
    for (int i = 0; i + 1 < D; ++i) {
        const double ka = cfg.kappa_axis(i ? 1 : 0);
        f.P[i] = ka + cfg.kappa;
        f.Q[i] = ka - cfg.kappa;
        f.delta = f.delta + f.Q[i] * (f.xj[i] * f.xj[i]);
        f.h = f.h + cfg.kappa * (f.xj[i] * f.xj[i]);
    }
    f.k = (f.xj[D - 1] - f.h) / f.delta - 0.5;
    // Re-anchor the value (not the derivatives) on the two surface heights so
    // that k is exactly -1/2 on the bottom and +1/2 on the top surface; the
    // quotient x/x evaluates to 1 without rounding, which keeps boundary
    // values of the sandwich fields bitwise exact even when E ~ 1/delta.
    {
        std::array<double, static_cast<std::size_t>(D - 1)> xp{};
        for (int i = 0; i + 1 < D; ++i) xp[i] = x[i];
        const auto [bottom, top] = gap_surfaces(cfg, xp);
        f.k.v = (x[D - 1] - bottom) / (top - bottom) - 0.5;
    }
    for (int i = 0; i + 1 < D; ++i) {
        f.Ht[i] = f.P[i] * f.xj[i] + 2.0 * f.Q[i] * (f.xj[i] * f.k);
        f.H[i] = f.Q[i] * f.xj[i] + 2.0 * f.P[i] * (f.xj[i] * f.k);
    }
    return f;
}

// Normalized height coordinate and its exact jet.
template <int D>
inline double keller_k(const GapConfig& cfg, const Point<D>& x) {
    detail::require_in_neck<D>(cfg, x);
    std::array<double, static_cast<std::size_t>(D - 1)> xp{};
    for (int i = 0; i + 1 < D; ++i) xp[i] = x[i];
    const auto [bottom, top] = gap_surfaces(cfg, xp);
    return (x[D - 1] - bottom) / (top - bottom) - 0.5;
}

template <int D>
inline Jet2<D> keller_k_jet(const GapConfig& cfg, const Point<D>& x) {
    return make_frame<D>(cfg, x).k;
}

// ----------------------------------------------------------------- sampling
// splitmix64: tiny deterministic 64-bit generator with full-period stream.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // Uniform in (0, 1]; never returns exactly zero.
    double next_double_pos() {
        double u = next_double();
        return u > 0x1.0p-53 ? u : 0x1.0p-53;
    }
};

// Deterministic stratified sample of n interior points with |x'| < r.
//
// Radial strata are geometrically graded: bounds r, r/2, r/4, ... down to
// r_min = sqrt(eps / (kappa1 - kappa)) / 4, plus one innermost disc; sample i
// lands in stratum i mod (number of strata).  Directions are uniform angles
// for d = 3 and normalized Gaussians for d >= 4; the vertical position uses a
// relative inset eta = 2^-20 so every point is strictly between the surfaces.
template <int D>
inline std::vector<Point<D>> sample_neck(const GapConfig& cfg, double r, int n,
                                         std::uint64_t seed) {
    if (cfg.d != D) throw ConfigError("config dimension does not match sampler dimension");
    if (!(r > 0.0) || r > cfg.R) throw ConfigError("sampling radius must lie in (0, R]");
    if (n < 0) throw ConfigError("sample count must be nonnegative");
    std::vector<Point<D>> out;
    if (n == 0) return out;
    out.reserve(static_cast<std::size_t>(n));

    const double r_min = std::sqrt(cfg.eps / (cfg.kappa1 - cfg.kappa)) / 4.0;
    std::vector<double> bounds{r};
    while (bounds.back() > 2.0 * r_min) bounds.push_back(bounds.back() / 2.0);
    const std::size_t nstrata = bounds.size();  // last stratum is the inner disc

    constexpr double eta = 0x1.0p-20;
    constexpr double two_pi = 6.283185307179586476925286766559;
    SplitMix64 rng(seed);

    for (int s = 0; s < n; ++s) {
        const std::size_t j = static_cast<std::size_t>(s) % nstrata;
        const double hi = bounds[j];
        const double lo = (j + 1 < nstrata) ? bounds[j + 1] : 0.0;
        const double radius = lo + rng.next_double() * (hi - lo);

        std::array<double, D - 1> dir{};
        if (D == 3) {
            const double theta = two_pi * rng.next_double();
            dir[0] = std::cos(theta);
            dir[1] = std::sin(theta);
        } else {
            // Box-Muller pairs, normalized to the unit sphere.
            int i = 0;
            while (i < D - 1) {
                const double u1 = rng.next_double_pos();
                const double u2 = rng.next_double();
                const double rad = std::sqrt(-2.0 * std::log(u1));
                dir[i++] = rad * std::cos(two_pi * u2);
                if (i < D - 1) dir[i++] = rad * std::sin(two_pi * u2);
            }
            double norm2 = 0.0;
            for (int a = 0; a < D - 1; ++a) norm2 += dir[a] * dir[a];
            if (norm2 > 0.0) {
                const double inv = 1.0 / std::sqrt(norm2);
                for (int a = 0; a < D - 1; ++a) dir[a] *= inv;
            } else {
                dir[0] = 1.0;
            }
        }

        const double t = eta + (1.0 - 2.0 * eta) * rng.next_double();

        Point<D> x{};
        std::array<double, static_cast<std::size_t>(D - 1)> xp{};
        for (int a = 0; a + 1 < D; ++a) {
            x[a] = radius * dir[a];
            xp[a] = x[a];
        }
        const auto [bottom, top] = gap_surfaces(cfg, xp);
        x[D - 1] = bottom + t * (top - bottom);
        out.push_back(x);
    }
    return out;
}

}  // namespace gapflow
