// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Deterministic neck quadrature.  Integrals over the gap region
// { |x'| < r, bottom < x_d < top } are computed in polar form:
//
//   * vertical direction: 12-point Gauss-Legendre on t in (0,1) with the
//     exact Jacobian delta(x'); our integrands are low-degree polynomials in
//     the normalized height, so this factor is exact,
//   * angular direction: 32 equispaced midpoint angles (exact for the
//     trigonometric polynomials that arise; kills odd parities to rounding),
//     tensored with Gauss-Legendre in the polar angle(s) for d >= 4,
//   * radial direction: adaptive Gauss-Kronrod 7-15 with geometric initial
//     grading down to the gap length scale sqrt(eps / (kappa1 - kappa)) / 4.
//
// Vector integrands share one traversal: all components are accumulated in
// a single pass over the quadrature points.  Summation over segments uses
// Neumaier compensation in ascending-segment order, so reruns are bitwise
// reproducible.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "geometry.hpp"

namespace gapflow {

// Result of a scalar neck integral.  `converged` implies
// error <= rel_tol * (|value| + 1e-300); otherwise the estimate failed to
// reach the tolerance within the segment budget.
struct NeckIntegral {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    std::size_t segments = 0;
};

// Result of a vector neck integral (all components from one traversal).
struct VecNeckIntegral {
    std::vector<double> value;
    std::vector<double> error;
    bool converged = false;
    std::size_t segments = 0;
};

struct QuadratureOptions {
    std::size_t max_segments = 20000;
};

namespace quadrature_detail {

// Gauss-Kronrod 7-15 on [-1, 1]: positive abscissae; even indices of xk are
// the embedded Gauss points.
inline constexpr double kGK15X[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGK15W[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kG7W[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

// Gauss-Legendre 12 on [-1, 1].
inline constexpr double kGL12X[6] = {
    0.981560634246719, 0.904117256370475, 0.769902674194305,
    0.587317954286617, 0.367831498998180, 0.125233408511469};
inline constexpr double kGL12W[6] = {
    0.047175336386512, 0.106939325995318, 0.160078328543346,
    0.203167426723066, 0.233492536538355, 0.249147045813403};

// Gauss-Legendre 16 on [-1, 1].
inline constexpr double kGL16X[8] = {
    0.989400934991650, 0.944575023073233, 0.865631202387832, 0.755404408355003,
    0.617876244402644, 0.458016777657227, 0.281603550779259, 0.095012509837637};
inline constexpr double kGL16W[8] = {
    0.027152459411754, 0.062253523938648, 0.095158511682493, 0.124628971255534,
    0.149595988816577, 0.169156519395003, 0.182603415044924, 0.189450610455068};

// Neumaier compensated accumulator.
struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};

// Unit directions and weights covering the sphere S^(n-1) in the planar
// coordinates (n = D - 1).  The circle uses 32 midpoint angles; each extra
// polar angle uses 16-point Gauss-Legendre (exact in cos(phi) for S^2).
template <int N>
inline std::vector<std::pair<std::array<double, N>, double>> direction_set() {
    constexpr double two_pi = 6.283185307179586476925286766559;
    std::vector<std::pair<std::array<double, N>, double>> out;
    if constexpr (N == 2) {
        out.reserve(32);
        for (int i = 0; i < 32; ++i) {
            const double theta = two_pi * (i + 0.5) / 32.0;
            out.push_back({{std::cos(theta), std::sin(theta)}, two_pi / 32.0});
        }
    } else {
        const auto inner = direction_set<N - 1>();
        out.reserve(16 * inner.size());
        for (int a = 0; a < 16; ++a) {
            // Node in u = cos(phi) on (-1, 1); measure (1 - u^2)^((N-3)/2) du.
            const int half = a < 8 ? a : 15 - a;
            const double u = (a < 8 ? -1.0 : 1.0) * kGL16X[half];
            const double wu = kGL16W[half];
            const double s2 = 1.0 - u * u;
            const double s = std::sqrt(s2);
            const double meas = std::pow(s2, 0.5 * (N - 3));  // sin^(N-3)(phi)
            for (const auto& [din, win] : inner) {
                std::array<double, N> dir{};
                dir[0] = u;
                for (int c = 0; c + 1 < N; ++c) dir[c + 1] = s * din[c];
                out.push_back({dir, wu * meas * win});
            }
        }
    }
    return out;
}

template <int D>
struct Segment {
    double lo = 0.0, hi = 0.0;
    std::vector<double> value;  // Kronrod estimate per component
    std::vector<double> error;  // |Kronrod - Gauss| per component
    double worst = 0.0;         // max over components of error
};

}  // namespace quadrature_detail

// Integrate a vector integrand with m components over the neck of lateral
// radius r.  F has signature void(const Point<D>&, double* out) and must
// write m values; all components are accumulated in one traversal.
template <int D, class F>
inline VecNeckIntegral integrate_neck_vec(const GapConfig& cfg, F&& f, int m, double r,
                                          double rel_tol, QuadratureOptions opt = {}) {
    namespace qd = quadrature_detail;
    if (cfg.d != D) throw ConfigError("config dimension does not match integrator dimension");
    if (!(r > 0.0) || r > cfg.R) throw ConfigError("integration radius must lie in (0, R]");
    if (!(rel_tol >= 1e-10)) throw ConfigError("rel_tol must be at least 1e-10");
    if (m < 1) throw ConfigError("integrand must have at least one component");

    static const auto dirs = qd::direction_set<D - 1>();
    const std::size_t mm = static_cast<std::size_t>(m);

    // Per-radius profile: rho^(d-2) * sum_dirs w * sum_t w_t delta(x') f(x).
    std::vector<double> fbuf(mm);
    auto profile = [&](double rho, double* out) {
        std::vector<qd::Neumaier> acc(mm);
        std::array<double, static_cast<std::size_t>(D - 1)> xp{};
        for (const auto& [dir, wdir] : dirs) {
            for (int c = 0; c + 1 < D; ++c) xp[c] = rho * dir[c];
            const auto [bottom, top] = gap_surfaces(cfg, xp);
            const double width = top - bottom;
            for (int it = 0; it < 12; ++it) {
                const int half = it < 6 ? it : 11 - it;
                const double xi = (it < 6 ? -1.0 : 1.0) * qd::kGL12X[half];
                const double wt = 0.5 * qd::kGL12W[half];
                const double t = 0.5 * (xi + 1.0);
                Point<D> x{};
                for (int c = 0; c + 1 < D; ++c) x[c] = xp[c];
                x[D - 1] = bottom + t * width;
                f(static_cast<const Point<D>&>(x), fbuf.data());
                const double w = wdir * wt * width;
                for (std::size_t c = 0; c < mm; ++c) acc[c].add(w * fbuf[c]);
            }
        }
        double jac = 1.0;
        for (int p = 0; p + 2 < D; ++p) jac *= rho;
        for (std::size_t c = 0; c < mm; ++c) out[c] = jac * acc[c].total();
    };

    // Gauss-Kronrod 7-15 on one radial segment.
    std::vector<double> node_vals(mm);
    auto rate = [&](double lo, double hi) {
        qd::Segment<D> seg;
        seg.lo = lo;
        seg.hi = hi;
        seg.value.assign(mm, 0.0);
        seg.error.assign(mm, 0.0);
        const double c0 = 0.5 * (lo + hi);
        const double hw = 0.5 * (hi - lo);
        std::vector<qd::Neumaier> kron(mm), gauss(mm);
        for (int i = 0; i < 15; ++i) {
            const int half = i < 8 ? i : 14 - i;
            const double xi = (i < 8 ? -1.0 : 1.0) * qd::kGK15X[half];
            profile(c0 + hw * xi, node_vals.data());
            for (std::size_t c = 0; c < mm; ++c) {
                kron[c].add(qd::kGK15W[half] * node_vals[c]);
                if (half % 2 == 1) gauss[c].add(qd::kG7W[half / 2] * node_vals[c]);
            }
        }
        seg.worst = 0.0;
        for (std::size_t c = 0; c < mm; ++c) {
            seg.value[c] = hw * kron[c].total();
            seg.error[c] = std::abs(hw * (kron[c].total() - gauss[c].total()));
            seg.worst = std::max(seg.worst, seg.error[c]);
        }
        return seg;
    };

    // Initial geometric grading from r down to the gap length scale.
    const double r_min = std::sqrt(cfg.eps / (cfg.kappa1 - cfg.kappa)) / 4.0;
    std::vector<double> bounds{r};
    while (bounds.back() > 2.0 * r_min) bounds.push_back(bounds.back() / 2.0);
    bounds.push_back(0.0);
    std::vector<qd::Segment<D>> segs;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) segs.push_back(rate(bounds[i + 1], bounds[i]));

    auto totals = [&](VecNeckIntegral& out) {
        std::vector<std::size_t> order(segs.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return segs[a].lo < segs[b].lo; });
        out.value.assign(mm, 0.0);
        out.error.assign(mm, 0.0);
        for (std::size_t c = 0; c < mm; ++c) {
            qd::Neumaier v, e;
            for (std::size_t idx : order) {
                v.add(segs[idx].value[c]);
                e.add(segs[idx].error[c]);
            }
            out.value[c] = v.total();
            out.error[c] = e.total();
        }
        double scale = 0.0;
        for (std::size_t c = 0; c < mm; ++c) scale = std::max(scale, std::abs(out.value[c]));
        out.converged = true;
        for (std::size_t c = 0; c < mm; ++c)
            if (!(out.error[c] <= rel_tol * (scale + 1e-300))) out.converged = false;
        out.segments = segs.size();
    };

    // Running (uncompensated) totals steer the refinement; the exact
    // compensated totals are recomputed whenever the running check passes and
    // once at the end, so the reported value/error are always the exact sums.
    std::vector<double> run_val(mm, 0.0), run_err(mm, 0.0);
    for (const auto& s : segs)
        for (std::size_t c = 0; c < mm; ++c) {
            run_val[c] += s.value[c];
            run_err[c] += s.error[c];
        }
    auto run_converged = [&] {
        double scale = 0.0;
        for (std::size_t c = 0; c < mm; ++c) scale = std::max(scale, std::abs(run_val[c]));
        for (std::size_t c = 0; c < mm; ++c)
            if (!(run_err[c] <= rel_tol * (scale + 1e-300))) return false;
        return true;
    };

    VecNeckIntegral result;
    while (true) {
        if (run_converged()) {
            totals(result);
            if (result.converged) return result;
        }
        if (segs.size() >= opt.max_segments) break;
        // Deterministic worst-first refinement: largest error, then lowest lo.
        std::size_t pick = 0;
        for (std::size_t i = 1; i < segs.size(); ++i) {
            if (segs[i].worst > segs[pick].worst ||
                (segs[i].worst == segs[pick].worst && segs[i].lo < segs[pick].lo))
                pick = i;
        }
        const double lo = segs[pick].lo, hi = segs[pick].hi, mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;  // cannot refine further in double precision
        for (std::size_t c = 0; c < mm; ++c) {
            run_val[c] -= segs[pick].value[c];
            run_err[c] -= segs[pick].error[c];
        }
        segs[pick] = rate(lo, mid);
        segs.push_back(rate(mid, hi));
        for (const auto* s : {&segs[pick], &segs.back()})
            for (std::size_t c = 0; c < mm; ++c) {
                run_val[c] += s->value[c];
                run_err[c] += s->error[c];
            }
    }
    totals(result);
    return result;
}

// Scalar convenience wrapper: F has signature double(const Point<D>&).
template <int D, class F>
inline NeckIntegral integrate_neck(const GapConfig& cfg, F&& f, double r, double rel_tol,
                                   QuadratureOptions opt = {}) {
    auto vec = integrate_neck_vec<D>(
        cfg, [&](const Point<D>& x, double* out) { out[0] = f(x); }, 1, r, rel_tol, opt);
    NeckIntegral out;
    out.value = vec.value[0];
    out.error = vec.error[0];
    out.converged = vec.converged;
    out.segments = vec.segments;
    return out;
}

}  // namespace gapflow
