// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Second-order forward-mode jets: value + gradient + symmetric Hessian,
// propagated algebraically through arithmetic so that all derivatives are
// exact (no finite differencing).  The dimension is a compile-time template
// parameter; the Hessian is stored as its upper triangle.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gapflow {

struct DivisionByZero : std::runtime_error {
    explicit DivisionByZero(const std::string& what) : std::runtime_error(what) {}
};

template <int D>
struct Jet2 {
    static_assert(D >= 1, "jet dimension must be positive");
    static constexpr int dim = D;
    static constexpr int hess_size = D * (D + 1) / 2;

    double v = 0.0;
    std::array<double, D> g{};
    std::array<double, hess_size> h{};

    // Index of (i,j), i<=j, inside the packed upper triangle.
    static constexpr int hidx(int i, int j) {
        if (i > j) {
            const int t = i;
            i = j;
            j = t;
        }
        return i * D - i * (i - 1) / 2 + (j - i);
    }
    double hess(int i, int j) const { return h[hidx(i, j)]; }
    double& hess(int i, int j) { return h[hidx(i, j)]; }

    static Jet2 constant(double c) {
        Jet2 r;
        r.v = c;
        return r;
    }
    // Seed jet of the i-th coordinate: value x, unit gradient slot, zero Hessian.
    static Jet2 variable(double x, int i) {
        Jet2 r;
        r.v = x;
        r.g[static_cast<std::size_t>(i)] = 1.0;
        return r;
    }
};

// ----------------------------------------------------------------- addition
template <int D>
inline Jet2<D> operator+(const Jet2<D>& a, const Jet2<D>& b) {
    Jet2<D> r;
    r.v = a.v + b.v;
    for (int i = 0; i < D; ++i) r.g[i] = a.g[i] + b.g[i];
    for (int k = 0; k < Jet2<D>::hess_size; ++k) r.h[k] = a.h[k] + b.h[k];
    return r;
}

template <int D>
inline Jet2<D> operator-(const Jet2<D>& a, const Jet2<D>& b) {
    Jet2<D> r;
    r.v = a.v - b.v;
    for (int i = 0; i < D; ++i) r.g[i] = a.g[i] - b.g[i];
    for (int k = 0; k < Jet2<D>::hess_size; ++k) r.h[k] = a.h[k] - b.h[k];
    return r;
}

template <int D>
inline Jet2<D> operator-(const Jet2<D>& a) {
    Jet2<D> r;
    r.v = -a.v;
    for (int i = 0; i < D; ++i) r.g[i] = -a.g[i];
    for (int k = 0; k < Jet2<D>::hess_size; ++k) r.h[k] = -a.h[k];
    return r;
}

// ------------------------------------------------------------------ product
template <int D>
inline Jet2<D> operator*(const Jet2<D>& a, const Jet2<D>& b) {
    Jet2<D> r;
    r.v = a.v * b.v;
    for (int i = 0; i < D; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
    for (int i = 0; i < D; ++i)
        for (int j = i; j < D; ++j)
            r.h[Jet2<D>::hidx(i, j)] = a.v * b.hess(i, j) + b.v * a.hess(i, j) +
                                       a.g[i] * b.g[j] + a.g[j] * b.g[i];
    return r;
}

template <int D>
inline Jet2<D> operator*(double c, const Jet2<D>& a) {
    Jet2<D> r;
    r.v = c * a.v;
    for (int i = 0; i < D; ++i) r.g[i] = c * a.g[i];
    for (int k = 0; k < Jet2<D>::hess_size; ++k) r.h[k] = c * a.h[k];
    return r;
}

template <int D>
inline Jet2<D> operator*(const Jet2<D>& a, double c) {
    return c * a;
}

template <int D>
inline Jet2<D> operator+(const Jet2<D>& a, double c) {
    Jet2<D> r = a;
    r.v += c;
    return r;
}

template <int D>
inline Jet2<D> operator+(double c, const Jet2<D>& a) {
    return a + c;
}

template <int D>
inline Jet2<D> operator-(const Jet2<D>& a, double c) {
    return a + (-c);
}

template <int D>
inline Jet2<D> operator-(double c, const Jet2<D>& a) {
    return (-a) + c;
}

// ----------------------------------------------------------------- division
// 1/b through second order: (1/b)' = -b'/b^2, (1/b)'' = 2 b_i b_j / b^3 - b_ij / b^2.
template <int D>
inline Jet2<D> inverse(const Jet2<D>& b) {
    if (b.v == 0.0) throw DivisionByZero("jet division by zero value");
    Jet2<D> r;
    const double iv = 1.0 / b.v;
    const double iv2 = iv * iv;
    const double iv3 = iv2 * iv;
    r.v = iv;
    for (int i = 0; i < D; ++i) r.g[i] = -b.g[i] * iv2;
    for (int i = 0; i < D; ++i)
        for (int j = i; j < D; ++j)
            r.h[Jet2<D>::hidx(i, j)] = 2.0 * b.g[i] * b.g[j] * iv3 - b.hess(i, j) * iv2;
    return r;
}

template <int D>
inline Jet2<D> operator/(const Jet2<D>& a, const Jet2<D>& b) {
    return a * inverse(b);
}

template <int D>
inline Jet2<D> operator/(const Jet2<D>& a, double c) {
    return a * (1.0 / c);
}

template <int D>
inline Jet2<D> operator/(double c, const Jet2<D>& b) {
    return c * inverse(b);
}

// Integer power by repeated multiplication (exponents are small here).
template <int D>
inline Jet2<D> pow(const Jet2<D>& a, int n) {
    if (n < 0) return inverse(pow(a, -n));
    Jet2<D> r = Jet2<D>::constant(1.0);
    for (int k = 0; k < n; ++k) r = r * a;
    return r;
}

// ------------------------------------------------------------ vector fields
template <int D>
using VecJet2 = std::array<Jet2<D>, D>;

// NOTE: the functions below deduce the field dimension from the jet element
// type only; the array extent is a separate deduced parameter (deducing D
// from both positions would conflict on int vs size_t).
template <int D, std::size_t N>
inline double divergence(const std::array<Jet2<D>, N>& v) {
    static_assert(N == D, "velocity field must have D components");
    double s = 0.0;
    for (int i = 0; i < D; ++i) s += v[i].g[i];
    return s;
}

template <int D, std::size_t N>
inline std::array<double, D> laplacian(const std::array<Jet2<D>, N>& v) {
    static_assert(N == D, "velocity field must have D components");
    std::array<double, D> out{};
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) out[i] += v[i].hess(j, j);
    return out;
}

// Symmetric strain-rate tensor e_ij = (d_j v_i + d_i v_j) / 2, packed upper
// triangle.  Its trace equals the divergence of the source field.
template <int D>
struct StrainTensor {
    std::array<double, Jet2<D>::hess_size> e{};
    double operator()(int i, int j) const { return e[Jet2<D>::hidx(i, j)]; }
    double trace() const {
        double s = 0.0;
        for (int i = 0; i < D; ++i) s += e[Jet2<D>::hidx(i, i)];
        return s;
    }
};

template <int D, std::size_t N>
inline StrainTensor<D> strain(const std::array<Jet2<D>, N>& v) {
    static_assert(N == D, "velocity field must have D components");
    StrainTensor<D> t;
    for (int i = 0; i < D; ++i)
        for (int j = i; j < D; ++j)
            t.e[Jet2<D>::hidx(i, j)] = 0.5 * (v[i].g[j] + v[j].g[i]);
    return t;
}

// Full tensor contraction sum_ij a_ij b_ij of two symmetric tensors.
template <int D>
inline double contract(const StrainTensor<D>& a, const StrainTensor<D>& b) {
    double s = 0.0;
    for (int i = 0; i < D; ++i) {
        s += a(i, i) * b(i, i);
        for (int j = i + 1; j < D; ++j) s += 2.0 * a(i, j) * b(i, j);
    }
    return s;
}

// Frobenius norm of the velocity Jacobian.
template <int D, std::size_t N>
inline double grad_norm(const std::array<Jet2<D>, N>& v) {
    static_assert(N == D, "velocity field must have D components");
    double s = 0.0;
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) s += v[i].g[j] * v[i].g[j];
    return std::sqrt(s);
}

}  // namespace gapflow
