// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Unit tests for the second-order jet arithmetic: exactness of product /
// quotient / power rules against hand-computed derivatives and against
// central finite differences of composite rational expressions.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gapflow/jet.hpp"

using gapflow::Jet2;
using gapflow::VecJet2;

namespace {

// f(x, y) = (x^2 y + 3 x) / (1 + y^2), a generic rational test function.
template <typename T>
T rational(const T& x, const T& y) {
    return (x * x * y + 3.0 * x) / (1.0 + y * y);
}

}  // namespace

TEST_CASE("seed jets carry exact first and second derivatives") {
    const auto x = Jet2<2>::variable(3.0, 0);
    const auto y = Jet2<2>::variable(-2.0, 1);

    SECTION("product rule") {
        const auto p = x * x;  // value 9, gradient (6, 0), hessian d11 = 2
        CHECK(p.v == 9.0);
        CHECK(p.g[0] == 6.0);
        CHECK(p.g[1] == 0.0);
        CHECK(p.hess(0, 0) == 2.0);
        CHECK(p.hess(0, 1) == 0.0);
        CHECK(p.hess(1, 1) == 0.0);

        const auto q = x * y;  // mixed second derivative is exactly 1
        CHECK(q.v == -6.0);
        CHECK(q.g[0] == -2.0);
        CHECK(q.g[1] == 3.0);
        CHECK(q.hess(0, 1) == 1.0);
    }

    SECTION("affine combinations") {
        const auto a = 2.0 * x - y + 5.0;
        CHECK(a.v == 13.0);
        CHECK(a.g[0] == 2.0);
        CHECK(a.g[1] == -1.0);
        for (double hv : a.h) CHECK(hv == 0.0);
    }

    SECTION("integer powers, including negative") {
        const auto c = gapflow::pow(x, 3);
        CHECK(c.v == 27.0);
        CHECK(c.g[0] == 27.0);       // 3 x^2
        CHECK(c.hess(0, 0) == 18.0); // 6 x

        const auto w = gapflow::pow(x, -2);  // x^-2: grad -2 x^-3, hess 6 x^-4
        CHECK(w.v == Catch::Approx(1.0 / 9.0).epsilon(1e-15));
        CHECK(w.g[0] == Catch::Approx(-2.0 / 27.0).epsilon(1e-15));
        CHECK(w.hess(0, 0) == Catch::Approx(6.0 / 81.0).epsilon(1e-15));
    }
}

TEST_CASE("quotient rule matches the analytic inverse expansion") {
    const auto y = Jet2<1>::variable(0.7, 0);
    const auto inv = 1.0 / (1.0 + y * y);
    const double b = 1.0 + 0.7 * 0.7;
    CHECK(inv.v == Catch::Approx(1.0 / b).epsilon(1e-15));
    CHECK(inv.g[0] == Catch::Approx(-2.0 * 0.7 / (b * b)).epsilon(1e-15));
    // d^2/dy^2 (1+y^2)^-1 = (8 y^2 - 2 (1+y^2)) / (1+y^2)^3
    const double hexp = (8.0 * 0.49 - 2.0 * b) / (b * b * b);
    CHECK(inv.hess(0, 0) == Catch::Approx(hexp).epsilon(1e-14));
}

TEST_CASE("division by a zero-valued jet throws") {
    const auto x = Jet2<2>::variable(0.0, 0);
    const auto y = Jet2<2>::variable(1.0, 1);
    CHECK_THROWS_AS(y / x, gapflow::DivisionByZero);
    CHECK_THROWS_AS(gapflow::pow(x, -1), gapflow::DivisionByZero);
}

TEST_CASE("composite rational jet agrees with central finite differences") {
    const double x0 = 0.8, y0 = -0.35;
    const auto fj = rational(Jet2<2>::variable(x0, 0), Jet2<2>::variable(y0, 1));

    const double step = 1e-5;
    auto f = [](double x, double y) { return rational(x, y); };
    const double fx = (f(x0 + step, y0) - f(x0 - step, y0)) / (2.0 * step);
    const double fy = (f(x0, y0 + step) - f(x0, y0 - step)) / (2.0 * step);
    const double fxx = (f(x0 + step, y0) - 2.0 * f(x0, y0) + f(x0 - step, y0)) / (step * step);
    const double fyy = (f(x0, y0 + step) - 2.0 * f(x0, y0) + f(x0, y0 - step)) / (step * step);
    const double fxy = (f(x0 + step, y0 + step) - f(x0 + step, y0 - step) -
                        f(x0 - step, y0 + step) + f(x0 - step, y0 - step)) /
                       (4.0 * step * step);

    CHECK(fj.g[0] == Catch::Approx(fx).epsilon(1e-9));
    CHECK(fj.g[1] == Catch::Approx(fy).epsilon(1e-9));
    CHECK(fj.hess(0, 0) == Catch::Approx(fxx).epsilon(1e-5));
    CHECK(fj.hess(1, 1) == Catch::Approx(fyy).epsilon(1e-5));
    CHECK(fj.hess(0, 1) == Catch::Approx(fxy).epsilon(1e-5));
}

TEST_CASE("vector-field helpers: divergence, laplacian, strain") {
    // v = (x^2 y, y^3, x y z) at (1, 2, 3), a field with known derivatives.
    const auto x = Jet2<3>::variable(1.0, 0);
    const auto y = Jet2<3>::variable(2.0, 1);
    const auto z = Jet2<3>::variable(3.0, 2);
    VecJet2<3> v{x * x * y, y * y * y, x * y * z};

    // div = 2xy + 3y^2 + xy = 4 + 12 + 2
    CHECK(gapflow::divergence(v) == Catch::Approx(18.0).epsilon(1e-15));

    const auto lap = gapflow::laplacian(v);
    CHECK(lap[0] == Catch::Approx(2.0 * 2.0).epsilon(1e-15));  // d_xx(x^2 y) = 2y
    CHECK(lap[1] == Catch::Approx(6.0 * 2.0).epsilon(1e-15));  // d_yy(y^3) = 6y
    CHECK(lap[2] == 0.0);                                      // xyz is harmonic

    const auto e = gapflow::strain(v);
    CHECK(e(0, 0) == Catch::Approx(2.0 * 1.0 * 2.0).epsilon(1e-15));  // d_x v1 = 2xy
    CHECK(e(0, 1) == Catch::Approx(0.5 * (1.0 + 0.0)).epsilon(1e-15));  // (d_y v1 + d_x v2)/2 = x^2/2
    CHECK(e(1, 2) == Catch::Approx(0.5 * (0.0 + 1.0 * 3.0)).epsilon(1e-15));  // xz/2
    CHECK(e.trace() == Catch::Approx(gapflow::divergence(v)).epsilon(1e-15));

    // contraction of e with itself equals sum of squares with off-diagonal x2
    double manual = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) manual += e(i, j) * e(i, j);
    CHECK(gapflow::contract(e, e) == Catch::Approx(manual).epsilon(1e-14));
}

TEST_CASE("hessian packing covers the upper triangle exactly once") {
    bool seen[6] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const int k = Jet2<3>::hidx(i, j);
            REQUIRE(k >= 0);
            REQUIRE(k < 6);
            CHECK_FALSE(seen[k]);
            seen[k] = true;
            CHECK(Jet2<3>::hidx(j, i) == k);  // symmetric access
        }
    for (bool s : seen) CHECK(s);
}
