#include <doctest.h>

#include "latspec/dispersion.hpp"
#include "latspec/grid.hpp"
#include "latspec/quadrature.hpp"

#include <cmath>

using namespace latspec;

TEST_CASE("torus grid layout") {
    CHECK_THROWS_AS(TorusGrid::build(1), Error);
    for (int n : {2, 5, 8}) {
        const TorusGrid g = TorusGrid::build(n);
        CHECK(g.size() == std::size_t(n) * n * n);
        CHECK(g.total_weight() == doctest::Approx(kTorusVolume));
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(norm(g.node(i)) > 0.0);
            const Vec3 a = g.node(i), b = g.node(g.negated(i));
            for (int k = 0; k < 3; ++k) CHECK(wrap_angle(a[k] + b[k]) == doctest::Approx(0.0).epsilon(1e-14));
            CHECK(g.nearest(g.node(i)) == i);
        }
    }
    const TorusGrid g = TorusGrid::build(6);
    const std::size_t i = g.index(1, 2, 4);
    const Vec3 r = g.node(g.reflected(i, 2u));
    CHECK(r[0] == doctest::Approx(g.node(i)[0]));
    CHECK(r[1] == doctest::Approx(-g.node(i)[1]));
    CHECK(r[2] == doctest::Approx(g.node(i)[2]));
}

TEST_CASE("grid integrates trigonometric polynomials exactly") {
    const TorusGrid g = TorusGrid::build(8);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec3 q = g.node(i);
        s0 += g.weight() * builtin_epsilon(q);
        s1 += g.weight() * std::cos(q[0]) * std::cos(2 * q[1]);
        s2 += g.weight() * std::pow(std::cos(q[2]), 2);
    }
    CHECK(s0 == doctest::Approx(3.0 * kTorusVolume));
    CHECK(std::abs(s1) < 1e-10);
    CHECK(s2 == doctest::Approx(0.5 * kTorusVolume));
}

TEST_CASE("gauss-legendre exactness") {
    for (int n : {1, 4, 16, 64}) {
        const GaussRule r = gauss_legendre(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
            const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("graded rule integrates smooth and singular torus integrands") {
    const GradedCubeRule rule;
    const WeightedPoints wp = rule.centered_at({0.4, -1.0, 2.0});
    double vol = 0.0, eps = 0.0;
    for (std::size_t j = 0; j < wp.size(); ++j) {
        vol += wp.weights[j];
        eps += wp.weights[j] * builtin_epsilon(wp.points[j]);
    }
    CHECK(vol == doctest::Approx(kTorusVolume).epsilon(1e-12));
    CHECK(eps == doctest::Approx(3.0 * kTorusVolume).epsilon(1e-10));

    // Watson's simple cubic integral: (2 pi)^-3 int dq / (3 - sum cos q_i) = 0.505462019717...
    const WeightedPoints c = rule.centered_at({0.0, 0.0, 0.0});
    double w = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) w += c.weights[j] / builtin_epsilon(c.points[j]);
    CHECK(w / kTorusVolume == doctest::Approx(0.505462019717).epsilon(1e-4));
}

TEST_CASE("shifted point sets keep consistent half-angle tables") {
    const TorusGrid g = TorusGrid::build(4);
    PointSet s;
    const Vec3 shift{0.3, -2.0, 1.1};
    s.assign_shifted(g.points(), shift);
    for (std::size_t j = 0; j < s.size(); ++j)
        for (int a = 0; a < 3; ++a) {
            const double x = g.node(j)[a] + shift[a];
            CHECK(std::pow(s.half_sin(a)[j], 2) == doctest::Approx(std::pow(std::sin(x / 2), 2)).epsilon(1e-13));
            CHECK(s.half_sin(a)[j] * s.half_cos(a)[j] == doctest::Approx(0.5 * std::sin(x)).epsilon(1e-13));
        }
}
