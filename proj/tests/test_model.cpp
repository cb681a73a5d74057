#include <doctest.h>

#include "latspec/model.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace latspec;

namespace {

ModelSpec builtin(int n, FormFactor f = FormFactor::constant(1.0)) {
    return make_model(TorusGrid::build(n), PairEnergy::sum(Dispersion::builtin()), f, f, 0.0, 0.0);
}

} // namespace

TEST_CASE("builtin dispersion") {
    CHECK(builtin_epsilon({0, 0, 0}) == 0.0);
    CHECK(builtin_epsilon({kPi, kPi, kPi}) == doctest::Approx(6.0));
    CHECK(builtin_epsilon({1e-8, 0, 0}) == doctest::Approx(0.5e-16).epsilon(1e-8));
    const Dispersion d = Dispersion::builtin({2.0, 1.0, 0.5});
    CHECK(d({kPi, 0, kPi}) == doctest::Approx(5.0));
}

TEST_CASE("tabulated dispersion reproduces nodes and interpolates") {
    const TorusGrid g = TorusGrid::build(6);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = builtin_epsilon(g.node(i));
    const Dispersion t = Dispersion::tabulated(6, v);
    for (std::size_t i = 0; i < g.size(); i += 7) CHECK(t(g.node(i)) == doctest::Approx(v[i]));
    // between nodes the interpolant stays within the cell values
    const double mid = t({0.1, 0.2, -0.3});
    CHECK(mid > 0.0);
    CHECK(mid < 3.0);

    const auto path = std::filesystem::temp_directory_path() / "latspec_eps.csv";
    {
        std::ofstream out(path);
        out.precision(17);
        out << "q1,q2,q3,value\n";
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Vec3 q = g.node(i);
            out << q[0] << ',' << q[1] << ',' << q[2] << ',' << v[i] << '\n';
        }
    }
    const Dispersion c = Dispersion::from_csv(path.string());
    CHECK(c.kind() == Dispersion::Kind::Tabulated);
    CHECK(c(g.node(5)) == doctest::Approx(v[5]).epsilon(1e-12));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(Dispersion::from_csv("/nonexistent/eps.csv"), Error);
}

TEST_CASE("extrema of the builtin pair energy") {
    const ModelSpec s = builtin(12);
    CHECK(std::abs(s.m) < 1e-12);
    CHECK(s.M == doctest::Approx(13.5).epsilon(1e-9));
    const Extrema e = extrema(s.u, s.grid);
    const double a = 2.0 * kPi / 3.0;
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(std::abs(e.argmax_p[k]) - a) < 1e-4);
        CHECK(std::abs(wrap_angle(e.argmax_p[k] + e.argmax_q[k])) < 1e-4);
    }
}

TEST_CASE("model validation errors") {
    const TorusGrid g = TorusGrid::build(4);
    const PairEnergy u = PairEnergy::sum(Dispersion::builtin());
    const FormFactor one = FormFactor::constant(1.0);
    CHECK_THROWS_AS(make_model(g, u, one, one, -1.0, 0.0), Error);
    CHECK_THROWS_AS(make_model(g, u, one, one, 0.0, 0.0, 0.0), Error);
    try {
        make_model(g, PairEnergy::sum(Dispersion::builtin(), {0, 0, 0}), one, one, 0, 0);
        FAIL("expected DegenerateModel");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateModel);
    }
    const FormFactor lying = FormFactor::custom([](const Vec3& q) { return 1.0 + std::sin(q[0]); }, Parity::Even);
    try {
        make_model(g, u, lying, one, 0, 0);
        FAIL("expected HypothesisViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HypothesisViolation);
    }
}

TEST_CASE("form factors") {
    const FormFactor s = FormFactor::sine(0, 2.0);
    CHECK(s.parity() == Parity::Odd);
    CHECK(s.value_at_origin() == 0.0);
    CHECK(s({kPi / 2, 0, 0}) == doctest::Approx(2.0));
    CHECK(s.axis_parity()[0] == -1);
    CHECK(s.axis_parity()[1] == 1);
    const FormFactor c = FormFactor::cosine(2, 3.0);
    CHECK(c.value_at_origin() == doctest::Approx(3.0));
}

TEST_CASE("hessian of the builtin pair energy") {
    const HessianData h = hessian_at_minimum(builtin(8));
    CHECK(h.l1 == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(h.l2 == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(h.l == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(h.detU == doctest::Approx(1.0));
    CHECK((h.U - Eigen::Matrix3d::Identity()).norm() < 1e-6);
    CHECK(h.n1 == doctest::Approx(1.5).epsilon(1e-7));
}

TEST_CASE("hessian of an anisotropic asymmetric pair energy") {
    // u = 3 e(p) + e(p - q) + 0.5 e(q) with axis weights (1, 2, 4): blocks (4, -1, 1.5) x diag(w)
    const ModelSpec s = make_model(TorusGrid::build(6), PairEnergy::sum(Dispersion::builtin({1, 2, 4}), {3, 1, 0.5}),
                                   FormFactor::constant(1), FormFactor::constant(1), 0, 0);
    const HessianData h = hessian_at_minimum(s);
    const double scale = std::cbrt(8.0); // det diag(1,2,4) = 8, gauge det U = 1
    CHECK(h.l1 == doctest::Approx(4.0 * scale).epsilon(1e-6));
    CHECK(h.l2 == doctest::Approx(1.5 * scale).epsilon(1e-6));
    CHECK(h.l == doctest::Approx(-1.0 * scale).epsilon(1e-6));
    CHECK(h.U(2, 2) / h.U(0, 0) == doctest::Approx(4.0).epsilon(1e-6));
    const double red = h.l1 * h.l2 - h.l * h.l;
    CHECK(h.n1 == doctest::Approx(red / h.l1));
    CHECK(h.n2 == doctest::Approx(red / h.l2));
}

TEST_CASE("non product-form hessian is rejected") {
    auto f = [](const Vec3& p, const Vec3& q) {
        return builtin_epsilon(p) + builtin_epsilon(q) + (1.0 - std::cos(p[0] - q[1]));
    };
    const ModelSpec s = make_model(TorusGrid::build(6), PairEnergy::custom(f), FormFactor::constant(1),
                                   FormFactor::constant(1), 0, 0);
    try {
        hessian_at_minimum(s);
        FAIL("expected NotProductForm");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotProductForm);
    }
}

TEST_CASE("quadratic bounds near the minimum") {
    const QuadraticBounds b = quadratic_bounds(builtin(16), 0.5);
    CHECK(b.ok);
    CHECK(b.C1 > 0.0);
    CHECK(b.C1 <= b.C2);
    CHECK(b.C3 > 0.0);
}

TEST_CASE("conditional negative definiteness") {
    CHECK(check_conditionally_negative_definite(Dispersion::builtin(), 100, 3).pass);
    // -e is conditionally positive, so the check must fail
    const Dispersion bad = Dispersion::custom([](const Vec3& q) { return -builtin_epsilon(q); });
    CHECK_FALSE(check_conditionally_negative_definite(bad, 100, 3).pass);
}
