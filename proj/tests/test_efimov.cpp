#include <doctest.h>

#include "latspec/efimov.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace latspec;

namespace {

const EfimovParams kBuiltin = efimov_params(2.0, 2.0, -1.0);

double legendre(int l, double t) {
    double p0 = 1.0, p1 = t;
    if (l == 0) return 1.0;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// composite Simpson on [-1, 1]
double simpson(const std::function<double(double)>& f, int n = 4000) {
    const double h = 2.0 / n;
    double s = f(-1.0) + f(1.0);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-1.0 + i * h);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("Efimov parameters") {
    CHECK(kBuiltin.u12 == doctest::Approx(std::sqrt(4.0 / 3.0)));
    CHECK(kBuiltin.s12 == doctest::Approx(-0.5));
    CHECK(kBuiltin.r12 == 0.0);
    CHECK(efimov_params(8.0, 2.0, 1.0).r12 == doctest::Approx(std::log(2.0)));
    try {
        efimov_params(2.0, 2.0, 0.0);
        FAIL("expected DegenerateModel");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateModel);
    }
    CHECK_THROWS_AS(efimov_params(1.0, 1.0, 2.0), Error);
}

TEST_CASE("Legendre modes against direct quadrature") {
    for (double lambda : {0.0, 0.3, 2.0, 7.5})
        for (int l : {0, 1, 2, 5}) {
            auto f = [&](double t) {
                const double a = std::acos(kBuiltin.s12 * t);
                const double g = lambda == 0.0 ? a / kPi : std::sinh(lambda * a) / std::sinh(kPi * lambda);
                return legendre(l, t) * g / std::sin(a);
            };
            CHECK(legendre_mode(kBuiltin, l, lambda) ==
                  doctest::Approx(kBuiltin.u12 * simpson(f)).epsilon(1e-9).scale(1e-12));
        }
    // s12 = 0: kernel constant in t
    EfimovParams flat = kBuiltin;
    flat.s12 = 0.0;
    CHECK(std::abs(legendre_mode(flat, 3, 1.0)) < 1e-14);
    // no overflow far out, exponential decay
    CHECK(std::abs(legendre_mode(kBuiltin, 0, 400.0)) < 1e-100);
    CHECK(legendre_mode(kBuiltin, 0, 0.5) > 0.0);
}

TEST_CASE("sphere counts") {
    CHECK(count_sphere_operator(kBuiltin, 0.0, 100.0) == 0);
    int prev = 1 << 30;
    for (double mu : {0.01, 0.05, 0.2, 0.5, 1.0}) {
        const int c = count_sphere_operator(kBuiltin, 0.2, mu);
        CHECK(c <= prev);
        prev = c;
    }
    // the s-wave mode exceeds 1 near lambda = 0, the open Efimov channel
    CHECK(count_sphere_operator(kBuiltin, 0.0, 1.0) >= 1);
}

TEST_CASE("Legendre and Nystrom sphere counts agree") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lam(0.0, 3.0), logmu(std::log(0.05), std::log(1.5));
    int done = 0;
    while (done < 20) {
        const double l = lam(rng), mu = std::exp(logmu(rng));
        bool clear = true;
        for (int d = 0; d <= 40 && clear; ++d) clear = std::abs(std::abs(legendre_mode(kBuiltin, d, l)) - mu) > 1e-3 * mu;
        if (!clear) continue;
        ++done;
        CHECK(count_sphere_operator(kBuiltin, l, mu) == count_sphere_nystrom(kBuiltin, l, mu));
    }
}

TEST_CASE("Efimov coefficient") {
    const double u1 = ucoef(kBuiltin, 1.0);
    CHECK(u1 > 0.0);
    CHECK(u1 == doctest::Approx(0.0658).epsilon(0.01));
    CHECK(ucoef(kBuiltin, 50.0) == 0.0);
    CHECK(ucoef(kBuiltin, 0.5) >= u1);
    CHECK(ucoef(kBuiltin, 2.0) <= u1);
    UcoefOptions big;
    big.lmax = 80;
    big.lambda_max = 100.0;
    CHECK(ucoef(kBuiltin, 1.0, big) == doctest::Approx(u1).epsilon(0.005));
    // the phase of r12 never enters
    EfimovParams flipped = efimov_params(8.0, 2.0, 1.0);
    const double a = ucoef(flipped, 1.0);
    flipped.r12 = -flipped.r12;
    CHECK(ucoef(flipped, 1.0) == a);
}

TEST_CASE("Sobolev kernel and finite operator") {
    // y -> infinity decay and symmetry in y when r12 = 0
    CHECK(sobolev_kernel(kBuiltin, 0, 3.0) == doctest::Approx(sobolev_kernel(kBuiltin, 0, -3.0)));
    CHECK(sobolev_kernel(kBuiltin, 0, 30.0) < 1e-10);
    // crude norm bound: no eigenvalue reaches a huge mu
    const double bound = kBuiltin.u12 * 4.0 * kPi / (kTwoPi * kTwoPi * (1.0 - std::abs(kBuiltin.s12))) * 20.0;
    CHECK(sobolev_finite(kBuiltin, 20.0, bound) == 0);
    const int n100 = sobolev_finite(kBuiltin, 100.0, 1.0);
    const int n200 = sobolev_finite(kBuiltin, 200.0, 1.0);
    CHECK(n100 > 0);
    const double ratio = double(n200) / n100;
    CHECK(ratio >= 1.8);
    CHECK(ratio <= 2.2);
    // the asymmetric route (singular values) agrees with the symmetric one when r12 = 0
    EfimovParams tiny = kBuiltin;
    tiny.r12 = 1e-300;
    CHECK(sobolev_finite(tiny, 40.0, 1.0) == sobolev_finite(kBuiltin, 40.0, 1.0));
}

TEST_CASE("asymptotic slope fit") {
    CountReport r;
    for (int k = 1; k <= 8; ++k) {
        CountRow row;
        row.m_minus_z = std::pow(10.0, -k);
        row.count = int(std::lround(0.3 * std::abs(std::log(row.m_minus_z))));
        row.trusted = true;
        r.rows.push_back(row);
    }
    const SlopeFit f = asymptotic_slope(r);
    CHECK(f.slope == doctest::Approx(0.3).epsilon(0.05));
    CHECK(f.points == 8);
    for (auto& row : r.rows) row.count = 4;
    CHECK(std::abs(asymptotic_slope(r).slope) < 1e-12);
    for (std::size_t i = 3; i < r.rows.size(); ++i) r.rows[i].trusted = false;
    try {
        asymptotic_slope(r);
        FAIL("expected InsufficientData");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientData);
    }
}

TEST_CASE("mode table decays at its edges") {
    const auto t = mode_table(kBuiltin, 10, 20.0, 0.5);
    CHECK(t.size() == 11u * 41u);
    double first = 0.0, far_l = 0.0, far_lambda = 0.0;
    for (const ModeRow& m : t) {
        if (m.l == 0 && m.lambda == 0.0) first = std::abs(m.value);
        if (m.l == 10 && m.lambda == 0.0) far_l = std::abs(m.value);
        if (m.l == 0 && m.lambda == 20.0) far_lambda = std::abs(m.value);
    }
    CHECK(far_l < 1e-3 * first);
    CHECK(far_lambda < 1e-6 * first);
}
