#include <doctest.h>

#include "latspec/dispersion.hpp"
#include "latspec/simd/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace latspec;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("avx2 kernels match the scalar reference") {
    const simd::KernelTable* v = simd::avx2_kernels();
    if (!v) {
        MESSAGE("AVX2 variant unavailable, nothing to compare");
        return;
    }
    const simd::KernelTable& s = simd::scalar_kernels();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-kPi, kPi), pos(0.5, 3.0);
    // odd sizes exercise the remainder lanes
    for (std::size_t n : {1u, 3u, 4u, 7u, 33u, 1001u}) {
        std::vector<double> num(n), den(n), x(n), y(n);
        for (std::size_t j = 0; j < n; ++j) {
            num[j] = pos(rng);
            den[j] = pos(rng) + 1.0;
            x[j] = U(rng);
            y[j] = U(rng);
        }
        CHECK(rel(v->reciprocal_sum(num.data(), den.data(), 0.3, n), s.reciprocal_sum(num.data(), den.data(), 0.3, n)) < 1e-13);
        CHECK(rel(v->sum_squares(x.data(), n), s.sum_squares(x.data(), n)) < 1e-13);
        CHECK(rel(v->sum_squared_diff(x.data(), y.data(), n), s.sum_squared_diff(x.data(), y.data(), n)) < 1e-13);
        std::vector<double> o1(n), o2(n);
        v->scaled_reciprocal(num.data(), den.data(), 0.2, 1.7, n, o1.data());
        s.scaled_reciprocal(num.data(), den.data(), 0.2, 1.7, n, o2.data());
        for (std::size_t j = 0; j < n; ++j) CHECK(rel(o1[j], o2[j]) < 1e-14);
        double l1, h1, l2, h2;
        v->min_max(x.data(), n, &l1, &h1);
        s.min_max(x.data(), n, &l2, &h2);
        CHECK(l1 == l2);
        CHECK(h1 == h2);

        std::vector<Vec3> pts(n);
        for (auto& p : pts) p = {U(rng), U(rng), U(rng)};
        const PointSet ps(pts);
        simd::CosineRowArgs a;
        const Vec3 fx{U(rng), U(rng), U(rng)};
        for (int i = 0; i < 3; ++i) {
            a.fixed_sh[i] = std::sin(fx[i] / 2);
            a.fixed_ch[i] = std::cos(fx[i] / 2);
            a.b[i] = pos(rng);
            a.c[i] = pos(rng);
            a.sh[i] = ps.half_sin(i).data();
            a.ch[i] = ps.half_cos(i).data();
        }
        a.base = 0.4;
        a.n = n;
        a.out = o1.data();
        v->cosine_row(a);
        a.out = o2.data();
        s.cosine_row(a);
        for (std::size_t j = 0; j < n; ++j) CHECK(rel(o1[j], o2[j]) < 1e-13);
    }
}

TEST_CASE("pair energy rows agree with pointwise evaluation" * doctest::test_suite("simd_sensitive")) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-kPi, kPi);
    std::vector<Vec3> pts(257);
    for (auto& p : pts) p = {U(rng), U(rng), U(rng)};
    const PointSet ps(pts);
    const PairEnergy u = PairEnergy::sum(Dispersion::builtin({1.0, 0.5, 2.0}), {0.7, 1.3, 0.4});
    const Vec3 x{0.3, -1.1, 2.9};
    std::vector<double> r1(pts.size()), r2(pts.size());
    u.row(x, 1, ps, r1);
    u.row(x, 2, ps, r2);
    for (std::size_t j = 0; j < pts.size(); ++j) {
        CHECK(r1[j] == doctest::Approx(u(x, pts[j])).epsilon(1e-13));
        CHECK(r2[j] == doctest::Approx(u(pts[j], x)).epsilon(1e-13));
    }
}
