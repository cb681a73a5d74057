#include <doctest.h>

#include "latspec/linalg.hpp"
#include "latspec/spectrum.hpp"

#include <cmath>

using namespace latspec;

namespace {

ModelSpec model(int n, FormFactor f1, FormFactor f2, double scale, PairEnergy u = PairEnergy::sum(Dispersion::builtin())) {
    ModelSpec s = make_model(TorusGrid::build(n), u, f1, f2, 0.0, 0.0);
    return with_couplings(s, scale * coupling_threshold(s, Channel::One), scale * coupling_threshold(s, Channel::Two));
}

// eigenvalues of H below z from a plain Eigen eigensolve of an independently assembled H
int oracle_count(const ModelSpec& s, double z) {
    const TorusGrid& g = s.grid;
    const Eigen::Index N = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N * N, N * N);
    const double w = g.weight();
    for (Eigen::Index p = 0; p < N; ++p)
        for (Eigen::Index q = 0; q < N; ++q) {
            const Eigen::Index r = p * N + q;
            H(r, r) += s.u(g.node(p), g.node(q));
            for (Eigen::Index t = 0; t < N; ++t) {
                H(r, t * N + q) -= s.mu1 * w * s.phi1(g.node(p)) * s.phi1(g.node(t));
                H(r, p * N + t) -= s.mu2 * w * s.phi2(g.node(q)) * s.phi2(g.node(t));
            }
        }
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues();
    return int((e.array() < z).count());
}

} // namespace

TEST_CASE("direct Hamiltonian matches an independent assembly" * doctest::test_suite("simd_sensitive")) {
    const ModelSpec s = model(3, FormFactor::constant(1), FormFactor::cosine(0), 4.0);
    for (double z : {-2.0, -0.3, s.m})
        CHECK(direct_count_below(s, z) == oracle_count(s, z));
}

TEST_CASE("Birman-Schwinger count equals the direct count" * doctest::test_suite("simd_sensitive")) {
    // strong couplings give several bound states; z stays below every channel branch
    for (double scale : {0.9, 3.0}) {
        const ModelSpec s = model(4, FormFactor::constant(1), FormFactor::constant(1), scale);
        const EssentialSpectrumReport ess = essential_spectrum(s);
        for (double f : {1.5, 1.1, 1.01}) {
            const double z = ess.union_lower_edge - (f - 1.0) - 1e-3;
            CHECK(count_eigenvalues_below(s, z) == direct_count_below(s, z));
        }
    }
}

TEST_CASE("sector decomposition agrees with the dense count") {
    // symmetric case, and an asymmetric one that uses singular values per sector
    const ModelSpec a = model(6, FormFactor::constant(1), FormFactor::constant(1), 2.0);
    const ModelSpec b = model(6, FormFactor::constant(1), FormFactor::cosine(1, 0.7), 2.5,
                              PairEnergy::sum(Dispersion::builtin({1.0, 0.6, 1.4}), {1.0, 0.8, 0.5}));
    for (const ModelSpec* s : {&a, &b}) {
        REQUIRE(sectors_available(*s));
        const double edge = essential_spectrum(*s).union_lower_edge;
        for (double d : {0.5, 0.05, 0.005}) {
            const double z = edge - d;
            CHECK(count_eigenvalues_below(*s, z, CountMethod::Sectors) ==
                  count_eigenvalues_below(*s, z, CountMethod::Dense));
        }
    }
    CHECK_FALSE(sectors_available(model(5, FormFactor::constant(1), FormFactor::constant(1), 0.5)));
}

TEST_CASE("finite-dimensional determinant identity") {
    const ModelSpec s = model(6, FormFactor::constant(1), FormFactor::sine(2), 0.9);
    for (double z : {-1.0, -0.1}) CHECK(finite_dim_bs_identity_check(s, z) <= 1e-12);
}

TEST_CASE("Birman-Schwinger matrix is symmetric with +- spectrum") {
    const ModelSpec s = model(4, FormFactor::constant(1), FormFactor::constant(2), 0.8);
    const Eigen::MatrixXd T = assemble_bs_matrix(s, -0.2);
    CHECK((T - T.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::VectorXd e = symmetric_eigenvalues(T);
    for (Eigen::Index i = 0; i < e.size(); ++i) CHECK(std::abs(e(i) + e(e.size() - 1 - i)) < 1e-10);
}

TEST_CASE("invalid z and resource caps") {
    const ModelSpec s = model(4, FormFactor::constant(1), FormFactor::constant(1), 3.0);
    try {
        node_determinants(s, s.m - 1e-6);
        FAIL("expected InvalidZ");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidZ);
    }
    const ModelSpec big = model(8, FormFactor::constant(1), FormFactor::constant(1), 0.5);
    try {
        assemble_direct_hamiltonian(big);
        FAIL("expected Resource");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Resource);
    }
    const std::vector<double> none;
    CHECK_THROWS_AS(count_sweep(s, none, 1.0), Error);
}

TEST_CASE("zero coupling has no bound states") {
    const ModelSpec s = model(4, FormFactor::constant(1), FormFactor::constant(1), 0.0);
    CHECK(count_eigenvalues_below(s, -0.5) == 0);
    CHECK(direct_count_below(s, s.m) == 0);
}

TEST_CASE("essential spectrum report") {
    const ModelSpec s = model(4, FormFactor::constant(1), FormFactor::constant(1), 3.0);
    const EssentialSpectrumReport r = essential_spectrum(s);
    CHECK(r.band_lo == doctest::Approx(s.m));
    CHECK(r.band_hi == doctest::Approx(s.M));
    CHECK(r.branches1.size() == s.grid.size());
    CHECK(r.union_lower_edge < s.m);
    for (const BranchPoint& b : r.branches1) CHECK(b.z < b.m_alpha);
    CHECK(essential_spectrum(with_couplings(s, 0.0, 0.0)).union_lower_edge == doctest::Approx(s.m));
}

TEST_CASE("count sweep rows") {
    const ModelSpec s = model(6, FormFactor::constant(1), FormFactor::constant(1), 1.0);
    const std::vector<double> d{0.5, 0.01, 0.001};
    const CountReport r = count_sweep(s, d, 1.0, true);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].trusted);
    CHECK_FALSE(r.rows[2].trusted);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r.rows[i].z == doctest::Approx(s.m - d[i]));
        CHECK(r.rows[i].hs_norm > 0.0);
        CHECK(std::isfinite(r.rows[i].hs_diff));
    }
    // counts cannot decrease as z rises
    CHECK(r.rows[0].count <= r.rows[1].count);
    CHECK(r.rows[1].count <= r.rows[2].count);
    CHECK(trusted_distance(6, 0.11));
    CHECK_FALSE(trusted_distance(6, 0.1));
}

TEST_CASE("model kernel") {
    const HessianData h = [] {
        HessianData d;
        d.l1 = d.l2 = 2.0;
        d.l = -1.0;
        d.n1 = d.n2 = 1.5;
        return d;
    }();
    CHECK(model_kernel(h, 0.0, 1.0, {0.1, 0, 0}, {0, 0.1, 0}, 0.01) == 0.0);
    CHECK(model_kernel(h, 1.0, 0.5, {0.6, 0, 0}, {0, 0.1, 0}, 0.01) == 0.0);
    const double k = model_kernel(h, 1.0, 1.0, {0, 0, 0}, {0, 0, 0}, 0.5);
    // d0 (2 kappa)^{-1/2} / (2 kappa) with d0 = 4^{3/4} / (2 pi^2)
    CHECK(k == doctest::Approx(std::pow(4.0, 0.75) / (2.0 * kPi * kPi)));
}
