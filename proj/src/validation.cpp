#include "latspec/validation.hpp"

#include "latspec/efimov.hpp"
#include "latspec/friedrichs.hpp"
#include "latspec/linalg.hpp"
#include "latspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace latspec {
namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd A(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) A(i, j) = A(j, i) = g(rng);
    return A;
}

ModelSpec builtin_model(int n, FormFactor phi, double scale) {
    ModelSpec s = make_model(TorusGrid::build(n), PairEnergy::sum(Dispersion::builtin()), phi, phi, 0.0, 0.0);
    const double mu = scale * coupling_threshold(s, Channel::One);
    return with_couplings(s, mu, mu);
}

} // namespace

PropertyResult weyl_suite(int pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(4, 40);
    std::uniform_real_distribution<double> shift(-3.0, 3.0);
    PropertyResult r{"weyl", true, ""};
    int failures = 0;
    for (int k = 0; k < pairs; ++k) {
        const int n = size(rng);
        const Eigen::MatrixXd A = random_symmetric(n, rng), B = random_symmetric(n, rng);
        const Eigen::VectorXd ea = symmetric_eigenvalues(A), eb = symmetric_eigenvalues(B),
                              es = symmetric_eigenvalues(A + B);
        // descending: l_{i+j}(A+B) <= l_i(A) + l_j(B)
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; i + j < n && ok; ++j)
                ok = es(n - 1 - i - j) <= ea(n - 1 - i) + eb(n - 1 - j) + 1e-10 * (1.0 + std::abs(es(n - 1 - i - j)));
        const double s = shift(rng), t = shift(rng);
        ok = ok && count_above(A + B, s + t) <= count_above(A, s) + count_above(B, t);
        if (!ok) ++failures;
    }
    r.pass = failures == 0;
    r.detail = std::to_string(pairs - failures) + "/" + std::to_string(pairs) + " pairs";
    return r;
}

PropertyResult bs_symmetry_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, -1e-3);
    const ModelSpec spec = builtin_model(6, FormFactor::constant(1.0), 0.9);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        const Eigen::VectorXd e = symmetric_eigenvalues(assemble_bs_matrix(spec, spec.m + dist(rng)));
        const Eigen::Index n = e.size();
        const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(e(i) + e(n - 1 - i)) / scale);
    }
    return {"bs_pm_symmetry", worst <= 1e-10, fmt("max |l_i + l_{N-i}| = %.3g", worst)};
}

PropertyResult delta_monotonicity_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-kPi, kPi);
    const ModelSpec spec = builtin_model(8, FormFactor::constant(1.0), 1.0);
    QuadratureChoice graded;
    graded.kind = Quadrature::Graded;
    int chains = 0, bad = 0;
    for (const QuadratureChoice& q : {QuadratureChoice{}, graded}) {
        for (Channel c : {Channel::One, Channel::Two}) {
            for (int k = 0; k < 6; ++k) {
                const Vec3 p{coord(rng), coord(rng), coord(rng)};
                ChannelIntegrator I(spec, c, q);
                I.prepare(p);
                const double top = I.min_denominator();
                double prev = std::numeric_limits<double>::infinity();
                // z increasing towards the channel minimum: Delta strictly decreasing
                for (double gap : {4.0, 1.0, 0.3, 0.1, 0.03, 0.01, 1e-3}) {
                    const double d = 1.0 - spec.mu(c) * I.lambda(top - gap);
                    if (!(d < prev)) ++bad;
                    prev = d;
                }
                // and decreasing in mu at fixed z
                const double L = I.lambda(top - 0.1);
                prev = std::numeric_limits<double>::infinity();
                for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    const double d = 1.0 - f * spec.mu(c) * L;
                    if (!(d < prev)) ++bad;
                    prev = d;
                }
                ++chains;
            }
        }
    }
    return {"delta_monotonicity", bad == 0, std::to_string(chains) + " chains, " + std::to_string(bad) + " violations"};
}

PropertyResult sphere_count_suite(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lam(0.0, 3.0), logmu(std::log(0.05), std::log(1.5));
    const EfimovParams p = efimov_params(2.0, 2.0, -1.0);
    int agree = 0, done = 0;
    while (done < samples) {
        const double l = lam(rng), mu = std::exp(logmu(rng));
        // keep mu away from the mode values so both discretizations resolve the comparison
        bool clear = true;
        for (int deg = 0; deg <= 40 && clear; ++deg)
            clear = std::abs(std::abs(legendre_mode(p, deg, l)) - mu) > 1e-3 * mu;
        if (!clear) continue;
        ++done;
        if (count_sphere_operator(p, l, mu) == count_sphere_nystrom(p, l, mu)) ++agree;
    }
    return {"sphere_legendre_vs_nystrom", agree == samples, std::to_string(agree) + "/" + std::to_string(samples)};
}

PropertyResult cnd_suite(std::uint64_t seed) {
    const CndReport r = check_conditionally_negative_definite(Dispersion::builtin(), 200, seed);
    return {"conditionally_negative_definite", r.pass, fmt("worst form %.3g", r.worst)};
}

std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
    return {weyl_suite(100, seed), bs_symmetry_suite(seed + 1), delta_monotonicity_suite(seed + 2),
            sphere_count_suite(20, seed + 3), cnd_suite(seed + 4)};
}

} // namespace latspec
