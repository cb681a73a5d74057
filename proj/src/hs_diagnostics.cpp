#include "latspec/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace latspec {

std::vector<ContinuumHsRow> hs_continuum_sweep(const ModelSpec& spec, std::span<const double> distances, double delta,
                                               const HessianData& h, const ContinuumHsOptions& options) {
    if (distances.empty()) throw Error(ErrorKind::InvalidArgument, "empty z sweep");
    const std::size_t K = distances.size();

    GradedRuleOptions outer = options.outer;
    outer.break_radius = [&h, delta](const Vec3& d) {
        const Eigen::Vector3d v(d[0], d[1], d[2]);
        return delta / std::sqrt(v.dot(h.U * v));
    };
    const GradedCubeRule rule(outer);
    const WeightedPoints nodes = rule.centered_at(Vec3{0.0, 0.0, 0.0});
    const std::size_t N = nodes.size();
    const PointSet& pts = nodes.points;

    // Delta_1 at q nodes and Delta_2 at p nodes (the same node set), per z
    QuadratureChoice inner;
    inner.kind = Quadrature::Graded;
    inner.graded = options.inner;
    std::vector<std::vector<double>> d1(K, std::vector<double>(N, 1.0)), d2 = d1;
    for (Channel c : {Channel::One, Channel::Two}) {
        const double mu = spec.mu(c);
        if (mu == 0.0) continue;
        ChannelIntegrator I(spec, c, inner);
        auto& dv = c == Channel::One ? d1 : d2;
        for (std::size_t i = 0; i < N; ++i) {
            I.prepare(pts[i]);
            for (std::size_t k = 0; k < K; ++k) dv[k][i] = 1.0 - mu * I.lambda(spec.m - distances[k]);
        }
    }

    const double s1 = spec.phi1.value_at_origin(), s2 = spec.phi2.value_at_origin();
    const double sign = (s1 * s2 > 0.0) ? 1.0 : (s1 * s2 < 0.0 ? -1.0 : 0.0);
    const double d0 = std::sqrt(h.detU) * std::pow(h.l1 * h.l2, 0.75) / (2.0 * kPi * kPi);
    const double c = std::sqrt(spec.mu1 * spec.mu2);

    std::vector<ContinuumHsRow> rows(K);
    std::vector<double> phi1(N), phi2(N), xUx(N), inside(N);
    std::vector<Eigen::Vector3d> Ux(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3 x = pts[i];
        phi1[i] = spec.phi1(x);
        phi2[i] = spec.phi2(x);
        const Eigen::Vector3d v(x[0], x[1], x[2]);
        Ux[i] = h.U * v;
        xUx[i] = v.dot(Ux[i]);
        inside[i] = xUx[i] < delta * delta ? 1.0 : 0.0;
    }
    for (std::size_t k = 0; k < K; ++k) {
        double lo = 1.0;
        for (std::size_t i = 0; i < N; ++i) lo = std::min({lo, d1[k][i], d2[k][i]});
        rows[k].m_minus_z = distances[k];
        rows[k].det_min = lo;
        if (!(lo > 0.0))
            throw Error(ErrorKind::InvalidZ, "graded channel determinant is not positive at m - z = " +
                                                 std::to_string(distances[k]));
    }

    // per-z column factors
    std::vector<std::vector<double>> right(K, std::vector<double>(N)), bfac = right;
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < N; ++j) {
            right[k][j] = phi1[j] / std::sqrt(d2[k][j]);
            bfac[k][j] = inside[j] * std::pow(h.n2 * xUx[j] + 2.0 * distances[k], -0.25);
        }

    std::vector<double> den(N), cross(N);
    std::vector<double> sa(K, 0.0), sd(K, 0.0);
    for (std::size_t iq = 0; iq < N; ++iq) {
        spec.u.row(pts[iq], 2, pts, den); // u(p_j, q)
        const double wq = nodes.weights[iq];
        const Eigen::Vector3d qv(pts[iq][0], pts[iq][1], pts[iq][2]);
        for (std::size_t j = 0; j < N; ++j) cross[j] = Ux[j].dot(qv);
        for (std::size_t k = 0; k < K; ++k) {
            const double z = spec.m - distances[k];
            const double kap = distances[k];
            const double left = c * phi2[iq] / std::sqrt(d1[k][iq]);
            const double aq = sign * d0 * inside[iq] * std::pow(h.n1 * xUx[iq] + 2.0 * kap, -0.25);
            const double base = h.l2 * xUx[iq] + 2.0 * kap;
            const double* r = right[k].data();
            const double* b = bfac[k].data();
            double acc_a = 0.0, acc_d = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                const double a = left * r[j] / (den[j] - z);
                const double mdl = aq * b[j] / (h.l1 * xUx[j] + 2.0 * h.l * cross[j] + base);
                const double w = nodes.weights[j];
                acc_a += w * a * a;
                acc_d += w * (a - mdl) * (a - mdl);
            }
            sa[k] += wq * acc_a;
            sd[k] += wq * acc_d;
        }
    }
    for (std::size_t k = 0; k < K; ++k) {
        rows[k].hs_norm_sq = 2.0 * sa[k];
        rows[k].hs_diff = std::sqrt(2.0 * sd[k]);
    }
    return rows;
}

} // namespace latspec
