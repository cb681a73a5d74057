#include "latspec/spectrum.hpp"

#include "latspec/linalg.hpp"
#include "latspec/simd/kernels.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace latspec {
namespace {

// node indices whose coordinates are all positive (even n only)
std::vector<std::size_t> fundamental_nodes(const TorusGrid& g) {
    std::vector<std::size_t> out;
    const int h = g.n() / 2;
    for (int i = h; i < g.n(); ++i)
        for (int j = h; j < g.n(); ++j)
            for (int k = h; k < g.n(); ++k) out.push_back(g.index(i, j, k));
    return out;
}

bool phi_reflection_invariant_squares(const ModelSpec& spec) {
    return spec.phi1.has_axis_parity() && spec.phi2.has_axis_parity();
}

std::vector<NodeDeterminants> compute_determinants(const ModelSpec& spec, std::span<const double> zs, bool check) {
    const TorusGrid& g = spec.grid;
    const std::size_t N = g.size();
    std::vector<NodeDeterminants> out(zs.size());
    for (std::size_t k = 0; k < zs.size(); ++k) {
        out[k].z = zs[k];
        out[k].d1.assign(N, 1.0);
        out[k].d2.assign(N, 1.0);
    }
    const bool use_sym = g.n() % 2 == 0 && spec.u.reflection_symmetric() && phi_reflection_invariant_squares(spec);
    std::vector<std::size_t> nodes;
    if (use_sym) {
        nodes = fundamental_nodes(g);
    } else {
        nodes.resize(N);
        for (std::size_t i = 0; i < N; ++i) nodes[i] = i;
    }
    for (Channel c : {Channel::One, Channel::Two}) {
        const double mu = spec.mu(c);
        if (mu == 0.0) continue;
        ChannelIntegrator I(spec, c);
        for (std::size_t idx : nodes) {
            I.prepare(g.node(idx));
            for (std::size_t k = 0; k < zs.size(); ++k) {
                double d;
                try {
                    d = 1.0 - mu * I.lambda(zs[k]);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::Domain) throw;
                    throw Error(ErrorKind::InvalidZ, "z = " + std::to_string(zs[k]) + " is not below the channel spectrum");
                }
                auto& dv = c == Channel::One ? out[k].d1 : out[k].d2;
                if (use_sym) {
                    for (unsigned mask = 0; mask < 8; ++mask) dv[g.reflected(idx, mask)] = d;
                } else {
                    dv[idx] = d;
                }
            }
        }
    }
    for (auto& nd : out) {
        double lo = std::numeric_limits<double>::infinity();
        for (double v : nd.d1) lo = std::min(lo, v);
        for (double v : nd.d2) lo = std::min(lo, v);
        nd.min = lo;
        if (check && !(lo > 0.0))
            throw Error(ErrorKind::InvalidZ, "channel determinant is not positive at z = " + std::to_string(nd.z) +
                                                 " (min " + std::to_string(lo) + ")");
    }
    return out;
}

// Row factors of the cross block: A(q, p) = left[q] * right[p] / (u(p, q) - z).
struct BlockFactors {
    std::vector<double> left, right;
};

BlockFactors block_factors(const ModelSpec& spec, const NodeDeterminants& det) {
    const std::size_t N = spec.grid.size();
    BlockFactors f;
    f.left.resize(N);
    f.right.resize(N);
    const double c = spec.grid.weight() * std::sqrt(spec.mu1 * spec.mu2);
    for (std::size_t i = 0; i < N; ++i) {
        f.left[i] = c * spec.phi2_nodes[i] / std::sqrt(det.d1[i]);
        f.right[i] = spec.phi1_nodes[i] / std::sqrt(det.d2[i]);
    }
    return f;
}

// A(q, .) for a channel-1 node q
void block_row(const ModelSpec& spec, const BlockFactors& f, double z, std::size_t q, std::vector<double>& den,
               std::vector<double>& out) {
    spec.u.row(spec.grid.node(q), 2, spec.grid.points(), den);
    simd::scaled_reciprocal(f.right, den, z, f.left[q], out);
}

bool symmetric_block(const ModelSpec& spec, const NodeDeterminants& det) {
    if (!spec.u.swap_symmetric() || spec.phi1_nodes != spec.phi2_nodes) return false;
    for (std::size_t i = 0; i < det.d1.size(); ++i)
        if (std::abs(det.d1[i] - det.d2[i]) > 1e-13 * std::abs(det.d1[i])) return false;
    return true;
}

int count_block(Eigen::MatrixXd& B, bool symmetric) {
    if (!symmetric) return count_singular_above(B, 1.0);
    Eigen::MatrixXd neg = -B;
    return count_above_inplace(B, 1.0) + count_above_inplace(neg, 1.0);
}

} // namespace

std::vector<NodeDeterminants> node_determinants(const ModelSpec& spec, std::span<const double> zs) {
    return compute_determinants(spec, zs, true);
}

NodeDeterminants node_determinants(const ModelSpec& spec, double z) {
    const double zs[] = {z};
    return compute_determinants(spec, zs, true).front();
}

Eigen::MatrixXd assemble_bs_block(const ModelSpec& spec, const NodeDeterminants& det) {
    const std::size_t N = spec.grid.size();
    const BlockFactors f = block_factors(spec, det);
    Eigen::MatrixXd At(N, N);
    std::vector<double> den(N), row(N);
    for (std::size_t q = 0; q < N; ++q) {
        block_row(spec, f, det.z, q, den, row);
        std::copy(row.begin(), row.end(), At.col(static_cast<Eigen::Index>(q)).data());
    }
    return At.transpose();
}

Eigen::MatrixXd assemble_bs_matrix(const ModelSpec& spec, double z) {
    const NodeDeterminants det = node_determinants(spec, z);
    const Eigen::Index N = static_cast<Eigen::Index>(spec.grid.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    const Eigen::MatrixXd A = assemble_bs_block(spec, det);
    T.topRightCorner(N, N) = A;
    T.bottomLeftCorner(N, N) = A.transpose();
    return T;
}

bool sectors_available(const ModelSpec& spec) {
    return spec.grid.n() % 2 == 0 && spec.u.reflection_symmetric() && spec.phi1.has_axis_parity() &&
           spec.phi2.has_axis_parity();
}

int count_eigenvalues_below(const ModelSpec& spec, double z, CountMethod method) {
    if (spec.mu1 == 0.0 || spec.mu2 == 0.0) {
        (void)node_determinants(spec, z);
        return 0;
    }
    return count_eigenvalues_below(spec, node_determinants(spec, z), method);
}

int count_eigenvalues_below(const ModelSpec& spec, const NodeDeterminants& det, CountMethod method) {
    if (spec.mu1 == 0.0 || spec.mu2 == 0.0) return 0;
    const bool sym = symmetric_block(spec, det);
    const bool sectors = method == CountMethod::Sectors || (method == CountMethod::Auto && sectors_available(spec));
    if (!sectors) {
        Eigen::MatrixXd A = assemble_bs_block(spec, det);
        return count_block(A, sym);
    }
    if (!sectors_available(spec)) throw Error(ErrorKind::Contract, "sector decomposition is not available for this model");

    const TorusGrid& g = spec.grid;
    const std::size_t N = g.size();
    const std::vector<std::size_t> fund = fundamental_nodes(g);
    const std::size_t H = fund.size();
    std::vector<std::array<std::size_t, 8>> images(H);
    for (std::size_t k = 0; k < H; ++k)
        for (unsigned d = 0; d < 8; ++d) images[k][d] = g.reflected(fund[k], d);

    const BlockFactors f = block_factors(spec, det);
    std::vector<double> den(N), row(N);
    int total = 0;
    Eigen::MatrixXd Bt(H, H);
    for (unsigned tau = 0; tau < 8; ++tau) {
        double chi[8];
        for (unsigned d = 0; d < 8; ++d) chi[d] = (std::popcount(tau & d) % 2) ? -1.0 : 1.0;
        for (std::size_t kq = 0; kq < H; ++kq) {
            block_row(spec, f, det.z, fund[kq], den, row);
            double* col = Bt.col(static_cast<Eigen::Index>(kq)).data();
            for (std::size_t kp = 0; kp < H; ++kp) {
                double s = 0.0;
                for (unsigned d = 0; d < 8; ++d) s += chi[d] * row[images[kp][d]];
                col[kp] = s;
            }
        }
        // Bt holds B_tau transposed; singular values and symmetric spectra are unchanged
        total += count_block(Bt, sym);
    }
    return total;
}

Eigen::MatrixXd assemble_direct_hamiltonian(const ModelSpec& spec) {
    const std::size_t N = spec.grid.size();
    const std::size_t M = N * N;
    if (M > kDirectSizeCap)
        throw Error(ErrorKind::Resource, "direct Hamiltonian of size " + std::to_string(M) + " exceeds the cap " +
                                             std::to_string(kDirectSizeCap));
    if (M * M * sizeof(double) > kDirectMemoryBudget)
        throw Error(ErrorKind::Resource, "direct Hamiltonian of size " + std::to_string(M) + " needs " +
                                             std::to_string(M * M * sizeof(double) >> 20) + " MiB");
    const double w = spec.grid.weight();
    Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
    std::vector<double> row(N);
    for (std::size_t i = 0; i < N; ++i) {
        spec.u.row(spec.grid.node(i), 1, spec.grid.points(), row);
        for (std::size_t j = 0; j < N; ++j) Hm(i * N + j, i * N + j) = row[j];
    }
    const auto& f1 = spec.phi1_nodes;
    const auto& f2 = spec.phi2_nodes;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            const double v1 = spec.mu1 * w * f1[i] * f1[k];
            const double v2 = spec.mu2 * w * f2[i] * f2[k];
            for (std::size_t j = 0; j < N; ++j) {
                Hm(i * N + j, k * N + j) -= v1; // slot 1
                Hm(j * N + i, j * N + k) -= v2; // slot 2
            }
        }
    return Hm;
}

int direct_count_below(const ModelSpec& spec, double z) {
    Eigen::MatrixXd Hm = assemble_direct_hamiltonian(spec);
    Hm = -Hm;
    return count_above_inplace(Hm, -z);
}

double finite_dim_bs_identity_check(const ModelSpec& spec, double z) {
    using Sp = Eigen::SparseMatrix<double>;
    using Tr = Eigen::Triplet<double>;
    const std::size_t N = spec.grid.size();
    const double w = spec.grid.weight();
    const double zs[] = {z};
    const NodeDeterminants det = compute_determinants(spec, zs, false).front();

    std::vector<double> rdiag(N * N), row(N);
    for (std::size_t i = 0; i < N; ++i) {
        spec.u.row(spec.grid.node(i), 1, spec.grid.points(), row);
        for (std::size_t j = 0; j < N; ++j) rdiag[i * N + j] = 1.0 / (row[j] - z);
    }
    Sp R0(N * N, N * N);
    {
        std::vector<Tr> t;
        t.reserve(N * N);
        for (std::size_t k = 0; k < N * N; ++k) t.emplace_back(k, k, rdiag[k]);
        R0.setFromTriplets(t.begin(), t.end());
    }
    double worst = 0.0;
    for (Channel c : {Channel::One, Channel::Two}) {
        const auto& f = spec.phi_nodes(c);
        std::vector<Tr> tp, ta;
        tp.reserve(N * N);
        ta.reserve(N * N);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) {
                // channel 1 integrates slot 1: f(t, q) -> q ; channel 2 integrates slot 2: f(p, t) -> p
                const std::size_t k = c == Channel::One ? b * N + a : a * N + b;
                tp.emplace_back(a, k, w * f[b]);
                ta.emplace_back(k, a, f[b]);
            }
        Sp Phi(N, N * N), PhiStar(N * N, N);
        Phi.setFromTriplets(tp.begin(), tp.end());
        PhiStar.setFromTriplets(ta.begin(), ta.end());
        Sp lhs = Sp(Phi * R0) * PhiStar;
        lhs *= -spec.mu(c);
        Eigen::MatrixXd L = Eigen::MatrixXd(lhs);
        L.diagonal().array() += 1.0;
        const auto& d = c == Channel::One ? det.d1 : det.d2;
        for (std::size_t a = 0; a < N; ++a) L(a, a) -= d[a];
        worst = std::max(worst, L.cwiseAbs().maxCoeff());
    }
    return worst;
}

EssentialSpectrumReport essential_spectrum(const ModelSpec& spec) {
    EssentialSpectrumReport r;
    r.band_lo = spec.m;
    r.band_hi = spec.M;
    r.union_lower_edge = spec.m;
    for (Channel c : {Channel::One, Channel::Two}) {
        const double mu = spec.mu(c);
        if (mu == 0.0) continue;
        auto& out = c == Channel::One ? r.branches1 : r.branches2;
        for (std::size_t i = 0; i < spec.grid.size(); ++i) {
            const Vec3 p = spec.grid.node(i);
            const auto z = channel_eigenvalue(spec, c, p, mu);
            if (!z) continue;
            out.push_back({i, p, *z, channel_range(spec, c, p).m_alpha});
            r.union_lower_edge = std::min(r.union_lower_edge, *z);
        }
    }
    return r;
}

double model_kernel(const HessianData& h, double sign, double delta, const Vec3& q, const Vec3& p, double kappa) {
    if (sign == 0.0) return 0.0;
    const Eigen::Vector3d qv(q[0], q[1], q[2]), pv(p[0], p[1], p[2]);
    const Eigen::Vector3d Uq = h.U * qv, Up = h.U * pv;
    const double qUq = qv.dot(Uq), pUp = pv.dot(Up), pUq = pv.dot(Uq);
    if (qUq >= delta * delta || pUp >= delta * delta) return 0.0;
    const double d0 = std::sqrt(h.detU) * std::pow(h.l1 * h.l2, 0.75) / (2.0 * kPi * kPi);
    const double a = std::pow(h.n1 * qUq + 2.0 * kappa, -0.25);
    const double b = std::pow(h.n2 * pUp + 2.0 * kappa, -0.25);
    return sign * d0 * a * b / (h.l1 * pUp + 2.0 * h.l * pUq + h.l2 * qUq + 2.0 * kappa);
}

HsValues hs_diagnostics(const ModelSpec& spec, const NodeDeterminants& det, double delta, const HessianData& h) {
    const std::size_t N = spec.grid.size();
    const BlockFactors f = block_factors(spec, det);
    const double kappa = spec.m - det.z;
    const double s1 = spec.phi1.value_at_origin(), s2 = spec.phi2.value_at_origin();
    const double sign = (s1 * s2 > 0.0) ? 1.0 : (s1 * s2 < 0.0 ? -1.0 : 0.0);
    const double w = spec.grid.weight();
    std::vector<double> den(N), row(N), model(N);
    double sa = 0.0, sd = 0.0;
    for (std::size_t q = 0; q < N; ++q) {
        block_row(spec, f, det.z, q, den, row);
        const Vec3 qv = spec.grid.node(q);
        for (std::size_t p = 0; p < N; ++p) model[p] = w * model_kernel(h, sign, delta, qv, spec.grid.node(p), kappa);
        sa += simd::sum_squares(row);
        sd += simd::sum_squared_diff(row, model);
    }
    return {std::sqrt(2.0 * sa), std::sqrt(2.0 * sd)};
}

bool trusted_distance(int n, double m_minus_z) {
    const double h = kTwoPi / n;
    return m_minus_z >= h * h / 10.0;
}

CountReport count_sweep(const ModelSpec& spec, std::span<const double> distances, double delta, bool with_hs) {
    if (distances.empty()) throw Error(ErrorKind::InvalidArgument, "empty z sweep");
    std::vector<double> zs;
    for (double d : distances) {
        if (!(d > 0.0)) throw Error(ErrorKind::InvalidArgument, "m - z must be positive");
        zs.push_back(spec.m - d);
    }
    const auto dets = node_determinants(spec, zs);
    std::optional<HessianData> h;
    if (with_hs) {
        try {
            h = hessian_at_minimum(spec);
        } catch (const Error&) {
        }
    }
    CountReport rep;
    rep.n = spec.grid.n();
    rep.m = spec.m;
    rep.delta = delta;
    rep.mu1 = spec.mu1;
    rep.mu2 = spec.mu2;
    rep.method = sectors_available(spec) ? "sectors" : "dense";
    for (std::size_t k = 0; k < zs.size(); ++k) {
        CountRow r;
        r.m_minus_z = distances[k];
        r.z = zs[k];
        r.count = count_eigenvalues_below(spec, dets[k]);
        r.det_min = dets[k].min;
        r.trusted = trusted_distance(spec.grid.n(), distances[k]);
        r.hs_norm = r.hs_diff = std::numeric_limits<double>::quiet_NaN();
        if (with_hs) {
            const HsValues hv = h ? hs_diagnostics(spec, dets[k], delta, *h)
                                  : HsValues{std::numeric_limits<double>::quiet_NaN(),
                                             std::numeric_limits<double>::quiet_NaN()};
            r.hs_norm = h ? hv.hs_norm : std::numeric_limits<double>::quiet_NaN();
            r.hs_diff = hv.hs_diff;
            if (!h) {
                HessianData dummy;
                r.hs_norm = hs_diagnostics(spec, dets[k], 0.0, dummy).hs_norm;
            }
        }
        rep.rows.push_back(r);
    }
    return rep;
}

} // namespace latspec
