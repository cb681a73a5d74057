#include "latspec/model.hpp"

#include "latspec/simd/kernels.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <random>

namespace latspec {
namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

double eval6(const PairEnergy& u, const Vec6& x) {
    return u(Vec3{x[0], x[1], x[2]}, Vec3{x[3], x[4], x[5]});
}

Mat6 fd_hessian(const PairEnergy& u, const Vec6& x, double h) {
    Mat6 H;
    const double f0 = eval6(u, x);
    for (int i = 0; i < 6; ++i) {
        Vec6 a = x, b = x;
        a[i] += h;
        b[i] -= h;
        H(i, i) = (eval6(u, a) - 2.0 * f0 + eval6(u, b)) / (h * h);
        for (int j = i + 1; j < 6; ++j) {
            Vec6 pp = x, pm = x, mp = x, mm = x;
            pp[i] += h; pp[j] += h;
            pm[i] += h; pm[j] -= h;
            mp[i] -= h; mp[j] += h;
            mm[i] -= h; mm[j] -= h;
            H(i, j) = H(j, i) = (eval6(u, pp) - eval6(u, pm) - eval6(u, mp) + eval6(u, mm)) / (4.0 * h * h);
        }
    }
    return H;
}

Vec6 fd_gradient(const PairEnergy& u, const Vec6& x, double h) {
    Vec6 g;
    for (int i = 0; i < 6; ++i) {
        Vec6 a = x, b = x;
        a[i] += h;
        b[i] -= h;
        g[i] = (eval6(u, a) - eval6(u, b)) / (2.0 * h);
    }
    return g;
}

// Newton polish of a grid extremum; sign = +1 for a minimum, -1 for a maximum.
Vec6 polish(const PairEnergy& u, Vec6 x, double sign, double max_step) {
    double fx = sign * eval6(u, x);
    for (int it = 0; it < 60; ++it) {
        const Vec6 g = fd_gradient(u, x, 1e-5);
        const Mat6 H = fd_hessian(u, x, 1e-4);
        Vec6 step = -H.ldlt().solve(g);
        if (!step.allFinite()) break;
        if (step.norm() > max_step) step *= max_step / step.norm();
        bool moved = false;
        for (int k = 0; k < 8; ++k) {
            const Vec6 y = x + step;
            const double fy = sign * eval6(u, y);
            if (fy <= fx) {
                x = y;
                fx = fy;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved || step.norm() < 1e-13) break;
    }
    return x;
}

Vec6 join(const Vec3& p, const Vec3& q) { return (Vec6() << p[0], p[1], p[2], q[0], q[1], q[2]).finished(); }

} // namespace

Extrema extrema(const PairEnergy& u, const TorusGrid& model_grid) {
    const TorusGrid grid = model_grid.n() > 32 ? TorusGrid::build(32) : model_grid;
    const PointSet& pts = grid.points();
    const std::size_t N = grid.size();
    std::vector<double> row(N);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::size_t lo_p = 0, lo_q = 0, hi_p = 0, hi_q = 0;
    for (std::size_t i = 0; i < N; ++i) {
        u.row(grid.node(i), 1, pts, row);
        double rlo, rhi;
        simd::active().min_max(row.data(), N, &rlo, &rhi);
        if (!std::isfinite(rlo) || !std::isfinite(rhi)) throw Error(ErrorKind::Data, "pair energy is not finite on the grid");
        if (rlo < lo) {
            lo = rlo;
            lo_p = i;
            lo_q = static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
        }
        if (rhi > hi) {
            hi = rhi;
            hi_p = i;
            hi_q = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        }
    }
    const double cell = 2.0 * grid.spacing();
    const Vec6 xmin = polish(u, join(grid.node(lo_p), grid.node(lo_q)), 1.0, cell);
    const Vec6 xmax = polish(u, join(grid.node(hi_p), grid.node(hi_q)), -1.0, cell);
    Extrema e;
    e.argmin_p = wrap(Vec3{xmin[0], xmin[1], xmin[2]});
    e.argmin_q = wrap(Vec3{xmin[3], xmin[4], xmin[5]});
    e.argmax_p = wrap(Vec3{xmax[0], xmax[1], xmax[2]});
    e.argmax_q = wrap(Vec3{xmax[3], xmax[4], xmax[5]});
    e.m = std::min(lo, u(e.argmin_p, e.argmin_q));
    e.M = std::max(hi, u(e.argmax_p, e.argmax_q));
    return e;
}

ModelSpec make_model(const TorusGrid& grid, PairEnergy u, FormFactor phi1, FormFactor phi2, double mu1, double mu2,
                     double delta) {
    if (!(mu1 >= 0.0) || !(mu2 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "couplings must be nonnegative");
    if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
    ModelSpec s;
    s.grid = grid;
    s.u = std::move(u);
    s.phi1 = std::move(phi1);
    s.phi2 = std::move(phi2);
    s.mu1 = mu1;
    s.mu2 = mu2;
    s.delta = delta;
    const Extrema e = extrema(s.u, grid);
    s.m = e.m;
    s.M = e.M;
    s.argmin_p = e.argmin_p;
    s.argmin_q = e.argmin_q;
    if (!(s.m < s.M)) throw Error(ErrorKind::DegenerateModel, "pair energy is constant on the grid (m == M)");

    const PointSet& pts = grid.points();
    for (Channel c : {Channel::One, Channel::Two}) {
        const FormFactor& f = s.phi(c);
        const double bad = f.parity_violation(pts);
        if (bad > 1e-10)
            throw Error(ErrorKind::HypothesisViolation,
                        "form factor " + f.label() + " violates its declared parity by " + std::to_string(bad));
        auto& nodes = c == Channel::One ? s.phi1_nodes : s.phi2_nodes;
        nodes.resize(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            nodes[j] = f(pts[j]);
            if (!std::isfinite(nodes[j])) throw Error(ErrorKind::Data, "form factor is not finite on the grid");
        }
    }
    return s;
}

ModelSpec with_couplings(const ModelSpec& spec, double mu1, double mu2) {
    if (!(mu1 >= 0.0) || !(mu2 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "couplings must be nonnegative");
    ModelSpec s = spec;
    s.mu1 = mu1;
    s.mu2 = mu2;
    return s;
}

HessianData hessian_at_minimum(const ModelSpec& spec, double step, double tolerance) {
    if (norm(spec.argmin_p) > 1e-5 || norm(spec.argmin_q) > 1e-5)
        throw Error(ErrorKind::HypothesisViolation, "minimum of u is not at (0,0)");
    const Vec6 x0 = Vec6::Zero();
    const Mat6 Hh = fd_hessian(spec.u, x0, step);
    const Mat6 Hh2 = fd_hessian(spec.u, x0, 0.5 * step);
    const Mat6 H = (4.0 * Hh2 - Hh) / 3.0;

    // nearest Kronecker product L (x) U through the rank-one rearrangement
    Eigen::Matrix<double, 4, 9> R;
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) R(bi * 2 + bj, i * 3 + j) = H(3 * bi + i, 3 * bj + j);
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 9>> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double sigma = svd.singularValues()[0];
    Eigen::Matrix2d L;
    Eigen::Matrix3d U;
    for (int k = 0; k < 4; ++k) L(k / 2, k % 2) = sigma * svd.matrixU()(k, 0);
    for (int k = 0; k < 9; ++k) U(k / 3, k % 3) = svd.matrixV()(k, 0);
    if (U.trace() < 0.0) {
        U = -U;
        L = -L;
    }
    const double det = U.determinant();
    if (!(det > 0.0)) throw Error(ErrorKind::HypothesisViolation, "Hessian factor U is not positive definite");
    const double c = std::cbrt(det);
    U /= c;
    L *= c;
    U = 0.5 * (U + U.transpose()).eval();

    HessianData h;
    h.blocks = H;
    h.U = U;
    h.detU = U.determinant();
    h.l1 = L(0, 0);
    h.l2 = L(1, 1);
    h.l = 0.5 * (L(0, 1) + L(1, 0));
    Mat6 K;
    K << h.l1 * U, h.l * U, h.l * U, h.l2 * U;
    h.residual = (H - K).cwiseAbs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(U);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw Error(ErrorKind::HypothesisViolation, "Hessian factor U is not positive definite");
    if (!(h.l1 > 0.0) || !(h.l2 > 0.0) || !(h.l1 * h.l2 - h.l * h.l > 0.0))
        throw Error(ErrorKind::HypothesisViolation, "Hessian coefficients violate l1, l2 > 0 and l1 l2 - l^2 > 0");
    if (h.residual > tolerance)
        throw Error(ErrorKind::NotProductForm,
                    "Hessian blocks are not of the form l1 U, l U, l2 U (residual " + std::to_string(h.residual) + ")");
    const double red = h.l1 * h.l2 - h.l * h.l;
    h.n1 = red / h.l1;
    h.n2 = red / h.l2;
    return h;
}

QuadraticBounds quadratic_bounds(const ModelSpec& spec, double delta) {
    const TorusGrid grid = spec.grid.n() > 24 ? TorusGrid::build(24) : spec.grid;
    const PointSet& pts = grid.points();
    const std::size_t N = grid.size();
    std::vector<double> row(N), q2(N);
    for (std::size_t j = 0; j < N; ++j) {
        const Vec3 q = pts[j];
        q2[j] = dot(q, q);
    }
    QuadraticBounds b;
    double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0, c3 = c1;
    const double d2 = delta * delta;
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3 p = pts[i];
        const double p2 = dot(p, p);
        spec.u.row(p, 1, pts, row);
        for (std::size_t j = 0; j < N; ++j) {
            const double r2 = p2 + q2[j];
            const double e = row[j] - spec.m;
            if (r2 < d2) {
                c1 = std::min(c1, e / r2);
                c2 = std::max(c2, e / r2);
            } else {
                c3 = std::min(c3, e);
            }
        }
    }
    b.C1 = std::isfinite(c1) ? c1 : 0.0;
    b.C2 = c2;
    b.C3 = std::isfinite(c3) ? c3 : 0.0;
    b.ok = b.C1 > 0.0 && b.C2 > 0.0 && b.C3 > 0.0;
    return b;
}

CndReport check_conditionally_negative_definite(const Dispersion& eps, int sample_count, std::uint64_t seed) {
    if (sample_count < 2) throw Error(ErrorKind::InvalidArgument, "sample_count must be >= 2");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_int_distribution<int> size(2, 6);
    std::normal_distribution<double> gauss;
    CndReport r;
    r.worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < sample_count; ++s) {
        const int k = size(rng);
        std::vector<Vec3> p(k);
        std::vector<std::complex<double>> z(k);
        for (auto& x : p) x = {angle(rng), angle(rng), angle(rng)};
        std::complex<double> mean = 0.0;
        for (auto& w : z) {
            w = {gauss(rng), gauss(rng)};
            mean += w;
        }
        mean /= static_cast<double>(k);
        double nz = 0.0;
        for (auto& w : z) {
            w -= mean;
            nz += std::norm(w);
        }
        if (nz == 0.0) continue;
        double form = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) form += eps(p[i] - p[j]) * std::real(z[i] * std::conj(z[j]));
        form /= nz;
        r.worst = std::max(r.worst, form);
        ++r.samples;
    }
    r.pass = r.worst <= 1e-10;
    return r;
}

} // namespace latspec
