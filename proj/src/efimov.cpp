#include "latspec/efimov.hpp"

#include "latspec/friedrichs.hpp"
#include "latspec/linalg.hpp"
#include "latspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace latspec {
namespace {

constexpr int kNodes = 64;

const GaussRule& gl64() {
    static const GaussRule r = gauss_legendre(kNodes);
    return r;
}

// P_l(t_i) for l <= lmax at the 64 Gauss nodes, row-major [l][i]
std::vector<double> legendre_table(int lmax) {
    const GaussRule& g = gl64();
    std::vector<double> P(static_cast<std::size_t>(lmax + 1) * kNodes);
    for (int i = 0; i < kNodes; ++i) {
        const double t = g.nodes[i];
        double p0 = 1.0, p1 = t;
        P[i] = 1.0;
        if (lmax >= 1) P[kNodes + i] = t;
        for (int l = 2; l <= lmax; ++l) {
            const double p2 = ((2.0 * l - 1.0) * t * p1 - (l - 1.0) * p0) / l;
            P[static_cast<std::size_t>(l) * kNodes + i] = p2;
            p0 = p1;
            p1 = p2;
        }
    }
    return P;
}

// sinh(lambda a) / sinh(pi lambda) without overflow
double sinh_ratio(double lambda, double a) {
    if (lambda < 1e-8) return a / kPi;
    return std::exp(lambda * (a - kPi)) * (-std::expm1(-2.0 * lambda * a)) / (-std::expm1(-2.0 * kPi * lambda));
}

// integrand weights w_i g(lambda, t_i) / sin a_i
void sphere_weights(const EfimovParams& p, double lambda, double* out) {
    const GaussRule& g = gl64();
    for (int i = 0; i < kNodes; ++i) {
        const double st = p.s12 * g.nodes[i];
        const double a = std::acos(st);
        out[i] = g.weights[i] * sinh_ratio(lambda, a) / std::sqrt(1.0 - st * st);
    }
}

double mode_from(const EfimovParams& p, const std::vector<double>& P, int l, const double* w) {
    double s = 0.0;
    const double* row = P.data() + static_cast<std::size_t>(l) * kNodes;
    for (int i = 0; i < kNodes; ++i) s += row[i] * w[i];
    return p.u12 * s;
}

} // namespace

EfimovParams efimov_params(double l1, double l2, double l) {
    if (l == 0.0) throw Error(ErrorKind::DegenerateModel, "l = 0: the Efimov kernels vanish");
    const double red = l1 * l2 - l * l;
    if (!(l1 > 0.0) || !(l2 > 0.0) || !(red > 0.0))
        throw Error(ErrorKind::HypothesisViolation, "Efimov parameters need l1, l2 > 0 and l1 l2 > l^2");
    EfimovParams p;
    p.u12 = std::sqrt(l1 * l2 / red);
    p.s12 = l / std::sqrt(l1 * l2);
    p.r12 = 0.5 * std::log(l1 / l2);
    return p;
}

EfimovParams efimov_params(const HessianData& h) { return efimov_params(h.l1, h.l2, h.l); }

double legendre_mode(const EfimovParams& params, int l, double lambda) {
    if (l < 0) throw Error(ErrorKind::InvalidArgument, "Legendre degree must be nonnegative");
    const std::vector<double> P = legendre_table(l);
    double w[kNodes];
    sphere_weights(params, std::abs(lambda), w);
    return mode_from(params, P, l, w);
}

int count_sphere_operator(const EfimovParams& params, double lambda, double mu, int lmax) {
    if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
    const std::vector<double> P = legendre_table(lmax);
    double w[kNodes];
    sphere_weights(params, std::abs(lambda), w);
    int n = 0;
    for (int l = 0; l <= lmax; ++l)
        if (std::abs(mode_from(params, P, l, w)) > mu) n += 2 * l + 1;
    return n;
}

double ucoef(const EfimovParams& params, double mu, const UcoefOptions& opt) {
    if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
    const std::vector<double> P = legendre_table(opt.lmax);
    const int K = static_cast<int>(std::ceil(opt.lambda_max / opt.lambda_step));
    const double step = opt.lambda_max / K;
    std::vector<double> prev(opt.lmax + 1), cur(opt.lmax + 1);
    std::vector<double> measure(opt.lmax + 1, 0.0);
    double w[kNodes];
    auto excess = [&](int l, double lambda) {
        double ww[kNodes];
        sphere_weights(params, lambda, ww);
        return std::abs(mode_from(params, P, l, ww)) - mu;
    };
    sphere_weights(params, 0.0, w);
    for (int l = 0; l <= opt.lmax; ++l) prev[l] = std::abs(mode_from(params, P, l, w)) - mu;
    for (int k = 1; k <= K; ++k) {
        const double a = (k - 1) * step, b = k * step;
        sphere_weights(params, b, w);
        for (int l = 0; l <= opt.lmax; ++l) {
            cur[l] = std::abs(mode_from(params, P, l, w)) - mu;
            const bool pa = prev[l] > 0.0, pb = cur[l] > 0.0;
            if (pa && pb) {
                measure[l] += step;
            } else if (pa != pb) {
                double lo = a, hi = b;
                for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if ((excess(l, mid) > 0.0) == pa)
                        lo = mid;
                    else
                        hi = mid;
                }
                const double x = 0.5 * (lo + hi);
                measure[l] += pa ? x - a : b - x;
            }
        }
        std::swap(prev, cur);
    }
    double total = 0.0;
    for (int l = 0; l <= opt.lmax; ++l) total += (2 * l + 1) * measure[l];
    // the integrand is even in lambda
    return 2.0 * total / (4.0 * kPi);
}

double sobolev_kernel(const EfimovParams& params, int l, double y) {
    const std::vector<double> P = legendre_table(l);
    const GaussRule& g = gl64();
    const double ch = std::cosh(y + params.r12);
    double s = 0.0;
    for (int i = 0; i < kNodes; ++i)
        s += g.weights[i] * P[static_cast<std::size_t>(l) * kNodes + i] / (ch + params.s12 * g.nodes[i]);
    return params.u12 * s / kTwoPi;
}

int sobolev_finite(const EfimovParams& params, double r, double mu, int lmax, double density) {
    if (!(r > 0.0) || !(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "r and mu must be positive");
    const int N = std::max(1, static_cast<int>(std::ceil(density * r)));
    const double h = r / N;
    const std::vector<double> P = legendre_table(lmax);
    const GaussRule& g = gl64();
    const bool symmetric = params.r12 == 0.0;
    std::vector<double> kv(2 * N - 1);
    int total = 0;
    for (int l = 0; l <= lmax; ++l) {
        // kv[d + N - 1] = h k_l(d h), d = i - j
        for (int d = -(N - 1); d <= N - 1; ++d) {
            const double ch = std::cosh(d * h + params.r12);
            double s = 0.0;
            for (int i = 0; i < kNodes; ++i)
                s += g.weights[i] * P[static_cast<std::size_t>(l) * kNodes + i] / (ch + params.s12 * g.nodes[i]);
            kv[d + N - 1] = h * params.u12 * s / kTwoPi;
        }
        // ||K||_2 <= sqrt(||K||_1 ||K||_inf); skip degrees that cannot reach mu
        std::vector<double> pre(2 * N);
        pre[0] = 0.0;
        for (int k = 0; k < 2 * N - 1; ++k) pre[k + 1] = pre[k] + std::abs(kv[k]);
        double rmax = 0.0, cmax = 0.0;
        for (int i = 0; i < N; ++i) {
            // row i: d = i - j for j = 0..N-1, i.e. indices i-N+1 .. i shifted by N-1
            rmax = std::max(rmax, pre[i + N] - pre[i]);
            // column j = i: d = k - i, indices N-1-i .. 2N-2-i
            cmax = std::max(cmax, pre[2 * N - 1 - i] - pre[N - 1 - i]);
        }
        if (std::sqrt(rmax * cmax) <= mu) continue;
        Eigen::MatrixXd K(N, N);
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) K(i, j) = kv[i - j + N - 1];
        int c;
        if (symmetric) {
            Eigen::MatrixXd neg = -K;
            c = count_above_inplace(K, mu) + count_above_inplace(neg, mu);
        } else {
            c = count_singular_above(K, mu);
        }
        total += (2 * l + 1) * c;
    }
    return total;
}

SlopeFit asymptotic_slope(const CountReport& report) {
    std::vector<double> x, one, y;
    for (const CountRow& r : report.rows) {
        if (!r.trusted) continue;
        x.push_back(std::abs(std::log(r.m_minus_z)));
        one.push_back(1.0);
        y.push_back(static_cast<double>(r.count));
    }
    if (x.size() < 4)
        throw Error(ErrorKind::InsufficientData,
                    "asymptotic slope needs at least 4 trusted points, got " + std::to_string(x.size()));
    SlopeFit f;
    const auto c = least_squares({one, x}, y, &f.residual);
    f.intercept = c[0];
    f.slope = c[1];
    f.points = static_cast<int>(x.size());
    return f;
}

std::vector<ModeRow> mode_table(const EfimovParams& params, int lmax, double lambda_max, double lambda_step) {
    const std::vector<double> P = legendre_table(lmax);
    std::vector<ModeRow> out;
    double w[kNodes];
    const int K = static_cast<int>(std::ceil(lambda_max / lambda_step));
    for (int k = 0; k <= K; ++k) {
        const double lambda = std::min(lambda_max, k * lambda_step);
        sphere_weights(params, lambda, w);
        for (int l = 0; l <= lmax; ++l) out.push_back({l, lambda, mode_from(params, P, l, w)});
    }
    return out;
}

} // namespace latspec

namespace latspec {

int count_sphere_nystrom(const EfimovParams& params, double lambda, double mu, int n_theta, int n_phi) {
    if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
    const GaussRule g = gauss_legendre(n_theta);
    const int N = n_theta * n_phi;
    std::vector<Vec3> x(N);
    std::vector<double> sw(N);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j) {
            const double ct = g.nodes[i], st = std::sqrt(1.0 - ct * ct);
            const double ph = kTwoPi * j / n_phi;
            x[i * n_phi + j] = {st * std::cos(ph), st * std::sin(ph), ct};
            sw[i * n_phi + j] = std::sqrt(g.weights[i] * kTwoPi / n_phi);
        }
    // Funk-Hecke: the zonal kernel K(t) = u12 g(t) / 2 pi has eigenvalue 2 pi int K P_l = s_l
    const double lam = std::abs(lambda);
    Eigen::MatrixXd B(N, N);
    for (int b = 0; b < N; ++b)
        for (int a = 0; a < N; ++a) {
            const double t = std::clamp(dot(x[a], x[b]), -1.0, 1.0);
            const double st = params.s12 * t;
            const double ang = std::acos(st);
            B(a, b) = sw[a] * sw[b] * params.u12 * sinh_ratio(lam, ang) / (std::sqrt(1.0 - st * st) * kTwoPi);
        }
    // the block operator [[0, B], [B, 0]] has eigenvalues +-eig(B)
    Eigen::MatrixXd neg = -B;
    return count_above_inplace(B, mu) + count_above_inplace(neg, mu);
}

} // namespace latspec
