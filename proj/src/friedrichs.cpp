#include "latspec/friedrichs.hpp"

#include "latspec/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace latspec {
namespace {

int fixed_slot(Channel c) { return c == Channel::One ? 2 : 1; }

double channel_energy(const ModelSpec& spec, Channel c, const Vec3& p, const Vec3& t) {
    return c == Channel::One ? spec.u(t, p) : spec.u(p, t);
}

// Newton polish in R^3 with finite differences; sign = -1 polishes a maximum.
Vec3 polish3(const std::function<double(const Vec3&)>& f, Vec3 x, double sign, double max_step) {
    using V = Eigen::Vector3d;
    double fx = sign * f(x);
    for (int it = 0; it < 60; ++it) {
        V g;
        Eigen::Matrix3d H;
        const double h1 = 1e-5, h2 = 1e-4;
        const double f0 = f(x);
        for (int i = 0; i < 3; ++i) {
            Vec3 a = x, b = x;
            a[i] += h1;
            b[i] -= h1;
            g[i] = (f(a) - f(b)) / (2.0 * h1);
            a = x;
            b = x;
            a[i] += h2;
            b[i] -= h2;
            H(i, i) = (f(a) - 2.0 * f0 + f(b)) / (h2 * h2);
            for (int j = i + 1; j < 3; ++j) {
                Vec3 pp = x, pm = x, mp = x, mm = x;
                pp[i] += h2; pp[j] += h2;
                pm[i] += h2; pm[j] -= h2;
                mp[i] -= h2; mp[j] += h2;
                mm[i] -= h2; mm[j] -= h2;
                H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h2 * h2);
            }
        }
        V step = -H.ldlt().solve(g);
        if (!step.allFinite()) break;
        if (step.norm() > max_step) step *= max_step / step.norm();
        bool moved = false;
        for (int k = 0; k < 8; ++k) {
            const Vec3 y{x[0] + step[0], x[1] + step[1], x[2] + step[2]};
            const double fy = sign * f(y);
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

std::vector<double> log_kappas() {
    std::vector<double> k;
    for (int i = 0; i < 9; ++i) k.push_back(std::pow(10.0, -4.0 + 0.25 * i));
    return k;
}

} // namespace

ChannelIntegrator::ChannelIntegrator(const ModelSpec& spec, Channel channel, const QuadratureChoice& choice)
    : spec_(spec), channel_(channel), choice_(choice) {
    if (choice.kind == Quadrature::Graded) {
        const GradedCubeRule rule(choice.graded);
        base_ = PointSet(rule.offsets());
        base_w_ = rule.weights();
        num_.resize(rule.size());
        den_.resize(rule.size());
        return;
    }
    const bool own = choice.grid_n != 0 && choice.grid_n != spec.grid.n();
    if (own) own_grid_ = TorusGrid::build(choice.grid_n);
    const TorusGrid& g = own ? *own_grid_ : spec.grid;
    grid_num_.resize(g.size());
    const FormFactor& phi = spec.phi(channel);
    const auto& nodes = spec.phi_nodes(channel);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double f = own ? phi(g.node(j)) : nodes[j];
        grid_num_[j] = g.weight() * f * f;
    }
    num_ = grid_num_;
    den_.resize(g.size());
}

void ChannelIntegrator::prepare(const Vec3& p) {
    p_ = p;
    if (choice_.kind == Quadrature::Graded) {
        const Vec3 center = channel_minimizer(spec_, channel_, p);
        shifted_.assign_shifted(base_, center);
        spec_.u.row(p, fixed_slot(channel_), shifted_, den_);
        const FormFactor& phi = spec_.phi(channel_);
        for (std::size_t j = 0; j < den_.size(); ++j) {
            const double f = phi(shifted_[j]);
            num_[j] = base_w_[j] * f * f;
        }
    } else {
        const TorusGrid& g = own_grid_ ? *own_grid_ : spec_.grid;
        spec_.u.row(p, fixed_slot(channel_), g.points(), den_);
    }
    double lo, hi;
    simd::active().min_max(den_.data(), den_.size(), &lo, &hi);
    min_den_ = lo;
}

double ChannelIntegrator::lambda(double z) const {
    if (z > min_den_)
        throw Error(ErrorKind::Domain, "spectral parameter " + std::to_string(z) + " lies above the channel bottom " +
                                           std::to_string(min_den_));
    return simd::reciprocal_sum(num_, den_, z);
}

Vec3 channel_minimizer(const ModelSpec& spec, Channel channel, const Vec3& p) {
    auto f = [&](const Vec3& t) { return channel_energy(spec, channel, p, t); };
    const Vec3 seeds[] = {Vec3{0.0, 0.0, 0.0}, 0.5 * p, -0.5 * p, p, -p};
    Vec3 best = seeds[0];
    double fb = f(best);
    for (const Vec3& s : seeds) {
        const double v = f(s);
        if (v < fb) {
            fb = v;
            best = s;
        }
    }
    return polish3(f, best, 1.0, 0.5);
}

ChannelRange channel_range(const ModelSpec& spec, Channel channel, const Vec3& p) {
    const TorusGrid& g = spec.grid;
    std::vector<double> row(g.size());
    spec.u.row(p, fixed_slot(channel), g.points(), row);
    const auto [lo_it, hi_it] = std::minmax_element(row.begin(), row.end());
    auto f = [&](const Vec3& t) { return channel_energy(spec, channel, p, t); };
    const double cell = 2.0 * g.spacing();
    const Vec3 tmin = polish3(f, g.node(static_cast<std::size_t>(lo_it - row.begin())), 1.0, cell);
    const Vec3 tmax = polish3(f, g.node(static_cast<std::size_t>(hi_it - row.begin())), -1.0, cell);
    const Vec3 tloc = channel_minimizer(spec, channel, p);
    ChannelRange r;
    r.argmin = f(tloc) <= f(tmin) ? tloc : tmin;
    r.m_alpha = std::min(*lo_it, f(r.argmin));
    r.M_alpha = std::max(*hi_it, f(tmax));
    r.argmin = wrap(r.argmin);
    return r;
}

double lambda_integral(const ModelSpec& spec, Channel channel, const Vec3& p, double z, const QuadratureChoice& choice) {
    ChannelIntegrator I(spec, channel, choice);
    I.prepare(p);
    return I.lambda(z);
}

double fredholm_det(const ModelSpec& spec, Channel channel, const Vec3& p, double z, double mu,
                    const QuadratureChoice& choice) {
    if (mu == 0.0) return 1.0;
    return 1.0 - mu * lambda_integral(spec, channel, p, z, choice);
}

double coupling_threshold(const ModelSpec& spec, Channel channel, const QuadratureChoice& choice) {
    const double L = lambda_integral(spec, channel, Vec3{0.0, 0.0, 0.0}, spec.m, choice);
    if (!std::isfinite(L) || !(L > 0.0))
        throw Error(ErrorKind::DegenerateModel, "Lambda(0, m) is not finite and positive");
    return 1.0 / L;
}

std::optional<double> channel_eigenvalue(const ModelSpec& spec, Channel channel, const Vec3& p, double mu,
                                         const QuadratureChoice& choice) {
    if (!(mu > 0.0)) return std::nullopt;
    const ChannelRange range = channel_range(spec, channel, p);
    ChannelIntegrator I(spec, channel, choice);
    I.prepare(p);
    const double top = std::min(range.m_alpha, I.min_denominator());
    auto delta = [&](double z) { return 1.0 - mu * I.lambda(z); };
    if (!(delta(top) < -1e-12)) return std::nullopt;
    double phimax = 0.0;
    for (double v : spec.phi_nodes(channel)) phimax = std::max(phimax, v * v);
    double lo = range.m_alpha - (spec.M - spec.m) - mu * kTorusVolume * std::max(phimax, 1e-300);
    double hi = top;
    // the crude bound can miss for form factors peaked off the grid; widen until positive
    for (int k = 0; k < 60 && delta(lo) <= 0.0; ++k) lo -= 2.0 * (hi - lo);
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (delta(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::string to_string(ThresholdClass c) {
    switch (c) {
    case ThresholdClass::Resonance:
        return "Resonance";
    case ThresholdClass::ThresholdEigenvalue:
        return "ThresholdEigenvalue";
    case ThresholdClass::Regular:
        return "Regular";
    }
    return "?";
}

ThresholdClass classify_threshold(const ModelSpec& spec, Channel channel, double mu, const QuadratureChoice& choice,
                                  double rtol, double atol) {
    const FormFactor& phi = spec.phi(channel);
    const double phi0 = phi.value_at_origin();
    double mu0 = 0.0;
    try {
        mu0 = coupling_threshold(spec, channel, choice);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateModel) throw;
        return ThresholdClass::Regular;
    }
    if (std::abs(mu - mu0) > rtol * mu0) return ThresholdClass::Regular;
    const bool zero = phi.parity() == Parity::Odd || std::abs(phi0) <= atol;
    return zero ? ThresholdClass::ThresholdEigenvalue : ThresholdClass::Resonance;
}

std::vector<double> resonance_function_norm(const ModelSpec& spec, Channel channel, std::span<const int> ns) {
    std::vector<double> out;
    const FormFactor& phi = spec.phi(channel);
    for (int n : ns) {
        const TorusGrid g = TorusGrid::build(n);
        std::vector<double> den(g.size());
        spec.u.row(Vec3{0.0, 0.0, 0.0}, fixed_slot(channel), g.points(), den);
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double f = phi(g.node(j)) / (den[j] - spec.m);
            s += g.weight() * f * f;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
                                  double* rms) {
    const Eigen::Index n = static_cast<Eigen::Index>(y.size());
    const Eigen::Index k = static_cast<Eigen::Index>(columns.size());
    if (n < k || k == 0) throw Error(ErrorKind::InsufficientData, "least squares needs at least as many points as unknowns");
    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd Y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Y[i] = y[i];
        for (Eigen::Index j = 0; j < k; ++j) X(i, j) = columns[j][i];
    }
    const Eigen::VectorXd c = X.colPivHouseholderQr().solve(Y);
    if (rms) *rms = std::sqrt((X * c - Y).squaredNorm() / static_cast<double>(n));
    return {c.data(), c.data() + k};
}

double predicted_sqrt_slope(const HessianData& h, Channel channel, double mu0, double phi0) {
    const double la = h.slot_coefficient(channel);
    return 4.0 * std::sqrt(2.0) * kPi * kPi * mu0 * phi0 * phi0 / (std::pow(la, 1.5) * std::sqrt(h.detU));
}

namespace {

void fit_deltas(ExpansionFit& fit, bool strict) {
    std::vector<double> sq, one, lin, cube;
    for (double k : fit.kappas) {
        sq.push_back(std::sqrt(k));
        one.push_back(1.0);
        lin.push_back(k);
        cube.push_back(k * std::sqrt(k));
    }
    double rms = 0.0;
    const auto c = least_squares({sq, one, lin, cube}, fit.deltas, &rms);
    fit.slope = c[0];
    fit.intercept = c[1];
    fit.linear = c[2];
    fit.residual = rms;
    double scale = 0.0;
    for (double d : fit.deltas) scale = std::max(scale, std::abs(d));
    if (strict && rms > 1e-3 * scale + 1e-12)
        throw Error(ErrorKind::ExpansionMismatch, "threshold expansion fit residual " + std::to_string(rms) +
                                                      " exceeds tolerance");
}

void fill_kind_and_prediction(const ModelSpec& spec, Channel channel, ExpansionFit& fit) {
    const FormFactor& phi = spec.phi(channel);
    const double phi0 = phi.value_at_origin();
    fit.kind = (phi.parity() == Parity::Odd || std::abs(phi0) <= 1e-12) ? ThresholdClass::ThresholdEigenvalue
                                                                         : ThresholdClass::Resonance;
    try {
        const HessianData h = hessian_at_minimum(spec);
        fit.predicted_slope = predicted_sqrt_slope(h, channel, fit.mu0, phi0);
    } catch (const Error&) {
        fit.predicted_slope = std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace

ExpansionFit expansion_fit(const ModelSpec& spec, Channel channel, const QuadratureChoice& choice) {
    ChannelIntegrator I(spec, channel, choice);
    I.prepare(Vec3{0.0, 0.0, 0.0});
    const double L0 = I.lambda(spec.m);
    if (!std::isfinite(L0) || !(L0 > 0.0)) throw Error(ErrorKind::DegenerateModel, "Lambda(0, m) is not finite and positive");
    ExpansionFit fit;
    fit.mu0 = 1.0 / L0;
    fit.kappas = log_kappas();
    for (double k : fit.kappas) fit.deltas.push_back(1.0 - fit.mu0 * I.lambda(spec.m - k));
    fit_deltas(fit, true);
    fill_kind_and_prediction(spec, channel, fit);

    const double inv3 = 1.0 / std::sqrt(3.0), inv2 = 1.0 / std::sqrt(2.0);
    const Vec3 dirs[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {inv3, inv3, inv3}, {inv2, -inv2, 0}};
    double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0, cq = c1;
    for (const Vec3& d : dirs) {
        for (int i = 0; i < 6; ++i) {
            const double r = 0.05 + 0.05 * i;
            I.prepare(r * d);
            const double D = 1.0 - fit.mu0 * I.lambda(spec.m);
            c1 = std::min(c1, D / r);
            c2 = std::max(c2, D / r);
            cq = std::min(cq, D / (r * r));
        }
    }
    fit.c1 = c1;
    fit.c2 = c2;
    fit.c_quadratic = cq;
    return fit;
}

ExpansionFit expansion_fit_richardson(const ModelSpec& spec, Channel channel, std::span<const int> ns) {
    if (ns.size() < 2 || ns.size() > 3) throw Error(ErrorKind::InvalidArgument, "Richardson needs two or three grids");
    ExpansionFit fit;
    fit.kappas = log_kappas();
    const std::size_t K = fit.kappas.size();
    std::vector<std::vector<double>> L(ns.size(), std::vector<double>(K + 1));
    for (std::size_t g = 0; g < ns.size(); ++g) {
        QuadratureChoice q;
        q.grid_n = ns[g];
        ChannelIntegrator I(spec, channel, q);
        I.prepare(Vec3{0.0, 0.0, 0.0});
        L[g][0] = I.lambda(spec.m);
        for (std::size_t i = 0; i < K; ++i) L[g][i + 1] = I.lambda(spec.m - fit.kappas[i]);
    }
    std::vector<std::vector<double>> cols;
    cols.push_back(std::vector<double>(ns.size(), 1.0));
    cols.emplace_back();
    for (int n : ns) cols.back().push_back(1.0 / n);
    if (ns.size() == 3) {
        cols.emplace_back();
        for (int n : ns) cols.back().push_back(1.0 / (double(n) * n));
    }
    std::vector<double> extrap(K + 1);
    for (std::size_t i = 0; i <= K; ++i) {
        std::vector<double> y;
        for (std::size_t g = 0; g < ns.size(); ++g) y.push_back(L[g][i]);
        extrap[i] = least_squares(cols, y)[0];
    }
    fit.mu0 = 1.0 / extrap[0];
    for (std::size_t i = 0; i < K; ++i) fit.deltas.push_back(1.0 - fit.mu0 * extrap[i + 1]);
    // grid data is under-resolved at the small end of the window, so no residual gate here
    fit_deltas(fit, false);
    fill_kind_and_prediction(spec, channel, fit);
    return fit;
}

} // namespace latspec
