#include "latspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace latspec {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be positive");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (x * p0 - p1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

GradedCubeRule::GradedCubeRule(const GradedRuleOptions& opt) {
    const GaussRule ang = gauss_legendre(opt.angular_order);
    const GaussRule rad = gauss_legendre(opt.points_per_panel);

    std::vector<double> base_edges{0.0};
    for (double e = opt.s_min; e < 1.0; e *= opt.panel_ratio) base_edges.push_back(e);
    base_edges.push_back(1.0);

    const double jac = kPi * kPi * kPi;
    for (int axis = 0; axis < 3; ++axis) {
        const int o1 = (axis + 1) % 3;
        const int o2 = (axis + 2) % 3;
        for (double sign : {1.0, -1.0}) {
            for (int ia = 0; ia < opt.angular_order; ++ia) {
                for (int ib = 0; ib < opt.angular_order; ++ib) {
                    const double a = ang.nodes[ia];
                    const double b = ang.nodes[ib];
                    const double wab = ang.weights[ia] * ang.weights[ib];
                    Vec3 dir{};
                    dir[axis] = sign;
                    dir[o1] = a;
                    dir[o2] = b;
                    const double len = norm(dir);

                    std::vector<double> edges = base_edges;
                    if (opt.break_radius) {
                        const Vec3 unit = (1.0 / len) * dir;
                        const double sb = opt.break_radius(unit) / (kPi * len);
                        if (sb > 0.0 && sb < 1.0) {
                            edges.push_back(sb);
                            std::sort(edges.begin(), edges.end());
                            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
                        }
                    }
                    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
                        const double lo = edges[e];
                        const double hi = edges[e + 1];
                        const double half = 0.5 * (hi - lo);
                        const double mid = 0.5 * (hi + lo);
                        for (int ir = 0; ir < opt.points_per_panel; ++ir) {
                            const double s = mid + half * rad.nodes[ir];
                            const double w = half * rad.weights[ir] * wab * jac * s * s;
                            offsets_.push_back((kPi * s) * dir);
                            weights_.push_back(w);
                        }
                    }
                }
            }
        }
    }
}

WeightedPoints GradedCubeRule::centered_at(const Vec3& center) const {
    std::vector<Vec3> pts;
    pts.reserve(offsets_.size());
    for (const Vec3& o : offsets_) pts.push_back(center + o);
    return WeightedPoints{PointSet(pts), weights_};
}

} // namespace latspec
