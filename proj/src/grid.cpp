#include "latspec/grid.hpp"

#include <cmath>
#include <string>

namespace latspec {

TorusGrid TorusGrid::build(int n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 2, got " + std::to_string(n));
    TorusGrid g;
    g.n_ = n;
    g.h_ = kTwoPi / n;
    g.weight_ = g.h_ * g.h_ * g.h_;
    g.axis_.resize(n);
    g.mirror_.resize(n);
    const int half = n / 2;
    for (int j = 0; j < n; ++j) g.axis_[j] = (j - half + 0.5) * g.h_;
    // even n: x_j = -x_{n-1-j}; odd n: the top node is pi and x_j = -x_{n-2-j} otherwise
    for (int j = 0; j < n; ++j) {
        if (n % 2 == 0) {
            g.mirror_[j] = n - 1 - j;
        } else {
            g.mirror_[j] = (j == n - 1) ? n - 1 : n - 2 - j;
        }
    }
    std::vector<Vec3> nodes;
    nodes.reserve(g.size());
    for (std::size_t idx = 0; idx < g.size(); ++idx) nodes.push_back(g.node(idx));
    g.points_ = std::make_shared<const PointSet>(nodes);
    return g;
}

std::size_t TorusGrid::reflected(std::size_t idx, unsigned mask) const {
    auto c = unflatten(idx);
    for (int a = 0; a < 3; ++a)
        if (mask & (1u << a)) c[a] = mirror_[c[a]];
    return index(c[0], c[1], c[2]);
}

std::size_t TorusGrid::nearest(const Vec3& q) const {
    const int half = n_ / 2;
    std::array<int, 3> c{};
    for (int a = 0; a < 3; ++a) {
        const double t = wrap_angle(q[a]) / h_ + half - 0.5;
        int j = static_cast<int>(std::lround(t));
        j = ((j % n_) + n_) % n_;
        c[a] = j;
    }
    return index(c[0], c[1], c[2]);
}

} // namespace latspec
