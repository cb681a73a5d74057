#include "latspec/points.hpp"

#include <cmath>

namespace latspec {

PointSet::PointSet(std::span<const Vec3> points) {
    for (int a = 0; a < 3; ++a) {
        x_[a].resize(points.size());
        sh_[a].resize(points.size());
        ch_[a].resize(points.size());
    }
    for (std::size_t j = 0; j < points.size(); ++j) {
        for (int a = 0; a < 3; ++a) {
            const double x = points[j][a];
            x_[a][j] = x;
            sh_[a][j] = std::sin(0.5 * x);
            ch_[a][j] = std::cos(0.5 * x);
        }
    }
}

void PointSet::assign_shifted(const PointSet& base, const Vec3& shift) {
    const std::size_t n = base.size();
    for (int a = 0; a < 3; ++a) {
        x_[a].resize(n);
        sh_[a].resize(n);
        ch_[a].resize(n);
        const double s = std::sin(0.5 * shift[a]);
        const double c = std::cos(0.5 * shift[a]);
        const double* bx = base.x_[a].data();
        const double* bs = base.sh_[a].data();
        const double* bc = base.ch_[a].data();
        for (std::size_t j = 0; j < n; ++j) {
            x_[a][j] = bx[j] + shift[a];
            sh_[a][j] = bs[j] * c + bc[j] * s;
            ch_[a][j] = bc[j] * c - bs[j] * s;
        }
    }
}

} // namespace latspec
