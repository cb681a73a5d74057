#pragma once

#include "latspec/common.hpp"
#include "latspec/points.hpp"

#include <memory>
#include <vector>

namespace latspec {

/// Uniform product quadrature on (-pi, pi]^3 with n points per axis.
///
/// Axis nodes sit at (j + 1/2) h, h = 2 pi / n, wrapped into (-pi, pi]. The
/// origin is never a node and the node set is closed under q -> -q. For even n
/// the mesh is the half-cell-shifted grid; for odd n it contains pi.
/// Every node carries the same weight h^3. Flat index: (i * n + j) * n + k.
class TorusGrid {
public:
    /// Throws Error(InvalidArgument) when n < 2.
    static TorusGrid build(int n);

    int n() const { return n_; }
    double spacing() const { return h_; }
    double weight() const { return weight_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    double total_weight() const { return weight_ * static_cast<double>(size()); }

    double axis_coordinate(int j) const { return axis_[j]; }
    const std::vector<double>& axis() const { return axis_; }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }
    std::array<int, 3> unflatten(std::size_t idx) const {
        const int k = static_cast<int>(idx % n_);
        const int j = static_cast<int>((idx / n_) % n_);
        const int i = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
        return {i, j, k};
    }
    Vec3 node(std::size_t idx) const {
        const auto [i, j, k] = unflatten(idx);
        return {axis_[i], axis_[j], axis_[k]};
    }

    /// Axis index of -x_j.
    int mirror(int j) const { return mirror_[j]; }
    /// Node index of the point reflected in the given axes (bit a of mask flips axis a).
    std::size_t reflected(std::size_t idx, unsigned mask) const;
    std::size_t negated(std::size_t idx) const { return reflected(idx, 7u); }

    /// Nearest node index to an arbitrary point (periodic).
    std::size_t nearest(const Vec3& q) const;

    const PointSet& points() const { return *points_; }

private:
    int n_ = 0;
    double h_ = 0.0;
    double weight_ = 0.0;
    std::vector<double> axis_;
    std::vector<int> mirror_;
    std::shared_ptr<const PointSet> points_;
};

} // namespace latspec
