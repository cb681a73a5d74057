#pragma once

#include "latspec/common.hpp"

#include <array>
#include <span>
#include <vector>

namespace latspec {

/// Structure-of-arrays point cloud in R^3 with cached half-angle sines and
/// cosines, the layout consumed by the pair-energy row kernels.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::span<const Vec3> points);

    /// Overwrites this set with base + shift, updating the half-angle tables by
    /// angle addition instead of fresh trig calls.
    void assign_shifted(const PointSet& base, const Vec3& shift);

    std::size_t size() const { return x_[0].size(); }
    Vec3 operator[](std::size_t j) const { return {x_[0][j], x_[1][j], x_[2][j]}; }

    const std::vector<double>& coord(int axis) const { return x_[axis]; }
    const std::vector<double>& half_sin(int axis) const { return sh_[axis]; }
    const std::vector<double>& half_cos(int axis) const { return ch_[axis]; }

private:
    std::array<std::vector<double>, 3> x_, sh_, ch_;
};

} // namespace latspec
