#pragma once

#include "latspec/common.hpp"
#include "latspec/points.hpp"

#include <functional>
#include <vector>

namespace latspec {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

/// Points with weights, ready for sum_j w_j f(x_j).
struct WeightedPoints {
    PointSet points;
    std::vector<double> weights;
    std::size_t size() const { return weights.size(); }
};

/// Options for the graded torus rule. The cube of side 2 pi around the center
/// is split into six pyramids with apex at the center; each is parameterized by
/// a radial fraction s in [0, 1] and two face coordinates in [-1, 1]. Face
/// coordinates use Gauss-Legendre; along each ray s is split into geometric
/// panels that accumulate at the apex, with Gauss-Legendre per panel.
struct GradedRuleOptions {
    int angular_order = 8;
    int points_per_panel = 6;
    double panel_ratio = 4.0;
    double s_min = 1e-7;
    /// Optional per-ray radius (given the unit direction) at which a panel
    /// boundary is forced; used to resolve discontinuous cutoffs.
    std::function<double(const Vec3&)> break_radius;
};

/// Offsets and weights of the graded rule, independent of the center.
class GradedCubeRule {
public:
    explicit GradedCubeRule(const GradedRuleOptions& options = {});

    std::size_t size() const { return offsets_.size(); }
    const std::vector<Vec3>& offsets() const { return offsets_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Rule translated to the given center; integrates periodic functions over the torus.
    WeightedPoints centered_at(const Vec3& center) const;

private:
    std::vector<Vec3> offsets_;
    std::vector<double> weights_;
};

} // namespace latspec
