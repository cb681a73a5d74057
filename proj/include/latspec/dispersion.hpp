#pragma once

#include "latspec/common.hpp"
#include "latspec/points.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace latspec {

/// 3 - cos q1 - cos q2 - cos q3, evaluated as 2 sum sin^2(q_i/2).
double builtin_epsilon(const Vec3& q);

/// One-particle dispersion on the torus.
class Dispersion {
public:
    enum class Kind { Builtin, Tabulated, Custom };

    /// sum_i w_i (1 - cos q_i); w = (1,1,1) is the builtin epsilon.
    static Dispersion builtin(const Vec3& axis_weights = {1.0, 1.0, 1.0});
    /// Values on the nodes of TorusGrid::build(n) (flat index order), periodic trilinear interpolation.
    static Dispersion tabulated(int n, std::vector<double> values);
    /// CSV with header q1,q2,q3,value; rows must cover a full shifted grid.
    static Dispersion from_csv(const std::string& path);
    static Dispersion custom(std::function<double(const Vec3&)> f, std::string label = "custom");

    Kind kind() const { return kind_; }
    const Vec3& axis_weights() const { return weights_; }
    const std::string& label() const { return label_; }
    /// Points per axis of the table (0 unless tabulated).
    int table_size() const { return n_; }
    double operator()(const Vec3& q) const;

private:
    Kind kind_ = Kind::Builtin;
    Vec3 weights_{1.0, 1.0, 1.0};
    std::string label_ = "builtin";
    int n_ = 0;
    std::shared_ptr<const std::vector<double>> table_;
    std::function<double(const Vec3&)> fn_;
};

/// Pair energy u(p, q). The sum form is cp e(p) + cpq e(p - q) + cq e(q).
class PairEnergy {
public:
    static PairEnergy sum(Dispersion eps, const Vec3& coefficients = {1.0, 1.0, 1.0});
    static PairEnergy custom(std::function<double(const Vec3&, const Vec3&)> f, std::string label = "custom");

    double operator()(const Vec3& p, const Vec3& q) const;

    /// u(fixed, y_j) when slot == 1 is held fixed, u(y_j, fixed) when slot == 2.
    void row(const Vec3& fixed, int fixed_slot, const PointSet& ys, std::span<double> out) const;

    /// True when u(Rp, Rq) = u(p, q) for every per-axis reflection R (enables sector counting).
    bool reflection_symmetric() const;
    /// True when u(p, q) = u(q, p).
    bool swap_symmetric() const;

    bool is_sum() const { return sum_; }
    const Dispersion& dispersion() const { return eps_; }
    const Vec3& coefficients() const { return coef_; }
    const std::string& label() const { return label_; }

private:
    bool sum_ = true;
    Dispersion eps_;
    Vec3 coef_{1.0, 1.0, 1.0};
    std::function<double(const Vec3&, const Vec3&)> fn_;
    std::string label_;
};

enum class Parity { Even, Odd };

/// Form factor phi of one channel. Axis parity records phi(R_a q) = s_a phi(q)
/// for the reflection R_a of axis a, when known.
class FormFactor {
public:
    static FormFactor constant(double value);
    static FormFactor sine(int axis, double amplitude = 1.0);
    static FormFactor cosine(int axis, double amplitude = 1.0);
    static FormFactor custom(std::function<double(const Vec3&)> f, Parity parity, std::string label = "custom");

    double operator()(const Vec3& q) const { return fn_(q); }
    Parity parity() const { return parity_; }
    bool has_axis_parity() const { return has_axis_parity_; }
    const std::array<int, 3>& axis_parity() const { return axis_parity_; }
    double value_at_origin() const { return parity_ == Parity::Odd ? 0.0 : fn_(Vec3{0.0, 0.0, 0.0}); }
    const std::string& label() const { return label_; }

    /// max |phi(-q) -+ phi(q)| over the points, using the declared parity.
    double parity_violation(const PointSet& pts) const;

private:
    std::function<double(const Vec3&)> fn_;
    Parity parity_ = Parity::Even;
    bool has_axis_parity_ = false;
    std::array<int, 3> axis_parity_{1, 1, 1};
    std::string label_;
};

} // namespace latspec
