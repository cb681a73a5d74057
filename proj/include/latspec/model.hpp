#pragma once

#include "latspec/common.hpp"
#include "latspec/dispersion.hpp"
#include "latspec/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace latspec {

struct Extrema {
    double m = 0.0;
    double M = 0.0;
    Vec3 argmin_p{}, argmin_q{};
    Vec3 argmax_p{}, argmax_q{};
};

/// Grid min/max of u over node pairs, refined by a local Newton search.
/// The scan uses the given grid, or a 32-point grid when the given one is finer.
Extrema extrema(const PairEnergy& u, const TorusGrid& grid);

/// A full problem instance. Immutable after make_model.
struct ModelSpec {
    TorusGrid grid;
    PairEnergy u;
    FormFactor phi1, phi2;
    double mu1 = 0.0, mu2 = 0.0;
    double m = 0.0, M = 0.0;
    Vec3 argmin_p{}, argmin_q{};
    double delta = 1.0;
    // form factors sampled at the grid nodes
    std::vector<double> phi1_nodes, phi2_nodes;

    const FormFactor& phi(Channel c) const { return c == Channel::One ? phi1 : phi2; }
    const std::vector<double>& phi_nodes(Channel c) const { return c == Channel::One ? phi1_nodes : phi2_nodes; }
    double mu(Channel c) const { return c == Channel::One ? mu1 : mu2; }
};

/// Validates and assembles a ModelSpec. Throws DegenerateModel when m >= M,
/// HypothesisViolation when a form factor breaks its declared parity, and
/// InvalidArgument for negative couplings or delta.
ModelSpec make_model(const TorusGrid& grid, PairEnergy u, FormFactor phi1, FormFactor phi2, double mu1, double mu2,
                     double delta = 1.0);

/// Same instance with other couplings (extrema are reused).
ModelSpec with_couplings(const ModelSpec& spec, double mu1, double mu2);

struct HessianData {
    Eigen::Matrix3d U = Eigen::Matrix3d::Identity();
    double l1 = 0.0, l2 = 0.0, l = 0.0;
    double detU = 1.0;
    // n_a = (l1 l2 - l^2) / l_a, l_a the coefficient of the slot channel a integrates
    double n1 = 0.0, n2 = 0.0;
    double residual = 0.0;
    Eigen::Matrix<double, 6, 6> blocks = Eigen::Matrix<double, 6, 6>::Zero();

    double reduced(Channel c) const { return c == Channel::One ? n1 : n2; }
    double slot_coefficient(Channel c) const { return c == Channel::One ? l1 : l2; }
};

/// Finite-difference Hessian of u at (0,0) factored as (l1, l, l2) x U with det U = 1.
HessianData hessian_at_minimum(const ModelSpec& spec, double step = 1e-3, double tolerance = 1e-6);

struct QuadraticBounds {
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;
    bool ok = false;
};

/// C1 |x|^2 <= u - m <= C2 |x|^2 for node pairs with |x| = |(p,q)| < delta and u - m >= C3 outside.
/// Scans the model grid, capped at 24 points per axis.
QuadraticBounds quadratic_bounds(const ModelSpec& spec, double delta);

struct CndReport {
    bool pass = true;
    double worst = 0.0;
    int samples = 0;
};

/// Random test of sum_ij e(p_i - p_j) z_i conj(z_j) <= 1e-10 on zero-sum z.
CndReport check_conditionally_negative_definite(const Dispersion& eps, int sample_count, std::uint64_t seed);

} // namespace latspec
