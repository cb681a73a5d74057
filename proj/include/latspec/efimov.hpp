#pragma once

#include "latspec/model.hpp"
#include "latspec/spectrum.hpp"

#include <vector>

namespace latspec {

struct EfimovParams {
    double u12 = 0.0;
    double r12 = 0.0;
    double s12 = 0.0;
};

/// u12 = sqrt(l1 l2 / (l1 l2 - l^2)), s12 = l / sqrt(l1 l2), r12 = log(l1 / l2) / 2.
/// Throws DegenerateModel when l == 0 and HypothesisViolation when l1 l2 - l^2 <= 0.
EfimovParams efimov_params(const HessianData& h);
EfimovParams efimov_params(double l1, double l2, double l);

/// Degree-l eigenvalue of the cross block of the sphere operator at frequency lambda:
///   u12 int_{-1}^{1} P_l(t) sinh(lambda a) / (sin a sinh(pi lambda)) dt,  a = arccos(s12 t),
/// with the lambda -> 0 limit a / pi. The phase exp(i r12 lambda) is dropped.
double legendre_mode(const EfimovParams& params, int l, double lambda);

/// n(mu, S^(lambda)) = sum_l (2l + 1) [|s_l(lambda)| > mu], l <= lmax.
int count_sphere_operator(const EfimovParams& params, double lambda, double mu, int lmax = 40);

struct UcoefOptions {
    int lmax = 40;
    double lambda_max = 50.0;
    double lambda_step = 0.01;
};

/// U(mu) = (4 pi)^{-1} int n(mu, S^(lambda)) d lambda. Each level set |s_l| > mu is
/// measured exactly up to bisection of its end points.
double ucoef(const EfimovParams& params, double mu, const UcoefOptions& options = {});

/// 1D kernel of degree l: (u12 / 2 pi) int P_l(t) / (cosh(y + r12) + s12 t) dt.
double sobolev_kernel(const EfimovParams& params, int l, double y);

/// n(mu, S_r) by a midpoint Nystrom rule with ceil(density r) nodes on (0, r).
int sobolev_finite(const EfimovParams& params, double r, double mu, int lmax = 40, double density = 8.0);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    int points = 0;
};

/// Least-squares N(z) = a + b |log(m - z)| over trusted rows. Needs at least 4.
SlopeFit asymptotic_slope(const CountReport& report);

struct ModeRow {
    int l = 0;
    double lambda = 0.0;
    double value = 0.0;
};

std::vector<ModeRow> mode_table(const EfimovParams& params, int lmax, double lambda_max, double lambda_step);

} // namespace latspec

namespace latspec {

/// Count from a direct Nystrom discretization of the sphere operator on a product mesh
/// (Gauss-Legendre in cos theta times uniform azimuth). Independent of the Legendre route.
int count_sphere_nystrom(const EfimovParams& params, double lambda, double mu, int n_theta = 16, int n_phi = 32);

} // namespace latspec
