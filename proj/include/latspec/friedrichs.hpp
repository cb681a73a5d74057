#pragma once

#include "latspec/model.hpp"
#include "latspec/quadrature.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace latspec {

/// How the channel integral over t is discretized. Grid uses the model's
/// TorusGrid (the discretization every matrix in `spectrum` is built on);
/// Graded uses the pyramid rule centered at the channel minimizer and is the
/// accurate choice near threshold.
enum class Quadrature { Grid, Graded };

struct QuadratureChoice {
    Quadrature kind = Quadrature::Grid;
    GradedRuleOptions graded{};
    /// Grid resolution override for Quadrature::Grid (0 keeps the model grid).
    int grid_n = 0;
};

/// Channel integrand at a fixed external momentum p: denominators u_p(t_j)
/// and numerators w_j phi(t_j)^2 on the chosen quadrature.
class ChannelIntegrator {
public:
    ChannelIntegrator(const ModelSpec& spec, Channel channel, const QuadratureChoice& choice = {});

    void prepare(const Vec3& p);
    /// Lambda(p, z). Throws Domain when z exceeds the smallest sampled denominator.
    double lambda(double z) const;
    double min_denominator() const { return min_den_; }
    std::span<const double> denominators() const { return den_; }
    std::span<const double> numerators() const { return num_; }

private:
    const ModelSpec& spec_;
    Channel channel_;
    QuadratureChoice choice_;
    std::optional<TorusGrid> own_grid_;
    PointSet base_;       // graded offsets or grid nodes
    PointSet shifted_;
    std::vector<double> base_w_;
    std::vector<double> grid_num_;
    std::vector<double> num_, den_;
    double min_den_ = 0.0;
    Vec3 p_{};
};

/// Minimizer t of u_p(t) found by Newton from a few seeds; used as the graded-rule center.
Vec3 channel_minimizer(const ModelSpec& spec, Channel channel, const Vec3& p);

struct ChannelRange {
    double m_alpha = 0.0;
    double M_alpha = 0.0;
    Vec3 argmin{};
};

ChannelRange channel_range(const ModelSpec& spec, Channel channel, const Vec3& p);

double lambda_integral(const ModelSpec& spec, Channel channel, const Vec3& p, double z,
                       const QuadratureChoice& choice = {});

double fredholm_det(const ModelSpec& spec, Channel channel, const Vec3& p, double z, double mu,
                    const QuadratureChoice& choice = {});

/// 1 / Lambda(0, m). Throws DegenerateModel when Lambda(0, m) is not finite and positive.
double coupling_threshold(const ModelSpec& spec, Channel channel, const QuadratureChoice& choice = {});

/// Root of Delta(p, .) below m_alpha(p) by bisection to 1e-10, if Delta changes sign.
std::optional<double> channel_eigenvalue(const ModelSpec& spec, Channel channel, const Vec3& p, double mu,
                                         const QuadratureChoice& choice = {});

enum class ThresholdClass { Resonance, ThresholdEigenvalue, Regular };

std::string to_string(ThresholdClass c);

ThresholdClass classify_threshold(const ModelSpec& spec, Channel channel, double mu,
                                  const QuadratureChoice& choice = {}, double rtol = 1e-8, double atol = 1e-12);

/// Integral of (phi / (u_0(t) - m))^2 on grids of the given resolutions.
std::vector<double> resonance_function_norm(const ModelSpec& spec, Channel channel, std::span<const int> ns);

struct ExpansionFit {
    ThresholdClass kind = ThresholdClass::Regular;
    double mu0 = 0.0;
    // Delta(0, m - k) ~ slope sqrt(k) + intercept + linear k + c k^{3/2} on k in [1e-4, 1e-2]
    double slope = 0.0;
    double intercept = 0.0;
    double linear = 0.0;
    double residual = 0.0;
    double predicted_slope = 0.0;
    // |p| in [0.05, 0.3]: c1 |p| <= Delta(p, m) <= c2 |p| (resonance) or Delta(p, m) >= c p^2 (eigenvalue)
    double c1 = 0.0, c2 = 0.0;
    double c_quadratic = 0.0;
    std::vector<double> kappas, deltas;
};

/// Least-squares threshold expansion at the critical coupling of the given quadrature.
/// Throws ExpansionMismatch when the fit residual exceeds 1e-3 of the data scale.
ExpansionFit expansion_fit(const ModelSpec& spec, Channel channel, const QuadratureChoice& choice = {});

/// Same fit (without the residual gate) with Lambda extrapolated over grid resolutions (a + b/n + c/n^2 for three grids, a + b/n for two).
ExpansionFit expansion_fit_richardson(const ModelSpec& spec, Channel channel, std::span<const int> ns);

/// Predicted sqrt coefficient 4 sqrt2 pi^2 mu0 phi(0)^2 / (l_a^{3/2} sqrt(det U)).
double predicted_sqrt_slope(const HessianData& h, Channel channel, double mu0, double phi0);

/// Linear least squares of y on columns of X; returns coefficients and rms residual.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
                                  double* rms = nullptr);

} // namespace latspec
