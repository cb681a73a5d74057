#pragma once

#include "latspec/friedrichs.hpp"
#include "latspec/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace latspec {

/// Delta_a(p, z) = 1 - mu_a Lambda_a(p, z) at every grid node, grid quadrature.
struct NodeDeterminants {
    double z = 0.0;
    std::vector<double> d1, d2;
    double min = 1.0;
};

/// One entry per z. Throws InvalidZ when some value is not positive.
std::vector<NodeDeterminants> node_determinants(const ModelSpec& spec, std::span<const double> zs);
NodeDeterminants node_determinants(const ModelSpec& spec, double z);

/// Cross block A(q, p) of T(z): rows are channel-1 nodes q, columns channel-2 nodes p,
/// entries w sqrt(mu1 mu2) phi2(q) phi1(p) / (sqrt(D1(q) D2(p)) (u(p, q) - z)).
Eigen::MatrixXd assemble_bs_block(const ModelSpec& spec, const NodeDeterminants& det);

/// Full symmetric Nystrom matrix [[0, A], [A^T, 0]] of size 2 n^3.
Eigen::MatrixXd assemble_bs_matrix(const ModelSpec& spec, double z);

enum class CountMethod { Auto, Dense, Sectors };

/// True when the reflection-sector decomposition applies (even n, reflection
/// symmetric u, form factors with known per-axis parity).
bool sectors_available(const ModelSpec& spec);

/// n(1, T(z)) on the model grid. Auto uses sectors when available.
int count_eigenvalues_below(const ModelSpec& spec, double z, CountMethod method = CountMethod::Auto);
int count_eigenvalues_below(const ModelSpec& spec, const NodeDeterminants& det, CountMethod method = CountMethod::Auto);

/// Largest direct Hamiltonian accepted (n^6 <= 50000) and its memory budget in bytes.
inline constexpr std::size_t kDirectSizeCap = 50000;
inline constexpr std::size_t kDirectMemoryBudget = std::size_t(3) << 30;

/// H = diag u(p_i, q_j) - mu1 (w phi1 phi1^T) x I - mu2 I x (w phi2 phi2^T), index p * n^3 + q.
/// Throws Resource beyond the size cap or the memory budget.
Eigen::MatrixXd assemble_direct_hamiltonian(const ModelSpec& spec);

/// Eigenvalues of the direct Hamiltonian strictly below z (inertia count).
int direct_count_below(const ModelSpec& spec, double z);

/// max |(I - mu_a Phi_a R0(z) Phi_a^*) - diag Delta_a| over both channels, with Phi_a
/// assembled as explicit sparse matrices.
double finite_dim_bs_identity_check(const ModelSpec& spec, double z);

struct BranchPoint {
    std::size_t node = 0;
    Vec3 p{};
    double z = 0.0;
    double m_alpha = 0.0;
};

struct EssentialSpectrumReport {
    double band_lo = 0.0, band_hi = 0.0;
    std::vector<BranchPoint> branches1, branches2;
    double union_lower_edge = 0.0;
};

EssentialSpectrumReport essential_spectrum(const ModelSpec& spec);

struct HsValues {
    double hs_norm = 0.0;
    double hs_diff = 0.0;
};

/// Frobenius norms of T(z) and T(z) - T_model(delta; m - z) on the grid.
HsValues hs_diagnostics(const ModelSpec& spec, const NodeDeterminants& det, double delta, const HessianData& h);

/// Model kernel of the cross block near the threshold, zero outside the U-ellipsoid of radius delta.
double model_kernel(const HessianData& h, double sign, double delta, const Vec3& q, const Vec3& p, double kappa);

struct CountRow {
    double m_minus_z = 0.0;
    double z = 0.0;
    int count = 0;
    double det_min = 0.0;
    double hs_norm = 0.0;
    double hs_diff = 0.0;
    bool trusted = false;
};

struct CountReport {
    int n = 0;
    double m = 0.0;
    double delta = 1.0;
    double mu1 = 0.0, mu2 = 0.0;
    std::string method;
    std::vector<CountRow> rows;
};

/// Continuum version of hs_diagnostics: product graded rule in (q, p) around the
/// threshold point, Delta from graded channel integrals. The couplings of spec
/// are used as given (set them to the graded critical values for the model comparison).
struct ContinuumHsOptions {
    GradedRuleOptions outer{4, 4, 4.0, 1e-6, {}};
    GradedRuleOptions inner{};
};

struct ContinuumHsRow {
    double m_minus_z = 0.0;
    double hs_norm_sq = 0.0;
    double hs_diff = 0.0;
    double det_min = 0.0;
};

std::vector<ContinuumHsRow> hs_continuum_sweep(const ModelSpec& spec, std::span<const double> distances, double delta,
                                               const HessianData& h, const ContinuumHsOptions& options = {});

/// m - z >= (2 pi / n)^2 / 10.
bool trusted_distance(int n, double m_minus_z);

/// Counts and diagnostics at z = m - d for each distance d (any order; rows keep it).
CountReport count_sweep(const ModelSpec& spec, std::span<const double> distances, double delta, bool with_hs = true);

} // namespace latspec
