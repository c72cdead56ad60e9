#pragma once

#include "renyi/operator_core.hpp"

#include <optional>
#include <string>

namespace renyi {

enum class Family {
    Standard,
    Sandwiched,
    Measured,
    Test,
    RelativeEntropy,
    D0,
    Dmax,
    Chernoff,
    RegularizedTest,
};

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// Extended-real divergence value; +infinity is a legitimate value, not an
/// error.
struct DivergenceValue {
    double value;
    Family family;
    std::optional<double> alpha;

    bool is_infinite() const;
};

/// Precomputed spectral data of a pair (rho, sigma): the positive
/// eigenvalues of both states and the overlap weights W_ij = |<u_i, v_j>|^2
/// restricted to positive-eigenvalue indices. One eigendecomposition per
/// state serves psi(alpha), psi'(alpha), psi~(u) and every divergence
/// family built on them.
class PsiProfile {
public:
    static PsiProfile from_states(const DensityMatrix& rho, const DensityMatrix& sigma);
    static PsiProfile from_classical(const ClassicalState& p, const ClassicalState& q);

    /// Tr(rho sigma) <= 1e-14; every divergence of the pair is +infinity.
    bool orthogonal() const { return orthogonal_; }
    bool supp_rho_le_sigma() const { return supp_rho_le_sigma_; }
    bool supp_sigma_le_rho() const { return supp_sigma_le_rho_; }
    /// psi is affine on [0, 1] (chord gap below 1e-9 on a 64-point grid);
    /// equivalently the ratio r_i / s_j is a single constant on the overlap.
    bool psi_affine() const { return psi_affine_; }
    /// The common overlap ratio exp(psi(1) - psi(0)); meaningful when
    /// psi_affine() holds.
    double kappa() const { return kappa_; }

    /// psi(alpha) = log sum_ij r_i^alpha s_j^(1-alpha) W_ij, via log-sum-exp.
    double psi(double alpha) const;
    double psi_prime(double alpha) const;
    /// psi~(u) = (1 - u) psi(1 / (1 - u)), the Hoeffding dual coordinate.
    double psi_tilde(double u) const;

    double d_zero() const { return -psi(0.0); }
    /// Umegaki relative entropy; +infinity unless supp rho <= supp sigma.
    double relative_entropy() const;
    /// Standard (Petz) Renyi divergence with the support conventions.
    double standard_renyi(double alpha) const;

    int term_count() const { return static_cast<int>(base_.size()); }

private:
    PsiProfile() = default;
    void finalize();

    // Term k covers one (i, j) pair with positive weight:
    //   psi(alpha) = LSE_k(base_k + alpha * slope_k),
    // where base = log s_j + log W_ij and slope = log r_i - log s_j.
    std::vector<double> base_;
    std::vector<double> slope_;
    bool orthogonal_ = false;
    bool supp_rho_le_sigma_ = false;
    bool supp_sigma_le_rho_ = false;
    bool psi_affine_ = false;
    double kappa_ = 0.0;
};

PsiProfile build_psi(const DensityMatrix& rho, const DensityMatrix& sigma);
PsiProfile build_psi(const ClassicalState& p, const ClassicalState& q);

DivergenceValue standard_renyi(const DensityMatrix& rho, const DensityMatrix& sigma,
                               double alpha);
DivergenceValue standard_renyi(const ClassicalState& p, const ClassicalState& q, double alpha);

/// Computed independently of the psi profile, via the mat_power chain
/// (rho^(1/2) sigma^((1-alpha)/alpha) rho^(1/2))^alpha.
DivergenceValue sandwiched_renyi(const DensityMatrix& rho, const DensityMatrix& sigma,
                                 double alpha);
DivergenceValue sandwiched_renyi(const ClassicalState& p, const ClassicalState& q,
                                 double alpha);

DivergenceValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
DivergenceValue relative_entropy(const ClassicalState& p, const ClassicalState& q);
DivergenceValue d_zero(const DensityMatrix& rho, const DensityMatrix& sigma);
DivergenceValue d_zero(const ClassicalState& p, const ClassicalState& q);
DivergenceValue d_max(const DensityMatrix& rho, const DensityMatrix& sigma);
DivergenceValue d_max(const ClassicalState& p, const ClassicalState& q);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity(const ClassicalState& p, const ClassicalState& q);

/// Closed forms for a pair of pure states with squared overlap c in (0, 1).
/// The test/measured value is -log c for alpha <= 1/2 and
/// (alpha / (alpha - 1)) log c for alpha >= 1/2; the branches agree at 1/2.
struct PureStatePanel {
    double standard;
    double sandwiched;
    double test_measured;
};

PureStatePanel pure_state_panel(double overlap_sq, double alpha);

/// Classical Renyi divergence of two finite distributions given as raw
/// (non-negative, not necessarily normalized in [0,1]-clamped form) mass
/// vectors. alpha = 1 gives the relative entropy.
double classical_renyi(const RealVector& p, const RealVector& q, double alpha);

/// Binary classical Renyi divergence of (a, 1-a) vs (b, 1-b).
double binary_renyi(double a, double b, double alpha);

/// Binary classical Renyi divergence from log-domain masses:
/// the two outcomes have log-masses (log_a1, log_a2) under the first
/// distribution and (log_b1, log_b2) under the second.
double binary_renyi_log(double log_a1, double log_a2, double log_b1, double log_b2,
                        double alpha);

/// Numerically stable log(e^x + e^y).
double log_add_exp(double x, double y);

}  // namespace renyi
