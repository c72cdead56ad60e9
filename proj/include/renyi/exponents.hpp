#pragma once

#include "renyi/divergences.hpp"
#include "renyi/operator_core.hpp"

#include <optional>
#include <vector>

namespace renyi {

/// Value and maximizer of a one-dimensional Legendre-type optimization.
struct LegendrePoint {
    double value;
    double alpha_star;
};

/// phi(c) = max_{alpha in [0,1]} { c (alpha - 1) - psi(alpha) }.
LegendrePoint legendre_phi(const PsiProfile& profile, double c);

/// phi_plus(c) = max_{alpha in [0,1]} { c alpha - psi(alpha) } = phi(c) + c.
LegendrePoint legendre_phi_plus(const PsiProfile& profile, double c);

/// One sample of the Hoeffding trade-off curve.
struct HoeffdingPoint {
    enum class Boundary {
        Interior,            // maximizer u* in (-inf, 0)
        TowardZero,          // r >= D(rho||sigma), H = 0 as u -> 0-
        TowardMinusInfinity, // r = D0, attained in the u -> -inf limit
        Infinite,            // r < D0, H = +inf
    };

    double r;
    double H;
    Boundary boundary;
    std::optional<double> u_star;
    double c_r;  // r - H; phi(c_r) = H_r and phi_plus(c_r) = r for r >= D0
};

/// H_r = sup_{u < 0} { u r - psi~(u) }, the optimal type-I exponent at
/// type-II exponent target r. Concave inner objective; bracketed by
/// geometric expansion from u = -1, then golden section.
HoeffdingPoint hoeffding(const PsiProfile& profile, double r);

struct ChernoffResult {
    double value;       // -min_{alpha in [0,1]} psi(alpha)
    double alpha_star;  // minimizing alpha
};

ChernoffResult chernoff(const PsiProfile& profile);

enum class RegMethod { HoeffdingRoot, SalzmannDatta, Both };

std::string reg_method_name(RegMethod m);

/// Regularized test-measured Renyi divergence for alpha in (0, 1).
struct RegularizedResult {
    double alpha;
    double value;
    RegMethod method;
    std::optional<double> r_alpha;   // crossing of H_r with ((1-alpha)/alpha) r
    std::optional<double> residual;  // |method values| difference when Both
};

/// Two independent single-letter characterizations:
///  - hoeffding-root: the unique r with H_r = ((1-alpha)/alpha) r, located by
///    bisection on [D0, D_alpha] after deciding the D0 boundary regime
///    analytically;
///  - salzmann-datta: alpha * sup_{t in (0,1)} (t-1) D_t / (t (2 alpha - 1) - alpha),
///    on a 1024-point grid with golden-section refinement.
RegularizedResult regularized_test(const PsiProfile& profile, double alpha,
                                   RegMethod method = RegMethod::Both);
RegularizedResult regularized_test(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   double alpha, RegMethod method = RegMethod::Both);
RegularizedResult regularized_test(const ClassicalState& p, const ClassicalState& q,
                                   double alpha, RegMethod method = RegMethod::Both);

/// Result of the n-copy Hoeffding threshold test: the spectral projection of
/// rho^(x)n - e^{n (r + psi(alpha)) / alpha} sigma^(x)n onto its positive part,
/// together with both error probabilities and their guaranteed bounds.
struct HoeffdingTestResult {
    int n;
    double threshold_log;      // n (r + psi(alpha)) / alpha
    double sigma_error;        // Tr sigma^(x)n T
    double rho_error;          // Tr rho^(x)n (I - T)
    double sigma_error_bound;  // e^{-n r}
    double rho_error_bound;    // e^{-n ((alpha-1)/alpha) (r - D_alpha)}
};

struct ClassicalHoeffdingTest : HoeffdingTestResult {
    PairedTypes types;
    std::vector<bool> included;  // per type class
};

struct QuantumHoeffdingTest : HoeffdingTestResult {
    Test test;
};

ClassicalHoeffdingTest hoeffding_test(const ClassicalState& p, const ClassicalState& q,
                                      int n, double r, double alpha,
                                      std::size_t max_types = 1000000);

/// Dense route; requires dim^n <= 4096.
QuantumHoeffdingTest hoeffding_test(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    int n, double r, double alpha);

/// (1/n) log min over tests of Tr rho^(x)n (I - T) + e^{n b} Tr sigma^(x)n T.
/// The minimum is attained by the projection onto the positive part of
/// rho^(x)n - e^{n b} sigma^(x)n; converges to -phi(b).
double nagaoka_objective(const ClassicalState& p, const ClassicalState& q, int n, double b,
                         std::size_t max_types = 1000000);
double nagaoka_objective(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                         double b);

/// -(1/n) log min over tests of (Tr rho^(x)n (I-T))^{alpha/(1-alpha)} + Tr sigma^(x)n T,
/// minimized over likelihood-ratio threshold tests with one fractional atom.
/// The sequence in n converges to the regularized test-measured value.
double salzmann_datta_finite_n(const ClassicalState& p, const ClassicalState& q,
                               double alpha, int n, std::size_t max_types = 1000000);

}  // namespace renyi
