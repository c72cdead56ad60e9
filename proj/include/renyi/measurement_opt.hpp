#pragma once

#include "renyi/divergences.hpp"
#include "renyi/exponents.hpp"
#include "renyi/operator_core.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace renyi {

/// Outcome of a 2-outcome measurement optimization.
struct TestOptimum {
    double value;
    Test optimizer;
    int rank;           // rank of the optimizing projection
    int restarts_used;
    bool certified;     // true when found by exhaustive subset enumeration
};

/// max over tests of the binary Renyi divergence of the post-measurement
/// pairs. For |Omega| <= 20 every subset is enumerated (certified); beyond
/// that only likelihood-ratio threshold sets are searched.
TestOptimum test_divergence_classical(const ClassicalState& p, const ClassicalState& q,
                                      double alpha);

/// Heuristic maximization over projections of all ranks: Neyman-Pearson
/// spectral-projection seeds plus diagonal threshold masks plus random
/// restarts, refined by coordinate-wise golden-section ascent on a
/// skew-Hermitian exponential parametrization. Results carry
/// certified = false.
TestOptimum test_divergence_quantum(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    double alpha, int restarts = 8,
                                    std::uint64_t seed = 42, int max_dim = 8);

struct MeasuredOptimum {
    double value;
    Matrix basis;  // measurement basis, columns are the rank-1 projectors
    int restarts_used;
};

/// max over orthonormal-basis measurements of the classical Renyi divergence
/// of the outcome distributions. alpha = 1 optimizes the relative entropy.
MeasuredOptimum measured_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    double alpha, int restarts = 8,
                                    std::uint64_t seed = 42, int max_dim = 8);

struct NCopyRow {
    int n;
    double dtest_per_copy;  // (1/n) D^test(p^(x)n || q^(x)n)
    double gap_to_dalpha;
    bool certified;
};

/// Per-copy test-measured values over Omega^n. Candidate tests are unions of
/// likelihood-ratio-sorted type classes, evaluated in log-domain; instances
/// with |Omega|^n <= 20 are certified by full subset enumeration.
std::vector<NCopyRow> ncopy_table_classical(const ClassicalState& p, const ClassicalState& q,
                                            double alpha, int n_max,
                                            std::size_t max_types = 1000000);

/// Threshold-prefix maximum and exhaustive-subset maximum for Omega^n,
/// both evaluated by the same subset-evaluation routine so that agreement
/// can be checked exactly. Requires |Omega|^n <= 20.
struct ThresholdAudit {
    double threshold_value;
    double exhaustive_value;
};

ThresholdAudit audit_threshold_optimality(const ClassicalState& p, const ClassicalState& q,
                                          double alpha, int n);

/// Decision of the exact classical equality regimes.
struct EqualityReport {
    enum class OllCase { CaseA, CaseB, Neither };

    bool condition_two_level;      // at most two likelihood-ratio levels, equal supports
    std::optional<std::vector<int>> omega0;  // indices of the larger-ratio level
    std::optional<double> c0;      // ratio on omega0
    std::optional<double> c1;      // ratio on the complement
    OllCase cor_oll_case;          // one state proportional to the other on a sub-support
    std::optional<double> kappa_or_eta;
};

EqualityReport equality_conditions(const ClassicalState& p, const ClassicalState& q);

/// Residuals of the projection optimality identity
/// (Tr sigma P) P rho P = (Tr rho P) P sigma P and the same for the
/// complement; both vanish at projections witnessing test = measured
/// equality. Frobenius norms.
struct ProjectionResiduals {
    double on_projection;
    double on_complement;
};

ProjectionResiduals optimal_projection_diagnostic(const DensityMatrix& rho,
                                                  const DensityMatrix& sigma, double alpha,
                                                  const Test& projection);

/// Combined single-letter / n-copy view of a classical pair.
struct GapReport {
    enum class Verdict { Identical, TwoLevel, ProportionalSubsupport, Generic };

    double dalpha;
    RegularizedResult regularized;
    std::vector<NCopyRow> rows;
    double dhat_lower_bound;  // running max of the per-copy rows
    EqualityReport equality;
    Verdict verdict;
    bool margins_ok;          // the verdict's numeric claims hold at 1e-6 margins
    std::string margin_detail;
};

GapReport gap_explorer(const ClassicalState& p, const ClassicalState& q, double alpha,
                       int n_max, std::size_t max_types = 1000000);

std::string verdict_name(GapReport::Verdict v);

}  // namespace renyi
