#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace renyi {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues below this cutoff are treated as zero, i.e. outside the
/// support. Real powers A^x are always taken on the support only, so that
/// A^0 is the support projection.
inline constexpr double kSupportCutoff = 1e-12;

/// Max absolute entry deviation allowed between A and its adjoint.
inline constexpr double kHermitianTol = 1e-10;

/// Eigenvalues of a density matrix in (-kPsdClampTol, 0) are clamped to 0;
/// anything more negative is rejected.
inline constexpr double kPsdClampTol = 1e-10;

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Spectrum {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // columns orthonormal, A = U diag(lambda) U^dagger
};

/// Dense complex Hermitian matrix with a cached spectral decomposition.
/// Immutable after construction; the spectrum is computed once on first
/// access (write-once, thread-safe). Copies share the cache.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    const Spectrum& spectrum() const;

    double trace_real() const { return entries_.trace().real(); }
    double max_abs_diff(const HermitianOperator& other) const;

    static HermitianOperator identity(int d);
    static HermitianOperator diagonal(const RealVector& values);

private:
    struct SpectrumCache;
    Matrix entries_;
    std::shared_ptr<SpectrumCache> cache_;
};

/// Unit-trace PSD operator. Construction clamps eigenvalues in
/// (-kPsdClampTol, 0) to zero and renormalizes the trace.
class DensityMatrix {
public:
    explicit DensityMatrix(HermitianOperator op);
    explicit DensityMatrix(Matrix entries) : DensityMatrix(HermitianOperator(std::move(entries))) {}

    int dim() const { return op_.dim(); }
    const HermitianOperator& op() const { return op_; }
    const Matrix& entries() const { return op_.entries(); }
    const Spectrum& spectrum() const { return op_.spectrum(); }

    static DensityMatrix pure(const Eigen::VectorXcd& state);

private:
    HermitianOperator op_;
};

/// Two-outcome measurement effect: 0 <= T <= I.
class Test {
public:
    explicit Test(HermitianOperator op);
    explicit Test(Matrix entries) : Test(HermitianOperator(std::move(entries))) {}

    int dim() const { return op_.dim(); }
    const HermitianOperator& op() const { return op_.op(); }
    const Matrix& entries() const { return op_.op().entries(); }

    static Test identity(int d);
    static Test zero(int d);
    /// Diagonal projection onto the listed basis indices.
    static Test subset(int d, const std::vector<int>& indices);

private:
    struct Holder {
        explicit Holder(HermitianOperator h) : held(std::move(h)) {}
        HermitianOperator held;
        const HermitianOperator& op() const { return held; }
    } op_;
};

/// Probability vector over a finite ordered label set.
class ClassicalState {
public:
    ClassicalState(std::vector<std::string> labels, RealVector weights);
    explicit ClassicalState(RealVector weights);

    int size() const { return static_cast<int>(weights_.size()); }
    const RealVector& weights() const { return weights_; }
    double weight(int i) const { return weights_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    double max_abs_diff(const ClassicalState& other) const;

    /// Diagonal density matrix in the standard basis.
    DensityMatrix to_density() const;

private:
    std::vector<std::string> labels_;
    RealVector weights_;
};

/// Mass on outcome 1 of a two-outcome measurement; the complement is
/// implicit. Round-off down to -1e-14 is clamped.
struct BinaryDistribution {
    double p;

    explicit BinaryDistribution(double value);
};

/// Eigen-decomposition of a Hermitian operator: eigenvalues ascending,
/// eigenvector columns orthonormal.
Spectrum spectral(const HermitianOperator& a);

/// Real matrix power on the support: A^x = sum_{a > cutoff} a^x P_a.
/// Requires A PSD within tolerance. mat_power(A, 0) is the support
/// projection.
HermitianOperator mat_power(const HermitianOperator& a, double x);

/// One type class of Omega^n: occupation counts, multinomial multiplicity
/// and the per-sequence log-probability under the generating state.
struct TypeClass {
    std::vector<int> counts;       // sums to n
    double multiplicity;           // n! / prod(counts!)
    double log_multiplicity;       // via lgamma, safe for large n
    double log_prob;               // log p^{(x) n}(omega_vec), -inf on zero weights
};

struct TypeDecomposition {
    int n = 0;
    int num_symbols = 0;
    std::vector<TypeClass> types;
};

/// Enumerates the types of p^{(x) n}. Throws ResourceError when the type
/// count exceeds max_types.
TypeDecomposition tensor_power_classical(const ClassicalState& p, int n,
                                         std::size_t max_types = 1000000);

/// Per-sequence log-probability of a type under an arbitrary state on the
/// same label set.
double type_log_prob(const TypeClass& type, const ClassicalState& p);

/// Number of types of Omega^n without enumerating them.
double count_types(int num_symbols, int n);

/// Joint view of the type classes of Omega^n under two states on the same
/// label set: aggregate class masses under both, and the per-sequence
/// log-likelihood ratio (constant within a class).
struct PairedTypeEntry {
    std::vector<int> counts;
    double multiplicity;
    double log_mass_p;   // log(multiplicity * p-sequence probability)
    double log_mass_q;
    double log_ratio;    // per-sequence log p - log q; +-inf on one-sided support
};

struct PairedTypes {
    int n = 0;
    std::vector<PairedTypeEntry> entries;
};

PairedTypes paired_types(const ClassicalState& p, const ClassicalState& q, int n,
                         std::size_t max_types = 1000000);

/// (Tr X T, Tr X (I - T)); both components real within 1e-12 residue.
std::pair<double, double> apply_test(const HermitianOperator& x, const Test& t);

inline std::pair<double, double> apply_test(const DensityMatrix& x, const Test& t) {
    return apply_test(x.op(), t);
}

/// n-fold Kronecker power.
Matrix kron_power(const Matrix& a, int n);

}  // namespace renyi
