#include "renyi/operator_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs_entry(const Matrix& m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace

struct HermitianOperator::SpectrumCache {
    std::once_flag once;
    Spectrum spectrum;
};

HermitianOperator::HermitianOperator(Matrix entries)
    : entries_(std::move(entries)), cache_(std::make_shared<SpectrumCache>()) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw ValidationError("HermitianOperator: matrix must be square and non-empty");
    }
    const double dev = max_abs_entry(entries_ - entries_.adjoint());
    if (dev > kHermitianTol) {
        throw ValidationError("HermitianOperator: not Hermitian, max deviation " +
                              std::to_string(dev));
    }
    // Symmetrize so downstream arithmetic sees an exactly Hermitian matrix.
    entries_ = ((entries_ + entries_.adjoint()) / 2.0).eval();
}

const Spectrum& HermitianOperator::spectrum() const {
    std::call_once(cache_->once, [this] {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("HermitianOperator: eigendecomposition failed");
        }
        cache_->spectrum.eigenvalues = solver.eigenvalues();
        cache_->spectrum.eigenvectors = solver.eigenvectors();
    });
    return cache_->spectrum;
}

double HermitianOperator::max_abs_diff(const HermitianOperator& other) const {
    if (dim() != other.dim()) {
        throw ValidationError("max_abs_diff: dimension mismatch");
    }
    return max_abs_entry(entries_ - other.entries_);
}

HermitianOperator HermitianOperator::identity(int d) {
    return HermitianOperator(Matrix::Identity(d, d));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& values) {
    Matrix m = Matrix::Zero(values.size(), values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return HermitianOperator(std::move(m));
}

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
    const Spectrum& spec = op_.spectrum();
    const double min_eig = spec.eigenvalues.minCoeff();
    if (min_eig < -kPsdClampTol) {
        throw ValidationError("DensityMatrix: eigenvalue " + std::to_string(min_eig) +
                              " below PSD tolerance");
    }
    const double tr = op_.trace_real();
    if (std::abs(tr - 1.0) > kPsdClampTol) {
        throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    }
    if (min_eig < 0.0) {
        // Clamp round-off negativity and renormalize.
        RealVector clamped = spec.eigenvalues.cwiseMax(0.0);
        clamped /= clamped.sum();
        Matrix rebuilt = spec.eigenvectors * clamped.asDiagonal() * spec.eigenvectors.adjoint();
        op_ = HermitianOperator(std::move(rebuilt));
    }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& state) {
    const double norm = state.norm();
    if (norm <= 0.0) throw ValidationError("DensityMatrix::pure: zero vector");
    Eigen::VectorXcd v = state / norm;
    return DensityMatrix(Matrix(v * v.adjoint()));
}

Test::Test(HermitianOperator op) : op_(std::move(op)) {
    const Spectrum& spec = op_.held.spectrum();
    const double lo = spec.eigenvalues.minCoeff();
    const double hi = spec.eigenvalues.maxCoeff();
    if (lo < -kPsdClampTol || hi > 1.0 + kPsdClampTol) {
        throw ValidationError("Test: eigenvalues must lie in [0, 1], got [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

Test Test::identity(int d) { return Test(HermitianOperator::identity(d)); }

Test Test::zero(int d) { return Test(HermitianOperator(Matrix::Zero(d, d))); }

Test Test::subset(int d, const std::vector<int>& indices) {
    Matrix m = Matrix::Zero(d, d);
    for (int i : indices) {
        if (i < 0 || i >= d) throw ValidationError("Test::subset: index out of range");
        m(i, i) = 1.0;
    }
    return Test(HermitianOperator(std::move(m)));
}

ClassicalState::ClassicalState(std::vector<std::string> labels, RealVector weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (static_cast<Eigen::Index>(labels_.size()) != weights_.size()) {
        throw ValidationError("ClassicalState: label/weight count mismatch");
    }
    if (weights_.size() == 0) throw ValidationError("ClassicalState: empty");
    if (weights_.minCoeff() < 0.0) {
        throw ValidationError("ClassicalState: negative weight");
    }
    const double total = weights_.sum();
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("ClassicalState: weights sum to " + std::to_string(total));
    }
}

ClassicalState::ClassicalState(RealVector weights)
    : ClassicalState(
          [&] {
              std::vector<std::string> labels(weights.size());
              for (Eigen::Index i = 0; i < weights.size(); ++i) labels[i] = std::to_string(i);
              return labels;
          }(),
          weights) {}

double ClassicalState::max_abs_diff(const ClassicalState& other) const {
    if (size() != other.size()) throw ValidationError("max_abs_diff: size mismatch");
    return (weights_ - other.weights_).cwiseAbs().maxCoeff();
}

DensityMatrix ClassicalState::to_density() const {
    return DensityMatrix(HermitianOperator::diagonal(weights_));
}

BinaryDistribution::BinaryDistribution(double value) : p(value) {
    if (p < 0.0) {
        if (p < -1e-14) {
            throw ValidationError("BinaryDistribution: mass " + std::to_string(p));
        }
        p = 0.0;
    }
    if (p > 1.0) {
        if (p > 1.0 + 1e-14) {
            throw ValidationError("BinaryDistribution: mass " + std::to_string(p));
        }
        p = 1.0;
    }
}

Spectrum spectral(const HermitianOperator& a) { return a.spectrum(); }

HermitianOperator mat_power(const HermitianOperator& a, double x) {
    const Spectrum& spec = a.spectrum();
    if (spec.eigenvalues.minCoeff() < -kPsdClampTol) {
        throw ValidationError("mat_power: operator is not PSD");
    }
    const int d = a.dim();
    RealVector powered = RealVector::Zero(d);
    for (int i = 0; i < d; ++i) {
        const double lambda = spec.eigenvalues[i];
        if (lambda > kSupportCutoff) powered[i] = std::pow(lambda, x);
    }
    Matrix result = spec.eigenvectors * powered.asDiagonal() * spec.eigenvectors.adjoint();
    return HermitianOperator(std::move(result));
}

double count_types(int num_symbols, int n) {
    // C(n + m - 1, m - 1) compositions of n into m non-negative parts.
    double count = 1.0;
    for (int i = 1; i <= num_symbols - 1; ++i) {
        count *= static_cast<double>(n + i) / static_cast<double>(i);
    }
    return count;
}

double type_log_prob(const TypeClass& type, const ClassicalState& p) {
    if (static_cast<int>(type.counts.size()) != p.size()) {
        throw ValidationError("type_log_prob: symbol count mismatch");
    }
    double log_prob = 0.0;
    for (std::size_t i = 0; i < type.counts.size(); ++i) {
        if (type.counts[i] == 0) continue;
        const double w = p.weight(static_cast<int>(i));
        if (w <= 0.0) return -kInf;
        log_prob += type.counts[i] * std::log(w);
    }
    return log_prob;
}

TypeDecomposition tensor_power_classical(const ClassicalState& p, int n,
                                         std::size_t max_types) {
    if (n < 1) throw ValidationError("tensor_power_classical: n must be positive");
    const int m = p.size();
    const double predicted = count_types(m, n);
    if (predicted > static_cast<double>(max_types)) {
        throw ResourceError("tensor_power_classical: " + std::to_string(predicted) +
                            " types exceed the budget of " + std::to_string(max_types));
    }

    TypeDecomposition decomp;
    decomp.n = n;
    decomp.num_symbols = m;

    std::vector<int> counts(m, 0);
    const double log_n_fact = std::lgamma(n + 1.0);

    // Enumerate compositions of n into m parts, lexicographically.
    auto emit = [&] {
        TypeClass type;
        type.counts = counts;
        double log_mult = log_n_fact;
        double mult = 1.0;
        int assigned = 0;
        for (int i = 0; i < m; ++i) {
            log_mult -= std::lgamma(counts[i] + 1.0);
            // Multiplicity as a running product of binomials, exact in double
            // while it fits the 53-bit mantissa.
            for (int j = 1; j <= counts[i]; ++j) {
                mult = mult * static_cast<double>(assigned + j) / static_cast<double>(j);
            }
            assigned += counts[i];
        }
        type.multiplicity = std::round(mult);
        type.log_multiplicity = log_mult;
        type.log_prob = type_log_prob(type, p);
        decomp.types.push_back(std::move(type));
    };

    const std::function<void(int, int)> descend = [&](int index, int remaining) {
        if (index == m - 1) {
            counts[index] = remaining;
            emit();
            counts[index] = 0;
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            counts[index] = k;
            descend(index + 1, remaining - k);
        }
        counts[index] = 0;
    };
    descend(0, n);

    return decomp;
}

PairedTypes paired_types(const ClassicalState& p, const ClassicalState& q, int n,
                         std::size_t max_types) {
    if (p.size() != q.size()) {
        throw ValidationError("paired_types: label set size mismatch");
    }
    const TypeDecomposition decomp = tensor_power_classical(p, n, max_types);
    PairedTypes paired;
    paired.n = n;
    paired.entries.reserve(decomp.types.size());
    for (const TypeClass& type : decomp.types) {
        PairedTypeEntry entry;
        entry.counts = type.counts;
        entry.multiplicity = type.multiplicity;
        const double log_q_seq = type_log_prob(type, q);
        entry.log_mass_p = type.log_multiplicity + type.log_prob;
        entry.log_mass_q = type.log_multiplicity + log_q_seq;
        if (type.log_prob == -kInf && log_q_seq == -kInf) {
            entry.log_ratio = 0.0;  // dead class, zero mass under both
        } else {
            entry.log_ratio = type.log_prob - log_q_seq;
        }
        paired.entries.push_back(std::move(entry));
    }
    return paired;
}

std::pair<double, double> apply_test(const HermitianOperator& x, const Test& t) {
    if (x.dim() != t.dim()) {
        throw ValidationError("apply_test: dimension mismatch");
    }
    const std::complex<double> hit = (x.entries() * t.entries()).trace();
    const double total = x.trace_real();
    if (std::abs(hit.imag()) > 1e-12) {
        throw std::runtime_error("apply_test: imaginary residue " +
                                 std::to_string(hit.imag()));
    }
    return {hit.real(), total - hit.real()};
}

Matrix kron_power(const Matrix& a, int n) {
    if (n < 1) throw ValidationError("kron_power: n must be positive");
    Matrix result = a;
    for (int k = 1; k < n; ++k) {
        Matrix next(result.rows() * a.rows(), result.cols() * a.cols());
        for (Eigen::Index i = 0; i < result.rows(); ++i) {
            for (Eigen::Index j = 0; j < result.cols(); ++j) {
                next.block(i * a.rows(), j * a.cols(), a.rows(), a.cols()) = result(i, j) * a;
            }
        }
        result = std::move(next);
    }
    return result;
}

}  // namespace renyi
