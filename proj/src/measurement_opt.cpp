#include "renyi/measurement_opt.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;

template <typename F>
std::pair<double, double> golden_max_1d(F&& f, double a, double b, double x_tol) {
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        }
    }
    return (f1 >= f2) ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

double log_sum_exp_span(const std::vector<double>& values, std::size_t begin,
                        std::size_t end) {
    double m = -kInf;
    for (std::size_t i = begin; i < end; ++i) m = std::max(m, values[i]);
    if (m == -kInf) return -kInf;
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += std::exp(values[i] - m);
    return m + std::log(acc);
}

/// Shared subset evaluator: aggregate the masses in index order and take the
/// binary Renyi value. Used identically by the exhaustive and the threshold
/// audit paths so agreement can be compared exactly.
double subset_value(const std::vector<double>& mass_p, const std::vector<double>& mass_q,
                    std::uint32_t mask, double alpha) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < mass_p.size(); ++i) {
        if (mask & (1u << i)) {
            a += mass_p[i];
            b += mass_q[i];
        }
    }
    return binary_renyi(a, b, alpha);
}

struct ExhaustiveBest {
    double value = -kInf;
    std::uint32_t mask = 0;
};

/// Ties resolved toward the smallest subset, then the smallest mask.
ExhaustiveBest exhaustive_subsets(const std::vector<double>& mass_p,
                                  const std::vector<double>& mass_q, double alpha) {
    const std::size_t atoms = mass_p.size();
    ExhaustiveBest best;
    int best_popcount = 0;
    const std::uint32_t limit = 1u << atoms;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        const double value = subset_value(mass_p, mass_q, mask, alpha);
        const int pop = std::popcount(mask);
        const bool better =
            value > best.value ||
            (value == best.value && (pop < best_popcount ||
                                     (pop == best_popcount && mask < best.mask)));
        if (better) {
            best.value = value;
            best.mask = mask;
            best_popcount = pop;
        }
    }
    return best;
}

/// Likelihood-ratio order: descending log p - log q, one-sided supports at
/// the extremes; dead atoms (zero under both) go last.
std::vector<int> ratio_order(const RealVector& p, const RealVector& q) {
    std::vector<int> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int i) {
        const bool pp = p[i] > kSupportCutoff;
        const bool qp = q[i] > kSupportCutoff;
        if (pp && qp) return std::log(p[i]) - std::log(q[i]);
        if (pp) return kInf;
        if (qp) return -kInf;
        return -kInf;  // dead atom, order irrelevant
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return key(a) > key(b); });
    return order;
}

}  // namespace

TestOptimum test_divergence_classical(const ClassicalState& p, const ClassicalState& q,
                                      double alpha) {
    if (p.size() != q.size()) {
        throw ValidationError("test_divergence_classical: label set mismatch");
    }
    if (alpha <= 0.0) {
        throw ValidationError("test_divergence_classical: alpha must be positive");
    }
    const int m = p.size();
    std::vector<double> mass_p(p.weights().begin(), p.weights().end());
    std::vector<double> mass_q(q.weights().begin(), q.weights().end());

    if (m <= 20) {
        const ExhaustiveBest best = exhaustive_subsets(mass_p, mass_q, alpha);
        std::vector<int> subset;
        for (int i = 0; i < m; ++i) {
            if (best.mask & (1u << i)) subset.push_back(i);
        }
        return {best.value, Test::subset(m, subset), static_cast<int>(subset.size()), 0,
                true};
    }

    // Threshold search: prefixes of the likelihood-ratio order.
    const std::vector<int> order = ratio_order(p.weights(), q.weights());
    double best = -kInf;
    int best_k = 0;
    double a = 0.0;
    double b = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double value = binary_renyi(a, b, alpha);
        if (value > best) {
            best = value;
            best_k = k;
        }
        if (k < m) {
            a += mass_p[order[k]];
            b += mass_q[order[k]];
        }
    }
    std::vector<int> subset(order.begin(), order.begin() + best_k);
    std::sort(subset.begin(), subset.end());
    return {best, Test::subset(m, subset), best_k, 0, false};
}

namespace {

Matrix hermitian_from_params(const RealVector& theta, int d) {
    Matrix h = Matrix::Zero(d, d);
    int idx = 0;
    for (int i = 0; i < d; ++i) h(i, i) = theta[idx++];
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            h(i, j) = std::complex<double>(theta[idx], theta[idx + 1]);
            h(j, i) = std::conj(h(i, j));
            idx += 2;
        }
    }
    return h;
}

Matrix exp_i_hermitian(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    Eigen::VectorXcd phases(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        phases[i] = std::exp(std::complex<double>(0.0, solver.eigenvalues()[i]));
    }
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix random_unitary(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> normal(0.0, 1.0);
    RealVector theta(d * d);
    for (int i = 0; i < d * d; ++i) theta[i] = normal(rng);
    return exp_i_hermitian(hermitian_from_params(theta, d));
}

/// Positive spectral projections of rho - t sigma across thresholds placed
/// between consecutive generalized eigenvalues of the pencil (rho, sigma),
/// plus a geometric fallback grid. In the commuting case these are exactly
/// the likelihood-ratio threshold sets.
std::vector<Matrix> neyman_pearson_projectors(const DensityMatrix& rho,
                                              const DensityMatrix& sigma) {
    const int d = rho.dim();
    std::vector<double> thresholds;
    const HermitianOperator inv_root = mat_power(sigma.op(), -0.5);
    const HermitianOperator pencil(
        Matrix(inv_root.entries() * rho.entries() * inv_root.entries()));
    std::vector<double> gammas;
    const RealVector& eigs = pencil.spectrum().eigenvalues;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        if (eigs[i] > kSupportCutoff) gammas.push_back(eigs[i]);
    }
    std::sort(gammas.begin(), gammas.end());
    for (std::size_t i = 0; i + 1 < gammas.size(); ++i) {
        thresholds.push_back(0.5 * (gammas[i] + gammas[i + 1]));
    }
    if (!gammas.empty()) {
        thresholds.push_back(0.5 * gammas.front());
        thresholds.push_back(2.0 * gammas.back() + 1.0);
    }
    for (double t = 1e-4; t <= 1e4; t *= 10.0) thresholds.push_back(t);

    std::vector<Matrix> projectors;
    for (double t : thresholds) {
        const HermitianOperator diff(Matrix(rho.entries() - t * sigma.entries()));
        const Spectrum& spec = diff.spectrum();
        Matrix proj = Matrix::Zero(d, d);
        int rank = 0;
        for (int i = 0; i < d; ++i) {
            if (spec.eigenvalues[i] > 0.0) {
                proj += spec.eigenvectors.col(i) * spec.eigenvectors.col(i).adjoint();
                ++rank;
            }
        }
        if (rank > 0 && rank < d) projectors.push_back(std::move(proj));
    }
    return projectors;
}

double test_objective(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const Matrix& projector, double alpha) {
    const double a = (rho.entries() * projector).trace().real();
    const double b = (sigma.entries() * projector).trace().real();
    return binary_renyi(a, b, alpha);
}

/// Coordinate-wise golden-section ascent of P -> exp(iH) P exp(-iH).
double refine_projection(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha,
                         Matrix& projector) {
    const int d = rho.dim();
    const int params = d * d;
    double value = test_objective(rho, sigma, projector, alpha);
    double step = 0.6;
    for (int round = 0; round < 3; ++round) {
        RealVector theta = RealVector::Zero(params);
        RealVector unit = RealVector::Zero(params);
        for (int i = 0; i < params; ++i) {
            unit.setZero();
            unit[i] = 1.0;
            auto along = [&](double t) {
                RealVector probe = theta;
                probe[i] += t;
                const Matrix u = exp_i_hermitian(hermitian_from_params(probe, d));
                return test_objective(rho, sigma, Matrix(u * projector * u.adjoint()),
                                      alpha);
            };
            auto [t_best, f_best] = golden_max_1d(along, -step, step, 1e-4 * step);
            if (f_best > value) {
                value = f_best;
                theta[i] += t_best;
            }
        }
        const Matrix u = exp_i_hermitian(hermitian_from_params(theta, d));
        projector = u * projector * u.adjoint();
        step *= 0.35;
    }
    return value;
}

Matrix rank_k_projector(const Matrix& basis, int k) {
    const int d = static_cast<int>(basis.rows());
    Matrix proj = Matrix::Zero(d, d);
    for (int i = 0; i < k; ++i) {
        proj += basis.col(i) * basis.col(i).adjoint();
    }
    return proj;
}

int projector_rank(const Matrix& projector) {
    return static_cast<int>(std::lround(projector.trace().real()));
}

}  // namespace

TestOptimum test_divergence_quantum(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    double alpha, int restarts, std::uint64_t seed,
                                    int max_dim) {
    if (rho.dim() != sigma.dim()) {
        throw ValidationError("test_divergence_quantum: dimension mismatch");
    }
    const int d = rho.dim();
    if (d > max_dim) {
        throw ResourceError("test_divergence_quantum: dim " + std::to_string(d) +
                            " exceeds the budget of " + std::to_string(max_dim));
    }
    if (alpha <= 0.0) {
        throw ValidationError("test_divergence_quantum: alpha must be positive");
    }

    std::mt19937_64 rng(seed);

    // Trivial ranks 0 and d.
    double best_value = 0.0;
    Matrix best_projector = Matrix::Zero(d, d);

    std::vector<Matrix> candidates = neyman_pearson_projectors(rho, sigma);

    // Diagonal threshold masks of the pinched pair: the classical optimum of
    // the diagonals is always reachable.
    {
        RealVector diag_p(d), diag_q(d);
        for (int i = 0; i < d; ++i) {
            diag_p[i] = std::max(rho.entries()(i, i).real(), 0.0);
            diag_q[i] = std::max(sigma.entries()(i, i).real(), 0.0);
        }
        const std::vector<int> order = ratio_order(diag_p, diag_q);
        for (int k = 1; k < d; ++k) {
            Matrix proj = Matrix::Zero(d, d);
            for (int i = 0; i < k; ++i) proj(order[i], order[i]) = 1.0;
            candidates.push_back(std::move(proj));
        }
    }

    for (int rstart = 0; rstart < restarts; ++rstart) {
        const Matrix u = random_unitary(rng, d);
        const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d - 1 > 0 ? d - 1 : 1));
        candidates.push_back(rank_k_projector(u, std::min(k, d - 1)));
    }

    // Evaluate everything, refine the most promising few plus the random
    // restarts (which start far from structure).
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ranked.emplace_back(test_objective(rho, sigma, candidates[i], alpha), i);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    const std::size_t refine_count = std::min<std::size_t>(ranked.size(), 4 + restarts);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const std::size_t idx = ranked[i].second;
        double value = ranked[i].first;
        if (i < refine_count) {
            value = refine_projection(rho, sigma, alpha, candidates[idx]);
        }
        if (value > best_value) {
            best_value = value;
            best_projector = candidates[idx];
        }
    }

    // A refined projector drifts off idempotency only through round-off;
    // snap it back through its spectral decomposition.
    const HermitianOperator raw(best_projector);
    const Spectrum& spec = raw.spectrum();
    Matrix snapped = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        if (spec.eigenvalues[i] > 0.5) {
            snapped += spec.eigenvectors.col(i) * spec.eigenvectors.col(i).adjoint();
        }
    }
    best_value = std::max(best_value, test_objective(rho, sigma, snapped, alpha));

    return {best_value, Test(HermitianOperator(snapped)), projector_rank(snapped),
            restarts, false};
}

MeasuredOptimum measured_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    double alpha, int restarts, std::uint64_t seed,
                                    int max_dim) {
    if (rho.dim() != sigma.dim()) {
        throw ValidationError("measured_divergence: dimension mismatch");
    }
    const int d = rho.dim();
    if (d > max_dim) {
        throw ResourceError("measured_divergence: dim " + std::to_string(d) +
                            " exceeds the budget of " + std::to_string(max_dim));
    }
    if (alpha <= 0.0) {
        throw ValidationError("measured_divergence: alpha must be positive");
    }

    auto objective = [&](const Matrix& basis) {
        RealVector pu(d), qu(d);
        for (int i = 0; i < d; ++i) {
            const Eigen::VectorXcd col = basis.col(i);
            pu[i] = std::max((col.adjoint() * rho.entries() * col)(0).real(), 0.0);
            qu[i] = std::max((col.adjoint() * sigma.entries() * col)(0).real(), 0.0);
        }
        return classical_renyi(pu, qu, alpha);
    };

    std::mt19937_64 rng(seed);
    std::vector<Matrix> seeds;
    seeds.push_back(sigma.spectrum().eigenvectors);
    seeds.push_back(rho.spectrum().eigenvectors);
    seeds.push_back(
        HermitianOperator(Matrix(rho.entries() - sigma.entries())).spectrum().eigenvectors);
    {
        // Fuchs-Caves style geometric-mean basis, the exact optimum at
        // alpha = 1/2 for invertible sigma.
        const HermitianOperator root = mat_power(sigma.op(), 0.5);
        const HermitianOperator inv_root = mat_power(sigma.op(), -0.5);
        const HermitianOperator inner(
            Matrix(root.entries() * rho.entries() * root.entries()));
        const HermitianOperator mean = mat_power(inner, 0.5);
        const HermitianOperator fuchs_caves(
            Matrix(inv_root.entries() * mean.entries() * inv_root.entries()));
        seeds.push_back(fuchs_caves.spectrum().eigenvectors);
    }
    for (int r = 0; r < restarts; ++r) seeds.push_back(random_unitary(rng, d));

    double best = -kInf;
    Matrix best_basis = seeds.front();
    const int params = d * d;
    for (Matrix& basis : seeds) {
        double value = objective(basis);
        double step = 0.6;
        for (int round = 0; round < 3; ++round) {
            RealVector theta = RealVector::Zero(params);
            for (int i = 0; i < params; ++i) {
                auto along = [&](double t) {
                    RealVector probe = theta;
                    probe[i] += t;
                    const Matrix u = exp_i_hermitian(hermitian_from_params(probe, d));
                    return objective(Matrix(u * basis));
                };
                auto [t_best, f_best] = golden_max_1d(along, -step, step, 1e-4 * step);
                if (f_best > value) {
                    value = f_best;
                    theta[i] += t_best;
                }
            }
            basis = exp_i_hermitian(hermitian_from_params(theta, d)) * basis;
            step *= 0.35;
        }
        if (value > best) {
            best = value;
            best_basis = basis;
        }
    }
    return {best, best_basis, restarts};
}

namespace {

struct SortedPairTypes {
    std::vector<double> log_mass_p;  // by descending likelihood ratio
    std::vector<double> log_mass_q;
    std::vector<std::size_t> original_index;
};

SortedPairTypes sort_by_ratio(const PairedTypes& types) {
    std::vector<std::size_t> order(types.entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return types.entries[a].log_ratio > types.entries[b].log_ratio;
    });
    SortedPairTypes sorted;
    for (std::size_t idx : order) {
        sorted.log_mass_p.push_back(types.entries[idx].log_mass_p);
        sorted.log_mass_q.push_back(types.entries[idx].log_mass_q);
        sorted.original_index.push_back(idx);
    }
    return sorted;
}

/// Best threshold prefix over the sorted classes, log-domain throughout.
std::pair<double, std::size_t> best_threshold_prefix(const SortedPairTypes& sorted,
                                                     double alpha) {
    const std::size_t count = sorted.log_mass_p.size();
    std::vector<double> prefix_p(count + 1, -kInf);
    std::vector<double> prefix_q(count + 1, -kInf);
    for (std::size_t k = 0; k < count; ++k) {
        prefix_p[k + 1] = log_add_exp(prefix_p[k], sorted.log_mass_p[k]);
        prefix_q[k + 1] = log_add_exp(prefix_q[k], sorted.log_mass_q[k]);
    }
    std::vector<double> suffix_p(count + 1, -kInf);
    std::vector<double> suffix_q(count + 1, -kInf);
    for (std::size_t k = count; k-- > 0;) {
        suffix_p[k] = log_add_exp(suffix_p[k + 1], sorted.log_mass_p[k]);
        suffix_q[k] = log_add_exp(suffix_q[k + 1], sorted.log_mass_q[k]);
    }
    double best = -kInf;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k <= count; ++k) {
        const double value =
            binary_renyi_log(prefix_p[k], suffix_p[k], prefix_q[k], suffix_q[k], alpha);
        if (value > best) {
            best = value;
            best_k = k;
        }
    }
    return {best, best_k};
}

struct AtomTable {
    std::vector<double> mass_p;
    std::vector<double> mass_q;
    std::vector<std::size_t> type_of_atom;  // index into PairedTypes::entries
};

/// Expands Omega^n into individual sequences; only valid for m^n <= 20.
AtomTable enumerate_atoms(const ClassicalState& p, const ClassicalState& q, int n,
                          const PairedTypes& types) {
    const int m = p.size();
    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= m;
    if (total > 20.0) {
        throw ResourceError("enumerate_atoms: |Omega|^n exceeds 20");
    }
    // Map counts vector -> type index.
    auto find_type = [&](const std::vector<int>& counts) -> std::size_t {
        for (std::size_t t = 0; t < types.entries.size(); ++t) {
            if (types.entries[t].counts == counts) return t;
        }
        throw std::runtime_error("enumerate_atoms: type lookup failed");
    };

    AtomTable table;
    std::vector<int> seq(n, 0);
    while (true) {
        double mp = 1.0;
        double mq = 1.0;
        std::vector<int> counts(m, 0);
        for (int i = 0; i < n; ++i) {
            mp *= p.weight(seq[i]);
            mq *= q.weight(seq[i]);
            counts[seq[i]] += 1;
        }
        table.mass_p.push_back(mp);
        table.mass_q.push_back(mq);
        table.type_of_atom.push_back(find_type(counts));
        int pos = n - 1;
        while (pos >= 0 && seq[pos] == m - 1) {
            seq[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        seq[pos] += 1;
    }
    return table;
}

}  // namespace

ThresholdAudit audit_threshold_optimality(const ClassicalState& p, const ClassicalState& q,
                                          double alpha, int n) {
    const PairedTypes types = paired_types(p, q, n);
    const SortedPairTypes sorted = sort_by_ratio(types);
    const AtomTable atoms = enumerate_atoms(p, q, n, types);

    // Threshold prefix masks at type-class boundaries, evaluated by the same
    // subset routine as the exhaustive sweep.
    std::vector<std::size_t> type_position(types.entries.size());
    for (std::size_t k = 0; k < sorted.original_index.size(); ++k) {
        type_position[sorted.original_index[k]] = k;
    }
    double threshold_best = -kInf;
    for (std::size_t k = 0; k <= types.entries.size(); ++k) {
        std::uint32_t mask = 0;
        for (std::size_t a = 0; a < atoms.mass_p.size(); ++a) {
            if (type_position[atoms.type_of_atom[a]] < k) mask |= (1u << a);
        }
        threshold_best =
            std::max(threshold_best, subset_value(atoms.mass_p, atoms.mass_q, mask, alpha));
    }

    const ExhaustiveBest exhaustive = exhaustive_subsets(atoms.mass_p, atoms.mass_q, alpha);
    return {threshold_best, exhaustive.value};
}

std::vector<NCopyRow> ncopy_table_classical(const ClassicalState& p, const ClassicalState& q,
                                            double alpha, int n_max,
                                            std::size_t max_types) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("ncopy_table_classical: alpha must lie in (0, 1)");
    }
    const double dalpha = build_psi(p, q).standard_renyi(alpha);
    std::vector<NCopyRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        const PairedTypes types = paired_types(p, q, n, max_types);
        const SortedPairTypes sorted = sort_by_ratio(types);
        const auto [best, best_k] = best_threshold_prefix(sorted, alpha);
        NCopyRow row;
        row.n = n;
        row.dtest_per_copy = best / static_cast<double>(n);
        row.gap_to_dalpha = dalpha - row.dtest_per_copy;
        row.certified = false;
        if (std::pow(static_cast<double>(p.size()), n) <= 20.0) {
            const ThresholdAudit audit = audit_threshold_optimality(p, q, alpha, n);
            row.certified = audit.exhaustive_value == audit.threshold_value;
        }
        rows.push_back(row);
    }
    return rows;
}

EqualityReport equality_conditions(const ClassicalState& p, const ClassicalState& q) {
    if (p.size() != q.size()) {
        throw ValidationError("equality_conditions: label set mismatch");
    }
    constexpr double kClusterTol = 1e-9;
    const int m = p.size();

    bool supports_equal = true;
    bool p_in_q = true;
    bool q_in_p = true;
    std::vector<std::pair<double, int>> ratios;  // (log ratio, index) on common support
    for (int i = 0; i < m; ++i) {
        const bool pp = p.weight(i) > kSupportCutoff;
        const bool qp = q.weight(i) > kSupportCutoff;
        if (pp != qp) supports_equal = false;
        if (pp && !qp) p_in_q = false;
        if (qp && !pp) q_in_p = false;
        if (pp && qp) {
            ratios.emplace_back(std::log(p.weight(i)) - std::log(q.weight(i)), i);
        }
    }

    // Cluster the log-ratios.
    std::vector<std::pair<double, int>> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<int>> clusters;
    std::vector<double> cluster_ratio;
    for (const auto& [value, index] : sorted) {
        if (clusters.empty() || value - cluster_ratio.back() > kClusterTol) {
            clusters.push_back({index});
            cluster_ratio.push_back(value);
        } else {
            clusters.back().push_back(index);
        }
    }

    EqualityReport report;
    report.condition_two_level = supports_equal && clusters.size() <= 2;
    if (report.condition_two_level && !clusters.empty()) {
        // Omega_0 carries the larger ratio.
        const std::size_t hi = clusters.size() - 1;
        std::vector<int> omega0 = clusters[hi];
        std::sort(omega0.begin(), omega0.end());
        report.omega0 = omega0;
        report.c0 = std::exp(cluster_ratio[hi]);
        report.c1 = clusters.size() == 2 ? std::exp(cluster_ratio[0]) : report.c0;
    }

    const bool single_ratio_on_overlap = clusters.size() <= 1;
    if (p_in_q && single_ratio_on_overlap && !ratios.empty()) {
        report.cor_oll_case = EqualityReport::OllCase::CaseA;
        report.kappa_or_eta = std::exp(cluster_ratio[0]);
    } else if (q_in_p && single_ratio_on_overlap && !ratios.empty()) {
        report.cor_oll_case = EqualityReport::OllCase::CaseB;
        report.kappa_or_eta = std::exp(-cluster_ratio[0]);
    } else {
        report.cor_oll_case = EqualityReport::OllCase::Neither;
    }
    return report;
}

ProjectionResiduals optimal_projection_diagnostic(const DensityMatrix& rho,
                                                  const DensityMatrix& sigma, double alpha,
                                                  const Test& projection) {
    (void)alpha;  // recorded by callers; the identity itself is alpha-free
    const Matrix& pmat = projection.entries();
    const double idem = (pmat * pmat - pmat).norm();
    if (idem > 1e-8) {
        throw ValidationError("optimal_projection_diagnostic: test is not a projection");
    }
    const int d = rho.dim();
    const Matrix comp = Matrix::Identity(d, d) - pmat;

    auto residual = [&](const Matrix& proj) {
        const double tr_sigma = (sigma.entries() * proj).trace().real();
        const double tr_rho = (rho.entries() * proj).trace().real();
        const Matrix lhs = tr_sigma * (proj * rho.entries() * proj);
        const Matrix rhs = tr_rho * (proj * sigma.entries() * proj);
        return (lhs - rhs).norm();
    };
    return {residual(pmat), residual(comp)};
}

std::string verdict_name(GapReport::Verdict v) {
    switch (v) {
        case GapReport::Verdict::Identical: return "identical";
        case GapReport::Verdict::TwoLevel: return "two-level";
        case GapReport::Verdict::ProportionalSubsupport: return "proportional-subsupport";
        case GapReport::Verdict::Generic: return "generic";
    }
    return "unknown";
}

GapReport gap_explorer(const ClassicalState& p, const ClassicalState& q, double alpha,
                       int n_max, std::size_t max_types) {
    GapReport report;
    report.equality = equality_conditions(p, q);
    report.dalpha = build_psi(p, q).standard_renyi(alpha);
    report.regularized = regularized_test(p, q, alpha, RegMethod::Both);
    report.rows = ncopy_table_classical(p, q, alpha, n_max, max_types);
    report.dhat_lower_bound = 0.0;
    for (const NCopyRow& row : report.rows) {
        report.dhat_lower_bound = std::max(report.dhat_lower_bound, row.dtest_per_copy);
    }

    if (p.max_abs_diff(q) <= 1e-12) {
        report.verdict = GapReport::Verdict::Identical;
    } else if (report.equality.condition_two_level) {
        report.verdict = GapReport::Verdict::TwoLevel;
    } else if (report.equality.cor_oll_case != EqualityReport::OllCase::Neither) {
        report.verdict = GapReport::Verdict::ProportionalSubsupport;
    } else {
        report.verdict = GapReport::Verdict::Generic;
    }

    constexpr double kMargin = 1e-6;
    std::ostringstream detail;
    report.margins_ok = true;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) {
            report.margins_ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    };

    switch (report.verdict) {
        case GapReport::Verdict::Identical:
            require(std::abs(report.dalpha) <= 1e-9, "D_alpha not 0");
            require(std::abs(report.regularized.value) <= 1e-9, "regularized not 0");
            for (const NCopyRow& row : report.rows) {
                require(std::abs(row.dtest_per_copy) <= 1e-9, "row not 0");
            }
            break;
        case GapReport::Verdict::TwoLevel:
            // Attained at n = 1, and the regularization along the diagonal
            // stays strictly below.
            require(!report.rows.empty() &&
                        std::abs(report.rows.front().dtest_per_copy - report.dalpha) <=
                            kMargin,
                    "n=1 row does not attain D_alpha");
            require(report.regularized.value < report.dalpha - kMargin,
                    "regularized not strictly below D_alpha");
            break;
        case GapReport::Verdict::ProportionalSubsupport:
            for (const NCopyRow& row : report.rows) {
                require(std::abs(row.dtest_per_copy - report.dalpha) <= kMargin,
                        "row does not attain D_alpha");
            }
            require(std::abs(report.regularized.value - report.dalpha) <= kMargin,
                    "regularized does not attain D_alpha");
            break;
        case GapReport::Verdict::Generic:
            for (const NCopyRow& row : report.rows) {
                require(row.dtest_per_copy < report.dalpha - kMargin,
                        "row not strictly below D_alpha");
            }
            require(report.regularized.value < report.dalpha - kMargin,
                    "regularized not strictly below D_alpha");
            break;
    }
    report.margin_detail = detail.str();
    return report;
}

}  // namespace renyi
