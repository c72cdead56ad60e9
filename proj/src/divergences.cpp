#include "renyi/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOrthogonalTol = 1e-14;
constexpr double kSupportInclusionTol = 1e-9;
constexpr double kAffineChordTol = 1e-9;
// Squared eigenvector overlaps below this are orthogonality round-off.
constexpr double kOverlapNoise = 1e-28;

struct PositivePart {
    std::vector<double> log_values;  // log of eigenvalues above the support cutoff
    std::vector<int> indices;        // positions in the ascending spectrum
};

PositivePart positive_part(const RealVector& eigenvalues) {
    PositivePart part;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] > kSupportCutoff) {
            part.log_values.push_back(std::log(eigenvalues[i]));
            part.indices.push_back(static_cast<int>(i));
        }
    }
    return part;
}

}  // namespace

double log_add_exp(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    const double m = std::max(x, y);
    return m + std::log(std::exp(x - m) + std::exp(y - m));
}

std::string family_name(Family f) {
    switch (f) {
        case Family::Standard: return "standard";
        case Family::Sandwiched: return "sandwiched";
        case Family::Measured: return "measured";
        case Family::Test: return "test";
        case Family::RelativeEntropy: return "relative-entropy";
        case Family::D0: return "D0";
        case Family::Dmax: return "Dmax";
        case Family::Chernoff: return "chernoff";
        case Family::RegularizedTest: return "regularized-test";
    }
    return "unknown";
}

std::optional<Family> family_from_name(const std::string& name) {
    static const std::pair<const char*, Family> table[] = {
        {"standard", Family::Standard},
        {"sandwiched", Family::Sandwiched},
        {"measured", Family::Measured},
        {"test", Family::Test},
        {"relative-entropy", Family::RelativeEntropy},
        {"D0", Family::D0},
        {"Dmax", Family::Dmax},
        {"chernoff", Family::Chernoff},
        {"regularized-test", Family::RegularizedTest},
    };
    for (const auto& [key, fam] : table) {
        if (name == key) return fam;
    }
    return std::nullopt;
}

bool DivergenceValue::is_infinite() const { return std::isinf(value) && value > 0; }

void PsiProfile::finalize() {
    if (base_.empty()) {
        orthogonal_ = true;
        return;
    }
    // Q(1) = Tr rho sigma^0 and Q(0) = Tr rho^0 sigma decide the support
    // inclusions; 1 - Q is the trace of the excluded block.
    supp_rho_le_sigma_ = (1.0 - std::exp(psi(1.0))) <= kSupportInclusionTol;
    supp_sigma_le_rho_ = (1.0 - std::exp(psi(0.0))) <= kSupportInclusionTol;

    const double psi0 = psi(0.0);
    const double psi1 = psi(1.0);
    double gap = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double a = static_cast<double>(k) / 63.0;
        const double chord = psi0 + a * (psi1 - psi0);
        gap = std::max(gap, std::abs(psi(a) - chord));
    }
    psi_affine_ = gap < kAffineChordTol;
    kappa_ = std::exp(psi1 - psi0);
}

PsiProfile PsiProfile::from_states(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw ValidationError("PsiProfile: dimension mismatch");
    }
    PsiProfile profile;
    const double tr_rho_sigma = (rho.entries() * sigma.entries()).trace().real();
    if (tr_rho_sigma <= kOrthogonalTol) {
        profile.orthogonal_ = true;
        return profile;
    }

    const Spectrum& rs = rho.spectrum();
    const Spectrum& ss = sigma.spectrum();
    const PositivePart rp = positive_part(rs.eigenvalues);
    const PositivePart sp = positive_part(ss.eigenvalues);

    for (std::size_t i = 0; i < rp.indices.size(); ++i) {
        const Eigen::VectorXcd u = rs.eigenvectors.col(rp.indices[i]);
        for (std::size_t j = 0; j < sp.indices.size(); ++j) {
            const Eigen::VectorXcd v = ss.eigenvectors.col(sp.indices[j]);
            const double w = std::norm(u.dot(v));
            if (w <= kOverlapNoise) continue;
            profile.base_.push_back(sp.log_values[j] + std::log(w));
            profile.slope_.push_back(rp.log_values[i] - sp.log_values[j]);
        }
    }
    profile.finalize();
    return profile;
}

PsiProfile PsiProfile::from_classical(const ClassicalState& p, const ClassicalState& q) {
    if (p.size() != q.size()) {
        throw ValidationError("PsiProfile: label set size mismatch");
    }
    PsiProfile profile;
    const double inner = p.weights().dot(q.weights());
    if (inner <= kOrthogonalTol) {
        profile.orthogonal_ = true;
        return profile;
    }
    for (int i = 0; i < p.size(); ++i) {
        const double pi = p.weight(i);
        const double qi = q.weight(i);
        if (pi > kSupportCutoff && qi > kSupportCutoff) {
            profile.base_.push_back(std::log(qi));
            profile.slope_.push_back(std::log(pi) - std::log(qi));
        }
    }
    profile.finalize();
    return profile;
}

double PsiProfile::psi(double alpha) const {
    if (orthogonal_) return -kInf;
    double m = -kInf;
    for (std::size_t k = 0; k < base_.size(); ++k) {
        m = std::max(m, base_[k] + alpha * slope_[k]);
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < base_.size(); ++k) {
        acc += std::exp(base_[k] + alpha * slope_[k] - m);
    }
    return m + std::log(acc);
}

double PsiProfile::psi_prime(double alpha) const {
    if (orthogonal_) throw ValidationError("psi_prime: orthogonal pair");
    double m = -kInf;
    for (std::size_t k = 0; k < base_.size(); ++k) {
        m = std::max(m, base_[k] + alpha * slope_[k]);
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < base_.size(); ++k) {
        const double w = std::exp(base_[k] + alpha * slope_[k] - m);
        num += slope_[k] * w;
        den += w;
    }
    return num / den;
}

double PsiProfile::psi_tilde(double u) const {
    return (1.0 - u) * psi(1.0 / (1.0 - u));
}

double PsiProfile::relative_entropy() const {
    if (orthogonal_) return kInf;
    if (!supp_rho_le_sigma_) return kInf;
    double acc = 0.0;
    for (std::size_t k = 0; k < base_.size(); ++k) {
        acc += slope_[k] * std::exp(base_[k] + slope_[k]);
    }
    return acc;
}

double PsiProfile::standard_renyi(double alpha) const {
    if (alpha <= 0.0) throw ValidationError("standard_renyi: alpha must be positive");
    if (orthogonal_) return kInf;
    if (alpha == 1.0) return relative_entropy();
    if (alpha > 1.0 && !supp_rho_le_sigma_) return kInf;
    return psi(alpha) / (alpha - 1.0);
}

PsiProfile build_psi(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return PsiProfile::from_states(rho, sigma);
}

PsiProfile build_psi(const ClassicalState& p, const ClassicalState& q) {
    return PsiProfile::from_classical(p, q);
}

DivergenceValue standard_renyi(const DensityMatrix& rho, const DensityMatrix& sigma,
                               double alpha) {
    return {build_psi(rho, sigma).standard_renyi(alpha), Family::Standard, alpha};
}

DivergenceValue standard_renyi(const ClassicalState& p, const ClassicalState& q,
                               double alpha) {
    return {build_psi(p, q).standard_renyi(alpha), Family::Standard, alpha};
}

namespace {

bool support_included(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const HermitianOperator sigma0 = mat_power(sigma.op(), 0.0);
    const double inside = (rho.entries() * sigma0.entries()).trace().real();
    return (rho.op().trace_real() - inside) <= kSupportInclusionTol;
}

double positive_eig_power_trace(const HermitianOperator& a, double x) {
    const Spectrum& spec = a.spectrum();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (spec.eigenvalues[i] > kSupportCutoff) acc += std::pow(spec.eigenvalues[i], x);
    }
    return acc;
}

}  // namespace

DivergenceValue sandwiched_renyi(const DensityMatrix& rho, const DensityMatrix& sigma,
                                 double alpha) {
    if (alpha <= 0.0) throw ValidationError("sandwiched_renyi: alpha must be positive");
    if (alpha == 1.0) return {relative_entropy(rho, sigma).value, Family::Sandwiched, alpha};
    if (alpha > 1.0 && !support_included(rho, sigma)) {
        return {kInf, Family::Sandwiched, alpha};
    }
    const HermitianOperator root = mat_power(rho.op(), 0.5);
    const HermitianOperator mid = mat_power(sigma.op(), (1.0 - alpha) / alpha);
    Matrix inner = root.entries() * mid.entries() * root.entries();
    const HermitianOperator sandwiched(std::move(inner));
    const double tr = positive_eig_power_trace(sandwiched, alpha);
    if (tr <= 0.0) return {kInf, Family::Sandwiched, alpha};
    return {std::log(tr) / (alpha - 1.0), Family::Sandwiched, alpha};
}

DivergenceValue sandwiched_renyi(const ClassicalState& p, const ClassicalState& q,
                                 double alpha) {
    // Commuting case: the sandwiched and standard families coincide.
    return {build_psi(p, q).standard_renyi(alpha), Family::Sandwiched, alpha};
}

DivergenceValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return {build_psi(rho, sigma).relative_entropy(), Family::RelativeEntropy, std::nullopt};
}

DivergenceValue relative_entropy(const ClassicalState& p, const ClassicalState& q) {
    return {build_psi(p, q).relative_entropy(), Family::RelativeEntropy, std::nullopt};
}

DivergenceValue d_zero(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return {build_psi(rho, sigma).d_zero(), Family::D0, std::nullopt};
}

DivergenceValue d_zero(const ClassicalState& p, const ClassicalState& q) {
    return {build_psi(p, q).d_zero(), Family::D0, std::nullopt};
}

DivergenceValue d_max(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (!support_included(rho, sigma)) return {kInf, Family::Dmax, std::nullopt};
    const HermitianOperator inv_root = mat_power(sigma.op(), -0.5);
    Matrix scaled = inv_root.entries() * rho.entries() * inv_root.entries();
    const HermitianOperator h(std::move(scaled));
    const double lambda_max = h.spectrum().eigenvalues.maxCoeff();
    return {std::log(lambda_max), Family::Dmax, std::nullopt};
}

DivergenceValue d_max(const ClassicalState& p, const ClassicalState& q) {
    double ratio_max = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (p.weight(i) > kSupportCutoff) {
            if (q.weight(i) <= kSupportCutoff) return {kInf, Family::Dmax, std::nullopt};
            ratio_max = std::max(ratio_max, p.weight(i) / q.weight(i));
        }
    }
    return {std::log(ratio_max), Family::Dmax, std::nullopt};
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const HermitianOperator root = mat_power(rho.op(), 0.5);
    Matrix inner = root.entries() * sigma.entries() * root.entries();
    const HermitianOperator h(std::move(inner));
    const RealVector& eigs = h.spectrum().eigenvalues;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        if (eigs[i] > 0.0) acc += std::sqrt(eigs[i]);
    }
    return std::min(acc, 1.0);
}

double fidelity(const ClassicalState& p, const ClassicalState& q) {
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) acc += std::sqrt(p.weight(i) * q.weight(i));
    return std::min(acc, 1.0);
}

PureStatePanel pure_state_panel(double overlap_sq, double alpha) {
    if (!(overlap_sq > 0.0 && overlap_sq < 1.0)) {
        throw ValidationError("pure_state_panel: overlap must lie in (0, 1)");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("pure_state_panel: alpha must lie in (0, 1)");
    }
    const double log_c = std::log(overlap_sq);
    PureStatePanel panel;
    panel.standard = log_c / (alpha - 1.0);
    panel.sandwiched = alpha * log_c / (alpha - 1.0);
    panel.test_measured = (alpha <= 0.5) ? -log_c : alpha * log_c / (alpha - 1.0);
    return panel;
}

double classical_renyi(const RealVector& p, const RealVector& q, double alpha) {
    if (p.size() != q.size()) throw ValidationError("classical_renyi: size mismatch");
    if (alpha <= 0.0) throw ValidationError("classical_renyi: alpha must be positive");

    if (alpha == 1.0) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (p[i] > 0.0) {
                if (q[i] <= 0.0) return kInf;
                acc += p[i] * (std::log(p[i]) - std::log(q[i]));
            }
        }
        return acc;
    }

    if (alpha > 1.0) {
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (p[i] > 0.0 && q[i] <= 0.0) return kInf;
        }
    }

    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0 && q[i] > 0.0) {
            acc += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
        }
    }
    if (acc <= 0.0) return kInf;
    return std::log(acc) / (alpha - 1.0);
}

double binary_renyi(double a, double b, double alpha) {
    const double pa = BinaryDistribution(a).p;
    const double pb = BinaryDistribution(b).p;
    RealVector p(2), q(2);
    p << pa, 1.0 - pa;
    q << pb, 1.0 - pb;
    return classical_renyi(p, q, alpha);
}

double binary_renyi_log(double log_a1, double log_a2, double log_b1, double log_b2,
                        double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("binary_renyi_log: alpha must lie in (0, 1)");
    }
    auto term = [alpha](double la, double lb) {
        if (la == -kInf || lb == -kInf) return -kInf;
        return alpha * la + (1.0 - alpha) * lb;
    };
    const double lse = log_add_exp(term(log_a1, log_b1), term(log_a2, log_b2));
    if (lse == -kInf) return kInf;
    return lse / (alpha - 1.0);
}

}  // namespace renyi
