#include "renyi/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;  // 1/phi

/// Golden-section maximization of a unimodal function on [lo, hi].
/// Returns (x*, f(x*)); the endpoints are included as candidates.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double x_tol) {
    double a = lo;
    double b = hi;
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
    double x_best = (f1 >= f2) ? x1 : x2;
    double f_best = std::max(f1, f2);
    for (double x : {lo, hi}) {
        const double fx = f(x);
        if (fx > f_best) {
            f_best = fx;
            x_best = x;
        }
    }
    return {x_best, f_best};
}

double log_sum_exp(const std::vector<double>& values) {
    double m = -kInf;
    for (double v : values) m = std::max(m, v);
    if (m == -kInf) return -kInf;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - m);
    return m + std::log(acc);
}

}  // namespace

std::string reg_method_name(RegMethod m) {
    switch (m) {
        case RegMethod::HoeffdingRoot: return "hoeffding-root";
        case RegMethod::SalzmannDatta: return "salzmann-datta";
        case RegMethod::Both: return "both";
    }
    return "unknown";
}

LegendrePoint legendre_phi(const PsiProfile& profile, double c) {
    if (profile.orthogonal()) throw ValidationError("legendre_phi: orthogonal pair");
    auto objective = [&](double a) { return c * (a - 1.0) - profile.psi(a); };
    auto [a_star, value] = golden_max(objective, 0.0, 1.0, 1e-10);
    return {value, a_star};
}

LegendrePoint legendre_phi_plus(const PsiProfile& profile, double c) {
    LegendrePoint p = legendre_phi(profile, c);
    return {p.value + c, p.alpha_star};
}

HoeffdingPoint hoeffding(const PsiProfile& profile, double r) {
    if (profile.orthogonal()) throw ValidationError("hoeffding: orthogonal pair");

    HoeffdingPoint point;
    point.r = r;

    const double d0 = profile.d_zero();
    if (r < d0) {
        point.H = kInf;
        point.boundary = HoeffdingPoint::Boundary::Infinite;
        point.c_r = -kInf;
        return point;
    }
    if (r <= d0 + 1e-12) {
        // Attained in the u -> -inf limit; direct calculation.
        point.H = -profile.psi_prime(0.0) - profile.psi(0.0);
        point.boundary = HoeffdingPoint::Boundary::TowardMinusInfinity;
        point.c_r = r - point.H;
        return point;
    }
    const double rel_ent = profile.relative_entropy();
    if (r >= rel_ent) {
        point.H = 0.0;
        point.boundary = HoeffdingPoint::Boundary::TowardZero;
        point.c_r = r;
        point.u_star = 0.0;
        return point;
    }

    // g(u) = u r - psi~(u), concave on u < 0. Grouped as
    // u (r + psi(beta)) - psi(beta) with beta = 1/(1-u) to avoid the
    // large-|u| cancellation between the two O(u) terms.
    auto g = [&](double u) {
        const double ps = profile.psi(1.0 / (1.0 - u));
        return u * (r + ps) - ps;
    };

    double prev = g(0.0);
    double u_edge = -1.0;
    int k = 0;
    constexpr int kMaxDoublings = 52;
    while (k < kMaxDoublings) {
        const double val = g(u_edge);
        if (val < prev) break;
        prev = val;
        u_edge *= 2.0;
        ++k;
    }
    if (k == kMaxDoublings) {
        // Maximizer escaped to -inf: the r = D0 limit value.
        point.H = -profile.psi_prime(0.0) - profile.psi(0.0);
        point.boundary = HoeffdingPoint::Boundary::TowardMinusInfinity;
        point.c_r = r - point.H;
        return point;
    }

    auto [u_star, h] = golden_max(g, u_edge, 0.0, 1e-10);
    point.H = h;
    point.u_star = u_star;
    point.boundary = HoeffdingPoint::Boundary::Interior;
    point.c_r = r - h;
    return point;
}

ChernoffResult chernoff(const PsiProfile& profile) {
    if (profile.orthogonal()) throw ValidationError("chernoff: orthogonal pair");
    auto negated = [&](double a) { return -profile.psi(a); };
    auto [a_star, value] = golden_max(negated, 0.0, 1.0, 1e-10);
    return {value, a_star};
}

namespace {

double salzmann_datta_single_letter(const PsiProfile& profile, double alpha) {
    // alpha * sup_t (t - 1) D_t / (t (2 alpha - 1) - alpha); the numerator
    // (t - 1) D_t equals psi(t) on (0, 1), and the denominator is negative
    // throughout [0, 1]. The objective extends continuously to the closed
    // interval, so the endpoints participate as candidates.
    auto objective = [&](double t) {
        return alpha * profile.psi(t) / (t * (2.0 * alpha - 1.0) - alpha);
    };
    constexpr int kGridPoints = 1024;
    double best_t = 0.0;
    double best = objective(0.0);
    for (int i = 1; i <= kGridPoints; ++i) {
        const double t = static_cast<double>(i) / kGridPoints;
        const double val = objective(t);
        if (val > best) {
            best = val;
            best_t = t;
        }
    }
    const double lo = std::max(0.0, best_t - 1.0 / kGridPoints);
    const double hi = std::min(1.0, best_t + 1.0 / kGridPoints);
    auto [t_star, refined] = golden_max(objective, lo, hi, 1e-12);
    (void)t_star;
    return std::max(best, refined);
}

double hoeffding_root_single_letter(const PsiProfile& profile, double alpha,
                                    std::optional<double>& r_alpha_out) {
    const double ratio = (1.0 - alpha) / alpha;
    const double d0 = profile.d_zero();
    const double d_alpha = profile.standard_renyi(alpha);

    if (d0 > 0.0) {
        // Decide the D0 boundary regime analytically: H jumps to +inf left
        // of D0, so blind bisection would mis-bracket.
        const double h_at_d0 = -profile.psi_prime(0.0) - profile.psi(0.0);
        if (h_at_d0 <= ratio * d0) {
            r_alpha_out = d0;
            return d0;
        }
    }

    auto crossing_gap = [&](double r) { return hoeffding(profile, r).H - ratio * r; };

    double left = std::max(d0, 0.0) + 1e-12;
    double right = d_alpha;
    if (!(left <= right)) {
        std::ostringstream msg;
        msg << "regularized_test: bracket [" << left << ", " << right
            << "] is empty (D0 > D_alpha violates monotonicity)";
        throw std::runtime_error(msg.str());
    }

    const double gap_right = crossing_gap(right);
    if (gap_right >= 0.0) {
        // H_{D_alpha} >= ((1-alpha)/alpha) D_alpha can only happen with
        // equality: the crossing sits at the upper endpoint.
        r_alpha_out = right;
        return right;
    }
    const double gap_left = crossing_gap(left);
    if (gap_left <= 0.0) {
        if (gap_left < -1e-8) {
            std::ostringstream msg;
            msg << "regularized_test: bracket failure, G(" << left << ") = " << gap_left
                << ", G(" << right << ") = " << gap_right;
            throw std::runtime_error(msg.str());
        }
        // Crossing pinned between D0 and D0 + 1e-12.
        r_alpha_out = left;
        return left;
    }

    while (right - left > 1e-9) {
        const double mid = 0.5 * (left + right);
        if (crossing_gap(mid) >= 0.0) {
            left = mid;
        } else {
            right = mid;
        }
    }
    const double root = 0.5 * (left + right);
    r_alpha_out = root;
    return root;
}

}  // namespace

RegularizedResult regularized_test(const PsiProfile& profile, double alpha,
                                   RegMethod method) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("regularized_test: alpha must lie in (0, 1)");
    }
    RegularizedResult result;
    result.alpha = alpha;
    result.method = method;

    if (profile.orthogonal()) {
        result.value = kInf;
        return result;
    }
    if (chernoff(profile).value <= 1e-13) {
        // Equal states.
        result.value = 0.0;
        return result;
    }
    if (profile.psi_affine() && std::abs(profile.psi(1.0)) <= 1e-12) {
        // D_alpha is the constant log(kappa) = D0; the crossing interval
        // (D0, D) is degenerate and the value is D0 for every alpha.
        result.value = profile.d_zero();
        result.r_alpha = result.value;
        return result;
    }

    switch (method) {
        case RegMethod::HoeffdingRoot:
            result.value = hoeffding_root_single_letter(profile, alpha, result.r_alpha);
            break;
        case RegMethod::SalzmannDatta:
            result.value = salzmann_datta_single_letter(profile, alpha);
            break;
        case RegMethod::Both: {
            const double root = hoeffding_root_single_letter(profile, alpha, result.r_alpha);
            const double dual = salzmann_datta_single_letter(profile, alpha);
            result.value = root;
            result.residual = std::abs(root - dual);
            break;
        }
    }
    return result;
}

RegularizedResult regularized_test(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   double alpha, RegMethod method) {
    if (rho.op().max_abs_diff(sigma.op()) <= 1e-12) {
        RegularizedResult result;
        result.alpha = alpha;
        result.method = method;
        result.value = 0.0;
        return result;
    }
    return regularized_test(build_psi(rho, sigma), alpha, method);
}

RegularizedResult regularized_test(const ClassicalState& p, const ClassicalState& q,
                                   double alpha, RegMethod method) {
    if (p.max_abs_diff(q) <= 1e-12) {
        RegularizedResult result;
        result.alpha = alpha;
        result.method = method;
        result.value = 0.0;
        return result;
    }
    return regularized_test(build_psi(p, q), alpha, method);
}

namespace {

void fill_bounds(HoeffdingTestResult& result, const PsiProfile& profile, int n, double r,
                 double alpha) {
    result.n = n;
    result.threshold_log = n * (r + profile.psi(alpha)) / alpha;
    result.sigma_error_bound = std::exp(-n * r);
    const double d_alpha = profile.standard_renyi(alpha);
    result.rho_error_bound = std::exp(-n * ((alpha - 1.0) / alpha) * (r - d_alpha));
}

}  // namespace

ClassicalHoeffdingTest hoeffding_test(const ClassicalState& p, const ClassicalState& q,
                                      int n, double r, double alpha,
                                      std::size_t max_types) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("hoeffding_test: alpha must lie in (0, 1)");
    }
    if (r <= 0.0) throw ValidationError("hoeffding_test: r must be positive");
    const PsiProfile profile = build_psi(p, q);
    if (profile.orthogonal()) throw ValidationError("hoeffding_test: orthogonal pair");

    ClassicalHoeffdingTest result;
    fill_bounds(result, profile, n, r, alpha);
    result.types = paired_types(p, q, n, max_types);

    std::vector<double> log_sigma_terms;
    std::vector<double> log_rho_terms;
    result.included.reserve(result.types.entries.size());
    for (const PairedTypeEntry& entry : result.types.entries) {
        // Per-sequence threshold decision; all sequences of a class share it.
        const bool in =
            entry.log_ratio > result.threshold_log && entry.log_mass_p != -kInf;
        result.included.push_back(in);
        if (in) {
            log_sigma_terms.push_back(entry.log_mass_q);
        } else {
            log_rho_terms.push_back(entry.log_mass_p);
        }
    }
    result.sigma_error = std::exp(log_sum_exp(log_sigma_terms));
    result.rho_error = std::exp(log_sum_exp(log_rho_terms));
    return result;
}

QuantumHoeffdingTest hoeffding_test(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    int n, double r, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("hoeffding_test: alpha must lie in (0, 1)");
    }
    if (r <= 0.0) throw ValidationError("hoeffding_test: r must be positive");
    const double dn = std::pow(static_cast<double>(rho.dim()), n);
    if (dn > 4096.0) {
        throw ResourceError("hoeffding_test: dim^n = " + std::to_string(dn) +
                            " exceeds the dense budget of 4096");
    }
    const PsiProfile profile = build_psi(rho, sigma);
    if (profile.orthogonal()) throw ValidationError("hoeffding_test: orthogonal pair");

    QuantumHoeffdingTest result{{},
                                Test::zero(1)};
    fill_bounds(result, profile, n, r, alpha);

    const Matrix rho_n = kron_power(rho.entries(), n);
    const Matrix sigma_n = kron_power(sigma.entries(), n);
    const double scale = std::exp(result.threshold_log);
    const HermitianOperator difference(Matrix(rho_n - scale * sigma_n));
    const Spectrum& spec = difference.spectrum();

    const Eigen::Index dim = spec.eigenvalues.size();
    Matrix projector = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (spec.eigenvalues[i] > 1e-14) {
            projector += spec.eigenvectors.col(i) * spec.eigenvectors.col(i).adjoint();
        }
    }
    result.test = Test(HermitianOperator(projector));
    result.sigma_error = (sigma_n * projector).trace().real();
    result.rho_error = (rho_n * (Matrix::Identity(dim, dim) - projector)).trace().real();
    return result;
}

double nagaoka_objective(const ClassicalState& p, const ClassicalState& q, int n, double b,
                         std::size_t max_types) {
    const PairedTypes types = paired_types(p, q, n, max_types);
    std::vector<double> terms;
    terms.reserve(types.entries.size());
    for (const PairedTypeEntry& entry : types.entries) {
        // Per class, the optimal test keeps the smaller of the two masses.
        terms.push_back(std::min(entry.log_mass_p, n * b + entry.log_mass_q));
    }
    return log_sum_exp(terms) / static_cast<double>(n);
}

double nagaoka_objective(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                         double b) {
    const double dn = std::pow(static_cast<double>(rho.dim()), n);
    if (dn > 4096.0) {
        throw ResourceError("nagaoka_objective: dim^n exceeds the dense budget of 4096");
    }
    const Matrix rho_n = kron_power(rho.entries(), n);
    const Matrix sigma_n = kron_power(sigma.entries(), n);
    const HermitianOperator difference(Matrix(rho_n - std::exp(n * b) * sigma_n));
    const RealVector& eigs = difference.spectrum().eigenvalues;
    double positive_sum = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        if (eigs[i] > 0.0) positive_sum += eigs[i];
    }
    const double minimum = std::max(1.0 - positive_sum, 1e-300);
    return std::log(minimum) / static_cast<double>(n);
}

double salzmann_datta_finite_n(const ClassicalState& p, const ClassicalState& q,
                               double alpha, int n, std::size_t max_types) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("salzmann_datta_finite_n: alpha must lie in (0, 1)");
    }
    PairedTypes types = paired_types(p, q, n, max_types);
    // Sort classes by descending likelihood ratio; the optimal test is a
    // threshold prefix plus at most one fractional class.
    std::sort(types.entries.begin(), types.entries.end(),
              [](const PairedTypeEntry& a, const PairedTypeEntry& b) {
                  return a.log_ratio > b.log_ratio;
              });

    const double kappa = alpha / (1.0 - alpha);
    double best = kInf;

    double x = 1.0;  // Tr rho^n (I - T), test T grows prefix by prefix
    double y = 0.0;  // Tr sigma^n T
    auto consider = [&](double xx, double yy) {
        const double value = std::pow(std::max(xx, 0.0), kappa) + yy;
        best = std::min(best, value);
    };
    consider(x, y);
    for (const PairedTypeEntry& entry : types.entries) {
        const double mass_p = std::exp(entry.log_mass_p);
        const double mass_q = std::exp(entry.log_mass_q);
        if (kappa != 1.0 && mass_p > 0.0) {
            // Stationary point of (x - g mass_p)^kappa + y + g mass_q
            // inside the fractional segment.
            const double x_star = std::pow(mass_q / (kappa * mass_p), 1.0 / (kappa - 1.0));
            const double gamma = (x - x_star) / mass_p;
            if (gamma > 0.0 && gamma < 1.0) {
                consider(x - gamma * mass_p, y + gamma * mass_q);
            }
        }
        x -= mass_p;
        y += mass_q;
        consider(x, y);
    }
    return -std::log(best) / static_cast<double>(n);
}

}  // namespace renyi
