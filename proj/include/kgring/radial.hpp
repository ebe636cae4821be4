#pragma once

// Closed forms for the radial equation in s = e^{-r/b}:
//   chi(s) = C s^{sqrt c} (1-s)^K P_{n_r}^{(2 sqrt c, 2K-1)}(1 - 2s),
// with the quantization kept in its unsquared (signed) form.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "angular.hpp"
#include "error.hpp"
#include "potential.hpp"
#include "specfun.hpp"

namespace kgring {

/// Parameters of the hypergeometric-type reduction. k_nu is the root of the
/// discriminant condition whose tau has a negative slope.
struct NuParams {
    double a_nu = 0.0;
    double b_nu = 0.0;
    double c_nu = 0.0;
    double k_nu = 0.0;
    double lambda_bar = 0.0;
};

/// Argument of Lambda = sqrt(1/4 + eta alpha(alpha-1) + lambda).
inline double lambda_arg(const PotentialParams& p, double eta, double lambda) {
    return 0.25 + eta * p.alpha * (p.alpha - 1.0) + lambda;
}

inline NuParams nu_params(const PotentialParams& p, double eta, double epsilon, double lambda) {
    detail::require(std::isfinite(eta) && std::isfinite(epsilon) && std::isfinite(lambda),
                    "nu_params: non-finite input");
    const double e2 = epsilon * epsilon;
    const double lc = lambda * p.C0;
    NuParams nu;
    nu.a_nu = 0.25 + e2 + p.A * eta + p.alpha * eta * (p.alpha - 1.0) + lc;
    nu.b_nu = 2.0 * e2 + p.A * eta + 2.0 * lc - lambda;
    nu.c_nu = e2 + lc;

    const double cab = nu.c_nu + nu.a_nu - nu.b_nu;
    const double expected = lambda_arg(p, eta, lambda);
    const double scale = std::max({1.0, std::abs(nu.a_nu), std::abs(nu.b_nu), std::abs(nu.c_nu)});
    if (std::abs(cab - expected) > 1e-12 * scale)
        throw std::logic_error("nu_params: c + a - b identity violated");

    if (nu.c_nu < 0.0 || cab < 0.0)
        throw DomainError(ErrorKind::complex_lambda, "nu_params: c or c + a - b negative, no real branch");
    const double sc = std::sqrt(nu.c_nu), sd = std::sqrt(cab);
    nu.k_nu = (nu.b_nu - 2.0 * nu.c_nu) - 2.0 * sc * sd;
    nu.lambda_bar = nu.k_nu - (0.5 + sc + sd);
    return nu;
}

/// sqrt(c) from the unsquared quantization condition. Negative values mean the
/// configuration has no bound state even when the squared equation has a root.
inline double sqrt_c_signed(const PotentialParams& p, const QuantumNumbers& q, double eta, double lambda) {
    const double arg = lambda_arg(p, eta, lambda);
    if (arg < 0.0) throw DomainError(ErrorKind::complex_lambda, "sqrt_c_signed: complex Lambda");
    const double L = std::sqrt(arg);
    const double n = q.n_r;
    return (p.A * eta - lambda - 0.5 - L * (1.0 + 2.0 * n) - n * (n + 1.0)) / (2.0 * L + 1.0 + 2.0 * n);
}

inline double eta_of(const PotentialParams& p, double E) { return (p.M + E) / p.M; }

inline double epsilon_of(const PotentialParams& p, double E) {
    return p.b * std::sqrt((p.M - E) * (p.M + E));
}

/// f(E) = b^2(M^2 - E^2) + lambda(E) C0 - sqrt_c_signed(E)^2. Its zeros with
/// sqrt_c_signed > 0 are the bound states; the rest are artefacts of squaring.
inline double energy_residual(const PotentialParams& p, const QuantumNumbers& q, double E) {
    p.validate();
    detail::require(std::abs(E) < p.M, "energy_residual: need |E| < M");
    const double eta = eta_of(p, E);
    const AngularSolution ang = solve_angular(q, p, eta);
    const double sc = sqrt_c_signed(p, q, eta, ang.lambda);
    return p.b * p.b * (p.M - E) * (p.M + E) + ang.lambda * p.C0 - sc * sc;
}

inline constexpr const char* reason_sqrt_c = "sqrt_c ≤ 0";
inline constexpr const char* reason_epsilon = "epsilon ≤ 0";
inline constexpr const char* reason_complex_lambda = "complex Lambda";
inline constexpr const char* reason_edge = "edge";

struct BoundState {
    double E = 0.0;
    double epsilon = 0.0;
    double eta = 1.0;
    double Lambda = 0.0;
    double K = 0.5;
    double sqrt_c = 0.0;
    double norm = 0.0; ///< radial C_{n_r}; zero for inadmissible states
    double b = 1.0;    ///< screening length the closed forms were built with
    QuantumNumbers quantum;
    AngularSolution angular;

    bool epsilon_positive = false;
    bool sqrt_c_positive = false;
    bool lambda_real = false;

    bool admissible() const { return epsilon_positive && sqrt_c_positive && lambda_real; }

    /// First failed admissibility condition, or empty.
    std::string rejection_reason() const {
        if (!lambda_real) return reason_complex_lambda;
        if (!epsilon_positive) return reason_epsilon;
        if (!sqrt_c_positive) return reason_sqrt_c;
        return {};
    }
};

/// C_{n_r} such that the integral of chi^2 over r in (0, inf) is one.
inline double chi_norm(const BoundState& st) {
    if (!(st.sqrt_c > 0.0)) throw DomainError(ErrorKind::inadmissible, "chi_norm: sqrt_c must be positive");
    detail::require(2.0 * st.K - 1.0 > -1.0, "chi_norm: need 2K - 1 > -1");
    const double n = st.quantum.n_r, sc = st.sqrt_c, K = st.K;
    const double log_c2 = log_gamma(n + 1.0) + std::log(2.0 * sc) + std::log(n + K + sc) +
                          log_gamma(2.0 * (K + sc) + n) - std::log(st.b) - std::log(n + K) -
                          log_gamma(n + 2.0 * sc + 1.0) - log_gamma(n + 2.0 * K);
    return std::exp(0.5 * log_c2);
}

/// Assemble the closed-form state at energy E. Angular failures throw;
/// admissibility failures are reported through the flags.
inline BoundState make_state(const PotentialParams& p, const QuantumNumbers& q, double E) {
    p.validate();
    q.validate();
    detail::require(std::isfinite(E), "make_state: non-finite energy");
    BoundState st;
    st.E = E;
    st.b = p.b;
    st.quantum = q;
    st.eta = eta_of(p, E);
    st.angular = solve_angular(q, p, st.eta);
    st.epsilon_positive = std::abs(E) < p.M;
    st.epsilon = st.epsilon_positive ? epsilon_of(p, E) : 0.0;
    const double arg = lambda_arg(p, st.eta, st.angular.lambda);
    st.lambda_real = arg >= 0.0;
    if (!st.lambda_real) return st;
    st.Lambda = std::sqrt(arg);
    st.K = 0.5 + st.Lambda;
    st.sqrt_c = sqrt_c_signed(p, q, st.eta, st.angular.lambda);
    st.sqrt_c_positive = st.sqrt_c > 0.0;
    st.epsilon_positive = st.epsilon_positive && st.epsilon > 0.0;
    if (st.admissible()) st.norm = chi_norm(st);
    return st;
}

namespace detail {

inline void require_admissible(const BoundState& st, const char* what) {
    if (!st.admissible()) throw DomainError(ErrorKind::inadmissible, what);
}

// ln[s^{sqrt c} (1-s)^K] at s = e^{-r/b}
inline double log_envelope(const BoundState& st, double r) {
    const double x = r / st.b;
    return -st.sqrt_c * x + st.K * std::log(one_minus_exp_neg(x));
}

} // namespace detail

/// chi(r) in the Jacobi form.
inline double chi_eval(const BoundState& st, double r) {
    detail::require_admissible(st, "chi_eval: state is not admissible");
    detail::check_radius(st.b, r);
    const double s = std::exp(-r / st.b);
    const JacobiParams jp{2.0 * st.sqrt_c, 2.0 * st.K - 1.0, st.quantum.n_r};
    return st.norm * std::exp(detail::log_envelope(st, r)) * jacobi_poly(jp, 1.0 - 2.0 * s);
}

/// chi(r) through the terminating 2F1 form; same function as chi_eval.
inline double chi_eval_hypergeometric(const BoundState& st, double r) {
    detail::require_admissible(st, "chi_eval_hypergeometric: state is not admissible");
    detail::check_radius(st.b, r);
    const int n = st.quantum.n_r;
    const double sc = st.sqrt_c, s = std::exp(-r / st.b);
    const double pref = std::exp(log_gamma(n + 2.0 * sc + 1.0) - log_gamma(n + 1.0) - log_gamma(2.0 * sc + 1.0));
    const double f = hyp2f1_terminating(n, 2.0 * sc + 2.0 * st.K + n, 1.0 + 2.0 * sc, s);
    return st.norm * std::exp(detail::log_envelope(st, r)) * pref * f;
}

struct NuConsistencyReport {
    NuParams nu;
    double tau_prime = 0.0;
    bool tau_negative = false;
    double balance_lhs = 0.0; ///< lambda_bar from k + pi'
    double balance_rhs = 0.0; ///< -n tau' - n(n-1) sigma''/2
    double balance_residual = 0.0;
    bool balance_ok = false;
    double identity_residual = 0.0;
    bool identity_ok = false;

    bool passed() const { return tau_negative && balance_ok && identity_ok; }
};

/// Re-derives the reduction at the state's epsilon and checks branch
/// selection, the polynomial-solution condition and the c + a - b identity.
inline NuConsistencyReport nu_consistency(const PotentialParams& p, const QuantumNumbers& q, const BoundState& st,
                                          double tol = 1e-10) {
    NuConsistencyReport rep;
    const double lambda = st.angular.lambda;
    const double eta = st.eta;
    const double e2 = st.epsilon * st.epsilon, lc = lambda * p.C0;
    const double a = 0.25 + e2 + p.A * eta + p.alpha * eta * (p.alpha - 1.0) + lc;
    const double b = 2.0 * e2 + p.A * eta + 2.0 * lc - lambda;
    const double c = e2 + lc;
    rep.identity_residual = std::abs((c + a - b) - lambda_arg(p, eta, lambda));
    rep.identity_ok = rep.identity_residual <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    try {
        rep.nu = nu_params(p, eta, st.epsilon, lambda);
    } catch (const std::exception&) {
        return rep;
    }
    const double sc = std::sqrt(rep.nu.c_nu);
    const double sd = std::sqrt(rep.nu.c_nu + rep.nu.a_nu - rep.nu.b_nu);
    // tau(s) = tilde_tau + 2 pi = 1 + 2 sqrt(c) - 2 s [1 + sqrt(c) + sqrt(c + a - b)]
    rep.tau_prime = -2.0 * (1.0 + sc + sd);
    rep.tau_negative = rep.tau_prime < 0.0;
    const double n = q.n_r;
    rep.balance_lhs = rep.nu.lambda_bar;
    rep.balance_rhs = -n * rep.tau_prime + n * (n - 1.0); // sigma'' = -2
    rep.balance_residual = std::abs(rep.balance_lhs - rep.balance_rhs);
    rep.balance_ok = rep.balance_residual <= tol * std::max(1.0, std::abs(rep.balance_rhs));
    return rep;
}

} // namespace kgring
