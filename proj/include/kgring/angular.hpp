#pragma once

// Polar-angle equation in x = cos(theta):
//   Theta'' - 2x/(1-x^2) Theta' + [lambda(1-x^2) - m^2 - eta(beta' + beta x)]/(1-x^2)^2 Theta = 0
// quantized by lambda = (N + zeta)(N + zeta + 1).

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "potential.hpp"
#include "specfun.hpp"

namespace kgring {

struct QuantumNumbers {
    int n_r = 0; ///< radial node count
    int N = 0;   ///< angular node count
    int m = 0;   ///< magnetic number

    void validate() const {
        detail::require(n_r >= 0, "QuantumNumbers: n_r must be non-negative");
        detail::require(N >= 0, "QuantumNumbers: N must be non-negative");
    }

    auto operator<=>(const QuantumNumbers&) const = default;
};

struct AngularSolution {
    double eta = 1.0;
    int N = 0;
    double u = 0.0;
    double zeta = 0.0;
    double lambda = 0.0;
    double l_eff = 0.0;
    double B = 0.0; ///< exponent sum (B+C)/2 at x = 1, (B-C)/2 at x = -1
    double C = 0.0; ///< signed, B*C = eta*beta/2
    double norm = 0.0;
};

namespace detail {

inline double log_angular_norm(double B, double C, int N) {
    require(N >= 0, "angular_norm: N must be non-negative");
    const double g1 = N + B + C + 1.0, g2 = N + B - C + 1.0;
    require(g1 > 0.0 && g2 > 0.0 && N + 2.0 * B + 1.0 > 0.0, "angular_norm: non-positive gamma argument");
    return 0.5 * (std::log(2.0 * N + 2.0 * B + 1.0) + log_gamma(N + 1.0) + log_gamma(N + 2.0 * B + 1.0) -
                  (2.0 * B + 1.0) * std::numbers::ln2 - log_gamma(g1) - log_gamma(g2));
}

} // namespace detail

/// C_N such that the integral of Theta_N^2 over x in [-1, 1] is one.
inline double angular_norm(const AngularSolution& sol, int N) {
    return std::exp(detail::log_angular_norm(sol.B, sol.C, N));
}

inline AngularSolution solve_angular(const QuantumNumbers& q, const PotentialParams& p, double eta) {
    q.validate();
    detail::require(eta > 0.0 && std::isfinite(eta), "solve_angular: eta must be positive");
    const double s = double(q.m) * q.m + eta * p.beta_prime;
    detail::require(s >= 0.0, "solve_angular: m^2 + eta beta' must be non-negative");
    const double disc = s * s - eta * eta * p.beta * p.beta;
    if (disc < 0.0) throw DomainError(ErrorKind::ring_too_strong, "solve_angular: ring term too strong (u^2 < 0)");

    AngularSolution sol;
    sol.eta = eta;
    sol.N = q.N;
    sol.u = std::sqrt(disc);
    sol.zeta = std::sqrt(0.5 * (s + sol.u));
    sol.B = sol.zeta;
    // sqrt((s - u)/2) cancels badly for small beta; B*C = eta*beta/2 does not.
    sol.C = sol.B > 0.0 ? 0.5 * eta * p.beta / sol.B : 0.0;
    sol.l_eff = q.N + sol.zeta;
    sol.lambda = sol.l_eff * (sol.l_eff + 1.0);
    sol.norm = angular_norm(sol, q.N);
    return sol;
}

/// Theta_N(x) = C_N (1-x)^{(B+C)/2} (1+x)^{(B-C)/2} P_N^{(B+C, B-C)}(x).
inline double theta_eval(const AngularSolution& sol, int N, double x) {
    detail::require(std::abs(x) <= 1.0, "theta_eval: |x| must not exceed 1");
    const double a = sol.B + sol.C, b = sol.B - sol.C;
    const double norm = (N == sol.N) ? sol.norm : angular_norm(sol, N);
    const double envelope = std::pow(1.0 - x, 0.5 * a) * std::pow(1.0 + x, 0.5 * b);
    return norm * envelope * jacobi_poly({a, b, N}, x);
}

} // namespace kgring
