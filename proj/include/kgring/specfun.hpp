#pragma once

// Special-function kernel: log-gamma, Jacobi polynomials with real
// parameters, terminating Gauss hypergeometric series, Gauss rules and a
// composite Gauss-Legendre integrator for endpoint-singular integrands.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include <math.h> // lgamma_r

#include <Eigen/Eigenvalues>

#include "error.hpp"

namespace kgring {

namespace detail {
// Extended accumulator for alternating power sums. __float128 arithmetic
// needs no libquadmath, only the compiler builtin type.
#if defined(__SIZEOF_FLOAT128__)
using wide_t = __float128;
#else
using wide_t = long double;
#endif
} // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    detail::require(x > 0.0 && std::isfinite(x), "log_gamma: argument must be positive and finite");
    int sign = 1;
    return ::lgamma_r(x, &sign);
}

/// ln[(x)_n] = ln Gamma(x+n) - ln Gamma(x), x > 0.
inline double log_pochhammer(double x, double n) { return log_gamma(x + n) - log_gamma(x); }

struct JacobiParams {
    double a = 0.0;
    double b = 0.0;
    int n = 0;

    bool valid() const { return a > -1.0 && b > -1.0 && n >= 0 && std::isfinite(a) && std::isfinite(b); }
};

/// P_n^{(a,b)}(x) by the three-term recurrence in degree.
inline double jacobi_poly(const JacobiParams& p, double x) {
    detail::require(p.valid(), "jacobi_poly: need a > -1, b > -1, n >= 0");
    using ld = long double;
    const ld a = p.a, b = p.b, xx = x;
    ld p0 = 1.0L;
    if (p.n == 0) return 1.0;
    ld p1 = (a - b) / 2 + (a + b + 2) * xx / 2;
    for (int k = 2; k <= p.n; ++k) {
        const ld s = 2 * k + a + b;
        const ld c1 = 2 * k * (k + a + b) * (s - 2);
        const ld c2 = (s - 1) * (a * a - b * b);
        const ld c3 = (s - 2) * (s - 1) * s;
        const ld c4 = 2 * (k + a - 1) * (k + b - 1) * s;
        const ld next = ((c2 + c3 * xx) * p1 - c4 * p0) / c1;
        p0 = p1;
        p1 = next;
    }
    return static_cast<double>(p1);
}

/// 2F1(-n, b; c; z) as the exact (n+1)-term sum.
///
/// Term ratios are accumulated in an extended type: near z = 1/2 the
/// power-basis terms of a degree-25 polynomial exceed the result by up to
/// seventeen orders of magnitude.
inline double hyp2f1_terminating(int n, double bparam, double cparam, double z) {
    detail::require(n >= 0, "hyp2f1_terminating: n must be non-negative");
    detail::require(std::isfinite(bparam) && std::isfinite(cparam) && std::isfinite(z),
                    "hyp2f1_terminating: non-finite argument");
    if (cparam <= 0.0 && cparam == std::floor(cparam) && -cparam < n)
        throw DomainError("hyp2f1_terminating: cparam is a pole within the summation range");
    using detail::wide_t;
    wide_t term = 1, sum = 1;
    const wide_t b = bparam, c = cparam, zz = z;
    for (int k = 0; k < n; ++k) {
        term *= (wide_t(k) - n) * (b + k) / ((c + k) * wide_t(k + 1)) * zz;
        sum += term;
    }
    return static_cast<double>(sum);
}

/// Jacobi value through the hypergeometric representation
/// P_n^{(a,b)}(x) = (a+1)_n / n! * 2F1(-n, a+b+n+1; a+1; (1-x)/2).
inline double jacobi_via_hyp2f1(const JacobiParams& p, double x) {
    detail::require(p.valid(), "jacobi_via_hyp2f1: need a > -1, b > -1, n >= 0");
    const double pref = std::exp(log_pochhammer(p.a + 1.0, p.n) - log_gamma(p.n + 1.0));
    return pref * hyp2f1_terminating(p.n, p.a + p.b + p.n + 1.0, p.a + 1.0, 0.5 * (1.0 - x));
}

// ---------------------------------------------------------------------------
// Quadrature

enum class RuleKind { legendre, jacobi };

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::pair<double, double> interval{-1.0, 1.0};

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double apply(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

namespace detail {

inline QuadratureRule map_rule(std::vector<double> x, std::vector<double> w, double lo, double hi,
                               double weight_degree) {
    const double half = 0.5 * (hi - lo);
    const double scale = std::pow(half, 1.0 + weight_degree);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = lo + half * (x[i] + 1.0);
        w[i] *= scale;
    }
    return {std::move(x), std::move(w), {lo, hi}};
}

inline QuadratureRule legendre_rule(int order, double lo, double hi) {
    const int n = order;
    // returns (P_n(z), P_n'(z))
    auto legendre = [n](double z) {
        double p1 = 1.0, p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        return std::pair{p1, n * (z * p1 - p2) / (z * z - 1.0)};
    };
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double dp = legendre(z).second;
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
    return map_rule(std::move(x), std::move(w), lo, hi, 0.0);
}

// Golub-Welsch on the monic Jacobi recurrence.
inline QuadratureRule jacobi_rule(int order, double a, double b, double lo, double hi) {
    require(a > -1.0 && b > -1.0, "gauss_rule: jacobi weight needs a > -1, b > -1");
    const int n = order;
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    const double ab = a + b;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double beta;
        if (k == 1)
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        sub(k - 1) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double log_mu0 = (ab + 1.0) * std::numbers::ln2 + log_gamma(a + 1.0) + log_gamma(b + 1.0) -
                           log_gamma(ab + 2.0);
    const double mu0 = std::exp(log_mu0);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        w[i] = mu0 * v * v;
    }
    return map_rule(std::move(x), std::move(w), lo, hi, ab);
}

} // namespace detail

/// Gauss rule of the given order on [lo, hi]. For RuleKind::jacobi the
/// weight is (1-y)^a (1+y)^b in the reference variable y in [-1, 1], so the
/// rule integrates f(x) against that weight mapped onto [lo, hi].
inline QuadratureRule gauss_rule(RuleKind kind, int order, std::pair<double, double> interval = {-1.0, 1.0},
                                 double a = 0.0, double b = 0.0) {
    detail::require(order >= 1, "gauss_rule: order must be >= 1");
    detail::require(interval.first < interval.second, "gauss_rule: empty interval");
    if (kind == RuleKind::legendre) return detail::legendre_rule(order, interval.first, interval.second);
    return detail::jacobi_rule(order, a, b, interval.first, interval.second);
}

struct IntegrateOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_rounds = 7;
    int panel_order = 20;
};

struct IntegrateResult {
    double value = 0.0;
    double estimate_change = 0.0;
    int rounds = 0;
    bool converged = false;
};

/// Composite Gauss-Legendre on [lo, hi] with panels graded geometrically
/// towards both endpoints. Each round adds grading levels and halves the
/// uniform panels; stops when two successive estimates agree.
template <class F>
IntegrateResult integrate(F&& f, double lo, double hi, const IntegrateOptions& opt = {}) {
    detail::require(lo < hi, "integrate: empty interval");
    const QuadratureRule ref = gauss_rule(RuleKind::legendre, opt.panel_order);
    auto on_panel = [&](double a, double b) {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) s += ref.weights[i] * f(mid + half * ref.nodes[i]);
        return s * half;
    };
    const double len = hi - lo;
    auto estimate = [&](int levels, int split) {
        // breakpoints in the unit variable: 0, 2^-L, ..., 1/4, 1/2, ..., 1 - 2^-L, 1
        std::vector<double> t{0.0};
        for (int k = levels; k >= 2; --k) t.push_back(std::ldexp(1.0, -k));
        t.push_back(0.5);
        for (int k = 2; k <= levels; ++k) t.push_back(1.0 - std::ldexp(1.0, -k));
        t.push_back(1.0);
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            const double a = lo + len * t[i], b = (i + 2 == t.size()) ? hi : lo + len * t[i + 1];
            const double step = (b - a) / split;
            for (int j = 0; j < split; ++j) s += on_panel(a + j * step, (j + 1 == split) ? b : a + (j + 1) * step);
        }
        return s;
    };
    IntegrateResult r;
    double prev = estimate(8, 1);
    for (int round = 1; round <= opt.max_rounds; ++round) {
        const double cur = estimate(8 + 8 * round, 1 << round);
        r.value = cur;
        r.estimate_change = std::abs(cur - prev);
        r.rounds = round;
        if (r.estimate_change <= opt.rel_tol * std::abs(cur) + opt.abs_tol) {
            r.converged = true;
            break;
        }
        prev = cur;
    }
    return r;
}

} // namespace kgring
