#pragma once

// Brute-force checks that do not use the closed forms:
//  * radial: the approximated radial equation discretized on a uniform grid
//    in t = ln r (chi = e^{t/2} u), giving the symmetric pencil
//        -u'' + [r^2 V(r) + 1/4] u = (E^2 - M^2) r^2 u,
//    solved as a nonlinear eigenproblem in E by Sturm counting;
//  * angular: cell-centred finite volumes for
//        -(sin t Theta')' + q(t)/sin t Theta = lambda sin t Theta;
//  * quadrature normalization and finite-difference ODE residuals.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "angular.hpp"
#include "error.hpp"
#include "potential.hpp"
#include "radial.hpp"
#include "roots.hpp"
#include "specfun.hpp"

namespace kgring {

/// Symmetric tridiagonal pencil A - x W with diagonal W > 0.
struct TridiagPencil {
    std::vector<double> diag;    ///< A_ii
    std::vector<double> off;     ///< A_{i,i+1}, size n-1
    std::vector<double> weight;  ///< W_ii

    std::size_t size() const { return diag.size(); }

    /// Number of eigenvalues of A u = mu W u strictly below x (Sylvester
    /// inertia of the LDL^T factorization of A - x W).
    int count_below(double x) const {
        int count = 0;
        double q = 1.0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            q = diag[i] - x * weight[i] - (i > 0 ? off[i - 1] * off[i - 1] / q : 0.0);
            if (q == 0.0) q = -std::numeric_limits<double>::min();
            if (q < 0.0) ++count;
        }
        return count;
    }

    /// k-th smallest eigenvalue (0-based) by bisection on count_below.
    double eigenvalue(int k, double rel_tol = 1e-15) const {
        double lo = -1.0, hi = 1.0;
        while (count_below(lo) > k) lo *= 2.0;
        while (count_below(hi) <= k) hi *= 2.0;
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (count_below(mid) > k)
                hi = mid;
            else
                lo = mid;
            if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
        }
        return 0.5 * (lo + hi);
    }

    /// Eigenvector for an eigenvalue near `shift` by inverse iteration.
    std::vector<double> eigenvector(double shift, int iterations = 4) const;
};

namespace detail {

// Solves T y = rhs for a general tridiagonal T (sub, main, super) with
// partial pivoting; tiny pivots are nudged so inverse iteration can run
// at an exact eigenvalue.
inline std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> main,
                                             std::vector<double> super, std::vector<double> rhs) {
    const std::size_t n = main.size();
    std::vector<double> super2(n, 0.0);
    const double tiny = 1e-300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(main[i]) >= std::abs(sub[i])) {
            if (main[i] == 0.0) main[i] = tiny;
            const double f = sub[i] / main[i];
            main[i + 1] -= f * super[i];
            rhs[i + 1] -= f * rhs[i];
            sub[i] = 0.0;
        } else {
            // swap rows i and i+1
            const double f = main[i] / sub[i];
            main[i] = sub[i];
            const double t = main[i + 1];
            main[i + 1] = super[i] - f * t;
            super[i] = t;
            if (i + 2 < n) {
                super2[i] = super[i + 1];
                super[i + 1] = -f * super2[i];
            }
            std::swap(rhs[i], rhs[i + 1]);
            rhs[i + 1] -= f * rhs[i];
            sub[i] = 0.0;
        }
    }
    if (main[n - 1] == 0.0) main[n - 1] = tiny;
    std::vector<double> y(n);
    for (std::size_t k = n; k-- > 0;) {
        double v = rhs[k];
        if (k + 1 < n) v -= super[k] * y[k + 1];
        if (k + 2 < n) v -= super2[k] * y[k + 2];
        y[k] = v / main[k];
    }
    return y;
}

inline int count_sign_changes(std::span<const double> v, double rel_floor = 1e-9) {
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    const double floor = rel_floor * vmax;
    int changes = 0, last = 0;
    for (double x : v) {
        if (std::abs(x) <= floor) continue;
        const int s = x > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

} // namespace detail

inline std::vector<double> TridiagPencil::eigenvector(double shift, int iterations) const {
    const std::size_t n = size();
    std::vector<double> sub(off), super(off), main(n), u(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) main[i] = diag[i] - shift * weight[i];
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = weight[i] * u[i];
        u = detail::solve_tridiagonal(sub, main, super, std::move(rhs));
        double norm = 0.0;
        for (double x : u) norm = std::max(norm, std::abs(x));
        for (double& x : u) x /= norm;
    }
    return u;
}

// ---------------------------------------------------------------------------
// Radial oracle

enum class Centrifugal {
    approximated, ///< (1/b^2)[C0 + e^{-r/b}/(1-e^{-r/b})^2], the equation the closed forms solve
    exact,        ///< 1/r^2, diagnostic only
};

struct RadialOracleConfig {
    double r_min = 0.0;     ///< 0 selects b * max(1e-12, exp(-15/Lambda_ode))
    double r_max = 0.0;     ///< 0 selects max(40 b, 20 b / sqrt(c_estimate))
    int grid_size = 20000;  ///< intervals of the fine grid; the coarse grid has half
    double outer_tol = 1e-14; ///< bracket width in E, relative to M
    int max_outer_iter = 200;
    bool richardson = true;
    Centrifugal centrifugal = Centrifugal::approximated;

    void validate() const {
        detail::require(grid_size >= 100, "RadialOracleConfig: grid_size must be >= 100");
        detail::require(r_min >= 0.0 && r_max >= 0.0, "RadialOracleConfig: negative box");
        detail::require(r_min == 0.0 || r_max == 0.0 || r_min < r_max, "RadialOracleConfig: need r_min < r_max");
        detail::require(outer_tol > 0.0 && max_outer_iter > 0, "RadialOracleConfig: bad outer iteration settings");
    }
};

struct OracleReport {
    double analytic_E = 0.0;
    double oracle_E = 0.0;
    double E_coarse = 0.0;
    double E_fine = 0.0;
    double rel_diff = 0.0;
    int node_count = -1;
    double residual_norm = 0.0;
    bool converged = false;
    bool node_mismatch = false;
    std::string note;
};

namespace detail {

struct RadialProblem {
    const PotentialParams& p;
    int n_r;
    const std::function<double(double)>& lambda_fn;
    double r_min, r_max;
    Centrifugal centrifugal;

    TridiagPencil pencil(double E, int intervals) const {
        const double eta = eta_of(p, E);
        const double lambda = lambda_fn(E);
        const double t0 = std::log(r_min), t1 = std::log(r_max);
        const double h = (t1 - t0) / intervals;
        const std::size_t n = intervals - 1;
        TridiagPencil pen;
        pen.diag.resize(n);
        pen.weight.resize(n);
        pen.off.assign(n - 1, -1.0 / (h * h));
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::exp(t0 + static_cast<double>(i + 1) * h);
            const double cent = centrifugal == Centrifugal::approximated ? centrifugal_approx(p.b, p.C0, r)
                                                                         : 1.0 / (r * r);
            const double V = eta * manning_rosen_shape(p, r) / (p.b * p.b) + lambda * cent;
            const double r2 = r * r;
            pen.diag[i] = 2.0 / (h * h) + r2 * V + 0.25;
            pen.weight[i] = r2;
        }
        return pen;
    }

    // true when E^2 - M^2 lies above the n_r-th eigenvalue of H(E)
    bool above(double E, int intervals) const {
        return pencil(E, intervals).count_below(E * E - p.M * p.M) > n_r;
    }
};

} // namespace detail

/// Solves mu_{n_r}(E) = E^2 - M^2 for the discretized radial operator near
/// E_guess. analytic_E in the report is E_guess.
inline OracleReport radial_oracle(const PotentialParams& p, const QuantumNumbers& q,
                                  const std::function<double(double)>& lambda_fn, double E_guess,
                                  const RadialOracleConfig& cfg = {}) {
    p.validate();
    q.validate();
    cfg.validate();
    detail::require(std::abs(E_guess) < p.M, "radial_oracle: need |E_guess| < M");
    OracleReport rep;
    rep.analytic_E = E_guess;

    const double eta0 = eta_of(p, E_guess);
    const double kappa = eta0 * p.alpha * (p.alpha - 1.0) + lambda_fn(E_guess);
    if (0.25 + kappa <= 0.0) {
        rep.note = "origin coefficient below -1/4; no regular solution";
        return rep;
    }
    const double lambda_ode = std::sqrt(0.25 + kappa);
    const double r_min = cfg.r_min > 0.0 ? cfg.r_min : p.b * std::max(1e-12, std::exp(-15.0 / lambda_ode));
    double r_max = cfg.r_max;
    if (r_max == 0.0) {
        const double c_est = std::max(0.0, p.b * p.b * (p.M - E_guess) * (p.M + E_guess) + lambda_fn(E_guess) * p.C0);
        r_max = c_est > 0.0 ? std::max(40.0 * p.b, 20.0 * p.b / std::sqrt(c_est)) : 40.0 * p.b;
    }
    const detail::RadialProblem prob{p, q.n_r, lambda_fn, r_min, r_max, cfg.centrifugal};

    const double lo_lim = -p.M * (1.0 - 1e-12), hi_lim = p.M * (1.0 - 1e-12);
    auto solve_on = [&](int intervals, double& E_out) {
        double step = 1e-4 * p.M;
        double lo = std::max(lo_lim, E_guess - step), hi = std::min(hi_lim, E_guess + step);
        bool a_lo = prob.above(lo, intervals), a_hi = prob.above(hi, intervals);
        while (a_lo == a_hi) {
            if (lo <= lo_lim && hi >= hi_lim) return false;
            step *= 2.0;
            lo = std::max(lo_lim, E_guess - step);
            hi = std::min(hi_lim, E_guess + step);
            a_lo = prob.above(lo, intervals);
            a_hi = prob.above(hi, intervals);
        }
        E_out = bisect_predicate([&](double E) { return prob.above(E, intervals); }, lo, hi, cfg.outer_tol * p.M,
                                 cfg.max_outer_iter);
        return true;
    };

    const int fine = cfg.grid_size;
    const int coarse = fine / 2;
    if (!solve_on(fine, rep.E_fine)) {
        rep.note = "no bracket near the guess";
        return rep;
    }
    if (cfg.richardson) {
        if (!solve_on(coarse, rep.E_coarse)) {
            rep.note = "no bracket on the coarse grid";
            return rep;
        }
        // the coarse grid has spacing exactly twice the fine one
        const double ratio = double(fine) / coarse;
        const double w = ratio * ratio;
        rep.oracle_E = (w * rep.E_fine - rep.E_coarse) / (w - 1.0);
    } else {
        rep.E_coarse = rep.E_fine;
        rep.oracle_E = rep.E_fine;
    }
    rep.converged = true;
    rep.rel_diff = std::abs(rep.analytic_E - rep.oracle_E) / p.M;

    const TridiagPencil pen = prob.pencil(rep.E_fine, fine);
    const double shift = rep.E_fine * rep.E_fine - p.M * p.M;
    const std::vector<double> u = pen.eigenvector(shift);
    rep.node_count = detail::count_sign_changes(u);
    rep.node_mismatch = rep.node_count != q.n_r;

    // relative residual of (A - mu W) u with the Rayleigh quotient mu
    double uau = 0.0, uwu = 0.0;
    std::vector<double> au(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        au[i] = pen.diag[i] * u[i];
        if (i > 0) au[i] += pen.off[i - 1] * u[i - 1];
        if (i + 1 < u.size()) au[i] += pen.off[i] * u[i + 1];
        uau += u[i] * au[i];
        uwu += u[i] * pen.weight[i] * u[i];
    }
    const double mu = uau / uwu;
    double res2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double ri = au[i] - mu * pen.weight[i] * u[i];
        res2 += ri * ri;
        ref2 += au[i] * au[i];
    }
    rep.residual_norm = std::sqrt(res2 / ref2);
    return rep;
}

/// Oracle run with lambda(E) taken from the angular quantization.
inline OracleReport radial_oracle(const PotentialParams& p, const QuantumNumbers& q, double E_guess,
                                  const RadialOracleConfig& cfg = {}) {
    const std::function<double(double)> lambda_fn = [&](double E) {
        return solve_angular(q, p, eta_of(p, E)).lambda;
    };
    return radial_oracle(p, q, lambda_fn, E_guess, cfg);
}

// ---------------------------------------------------------------------------
// Angular oracle

struct AngularOracleResult {
    double lambda_numeric = 0.0;
    double lambda_coarse = 0.0;
    double lambda_fine = 0.0;
    double lambda_analytic = 0.0;
    double rel_diff = 0.0; ///< |numeric - analytic| / max(1, |analytic|)
};

namespace detail {

inline TridiagPencil angular_pencil(const PotentialParams& p, int m, double eta, int cells) {
    const double h = std::numbers::pi / cells;
    TridiagPencil pen;
    pen.diag.assign(cells, 0.0);
    pen.weight.resize(cells);
    pen.off.resize(cells - 1);
    for (int j = 0; j < cells; ++j) {
        const double th = (j + 0.5) * h;
        const double st = std::sin(th);
        const double q = double(m) * m + eta * (p.beta_prime + p.beta * std::cos(th));
        pen.diag[j] += q / st;
        pen.weight[j] = st;
        if (j + 1 < cells) {
            const double flux = std::sin((j + 1) * h) / (h * h); // face between cells j and j+1
            pen.diag[j] += flux;
            pen.diag[j + 1] += flux;
            pen.off[j] = -flux;
        }
    }
    return pen;
}

} // namespace detail

/// (N+1)-th eigenvalue of the polar-angle operator from grids of
/// `grid_size` and 2*grid_size cells, Richardson-combined.
inline AngularOracleResult angular_oracle(const PotentialParams& p, int m, double eta, int N, int grid_size = 2000) {
    detail::require(N >= 0, "angular_oracle: N must be non-negative");
    detail::require(grid_size >= 16, "angular_oracle: grid_size too small");
    const AngularSolution ang = solve_angular({0, N, m}, p, eta); // throws on u^2 < 0
    AngularOracleResult res;
    res.lambda_analytic = ang.lambda;
    res.lambda_coarse = detail::angular_pencil(p, m, eta, grid_size).eigenvalue(N);
    res.lambda_fine = detail::angular_pencil(p, m, eta, 2 * grid_size).eigenvalue(N);
    res.lambda_numeric = (4.0 * res.lambda_fine - res.lambda_coarse) / 3.0;
    res.rel_diff = std::abs(res.lambda_numeric - res.lambda_analytic) / std::max(1.0, std::abs(res.lambda_analytic));
    return res;
}

// ---------------------------------------------------------------------------
// Quadrature and residual checks

/// |integral of chi^2 dr - 1|, integrated in s = e^{-r/b} as b * int chi^2/s ds.
/// The box is cut where the tail e^{-2 sqrt(c) r/b} drops below 1e-14.
inline double normalization_check(const BoundState& st) {
    detail::require_admissible(st, "normalization_check: state is not admissible");
    const double r_max = st.b * std::log(1e14) / (2.0 * st.sqrt_c);
    const double s_min = std::exp(-r_max / st.b);
    auto integrand = [&](double s) {
        const double r = -st.b * std::log(s);
        if (r / st.b < min_reduced_radius) return 0.0;
        const double chi = chi_eval(st, r);
        return st.b * chi * chi / s;
    };
    const IntegrateResult ir = integrate(integrand, s_min, 1.0, {.rel_tol = 1e-13});
    return std::abs(ir.value - 1.0);
}

/// Max over the sample radii of |chi'' + k(r) chi| / (largest term), with
/// chi'' from fourth-order central differences and one Richardson step.
inline double ode_residual(const PotentialParams& p, const BoundState& st, std::span<const double> radii) {
    detail::require_admissible(st, "ode_residual: state is not admissible");
    auto second = [&](double r, double h) {
        const double f0 = chi_eval(st, r);
        const double fp1 = chi_eval(st, r + h), fm1 = chi_eval(st, r - h);
        const double fp2 = chi_eval(st, r + 2 * h), fm2 = chi_eval(st, r - 2 * h);
        return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    };
    double worst = 0.0;
    for (double r : radii) {
        detail::require(r > 0.0, "ode_residual: radii must be positive");
        const double h = 1e-2 * std::min(p.b, r);
        const double d2 = (64.0 * second(r, 0.5 * h) - second(r, h)) / 63.0;
        const double chi = chi_eval(st, r);
        const double t_energy = (st.E * st.E - p.M * p.M) * chi;
        const double t_pot = -st.eta * manning_rosen_shape(p, r) / (p.b * p.b) * chi;
        const double t_cent = -st.angular.lambda * centrifugal_approx(p.b, p.C0, r) * chi;
        const double scale = std::max({std::abs(d2), std::abs(t_energy), std::abs(t_pot), std::abs(t_cent)});
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(d2 + t_energy + t_pot + t_cent) / scale);
    }
    return worst;
}

} // namespace kgring
