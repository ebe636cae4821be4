#pragma once

// Energy scan over f(E) for every (n_r, N, m) cell, root refinement and
// admissibility classification; full wavefunction assembly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "angular.hpp"
#include "error.hpp"
#include "potential.hpp"
#include "radial.hpp"
#include "roots.hpp"

namespace kgring {

struct SpectrumRequest {
    PotentialParams params;
    int n_r_max = 0;
    int N_max = 0;
    int m_min = 0;
    int m_max = 0;
    /// Sub-interval of (-M, M); defaults to +-M(1 - 1e-9).
    std::optional<std::pair<double, double>> energy_window;
    int scan_points = 2001;
    double tol = 1e-12;

    std::pair<double, double> window() const {
        if (energy_window) return *energy_window;
        const double edge = params.M * (1.0 - 1e-9);
        return {-edge, edge};
    }

    void validate() const {
        params.validate();
        detail::require(n_r_max >= 0 && N_max >= 0, "SpectrumRequest: n_r_max and N_max must be non-negative");
        detail::require(m_min <= m_max, "SpectrumRequest: empty m range");
        detail::require(scan_points >= 3, "SpectrumRequest: scan_points must be >= 3");
        detail::require(tol > 0.0, "SpectrumRequest: tol must be positive");
        const auto [lo, hi] = window();
        detail::require(-params.M < lo && lo < hi && hi < params.M,
                        "SpectrumRequest: energy window must be a sub-interval of (-M, M)");
    }
};

struct Rejection {
    QuantumNumbers quantum;
    double E = 0.0;
    std::string reason;
    std::optional<BoundState> state; ///< closed-form fields at E when they exist
};

/// Scan sub-interval where f(E) could not be evaluated.
struct Exclusion {
    QuantumNumbers quantum;
    double E_lo = 0.0;
    double E_hi = 0.0;
    std::string reason;
};

struct RootDiagnostic {
    QuantumNumbers quantum;
    double E = 0.0;
    double residual = 0.0;
    int iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool accepted = false;
};

struct SpectrumResult {
    std::vector<BoundState> states;
    std::vector<Rejection> rejected;
    std::vector<Exclusion> excluded;
    std::vector<RootDiagnostic> diagnostics;
};

namespace detail {

inline auto cell_key(const QuantumNumbers& q, double E) { return std::tuple{q.m, q.N, q.n_r, E}; }

inline void solve_cell(const SpectrumRequest& req, const QuantumNumbers& q, SpectrumResult& out) {
    const PotentialParams& p = req.params;
    const auto [lo, hi] = req.window();
    const int n = req.scan_points;
    const double step = (hi - lo) / (n - 1);

    std::vector<double> E(n), f(n);
    std::vector<std::string> why(n);
    for (int i = 0; i < n; ++i) {
        E[i] = (i + 1 == n) ? hi : lo + i * step;
        try {
            f[i] = energy_residual(p, q, E[i]);
        } catch (const DomainError& err) {
            f[i] = std::numeric_limits<double>::quiet_NaN();
            why[i] = err.what();
        }
    }
    // merge consecutive failed points into logged exclusions
    for (int i = 0; i < n;) {
        if (!std::isnan(f[i])) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && std::isnan(f[j + 1])) ++j;
        out.excluded.push_back({q, E[i], E[j], why[i]});
        i = j + 1;
    }

    auto residual = [&](double x) { return energy_residual(p, q, x); };
    const double edge_tol = req.tol * p.M;
    const double f_tol = req.tol * p.M * p.M;

    auto classify = [&](double root, double fr, int iters, double blo, double bhi) {
        RootDiagnostic diag{q, root, fr, iters, blo, bhi, false};
        std::optional<BoundState> st;
        std::string reason;
        try {
            st = make_state(p, q, root);
            reason = st->rejection_reason();
        } catch (const DomainError& err) {
            reason = err.what();
        }
        if (reason.empty() && (root - lo <= edge_tol || hi - root <= edge_tol)) reason = reason_edge;
        if (reason.empty() && std::abs(fr) > f_tol) reason = "unconverged";
        if (reason.empty()) {
            diag.accepted = true;
            out.states.push_back(*st);
        } else {
            out.rejected.push_back({q, root, reason, st});
        }
        out.diagnostics.push_back(diag);
    };

    for (int i = 0; i < n; ++i) {
        if (std::isnan(f[i])) continue;
        if (f[i] == 0.0) {
            classify(E[i], 0.0, 0, E[i], E[i]);
            continue;
        }
        if (i + 1 < n && !std::isnan(f[i + 1]) && f[i + 1] != 0.0 && (f[i] < 0.0) != (f[i + 1] < 0.0)) {
            const RootResult r = brent_root(residual, E[i], E[i + 1], f[i], f[i + 1]);
            classify(r.x, r.fx, r.iterations, E[i], E[i + 1]);
        }
    }
}

} // namespace detail

inline SpectrumResult solve_states(const SpectrumRequest& req) {
    req.validate();
    SpectrumResult out;
    for (int m = req.m_min; m <= req.m_max; ++m)
        for (int N = 0; N <= req.N_max; ++N)
            for (int n_r = 0; n_r <= req.n_r_max; ++n_r) detail::solve_cell(req, {n_r, N, m}, out);

    std::stable_sort(out.states.begin(), out.states.end(), [](const BoundState& a, const BoundState& b) {
        return detail::cell_key(a.quantum, a.E) < detail::cell_key(b.quantum, b.E);
    });
    std::stable_sort(out.rejected.begin(), out.rejected.end(), [](const Rejection& a, const Rejection& b) {
        return detail::cell_key(a.quantum, a.E) < detail::cell_key(b.quantum, b.E);
    });
    return out;
}

/// Alpha in {0, 1}: the alpha(alpha-1) term drops and Lambda = sqrt(1/4 + lambda).
inline SpectrumResult hulthen_spectrum(const SpectrumRequest& req) {
    const double a = req.params.alpha;
    if (a != 0.0 && a != 1.0) throw DomainError(ErrorKind::misuse, "hulthen_spectrum: alpha must be 0 or 1");
    SpectrumResult res = solve_states(req);
    for (const BoundState& st : res.states)
        if (st.Lambda != std::sqrt(0.25 + st.angular.lambda))
            throw std::logic_error("hulthen_spectrum: Lambda differs from sqrt(1/4 + lambda)");
    return res;
}

/// beta = beta' = 0: zeta = |m| and lambda = l(l+1) with integer l = N + |m|.
inline SpectrumResult central_spectrum(const SpectrumRequest& req) {
    if (req.params.beta != 0.0 || req.params.beta_prime != 0.0)
        throw DomainError(ErrorKind::misuse, "central_spectrum: beta and beta' must vanish");
    SpectrumResult res = solve_states(req);
    for (const BoundState& st : res.states)
        if (st.angular.l_eff != st.quantum.N + std::abs(st.quantum.m))
            throw std::logic_error("central_spectrum: l_eff differs from N + |m|");
    return res;
}

/// psi(r, theta, phi) = chi(r)/r * Theta_N(cos theta) * e^{i m phi} / sqrt(2 pi).
inline std::complex<double> psi_eval(const BoundState& st, double r, double theta, double phi) {
    detail::require(theta > 0.0 && theta < std::numbers::pi, "psi_eval: theta must lie in (0, pi)");
    const double radial = chi_eval(st, r) / r;
    const double angular = theta_eval(st.angular, st.quantum.N, std::cos(theta));
    const double azimuth = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return radial * angular * azimuth * std::polar(1.0, st.quantum.m * phi);
}

} // namespace kgring
