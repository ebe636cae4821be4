#pragma once

// Acceptance checks 1-9. Each returns one CriterionResult; passing
// requires the metric within its threshold and the runtime within budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "angular.hpp"
#include "oracle.hpp"
#include "potential.hpp"
#include "radial.hpp"
#include "spectrum.hpp"
#include "specfun.hpp"

namespace kgring::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double metric = 0.0;    ///< worst observed value of the checked quantity
    double threshold = 0.0;
    double seconds = 0.0;
    double time_limit = 0.0;
    std::string detail;
};

struct Options {
    double oracle_tol = 1e-6; ///< criterion 3 relative energy gate
};

namespace detail {

using clock = std::chrono::steady_clock;

inline CriterionResult timed(int id, std::string name, double threshold, double time_limit,
                             const std::function<bool(CriterionResult&)>& body) {
    CriterionResult res;
    res.id = id;
    res.name = std::move(name);
    res.threshold = threshold;
    res.time_limit = time_limit;
    const auto t0 = clock::now();
    bool ok = false;
    try {
        ok = body(res);
    } catch (const std::exception& e) {
        res.detail = std::string("exception: ") + e.what();
        ok = false;
    }
    res.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    res.passed = ok && res.seconds < time_limit;
    if (ok && !res.passed) res.detail += (res.detail.empty() ? "" : "; ") + std::string("over time budget");
    return res;
}

inline PotentialParams make_params(double alpha, double A, double C0, double beta = 0.0, double beta_prime = 0.0) {
    PotentialParams p;
    p.alpha = alpha;
    p.A = A;
    p.C0 = C0;
    p.beta = beta;
    p.beta_prime = beta_prime;
    return p;
}

struct GridCase {
    PotentialParams params;
    std::vector<BoundState> states;
};

// criterion-3 parameter grid, m = 0, N <= 1, n_r <= 1
inline std::vector<GridCase> acceptance_grid() {
    std::vector<GridCase> out;
    for (double alpha : {1.0, 2.0})
        for (double A : {2.0, 8.0, 40.0})
            for (double C0 : {0.0, 1.0 / 12.0}) {
                SpectrumRequest req;
                req.params = make_params(alpha, A, C0);
                req.n_r_max = 1;
                req.N_max = 1;
                out.push_back({req.params, solve_states(req).states});
            }
    return out;
}

inline std::vector<double> sample_radii(double b) {
    std::vector<double> r(50);
    for (int i = 0; i < 50; ++i) r[i] = b * (0.1 + (20.0 - 0.1) * i / 49.0);
    return r;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

} // namespace detail

inline CriterionResult criterion1() {
    return detail::timed(1, "reference Hulthen root", 1e-10, 1.0, [](CriterionResult& res) {
        SpectrumRequest req;
        req.params = detail::make_params(1.0, 2.0, 0.0);
        const SpectrumResult out = solve_states(req);
        if (out.states.size() != 1) {
            res.metric = INFINITY;
            res.detail = "admissible states: " + std::to_string(out.states.size());
            return false;
        }
        res.metric = std::abs(out.states[0].E - (-1.0 + std::sqrt(7.0)) / 4.0);
        return res.metric <= res.threshold;
    });
}

inline CriterionResult criterion2() {
    return detail::timed(2, "spurious-root rejection", 1e-10, 1.0, [](CriterionResult& res) {
        bool ok = true;
        const double root = std::sqrt(3.0) / 2.0;
        for (double alpha : {0.0, 1.0}) {
            SpectrumRequest req;
            req.params = detail::make_params(alpha, 0.0, 0.0);
            const SpectrumResult out = solve_states(req);
            ok = ok && out.states.empty() && out.rejected.size() == 2;
            for (const Rejection& r : out.rejected) {
                ok = ok && r.reason == reason_sqrt_c;
                res.metric = std::max(res.metric, std::abs(std::abs(r.E) - root));
            }
            if (out.rejected.size() == 2) ok = ok && out.rejected[0].E < 0.0 && out.rejected[1].E > 0.0;
        }
        return ok && res.metric <= res.threshold;
    });
}

inline CriterionResult criterion3(const std::vector<detail::GridCase>& grid, const Options& opt = {}) {
    return detail::timed(3, "analytic vs radial oracle", opt.oracle_tol, 60.0, [&](CriterionResult& res) {
        int checked = 0, node_fail = 0, unconfirmed = 0;
        for (const auto& gc : grid)
            for (const BoundState& st : gc.states) {
                const OracleReport rep = radial_oracle(gc.params, st.quantum, st.E);
                ++checked;
                if (!rep.converged) {
                    ++unconfirmed;
                    continue;
                }
                if (rep.node_mismatch) ++node_fail;
                res.metric = std::max(res.metric, rep.rel_diff);
            }
        res.detail = std::to_string(checked) + " states, " + std::to_string(node_fail) + " node mismatches, " +
                     std::to_string(unconfirmed) + " unconfirmed";
        return checked > 0 && node_fail == 0 && unconfirmed == 0 && res.metric <= res.threshold;
    });
}

inline CriterionResult criterion4() {
    return detail::timed(4, "angular quantization vs finite volumes", 1e-5, 10.0, [](CriterionResult& res) {
        int checked = 0;
        auto run = [&](const PotentialParams& p, int m, double eta) {
            for (int N = 0; N <= 2; ++N) {
                res.metric = std::max(res.metric, angular_oracle(p, m, eta, N, 2000).rel_diff);
                ++checked;
            }
        };
        for (int m = 0; m <= 2; ++m) run(detail::make_params(1.0, 0.0, 0.0), m, 1.8);
        run(detail::make_params(1.0, 0.0, 0.0, 0.4, 0.5), 1, 1.8);
        res.detail = std::to_string(checked) + " eigenvalues";
        return res.metric <= res.threshold;
    });
}

/// Largest |int Theta_N Theta_K dx - delta_NK| for N, K <= n_max.
inline double angular_orthonormality_error(const AngularSolution& s, int n_max) {
    const double a = s.B + s.C, b = s.B - s.C;
    const QuadratureRule rule = gauss_rule(RuleKind::jacobi, 2 * n_max + 8, {-1.0, 1.0}, a, b);
    double worst = 0.0;
    for (int N = 0; N <= n_max; ++N)
        for (int K = N; K <= n_max; ++K) {
            const double cn = angular_norm(s, N), ck = angular_norm(s, K);
            const double v =
                rule.apply([&](double x) { return cn * ck * jacobi_poly({a, b, N}, x) * jacobi_poly({a, b, K}, x); });
            worst = std::max(worst, std::abs(v - (N == K ? 1.0 : 0.0)));
        }
    return worst;
}

inline CriterionResult criterion5(const std::vector<detail::GridCase>& grid) {
    return detail::timed(5, "normalization", 1e-8, 10.0, [&](CriterionResult& res) {
        double radial = 0.0, angular = 0.0;
        int count = 0;
        for (const auto& gc : grid)
            for (const BoundState& st : gc.states) {
                radial = std::max(radial, normalization_check(st));
                ++count;
            }
        for (int m = 0; m <= 2; ++m)
            for (const PotentialParams& p :
                 {detail::make_params(1.0, 0.0, 0.0), detail::make_params(1.0, 0.0, 0.0, 0.4, 0.5),
                  detail::make_params(1.0, 0.0, 0.0, -0.3, 1.2)})
                angular = std::max(angular, angular_orthonormality_error(solve_angular({0, 0, m}, p, 1.8), 5));
        res.metric = std::max(radial, angular);
        res.detail = "radial " + detail::fmt(radial) + " over " + std::to_string(count) + " states, angular " +
                     detail::fmt(angular);
        return count > 0 && res.metric <= res.threshold;
    });
}

inline CriterionResult criterion6() {
    return detail::timed(6, "limit consistency", 1e-12, 5.0, [](CriterionResult& res) {
        bool ok = true;
        double spectra = 0.0, zeta = 0.0;
        for (double A : {2.0, 8.0, 40.0})
            for (double C0 : {0.0, 1.0 / 12.0}) {
                SpectrumRequest req;
                req.n_r_max = 2;
                req.N_max = 1;
                req.m_min = -1;
                req.m_max = 1;
                req.params = detail::make_params(0.0, A, C0);
                const SpectrumResult a0 = hulthen_spectrum(req);
                req.params.alpha = 1.0;
                const SpectrumResult a1 = hulthen_spectrum(req);
                if (a0.states.size() != a1.states.size()) {
                    ok = false;
                    continue;
                }
                for (std::size_t i = 0; i < a0.states.size(); ++i)
                    spectra = std::max(spectra, std::abs(a0.states[i].E - a1.states[i].E));
            }
        for (int m = -4; m <= 4; ++m)
            for (int N = 0; N <= 4; ++N)
                for (double eta : {0.2, 1.0, 1.9}) {
                    const AngularSolution s = solve_angular({0, N, m}, detail::make_params(1.0, 0.0, 0.0), eta);
                    zeta = std::max(zeta, std::abs(s.zeta - std::abs(m)));
                    ok = ok && s.l_eff == std::round(s.l_eff);
                }
        for (double b : {0.5, 1.0, 3.0})
            for (double r : {1e-3, 0.1, 0.7, 2.0, 15.0}) {
                const double s = std::exp(-r / b), d = -std::expm1(-r / b);
                ok = ok && centrifugal_approx(b, 0.0, r) == (s / (d * d)) / (b * b);
            }
        res.metric = spectra;
        res.detail = "alpha 0/1 gap " + detail::fmt(spectra) + ", zeta gap " + detail::fmt(zeta);
        return ok && spectra <= 1e-12 && zeta <= 1e-14;
    });
}

inline CriterionResult criterion7(const std::vector<detail::GridCase>& grid) {
    return detail::timed(7, "closed-form ODE residual", 1e-6, 10.0, [&](CriterionResult& res) {
        double perturbed_min = INFINITY;
        int count = 0;
        for (const auto& gc : grid)
            for (const BoundState& st : gc.states) {
                const auto r = detail::sample_radii(gc.params.b);
                res.metric = std::max(res.metric, ode_residual(gc.params, st, r));
                BoundState off = st;
                off.E += 1e-3;
                off.eta = eta_of(gc.params, off.E);
                perturbed_min = std::min(perturbed_min, ode_residual(gc.params, off, r));
                ++count;
            }
        res.detail = std::to_string(count) + " states, smallest perturbed residual " + detail::fmt(perturbed_min);
        return count > 0 && res.metric <= res.threshold && perturbed_min > 1e-4;
    });
}

inline CriterionResult criterion8() {
    return detail::timed(8, "Jacobi recurrence vs terminating 2F1", 1e-12, 5.0, [](CriterionResult& res) {
        std::mt19937_64 rng(20240607);
        std::uniform_real_distribution<double> par(-0.9, 10.0), arg(-1.0, 1.0);
        std::uniform_int_distribution<int> deg(0, 25);
        for (int i = 0; i < 20000; ++i) {
            const JacobiParams p{par(rng), par(rng), deg(rng)};
            const double x = arg(rng);
            const double r = jacobi_poly(p, x), h = jacobi_via_hyp2f1(p, x);
            // magnitude floor at 1e-3 of the larger endpoint value (the sup-norm when max(a, b) >= -1/2)
            const double floor = 1e-3 * std::max(std::abs(jacobi_poly(p, 1.0)), std::abs(jacobi_poly(p, -1.0)));
            res.metric = std::max(res.metric, std::abs(r - h) / std::max(std::abs(r), floor));
        }
        res.detail = "20000 samples, n <= 25";
        return res.metric <= res.threshold;
    });
}

inline CriterionResult criterion9(const std::vector<detail::GridCase>& grid) {
    return detail::timed(9, "NU balance and branch", 1e-10, 2.0, [&](CriterionResult& res) {
        bool ok = true;
        int count = 0;
        for (const auto& gc : grid)
            for (const BoundState& st : gc.states) {
                const NuConsistencyReport rep = nu_consistency(gc.params, st.quantum, st, res.threshold);
                res.metric = std::max(res.metric, rep.balance_residual / std::max(1.0, std::abs(rep.balance_rhs)));
                ok = ok && rep.passed();
                ++count;
            }
        res.detail = std::to_string(count) + " states";
        return count > 0 && ok;
    });
}

/// Runs the selected criteria (ids 1-9) in order.
inline std::vector<CriterionResult> run_suite(const std::vector<int>& ids, const Options& opt = {}) {
    std::vector<detail::GridCase> grid;
    const bool needs_grid = std::any_of(ids.begin(), ids.end(), [](int i) { return i == 3 || i == 5 || i == 7 || i == 9; });
    double grid_seconds = 0.0;
    if (needs_grid) {
        const auto t0 = detail::clock::now();
        grid = detail::acceptance_grid();
        grid_seconds = std::chrono::duration<double>(detail::clock::now() - t0).count();
    }
    std::vector<CriterionResult> out;
    for (int id : ids) {
        CriterionResult r;
        switch (id) {
            case 1: r = criterion1(); break;
            case 2: r = criterion2(); break;
            case 3: r = criterion3(grid, opt); break;
            case 4: r = criterion4(); break;
            case 5: r = criterion5(grid); break;
            case 6: r = criterion6(); break;
            case 7: r = criterion7(grid); break;
            case 8: r = criterion8(); break;
            case 9: r = criterion9(grid); break;
            default: throw DomainError(ErrorKind::misuse, "verify: criterion id must be in 1..9");
        }
        // shared spectrum solve is charged to criterion 3, which owns the grid
        if (id == 3) {
            r.seconds += grid_seconds;
            r.passed = r.passed && r.seconds < r.time_limit;
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << "): metric "
       << detail::fmt(r.metric) << " threshold " << detail::fmt(r.threshold) << " time " << std::fixed;
    os.precision(3);
    os << r.seconds << "s/" << r.time_limit << "s";
    if (!r.detail.empty()) os << " [" << r.detail << "]";
    return os.str();
}

} // namespace kgring::verify
