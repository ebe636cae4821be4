#include <cmath>
#include <map>
#include <tuple>

#include <gtest/gtest.h>

#include "kgring/spectrum.hpp"

using namespace kgring;

namespace {

SpectrumRequest request(double alpha, double A, double C0, int nr_max = 0, int N_max = 0, int m_min = 0,
                        int m_max = 0) {
    SpectrumRequest req;
    req.params.alpha = alpha;
    req.params.A = A;
    req.params.C0 = C0;
    req.n_r_max = nr_max;
    req.N_max = N_max;
    req.m_min = m_min;
    req.m_max = m_max;
    return req;
}

} // namespace

TEST(Spectrum, HulthenReferenceRoot) {
    const SpectrumResult res = solve_states(request(1.0, 2.0, 0.0));
    ASSERT_EQ(res.states.size(), 1u);
    EXPECT_NEAR(res.states[0].E, (-1.0 + std::sqrt(7.0)) / 4.0, 1e-14);
}

TEST(Spectrum, FreeCaseOnlyRejections) {
    for (double alpha : {0.0, 1.0}) {
        const SpectrumResult res = solve_states(request(alpha, 0.0, 0.0));
        EXPECT_TRUE(res.states.empty());
        ASSERT_EQ(res.rejected.size(), 2u);
        EXPECT_NEAR(res.rejected[0].E, -std::sqrt(3.0) / 2, 1e-13);
        EXPECT_NEAR(res.rejected[1].E, std::sqrt(3.0) / 2, 1e-13);
        for (const Rejection& r : res.rejected) EXPECT_EQ(r.reason, reason_sqrt_c);
    }
}

TEST(Spectrum, EveryRootIsAcceptedOrRejectedOnce) {
    const SpectrumRequest req = request(2.0, 8.0, 1.0 / 12, 2, 1);
    const SpectrumResult res = solve_states(req);
    std::size_t accepted = 0;
    for (const RootDiagnostic& d : res.diagnostics) accepted += d.accepted;
    EXPECT_EQ(accepted, res.states.size());
    EXPECT_EQ(res.diagnostics.size(), res.states.size() + res.rejected.size());
    for (const BoundState& st : res.states) {
        EXPECT_TRUE(st.admissible());
        EXPECT_LE(std::abs(energy_residual(req.params, st.quantum, st.E)), req.tol);
    }
}

TEST(Spectrum, KnownDeepWellEnergies) {
    const SpectrumResult res = solve_states(request(2.0, 8.0, 1.0 / 12, 1));
    ASSERT_EQ(res.states.size(), 2u);
    EXPECT_NEAR(res.states[0].E, -0.39330915667877945766, 1e-14);
    EXPECT_NEAR(res.states[1].E, 0.65836284496765966338, 1e-14);
}

TEST(Spectrum, OutputIsSortedByQuantumNumbers) {
    const SpectrumResult res = solve_states(request(2.0, 40.0, 1.0 / 12, 2, 1, -1, 1));
    ASSERT_FALSE(res.states.empty());
    for (std::size_t i = 1; i < res.states.size(); ++i) {
        const auto& a = res.states[i - 1].quantum;
        const auto& b = res.states[i].quantum;
        EXPECT_LE(std::tuple(a.m, a.N, a.n_r), std::tuple(b.m, b.N, b.n_r));
    }
}

TEST(Spectrum, EnergiesIncreaseWithRadialNumber) {
    const SpectrumResult res = solve_states(request(2.0, 40.0, 1.0 / 12, 3, 1));
    std::map<int, std::vector<double>> by_N; // one root per cell here
    for (const BoundState& st : res.states) by_N[st.quantum.N].push_back(st.E);
    ASSERT_FALSE(by_N.empty());
    for (const auto& [N, Es] : by_N)
        for (std::size_t i = 1; i < Es.size(); ++i) EXPECT_LT(Es[i - 1], Es[i]) << N;
}

TEST(Spectrum, DoublingScanDensityKeepsRoots) {
    SpectrumRequest req = request(2.0, 40.0, 1.0 / 12, 2, 1);
    const SpectrumResult a = solve_states(req);
    req.scan_points = 2 * req.scan_points - 1;
    const SpectrumResult b = solve_states(req);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i)
        EXPECT_LE(std::abs(a.states[i].E - b.states[i].E), req.tol * req.params.M);
}

TEST(Spectrum, HulthenLimitIndependentOfAlpha) {
    const SpectrumResult a0 = hulthen_spectrum(request(0.0, 8.0, 1.0 / 12, 2, 1));
    const SpectrumResult a1 = hulthen_spectrum(request(1.0, 8.0, 1.0 / 12, 2, 1));
    ASSERT_EQ(a0.states.size(), a1.states.size());
    for (std::size_t i = 0; i < a0.states.size(); ++i) EXPECT_LE(std::abs(a0.states[i].E - a1.states[i].E), 1e-12);
    EXPECT_THROW(hulthen_spectrum(request(2.0, 8.0, 1.0 / 12)), DomainError);
}

TEST(Spectrum, CentralWrapperMatchesGeneralSolver) {
    const SpectrumRequest req = request(2.0, 40.0, 1.0 / 12, 1, 1, -1, 1);
    const SpectrumResult a = central_spectrum(req), b = solve_states(req);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) EXPECT_EQ(a.states[i].E, b.states[i].E);
    SpectrumRequest ringed = req;
    ringed.params.beta = 0.1;
    EXPECT_THROW(central_spectrum(ringed), DomainError);
}

TEST(Spectrum, RingTooStrongBecomesExclusion) {
    SpectrumRequest req = request(1.0, 8.0, 1.0 / 12);
    req.params.beta = 3.0;
    req.params.beta_prime = 0.5;
    const SpectrumResult res = solve_states(req);
    ASSERT_FALSE(res.excluded.empty());
    EXPECT_NE(res.excluded[0].reason.find("ring"), std::string::npos);
}

TEST(Spectrum, RequestValidation) {
    SpectrumRequest req = request(1.0, 2.0, 0.0);
    req.energy_window = std::pair{-1.0, 0.5};
    EXPECT_THROW(solve_states(req), DomainError);
    req.energy_window = std::pair{0.3, 0.2};
    EXPECT_THROW(solve_states(req), DomainError);
    req.energy_window.reset();
    req.scan_points = 2;
    EXPECT_THROW(solve_states(req), DomainError);
}

TEST(Spectrum, RootOnWindowEdgeIsRejected) {
    SpectrumRequest req = request(1.0, 2.0, 0.0);
    const double E = (-1.0 + std::sqrt(7.0)) / 4.0;
    req.energy_window = std::pair{-0.5, E + 5e-13};
    const SpectrumResult res = solve_states(req);
    EXPECT_TRUE(res.states.empty());
    ASSERT_EQ(res.rejected.size(), 1u);
    EXPECT_EQ(res.rejected[0].reason, reason_edge);
}

TEST(Spectrum, FullWavefunctionIsNormalized) {
    SpectrumRequest req = request(1.0, 2.0, 0.0);
    const BoundState st = solve_states(req).states.at(0);
    // theta part integrates to one by itself; check the product at one point against the factors
    const double r = 0.8, th = 1.1, ph = 0.3;
    const std::complex<double> psi = psi_eval(st, r, th, ph);
    const double expect = chi_eval(st, r) / r * theta_eval(st.angular, 0, std::cos(th)) / std::sqrt(2 * std::numbers::pi);
    EXPECT_NEAR(std::abs(psi), std::abs(expect), 1e-15);
    EXPECT_THROW(psi_eval(st, r, 0.0, ph), DomainError);
}

TEST(Spectrum, AcceptedStatesSatisfyReductionIdentities) {
    SpectrumRequest req = request(2.0, 40.0, 1.0 / 12, 5, 1, 0, 1);
    req.params.beta = 0.3;
    req.params.beta_prime = 0.4;
    const SpectrumResult res = solve_states(req);
    ASSERT_GE(res.states.size(), 6u);
    bool deep_seen = false;
    for (const BoundState& st : res.states) {
        const NuParams nu = nu_params(req.params, st.eta, st.epsilon, st.angular.lambda);
        const double lhs = req.params.b * req.params.b * (1 - st.E * st.E) + st.angular.lambda * req.params.C0;
        EXPECT_LE(std::abs(lhs - nu.c_nu), 1e-10 * nu.c_nu);
        EXPECT_LE(std::abs(std::sqrt(nu.c_nu) - st.sqrt_c), 1e-10 * st.sqrt_c);
        deep_seen = deep_seen || st.quantum.n_r == 5;
        for (int i = 0; i < 50; ++i) {
            const double r = 0.05 + 15.0 * i / 49.0;
            const double j = chi_eval(st, r), h = chi_eval_hypergeometric(st, r);
            EXPECT_LE(std::abs(j - h), 1e-12 * std::max(std::abs(j), 1e-3 * st.norm)) << st.quantum.n_r << " " << r;
        }
    }
    EXPECT_TRUE(deep_seen);
}

TEST(Spectrum, OneRecordPerScanSignChange) {
    SpectrumRequest req = request(2.0, 40.0, 1.0 / 12, 3, 1, -1, 1);
    req.params.beta = 0.2;
    req.params.beta_prime = 0.5;
    const SpectrumResult res = solve_states(req);
    const auto [lo, hi] = req.window();
    for (int m = -1; m <= 1; ++m)
        for (int N = 0; N <= 1; ++N)
            for (int nr = 0; nr <= 3; ++nr) {
                const QuantumNumbers q{nr, N, m};
                int changes = 0;
                double prev = energy_residual(req.params, q, lo);
                for (int i = 1; i < req.scan_points; ++i) {
                    const double E = i + 1 == req.scan_points ? hi : lo + i * (hi - lo) / (req.scan_points - 1);
                    const double f = energy_residual(req.params, q, E);
                    changes += (f < 0) != (prev < 0);
                    prev = f;
                }
                int records = 0;
                for (const RootDiagnostic& d : res.diagnostics) records += d.quantum == q;
                EXPECT_EQ(records, changes) << nr << N << m;
            }
}
