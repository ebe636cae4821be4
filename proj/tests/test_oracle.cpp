#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kgring/oracle.hpp"
#include "kgring/spectrum.hpp"

using namespace kgring;

namespace {

const double E_hulthen = (-1.0 + std::sqrt(7.0)) / 4.0;

PotentialParams params(double alpha, double A, double C0) {
    PotentialParams p;
    p.alpha = alpha;
    p.A = A;
    p.C0 = C0;
    return p;
}

std::vector<double> radii(double lo, double hi, int n) {
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = lo + (hi - lo) * i / (n - 1);
    return r;
}

} // namespace

TEST(TridiagPencil, CountsAndEigenvaluesOfKnownMatrix) {
    // -u'' on n interior points with unit weight: mu_k = 2 - 2 cos(k pi/(n+1))
    TridiagPencil pen;
    const int n = 50;
    pen.diag.assign(n, 2.0);
    pen.off.assign(n - 1, -1.0);
    pen.weight.assign(n, 1.0);
    for (int k = 0; k < 5; ++k) {
        const double mu = 2.0 - 2.0 * std::cos((k + 1) * std::numbers::pi / (n + 1));
        EXPECT_NEAR(pen.eigenvalue(k), mu, 1e-14);
        EXPECT_EQ(pen.count_below(mu + 1e-9), k + 1);
        EXPECT_EQ(detail::count_sign_changes(pen.eigenvector(mu)), k);
    }
}

TEST(RadialOracle, HulthenReference) {
    const OracleReport rep = radial_oracle(params(1.0, 2.0, 0.0), {0, 0, 0}, E_hulthen);
    ASSERT_TRUE(rep.converged) << rep.note;
    EXPECT_LE(rep.rel_diff, 1e-9);
    EXPECT_EQ(rep.node_count, 0);
    EXPECT_FALSE(rep.node_mismatch);
    EXPECT_LT(rep.residual_norm, 1e-8);
}

TEST(RadialOracle, FreeCaseIsUnconfirmed) {
    const OracleReport rep = radial_oracle(params(1.0, 0.0, 0.0), {0, 0, 0}, std::sqrt(3.0) / 2);
    EXPECT_FALSE(rep.converged);
    EXPECT_FALSE(rep.note.empty());
}

TEST(RadialOracle, SecondOrderConvergence) {
    const PotentialParams p = params(2.0, 8.0, 1.0 / 12);
    const double E = 0.65836284496765966338;
    RadialOracleConfig cfg;
    cfg.richardson = false;
    std::vector<double> err;
    for (int n : {2000, 4000, 8000}) {
        cfg.grid_size = n;
        err.push_back(std::abs(radial_oracle(p, {1, 0, 0}, E, cfg).oracle_E - E));
    }
    EXPECT_NEAR(err[0] / err[1], 4.0, 0.2);
    EXPECT_NEAR(err[1] / err[2], 4.0, 0.2);
}

TEST(RadialOracle, ExcitedStateNodes) {
    const PotentialParams p = params(2.0, 40.0, 1.0 / 12);
    SpectrumRequest req;
    req.params = p;
    req.n_r_max = 2;
    const SpectrumResult res = solve_states(req);
    ASSERT_GE(res.states.size(), 3u);
    for (const BoundState& st : res.states) {
        const OracleReport rep = radial_oracle(p, st.quantum, st.E);
        ASSERT_TRUE(rep.converged) << rep.note;
        EXPECT_LE(rep.rel_diff, 1e-8);
        EXPECT_EQ(rep.node_count, st.quantum.n_r);
    }
}

TEST(RadialOracle, ExactCentrifugalDiagnosticRuns) {
    const PotentialParams p = params(1.0, 8.0, 1.0 / 12);
    const BoundState st = solve_states([&] {
                              SpectrumRequest r;
                              r.params = p;
                              r.m_min = r.m_max = 1;
                              return r;
                          }())
                              .states.at(0);
    RadialOracleConfig cfg;
    cfg.centrifugal = Centrifugal::exact;
    const OracleReport rep = radial_oracle(p, st.quantum, st.E, cfg);
    ASSERT_TRUE(rep.converged);
    EXPECT_GT(rep.rel_diff, 0.0); // gap of the approximation, reported only
}

TEST(RadialOracle, ConfigValidation) {
    RadialOracleConfig cfg;
    cfg.grid_size = 50;
    EXPECT_THROW(radial_oracle(params(1.0, 2.0, 0.0), {0, 0, 0}, E_hulthen, cfg), DomainError);
    cfg = {};
    cfg.r_min = 2.0;
    cfg.r_max = 1.0;
    EXPECT_THROW(radial_oracle(params(1.0, 2.0, 0.0), {0, 0, 0}, E_hulthen, cfg), DomainError);
    EXPECT_THROW(radial_oracle(params(1.0, 2.0, 0.0), {0, 0, 0}, 1.0), DomainError);
}

TEST(AngularOracle, LegendreAndAssociatedLegendre) {
    const PotentialParams p;
    for (int N = 0; N <= 3; ++N) EXPECT_NEAR(angular_oracle(p, 0, 1.0, N, 4000).lambda_numeric, N * (N + 1.0), 1e-6);
    EXPECT_NEAR(angular_oracle(p, 2, 1.0, 1, 4000).lambda_numeric, 12.0, 1e-6);
}

TEST(AngularOracle, RingExample) {
    PotentialParams p;
    p.beta = 0.4;
    p.beta_prime = 0.5;
    const AngularOracleResult r = angular_oracle(p, 1, 1.8, 1);
    EXPECT_NEAR(r.lambda_numeric, 7.8865264962788195, 1e-5);
    EXPECT_LE(r.rel_diff, 1e-5);
}

TEST(AngularOracle, SecondOrderConvergence) {
    PotentialParams p;
    p.beta = 0.4;
    p.beta_prime = 0.5;
    const double exact = solve_angular({0, 2, 1}, p, 1.8).lambda;
    const double e1 = std::abs(angular_oracle(p, 1, 1.8, 2, 500).lambda_coarse - exact);
    const double e2 = std::abs(angular_oracle(p, 1, 1.8, 2, 1000).lambda_coarse - exact);
    EXPECT_NEAR(e1 / e2, 4.0, 0.3);
}

TEST(AngularOracle, RingTooStrongThrows) {
    PotentialParams p;
    p.beta = 3.0;
    EXPECT_THROW(angular_oracle(p, 0, 1.0, 0), DomainError);
}

TEST(Normalization, HulthenAndScaledState) {
    BoundState st = make_state(params(1.0, 2.0, 0.0), {0, 0, 0}, E_hulthen);
    EXPECT_LE(normalization_check(st), 1e-10);
    st.norm *= 2.0;
    EXPECT_NEAR(normalization_check(st), 3.0, 1e-9);
}

TEST(Normalization, DeepWellExcitedState) {
    SpectrumRequest req;
    req.params = params(2.0, 40.0, 1.0 / 12);
    req.n_r_max = 3;
    const SpectrumResult res = solve_states(req);
    bool seen = false;
    for (const BoundState& st : res.states)
        if (st.quantum.n_r == 3) {
            seen = true;
            EXPECT_LE(normalization_check(st), 1e-8);
        }
    EXPECT_TRUE(seen);
}

TEST(OdeResidual, ReferenceStateAndPerturbation) {
    const PotentialParams p = params(1.0, 2.0, 0.0);
    const std::vector<double> r = radii(0.1, 20.0, 50);
    const BoundState st = make_state(p, {0, 0, 0}, E_hulthen);
    EXPECT_LE(ode_residual(p, st, r), 1e-8);
    BoundState off = st;
    off.E += 1e-3;
    off.eta = eta_of(p, off.E);
    EXPECT_GT(ode_residual(p, off, r), 1e-4);
}

TEST(OdeResidual, GenericState) {
    PotentialParams p = params(2.0, 8.0, 1.0 / 12);
    p.beta = 0.3;
    p.beta_prime = 0.2;
    SpectrumRequest req;
    req.params = p;
    req.m_min = req.m_max = 1;
    const SpectrumResult res = solve_states(req);
    ASSERT_FALSE(res.states.empty());
    EXPECT_LE(ode_residual(p, res.states[0], radii(0.1, 20.0, 50)), 1e-6);
}
