#include "alh/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

using namespace alh;

namespace {

LatticeState make(std::vector<double> P, std::vector<double> Q)
{
    LatticeState s;
    s.P = std::move(P);
    s.Q = std::move(Q);
    return s;
}

} // namespace

TEST(Simulator, RhsExamples)
{
    std::vector<double> dP, dQ;
    rhs(LatticeFlow::T20, {1, 1}, {2, 3}, dP, dQ);
    EXPECT_EQ(dP, (std::vector<double>{1, -1}));

    for (auto f : {LatticeFlow::T20, LatticeFlow::T0m1}) {
        rhs(f, std::vector<double>(5, 0.7), std::vector<double>(5, 2.2), dP, dQ);
        for (int n = 0; n < 5; ++n) {
            EXPECT_EQ(dP[n], 0);
            EXPECT_EQ(dQ[n], 0);
        }
    }
}

TEST(Simulator, RelativeVelocitySumsToZero)
{
    LatticeState s = random_state(16, 3);
    std::vector<double> dP, dQ;
    rhs(LatticeFlow::T20, s.P, s.Q, dP, dQ);
    double sum = 0;
    for (std::size_t n = 0; n < s.size(); ++n) sum += dQ[n] / s.Q[n];
    EXPECT_NEAR(sum, 0, 1e-13);
}

TEST(Simulator, ConservedQuantityExamples)
{
    auto h = conserved_quantities(make({1, 1}, {2, 3}), 0, 1);
    EXPECT_DOUBLE_EQ(h.at("H_{2,-1}"), 3);
    EXPECT_DOUBLE_EQ(h.at("H_{0,-1}"), std::log(2.0) + std::log(3.0));

    const double p = 0.8, q = 2.5;
    auto c = conserved_quantities(make(std::vector<double>(6, p), std::vector<double>(6, q)), 1, 2);
    EXPECT_NEAR(c.at("H_{2,0}"), 6 * ((q - p) * q + (q - p) * (q - p) / 2), 1e-12);
    EXPECT_NEAR(c.at("H_{0,-2}"), 6 * (1 / p - q / (p * p)), 1e-12);
}

TEST(Simulator, ZeroStepsIsIdentity)
{
    LatticeState s = random_state(8, 5);
    RunResult r = integrate(s, LatticeFlow::T20, {1e-3, 0, 10});
    EXPECT_EQ(r.final_state.P, s.P);
    EXPECT_EQ(r.final_state.Q, s.Q);
    ASSERT_EQ(r.samples.size(), 1u);
}

TEST(SimulatorProperty, ConservationOverUnitTime)
{
    for (std::uint64_t seed : {1u, 2u, 12345u}) {
        LatticeState s = random_state(32, seed);
        for (auto f : {LatticeFlow::T20, LatticeFlow::T0m1}) {
            RunResult r = integrate(s, f, {1e-3, 1000, 100});
            EXPECT_LT(r.max_drift, 1e-8) << flow_name(f) << " seed " << seed;
            EXPECT_EQ(r.labels.size(), 7u);
        }
    }
}

TEST(SimulatorProperty, SumOfDifferencesIsExact)
{
    LatticeState s = random_state(32, 9);
    RunResult r = integrate(s, LatticeFlow::T20, {1e-3, 1000, 1000}, conserved_set(-1, 0));
    EXPECT_LT(r.max_drift, 1e-10);
}

TEST(SimulatorProperty, LogCasimir)
{
    LatticeState s = random_state(32, 10);
    for (auto f : {LatticeFlow::T20, LatticeFlow::T0m1}) {
        RunResult r = integrate(s, f, {1e-3, 1000, 250}, conserved_set(-1, 1));
        EXPECT_LT(r.max_drift, 1e-10) << flow_name(f);
    }
}

TEST(SimulatorProperty, CommutativityProbe)
{
    LatticeState s = random_state(32, 12345);
    EXPECT_LT(commutativity_probe(LatticeFlow::T20, LatticeFlow::T20, 1e-3, s), 1e-15);
    double ratio = probe_ratio(LatticeFlow::T20, LatticeFlow::T0m1, 1e-2, s);
    EXPECT_GT(ratio, 7);
    EXPECT_LT(ratio, 9);
    double control = probe_ratio(LatticeFlow::T20, LatticeFlow::T0m1Perturbed, 1e-2, s);
    EXPECT_GT(control, 3.5);
    EXPECT_LT(control, 4.5);
}

TEST(SimulatorProperty, BacklundCommutesWithEvolution)
{
    LatticeState s = random_state(32, 12345);
    EXPECT_LT(backlund_commutation_defect(s, LatticeFlow::T20, 1e-3, 100), 1e-8);
    EXPECT_LT(backlund_commutation_defect(s, LatticeFlow::T0m1, 1e-3, 100), 1e-8);
}

TEST(SimulatorProperty, FourthOrderConvergence)
{
    LatticeState s = random_state(32, 4);
    double ratio = rk4_order_ratio(s, LatticeFlow::T20, 0.05, 1.0);
    EXPECT_GT(ratio, 13);
    EXPECT_LT(ratio, 19);
}

TEST(Simulator, PoleGuards)
{
    EXPECT_THROW(check_state(make({1, 1e-14, 1}, {2, 2, 2})), NumericalGuard);
    try {
        check_state(make({1.0, 1.5, 0.7}, {2.0, 1.0, 2.5}));
        FAIL() << "expected a guard";
    } catch (const NumericalGuard& g) {
        EXPECT_EQ(g.site, 1u);
    }
}

// independent per-site draws excite the unstable high wavenumbers
TEST(Simulator, RoughInitialDataBlowsUp)
{
    LatticeState s = random_state(32, 12345, 0);
    EXPECT_THROW(integrate(s, LatticeFlow::T20, {1e-3, 1000, 0}), NumericalGuard);
}

TEST(Simulator, InitialDataStaysInRange)
{
    for (int modes : {0, 3}) {
        LatticeState s = random_state(64, 77, modes);
        for (std::size_t n = 0; n < s.size(); ++n) {
            EXPECT_GE(s.P[n], 0.5);
            EXPECT_LE(s.P[n], 1.5);
            EXPECT_GE(s.Q[n], 2.0);
            EXPECT_LE(s.Q[n], 3.0);
        }
    }
}

TEST(Simulator, ThreadCountDoesNotChangeResults)
{
    LatticeState s = random_state(2048, 8);
    setenv("ALH_THREADS", "1", 1);
    RunResult a = integrate(s, LatticeFlow::T0m1, {1e-3, 20, 10});
    setenv("ALH_THREADS", "4", 1);
    RunResult b = integrate(s, LatticeFlow::T0m1, {1e-3, 20, 10});
    unsetenv("ALH_THREADS");
    EXPECT_EQ(a.final_state.P, b.final_state.P);
    EXPECT_EQ(a.final_state.Q, b.final_state.Q);
}
