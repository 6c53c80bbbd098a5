#include "alh/backlund.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace alh;

TEST(Backlund, RatioIdentity)
{
    auto [Pt, Qt] = backlund();
    EXPECT_EQ(Qt / Pt, Frac::over(Q(), P(-1)));
    EXPECT_EQ((Qt / Pt) * Frac::over(P(-1), Q(-1)), Frac::over(Q(), Q(-1)));
    EXPECT_FALSE(Qt / Pt == Frac::over(Q(), P()));
}

TEST(Backlund, ChecksPass)
{
    for (auto r : {backlund_identity_check(), backlund_order_eps_check(), backlund_frechet_invariance_check()})
        EXPECT_TRUE(r.pass) << r.name;
}

TEST(Backlund, LeadingOrderIsIdentity)
{
    auto [Pt, Qt] = backlund();
    auto flat = [](const Generator& g) { return g.var() == Var::P ? 0.8 : 2.3; };
    EXPECT_NEAR(Pt.evaluate(flat), 0.8, 1e-14);
    EXPECT_NEAR(Qt.evaluate(flat), 2.3, 1e-14);
}

TEST(Backlund, ConstantFieldsAreFixed)
{
    std::vector<double> P(6, 0.9), Q(6, 2.4), Pt, Qt;
    backlund_apply(P, Q, Pt, Qt);
    for (std::size_t i = 0; i < P.size(); ++i) {
        EXPECT_NEAR(Pt[i], 0.9, 1e-15);
        EXPECT_NEAR(Qt[i], 2.4, 1e-15);
    }
}

TEST(Backlund, PoleIsFlagged)
{
    std::vector<double> P{1.0, 1.5, 0.7}, Q{2.0, 1.0, 2.5}, Pt, Qt;
    EXPECT_THROW(backlund_apply(P, Q, Pt, Qt), BacklundPole);  // Q_1 = P_0
}

TEST(BacklundProperty, LatticeMatchesSymbolicMap)
{
    auto [Pt, Qt] = backlund();
    std::mt19937 gen(21);
    std::uniform_real_distribution<double> p(0.5, 1.5), q(2.0, 3.0);
    const std::size_t N = 7;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> P(N), Q(N), lp, lq;
        for (std::size_t i = 0; i < N; ++i) {
            P[i] = p(gen);
            Q[i] = q(gen);
        }
        backlund_apply(P, Q, lp, lq);
        for (std::size_t n = 0; n < N; ++n) {
            auto val = [&](const Generator& g) {
                std::size_t i = static_cast<std::size_t>((static_cast<long>(n) + g.idx + static_cast<long>(N)) % static_cast<long>(N));
                return g.var() == Var::P ? P[i] : Q[i];
            };
            EXPECT_NEAR(lp[n], Pt.evaluate(val), 1e-12);
            EXPECT_NEAR(lq[n], Qt.evaluate(val), 1e-12);
        }
    }
}

TEST(Frac, Arithmetic)
{
    Frac a = Frac::over(Q(), Q() - P(-1)), b = Frac::over(P(), Q() - P(-1));
    EXPECT_EQ(a - b, Frac::over(Q() - P(), Q() - P(-1)));
    EXPECT_EQ(a * a.inverse(), Frac(1));
    EXPECT_EQ(shift(a, 1), Frac::over(Q(1), Q(1) - P()));
    EXPECT_TRUE((a - a).is_zero());
}
