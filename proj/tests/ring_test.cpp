#include "support.hpp"

#include "alh/hamiltonian.hpp"

#include <gtest/gtest.h>

using namespace alh;
using alh::test::random_elem;

namespace {

RingElem Px(int n = 1) { return dj(Var::P, n); }
RingElem Qx(int n = 1) { return dj(Var::Q, n); }
RingElem Pd() { return dj(Var::P); }
RingElem Qd() { return dj(Var::Q); }

} // namespace

TEST(Ring, ShiftExamples)
{
    EXPECT_EQ(shift(Q() * P(0, -1), 1), Q(1) * P(1, -1));
    EXPECT_EQ(shift(Q() - P(), 0), Q() - P());
    EXPECT_EQ(shift(Q() * (Q(-1) - P(-1)), 1), Q(1) * (Q() - P()));
}

TEST(Ring, TotalXDerivative)
{
    EXPECT_EQ(total_x_derivative(Pd() * Qd()), Px() * Qd() + Pd() * Qx());
    RingElem v1 = dj(Var::v1);
    EXPECT_EQ(total_x_derivative(v1 * v1), v1 * dj(Var::v1, 1) * Rational(2));
    EXPECT_EQ(total_x_derivative(tr(Tag::ExpV2)), tr(Tag::ExpV2) * dj(Var::v2, 1));
}

TEST(Ring, EpsExpandExamples)
{
    EpsSeries s = eps_expand(P(1), 2);
    EXPECT_EQ(s[0], Pd());
    EXPECT_EQ(s[1], Px());
    EXPECT_EQ(s[2], Px(2) * Rational(1, 2));

    EpsSeries t = eps_expand(Q() - P(), 1);
    EXPECT_EQ(t[0], Qd() - Pd());
    EXPECT_TRUE(t[1].is_zero());

    EpsSeries u = eps_expand(Q(1) * (Q() - P()), 1);
    EXPECT_EQ(u[0], Qd() * (Qd() - Pd()));
    EXPECT_EQ(u[1], Qx() * (Qd() - Pd()));
}

TEST(Ring, TotalDifferenceExamples)
{
    auto a = solve_total_difference(Q(1) - Q());
    ASSERT_TRUE(a.exact);
    EXPECT_EQ(a.antidifference, Q());

    EXPECT_FALSE(solve_total_difference(Q()).exact);

    auto b = solve_total_difference(Q(1) * P(1) - Q() * P() + Q(1) - Q());
    ASSERT_TRUE(b.exact);
    EXPECT_EQ(b.antidifference, Q() * P() + Q());
}

TEST(RingProperty, ShiftComposes)
{
    std::mt19937 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        RingElem e = random_elem(gen, 4, true);
        int k = static_cast<int>(gen() % 7) - 3, m = static_cast<int>(gen() % 7) - 3;
        EXPECT_EQ(shift(shift(e, k), m), shift(e, k + m));
    }
}

TEST(RingProperty, RingAxioms)
{
    std::mt19937 gen(12);
    for (int trial = 0; trial < 40; ++trial) {
        RingElem a = random_elem(gen, 3, true), b = random_elem(gen, 3, true), c = random_elem(gen, 3, true);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        EXPECT_TRUE((a - a).is_zero());
    }
}

// e^{eps d_x} acting on the expansion of e, coefficient by coefficient
TEST(RingProperty, EpsExpandOfShiftIsExponentialSeries)
{
    std::mt19937 gen(13);
    const int N = 3;
    for (int trial = 0; trial < 20; ++trial) {
        RingElem e = random_elem(gen, 3);
        EpsSeries base = eps_expand(e, N), shifted = eps_expand(shift(e, 1), N);
        for (int s = 0; s <= N; ++s) {
            RingElem expect;
            for (int j = 0; j <= s; ++j) expect += x_derivative(base[s - j], j) * (Rational(1) / factorial(j));
            EXPECT_EQ(shifted[s], expect) << "order " << s << " of " << e;
        }
    }
}

TEST(RingProperty, TotalDifferencesAreSolved)
{
    std::mt19937 gen(14);
    for (int trial = 0; trial < 40; ++trial) {
        RingElem g = random_elem(gen, 4, true);
        RingElem d = shift(g, 1) - g;
        auto sol = solve_total_difference(d);
        ASSERT_TRUE(sol.exact) << d;
        EXPECT_EQ(shift(sol.antidifference, 1) - sol.antidifference, d);
    }
}

TEST(RingProperty, VariationalDerivativeKillsDifferences)
{
    std::mt19937 gen(15);
    for (int trial = 0; trial < 40; ++trial) {
        RingElem g = random_elem(gen, 4, true);
        RingElem d = shift(g, 1) - g;
        EXPECT_TRUE(variational_derivative(d, Var::P).is_zero()) << d;
        EXPECT_TRUE(variational_derivative(d, Var::Q).is_zero()) << d;
    }
}

TEST(Operators, MultiplicationExamples)
{
    EXPECT_EQ(Op::lambda(1) * Op::monomial(Q(), -1), Op(Q(1)));
    Op A = op_A();
    Op expect = Op::lambda(2) - Op::monomial(P(1) + P(), 1) + Op(P() * P());
    EXPECT_EQ(A * A, expect);
    EXPECT_EQ(Op(RingElem(1)) * A, A);
}

TEST(Operators, PartsAndResidue)
{
    Op L = Op::lambda(1) + Op(Q() - P()) + Op::monomial(Q() * (Q(-1) - P(-1)), -1);
    EXPECT_EQ(L.plus_part(), Op::lambda(1) + Op(Q() - P()));
    EXPECT_TRUE(Op::lambda(1).minus_part().is_zero());
    EXPECT_EQ(L.plus_part() + L.minus_part(), L);
    EXPECT_EQ(L.residue(), Q() - P());
    EXPECT_TRUE(Op::lambda(2).residue().is_zero());
}

TEST(Operators, ResidueOfLSquared)
{
    Op L2 = power(geometric_inverse(InverseKind::OneMinusQLambdaInv, 2) * op_A(), 2, 0);
    EXPECT_EQ(L2.residue(), (Q() - P()) * (Q() - P()) + Q(1) * (Q() - P()) + Q() * (Q(-1) - P(-1)));
}

TEST(Operators, GeometricInverses)
{
    Op one(RingElem(1));
    Op g1 = geometric_inverse(InverseKind::OneMinusQLambdaInv, 1);
    EXPECT_EQ(g1.coeff(0), RingElem(1));
    EXPECT_EQ(g1.coeff(-1), Q());
    for (int d = 1; d <= 4; ++d) EXPECT_EQ(op_B() * geometric_inverse(InverseKind::OneMinusQLambdaInv, d), one) << d;

    Op g2 = geometric_inverse(InverseKind::LambdaMinusP, 2);
    EXPECT_EQ(g2.coeff(-1), RingElem(1));
    EXPECT_EQ(g2.coeff(-2), P(-1));
    EXPECT_EQ(op_A() * g2, one);
    EXPECT_EQ(op_A() * geometric_inverse(InverseKind::LambdaMinusPUpward, 3), one);
}

TEST(OperatorProperty, Associativity)
{
    std::mt19937 gen(16);
    for (int trial = 0; trial < 15; ++trial) {
        Op A = alh::test::random_op(gen, -1, 1), B = alh::test::random_op(gen, -1, 1), C = alh::test::random_op(gen, -1, 1);
        EXPECT_EQ((A * B) * C, A * (B * C));
    }
}

TEST(OperatorProperty, ResidueOfCommutatorIsTotalDifference)
{
    std::mt19937 gen(17);
    for (int trial = 0; trial < 20; ++trial) {
        Op A = alh::test::random_op(gen, -2, 1), B = alh::test::random_op(gen, -1, 2);
        RingElem r = commutator(A, B).residue();
        EXPECT_TRUE(solve_total_difference(r).exact) << r;
    }
}
