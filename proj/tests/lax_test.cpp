#include "alh/principal.hpp"

#include <gtest/gtest.h>

using namespace alh;

namespace {

RingElem inv(const RingElem& x) { return *x.inverse(); }

bool flows_commute(const FlowRHS& x, const FlowRHS& y)
{
    return prolong(x.dP, y) == prolong(y.dP, x) && prolong(x.dQ, y) == prolong(y.dQ, x);
}

const std::vector<FlowLabel> kLabels{{2, 0}, {2, 1}, {2, 2}, {0, -1}, {0, -2}};

} // namespace

TEST(Lax, PrintedCoefficientsOfL)
{
    Op L = build_L(3);
    EXPECT_EQ(L.coeff(1), RingElem(1));
    EXPECT_EQ(L.coeff(0), Q() - P());
    EXPECT_EQ(L.coeff(-1), Q() * (Q(-1) - P(-1)));
    EXPECT_TRUE(L.coeff(2).is_zero());
    EXPECT_EQ(build_L(2).coeff(0), Q() - P());
}

TEST(Lax, PrintedCoefficientsOfM)
{
    Op M = build_M(3);
    EXPECT_EQ(M.coeff(-1), Q() * inv(P()));
    EXPECT_EQ(M.coeff(0), Q(1) * inv(P() * P(1)) - inv(P()));
    EXPECT_EQ(M.coeff(1), Q(2) * inv(P() * P(1) * P(2)) - inv(P() * P(1)));
    EXPECT_TRUE(M.coeff(-2).is_zero());
    EXPECT_EQ(build_M(2).coeff(-1), Q() * inv(P()));
}

// B L = A and A M = B on the exact windows
TEST(Lax, FactorisationsHold)
{
    for (int d = 1; d <= 4; ++d) {
        EXPECT_EQ(op_B() * build_L(d), op_A()) << d;
        EXPECT_EQ(op_A() * build_M(d), op_B()) << d;
    }
}

TEST(Lax, Densities)
{
    EXPECT_EQ(density_positive(0).value, Q() - P());
    RingElem h21 = ((Q() - P()) * (Q() - P()) + Q(1) * (Q() - P()) + Q() * (Q(-1) - P(-1))) * Rational(1, 2);
    EXPECT_EQ(density_positive(1).value, h21);
    RingElem Pd = dj(Var::P), Qd = dj(Var::Q);
    EXPECT_EQ(eps_expand(density_positive(1).value, 0)[0], (Qd - Pd) * Qd + (Qd - Pd) * (Qd - Pd) * Rational(1, 2));

    EXPECT_EQ(density_negative(1).value, inv(P()) - Q(1) * inv(P() * P(1)));
    EXPECT_EQ(eps_expand(density_negative(1).value, 0)[0], inv(Pd) - Qd * Pd.pow(-2));
}

TEST(Lax, LogDensity)
{
    EpsSeries h = density_h00(2);
    RingElem lead = tr(Tag::LogQ) - tr(Tag::LogP);
    EXPECT_EQ(split_log_ratio(h[0]), lead);
    EXPECT_EQ(split_log_ratio(h[1]), total_x_derivative(lead) * Rational(1, 2));
}

TEST(Lax, LowFlowsMatchPrintedEquations)
{
    FlowRHS a = lax_flow(2, 0);
    EXPECT_EQ(a.dP, P() * (Q(1) - Q()));
    EXPECT_EQ(a.dQ, Q() * (Q(1) - Q(-1) - P() + P(-1)));
    FlowRHS b = lax_flow(0, -1);
    EXPECT_EQ(b.dP, Q(1) * inv(P(1)) - Q() * inv(P(-1)));
    EXPECT_EQ(b.dQ, Q() * inv(P()) - Q() * inv(P(-1)));
}

TEST(LaxProperty, FlowsCommute)
{
    std::vector<FlowRHS> f;
    for (auto& l : kLabels) f.push_back(lax_flow(l));
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            EXPECT_TRUE(flows_commute(f[i], f[j])) << kLabels[i].to_string() << " " << kLabels[j].to_string();
}

TEST(LaxProperty, NonCommutingControlIsDetected)
{
    FlowRHS a = lax_flow(2, 0), b = lax_flow(0, -1);
    b.dP = Q(1) * inv(P(1)) + Q() * inv(P(-1));
    EXPECT_FALSE(flows_commute(a, b));
}

TEST(Hamiltonian, VariationalDerivatives)
{
    EXPECT_TRUE(variational_derivative(Q(1) - Q(), Var::Q).is_zero());
    EXPECT_EQ(variational_derivative(density_positive(0).value, Var::P), RingElem(-1));
    // delta L = -B^{-1} delta P with B = 1 - Q Lambda^{-1}, so delta h_{2,1} / delta P = -Res(L B^{-1})
    Op LB = build_L(3) * geometric_inverse(InverseKind::OneMinusQLambdaInv, 3);
    EXPECT_EQ(variational_derivative(density_positive(1).value, Var::P), -LB.residue());
    EXPECT_EQ(-LB.residue(), P() - Q() - Q(1));
}

TEST(Hamiltonian, PoissonOperatorsGenerateFlows)
{
    Grad g = apply_hamop(P0(Coords::PQ), gradient(hamiltonian_density(2, 0), Coords::PQ), Coords::PQ);
    FlowRHS f = lax_flow(2, 0);
    EXPECT_EQ(g[0], f.dP);
    EXPECT_EQ(g[1], f.dQ);

    Grad z = apply_hamop(P0(Coords::W), {RingElem(), RingElem()}, Coords::W);
    EXPECT_TRUE(z[0].is_zero() && z[1].is_zero());

    Grad w = w_velocity(lax_flow(0, -1));
    Grad h = apply_hamop(P1(Coords::W), gradient(hamiltonian_density(0, -2), Coords::W), Coords::W);
    EXPECT_EQ(h[0], -w[0]);
    EXPECT_EQ(h[1], -w[1]);
}

TEST(Hamiltonian, SkewAdjoint)
{
    for (Coords c : {Coords::PQ, Coords::W}) {
        EXPECT_TRUE(is_skew_adjoint(P0(c)));
        EXPECT_TRUE(is_skew_adjoint(P1(c)));
    }
}

TEST(Hamiltonian, BihamiltonianRecursion)
{
    for (Coords c : {Coords::PQ, Coords::W}) {
        EXPECT_TRUE(recursion_positive(1, c).pass);
        EXPECT_TRUE(recursion_positive(2, c).pass);
        EXPECT_TRUE(recursion_negative(1, c).pass);
    }
}

TEST(Hamiltonian, DispersionlessOperators)
{
    EXPECT_TRUE(equal(eps_order(P0(Coords::W), 1), dispersionless_P0()));
    EXPECT_TRUE(equal(eps_order(P1(Coords::W), 1), dispersionless_P1()));
    DxHamOp d0 = dispersionless_P0(), d1 = dispersionless_P1();
    EXPECT_EQ(d0.e[0][1].at(1), RingElem(1));
    EXPECT_EQ(d0.e[1][0].at(1), RingElem(1));
    EXPECT_TRUE(d0.e[0][0].empty() && d0.e[1][1].empty());
    EXPECT_EQ(d1.e[1][1].at(1), RingElem(2));
}

TEST(TauSymmetry, AllPairs)
{
    for (std::size_t i = 0; i < kLabels.size(); ++i)
        for (std::size_t j = i + 1; j < kLabels.size(); ++j) {
            auto r = tau_symmetry(kLabels[i], kLabels[j]);
            EXPECT_TRUE(r.pass) << r.name;
        }
}

TEST(Dispersionless, LeadingDensitiesAreTheta)
{
    for (int p = 0; p <= 2; ++p) EXPECT_TRUE(density_leading_check(2, p).pass) << p;
    for (int q = 1; q <= 2; ++q) EXPECT_TRUE(density_leading_check(0, -q).pass) << q;
    EXPECT_TRUE(density_leading_check(0, 0).pass);
}

TEST(Dispersionless, FlowsMatchPrincipalHierarchy)
{
    for (auto& l : kLabels) EXPECT_TRUE(principal_flow_check(l).pass) << l.to_string();
}
