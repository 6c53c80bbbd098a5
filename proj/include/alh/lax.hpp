#pragma once

// Lax operators L = B^{-1} A and M = A^{-1} B with A = Lambda - P and
// B = 1 - Q Lambda^{-1}; Hamiltonian densities and flows of the hierarchy.

#include "diffop.hpp"

#include <stdexcept>
#include <string>

namespace alh {

struct FlowLabel {
    int alpha = 2;  // 2 for t^{2,q}, 0 for t^{0,q}
    int q = 0;      // q >= 0 when alpha == 2, q <= -1 when alpha == 0

    std::string to_string() const { return "t^{" + std::to_string(alpha) + "," + std::to_string(q) + "}"; }
    friend bool operator==(const FlowLabel& a, const FlowLabel& b) { return a.alpha == b.alpha && a.q == b.q; }
};

struct Density {
    int alpha = 2;
    int level = 0;
    RingElem value;
};

// eps * dP/dt and eps * dQ/dt
struct FlowRHS {
    FlowLabel label;
    RingElem dP;
    RingElem dQ;
};

struct OperatorInconsistency : std::logic_error {
    using std::logic_error::logic_error;
};

// exact down to Lambda^{-depth}
inline Op build_L(int depth)
{
    return geometric_inverse(InverseKind::OneMinusQLambdaInv, depth + 1) * op_A();
}

// exact up to Lambda^{ceiling}
inline Op build_M(int ceiling)
{
    return geometric_inverse(InverseKind::LambdaMinusPUpward, ceiling + 1) * op_B();
}

// Res L^n needs L down to Lambda^{-(n-1)}
inline RingElem residue_L_power(int n)
{
    if (n <= 0) return n == 0 ? RingElem(1) : RingElem();
    return power(build_L(n - 1), n, 0).residue();
}

inline RingElem residue_M_power(int n)
{
    if (n <= 0) return n == 0 ? RingElem(1) : RingElem();
    return power(build_M(n - 1), n).residue();
}

// h_{2,p} = Res L^{p+1} / (p+1)!
inline Density density_positive(int p)
{
    if (p < 0) throw std::domain_error("density_positive needs p >= 0");
    return {2, p, residue_L_power(p + 1) * (Rational(1) / factorial(p + 1))};
}

// h_{0,-q} = (-1)^q (q-1)! Res M^q
inline Density density_negative(int q)
{
    if (q < 1) throw std::domain_error("density_negative needs q >= 1");
    return {0, -q, residue_M_power(q) * (factorial(q - 1) * sign_pow(q))};
}

// Taylor coefficients of x / (1 - e^{-x})
inline std::vector<Rational> bernoulli_plus(int N)
{
    // (1 - e^{-x}) / x = sum_s (-1)^s x^s / (s+1)!
    std::vector<Rational> d(static_cast<std::size_t>(N + 1)), r(static_cast<std::size_t>(N + 1));
    for (int s = 0; s <= N; ++s) d[static_cast<std::size_t>(s)] = Rational(sign_pow(s)) / factorial(s + 1);
    for (int s = 0; s <= N; ++s) {
        Rational acc = s == 0 ? Rational(1) : Rational(0);
        for (int j = 1; j <= s; ++j) acc -= d[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(s - j)];
        r[static_cast<std::size_t>(s)] = acc;
    }
    return r;
}

// eps d_x (1 - Lambda^{-1})^{-1} (log Q - log P), derivative picture
inline EpsSeries density_h00(int N)
{
    auto b = bernoulli_plus(N);
    EpsSeries s(N);
    RingElem f = tr(Tag::LogQminusLogP);
    for (int j = 0; j <= N; ++j) {
        s[j] = f * b[static_cast<std::size_t>(j)];
        f = total_x_derivative(f);
    }
    return s;
}

// evolutionary derivative of e along (dP, dQ)
inline RingElem prolong(const RingElem& e, const RingElem& dP, const RingElem& dQ)
{
    auto dvar = [&](Var v) -> const RingElem& {
        if (v == Var::P) return dP;
        if (v == Var::Q) return dQ;
        throw std::domain_error("prolongation only acts on P and Q");
    };
    RingElem r;
    for (auto& g : generators_of(e)) {
        if (g.kind == Kind::Shift) {
            r += partial(e, g) * shift(dvar(g.var()), g.idx);
        } else if (g.kind == Kind::Trans && g.shiftable()) {
            RingElem pg = partial(e, g);
            for (auto& [b, d] : trans_gradient(g, true)) r += pg * d * shift(dvar(b.var()), b.idx);
        } else if (g.kind == Kind::Deriv) {
            throw PictureMismatch("prolong expects a shift-picture element");
        }
    }
    return r;
}

inline RingElem prolong(const RingElem& e, const FlowRHS& f) { return prolong(e, f.dP, f.dQ); }

// eps L_t = [X, L] is realized as eps A_t = Y A - A X, eps B_t = Y B - B X;
// every other coefficient of those two operators must vanish.
inline FlowRHS flow_from_generator(const FlowLabel& label, const Op& X, const Op& Y)
{
    Op A = op_A(), B = op_B();
    Op EA = Y * A - A * X;
    Op EB = Y * B - B * X;
    for (auto& [n, c] : EA.coeffs())
        if (n != 0) throw OperatorInconsistency("A-equation has a stray Lambda^" + std::to_string(n) + " term");
    for (auto& [n, c] : EB.coeffs())
        if (n != -1) throw OperatorInconsistency("B-equation has a stray Lambda^" + std::to_string(n) + " term");
    return {label, -EA.coeff(0), -EB.coeff(-1)};
}

// generator X of the flow: eps dL/dt = [X, L]
inline Op flow_generator(const FlowLabel& label)
{
    if (label.alpha == 2 && label.q >= 0) {
        int n = label.q + 1;
        return power(build_L(n - 1), n, 0).plus_part().scaled(Rational(1) / factorial(n));
    }
    if (label.alpha == 0 && label.q <= -1) {
        int p = -label.q;
        Op X = power(build_M(p - 1), p).minus_part();
        return X.scaled(factorial(p - 1) * sign_pow(p - 1));
    }
    throw std::domain_error("no Lax flow for label " + label.to_string());
}

inline FlowRHS lax_flow(const FlowLabel& label)
{
    Op X = flow_generator(label);
    if (label.alpha == 2) {
        int n = label.q + 1;
        Op K = Op::mul(op_B() * X, geometric_inverse(InverseKind::OneMinusQLambdaInv, n), 0);
        return flow_from_generator(label, X, K.plus_part());
    }
    int p = -label.q;
    Op K = op_A() * X * geometric_inverse(InverseKind::LambdaMinusPUpward, p);
    return flow_from_generator(label, X, K.minus_part());
}

inline FlowRHS lax_flow(int alpha, int q) { return lax_flow(FlowLabel{alpha, q}); }

inline Density density_for(const FlowLabel& label)
{
    return label.alpha == 2 ? density_positive(label.q) : density_negative(-label.q);
}

} // namespace alh
