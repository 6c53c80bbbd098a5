#pragma once

// Discrete variational calculus and the bihamiltonian pair in (P,Q) and
// (w1,w2) coordinates, w1 = Q - P, w2 = log Q.

#include "lax.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace alh {

enum class Coords { PQ, W };

// discrete Euler operator: sum_k shift(dh/dvar^{(k)}, -k)
inline RingElem variational_derivative(const RingElem& h, Var var)
{
    if (h.has_kind(Kind::Deriv)) throw PictureMismatch("variational_derivative expects a shift-picture element");
    std::map<int, bool> offsets;
    for (auto& g : generators_of(h)) {
        if (g.kind == Kind::Shift && g.var() == var) offsets[g.idx] = true;
        if (g.kind == Kind::Trans)
            for (auto& [b, d] : trans_gradient(g, true))
                if (b.kind == Kind::Shift && b.var() == var) offsets[b.idx] = true;
    }
    RingElem r;
    for (auto& [k, _] : offsets) r += shift(chain_partial(h, Generator::shift(var, k)), -k);
    return r;
}

using Grad = std::array<RingElem, 2>;

inline Grad gradient(const RingElem& h, Coords c)
{
    RingElem dP = variational_derivative(h, Var::P), dQ = variational_derivative(h, Var::Q);
    if (c == Coords::PQ) return {dP, dQ};
    // P = e^{w2} - w1, Q = e^{w2}
    return {-dP, Q() * (dP + dQ)};
}

// 2x2 matrix of difference operators, the eps^{-1} prefactor kept implicit
struct HamOp {
    Coords coords = Coords::PQ;
    std::array<std::array<Op, 2>, 2> e;
};

inline Grad apply_hamop(const HamOp& op, const Grad& g, Coords c)
{
    if (op.coords != c) throw std::invalid_argument("coordinate tag mismatch");
    Grad r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[static_cast<std::size_t>(i)] += apply(op.e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], g[static_cast<std::size_t>(j)]);
    return r;
}

inline Op mult(const RingElem& a) { return Op(a); }
inline Op lam(int k) { return Op::lambda(k); }
inline Op one() { return Op(RingElem(1)); }

inline HamOp P0(Coords c)
{
    HamOp h{c, {}};
    if (c == Coords::PQ) {
        h.e[0][0] = mult(Q()) * lam(-1) - lam(1) * mult(Q());
        h.e[0][1] = (one() - lam(1)) * mult(Q());
        h.e[1][0] = mult(Q()) * (lam(-1) - one());
    } else {
        h.e[0][1] = lam(1) - one();
        h.e[1][0] = one() - lam(-1);
    }
    return h;
}

inline HamOp P1(Coords c)
{
    HamOp h{c, {}};
    if (c == Coords::PQ) {
        h.e[0][1] = mult(P()) * (lam(1) - one()) * mult(Q());
        h.e[1][0] = mult(Q()) * (one() - lam(-1)) * mult(P());
        h.e[1][1] = mult(Q()) * (lam(1) - lam(-1)) * mult(Q());
    } else {
        Op w1 = mult(Q() - P()), ew2 = mult(Q());
        h.e[0][0] = -(ew2 * lam(-1) * w1) + w1 * lam(1) * ew2;
        h.e[0][1] = w1 * (lam(1) - one()) + ew2 * (one() - lam(-1));
        h.e[1][0] = (one() - lam(-1)) * w1 + (lam(1) - one()) * ew2;
        h.e[1][1] = lam(1) - lam(-1);
    }
    return h;
}

// (A^*)_{ij} = (A_{ji})^*
inline HamOp adjoint(const HamOp& A)
{
    HamOp r{A.coords, {}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) r.e[i][j] = adjoint(A.e[j][i]);
    return r;
}

inline bool is_skew_adjoint(const HamOp& A)
{
    HamOp s = adjoint(A);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (s.e[i][j] != -A.e[i][j]) return false;
    return true;
}

// densities of the Hamiltonians H_{2,p} = int h_{2,p+1} and H_{0,-q} = int h_{0,-q+1}
inline RingElem hamiltonian_density(int alpha, int level)
{
    if (alpha == 2) return density_positive(level + 1).value;
    if (alpha == 0 && level <= -2) return density_negative(-level - 1).value;
    if (alpha == 0 && level == -1) return tr(Tag::LogQminusLogP);  // h_{0,0} modulo total derivatives
    throw std::domain_error("no constructive Hamiltonian density for this label");
}

// velocity of w along a flow given in (P,Q): (Q_t - P_t, Q_t / Q)
inline Grad w_velocity(const FlowRHS& f) { return {f.dQ - f.dP, f.dQ * Q(0, -1)}; }

struct IdentityReport {
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> sides;  // lhs/rhs texts on failure
};

// d h_a / d t^b = d h_b / d t^a as exact shift-picture polynomials
inline IdentityReport tau_symmetry(const FlowLabel& a, const FlowLabel& b)
{
    RingElem lhs = prolong(density_for(a).value, lax_flow(b));
    RingElem rhs = prolong(density_for(b).value, lax_flow(a));
    IdentityReport r{"tau-symmetry " + a.to_string() + " / " + b.to_string(), lhs == rhs, {}};
    if (!r.pass) r.sides.emplace_back(lhs.to_string(), rhs.to_string());
    return r;
}

// P1 dH_{2,p-1} = (p+1) P0 dH_{2,p}
inline IdentityReport recursion_positive(int p, Coords c)
{
    Grad lhs = apply_hamop(P1(c), gradient(hamiltonian_density(2, p - 1), c), c);
    Grad rhs = apply_hamop(P0(c), gradient(hamiltonian_density(2, p), c), c);
    IdentityReport r{"recursion t^{2," + std::to_string(p) + "}", true, {}};
    for (std::size_t i = 0; i < 2; ++i) {
        RingElem right = rhs[i] * Rational(p + 1);
        if (lhs[i] != right) {
            r.pass = false;
            r.sides.emplace_back(lhs[i].to_string(), right.to_string());
        }
    }
    return r;
}

// P1 dH_{0,-p-1} = -p P0 dH_{0,-p}
inline IdentityReport recursion_negative(int p, Coords c)
{
    Grad lhs = apply_hamop(P1(c), gradient(hamiltonian_density(0, -p - 1), c), c);
    Grad rhs = apply_hamop(P0(c), gradient(hamiltonian_density(0, -p), c), c);
    IdentityReport r{"recursion t^{0,-" + std::to_string(p) + "}", true, {}};
    for (std::size_t i = 0; i < 2; ++i) {
        RingElem right = rhs[i] * Rational(-p);
        if (lhs[i] != right) {
            r.pass = false;
            r.sides.emplace_back(lhs[i].to_string(), right.to_string());
        }
    }
    return r;
}

// ---- dispersionless limit

// sum_j c_j d_x^j with derivative-picture coefficients
using DxOp = std::map<int, RingElem>;

inline bool dxop_equal(const DxOp& a, const DxOp& b)
{
    auto clean = [](const DxOp& m) {
        DxOp r;
        for (auto& [k, c] : m)
            if (!c.is_zero()) r[k] = c;
        return r;
    };
    return clean(a) == clean(b);
}

// eps-order `order` part of sum_i a_i Lambda^i with Lambda^i = e^{i eps d_x}
inline DxOp eps_order(const Op& A, int order)
{
    DxOp r;
    for (auto& [i, a] : A.coeffs()) {
        EpsSeries s = eps_expand(a, order);
        for (int j = 0; j <= order; ++j) {
            int sd = order - j;  // eps power taken by the symbol
            Rational ip = 1;
            for (int t = 0; t < sd; ++t) ip *= i;
            if (ip == 0) continue;
            r[sd] += s[j] * (ip / factorial(sd));
        }
    }
    return r;
}

// (P,Q) jets in terms of v: Q = e^{v2}, P = e^{v2} - v1
inline RingElem pq_to_v(const RingElem& e)
{
    RingElem E = tr(Tag::ExpV2), v1x = dj(Var::v1, 1), v2x = dj(Var::v2, 1);
    return substitute(e, [&](const Generator& g) -> std::optional<RingElem> {
        if (g.kind != Kind::Deriv) return std::nullopt;
        if (g.var() == Var::Q) {
            if (g.idx == 0) return E;
            if (g.idx == 1) return E * v2x;
        }
        if (g.var() == Var::P) {
            if (g.idx == 0) return E - dj(Var::v1);
            if (g.idx == 1) return E * v2x - v1x;
        }
        if (g.var() == Var::P || g.var() == Var::Q)
            throw std::domain_error("pq_to_v only handles first jets");
        return std::nullopt;
    });
}

struct DxHamOp {
    std::array<std::array<DxOp, 2>, 2> e;
};

inline DxHamOp dispersionless_P0()
{
    DxHamOp h;
    h.e[0][1][1] = 1;
    h.e[1][0][1] = 1;
    return h;
}

inline DxHamOp dispersionless_P1()
{
    RingElem v1 = dj(Var::v1), E = tr(Tag::ExpV2);
    DxHamOp h;
    // the d_x term in (1,1) is 2 v1 e^{v2} = g^{11}; without it the operator is not skew
    h.e[0][0][0] = total_x_derivative(v1 * E);
    h.e[0][0][1] = v1 * E * Rational(2);
    h.e[0][1][1] = v1 + E;
    h.e[1][0][0] = total_x_derivative(v1 + E);
    h.e[1][0][1] = v1 + E;
    h.e[1][1][1] = 2;
    return h;
}

// eps-order `order` of a W-coordinate operator, mapped to v
inline DxHamOp eps_order(const HamOp& A, int order)
{
    if (A.coords != Coords::W) throw std::invalid_argument("dispersionless comparison uses W coordinates");
    DxHamOp r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (auto& [k, c] : eps_order(A.e[i][j], order)) r.e[i][j][k] = pq_to_v(c);
    return r;
}

inline bool equal(const DxHamOp& a, const DxHamOp& b)
{
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (!dxop_equal(a.e[i][j], b.e[i][j])) return false;
    return true;
}

} // namespace alh
