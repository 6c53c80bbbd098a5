#pragma once

// Virasoro operators L_m, m >= -1, on a truncated window of the times t^{alpha,p}
// and a check of [L_m, L_n] = (m - n) L_{m+n}. Operators are quadratic elements
// of the Weyl algebra in the t's; eps is set to 1 since every term has the same
// weight when t counts as eps^{-1} and d/dt as eps.

#include "rational.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alh {

struct TimeVar {
    int alpha = 0;
    int p = 0;

    friend auto operator<=>(const TimeVar&, const TimeVar&) = default;
    std::string to_string() const { return "t^{" + std::to_string(alpha) + "," + std::to_string(p) + "}"; }
};

inline Rational beta_coeff(int m, int k)
{
    if (k < 1) throw std::domain_error("beta_m(k) needs k >= 1");
    return factorial(m + k) / factorial(k - 1);
}

inline Rational alpha_coeff(int m, int k)
{
    if (k > 0) {
        Rational h = 0;
        for (int j = k; j <= m + k; ++j) h += Rational(1, j);
        return factorial(m + k) / factorial(k - 1) * h;
    }
    if (k == 0) return factorial(m);
    if (k > -m) return Rational(sign_pow(k)) * factorial(-k) * factorial(k + m);
    throw std::domain_error("alpha_m(k) needs k > -m");
}

// t^{1,p}, t^{2,p} for 0 <= p <= pmax; t^{0,p} for |p| <= pmax
struct Window {
    int pmax = 12;

    bool contains(const TimeVar& v) const
    {
        if (v.alpha == 0) return std::abs(v.p) <= pmax;
        return v.p >= 0 && v.p <= pmax;
    }
};

using VarPair = std::pair<TimeVar, TimeVar>;

// a^{ij} d_i d_j + b^i_j t^j d_i + c_{ij} t^i t^j + kappa_coeff * kappa, summed over ordered pairs
struct VirasoroOp {
    int m = 0;
    Window window;
    std::map<VarPair, Rational> a;
    std::map<VarPair, Rational> b;  // key (i, j): coefficient of t^j d_i
    std::map<VarPair, Rational> c;
    Rational kappa_coeff = 0;
};

namespace detail {

inline void add_if(std::map<VarPair, Rational>& to, const Window& w, TimeVar i, TimeVar j, const Rational& v)
{
    if (v == 0 || !w.contains(i) || !w.contains(j)) return;
    to[{i, j}] += v;
}

// symmetric quadratic term v * x_i x_j, split evenly over both orders
inline void add_sym(std::map<VarPair, Rational>& to, const Window& w, TimeVar i, TimeVar j, const Rational& v)
{
    if (i == j) {
        add_if(to, w, i, i, v);
    } else {
        add_if(to, w, i, j, v / 2);
        add_if(to, w, j, i, v / 2);
    }
}

// t^j d_i
inline void add_b(VirasoroOp& L, TimeVar j, TimeVar i, const Rational& v) { add_if(L.b, L.window, i, j, v); }

} // namespace detail

inline VirasoroOp build_virasoro(int m, Window w = {})
{
    if (m < -1) throw std::domain_error("Virasoro operators are defined for m >= -1");
    using detail::add_b;
    VirasoroOp L{m, w, {}, {}, {}, 0};
    const int P = w.pmax;
    if (m == -1) {
        for (int k = 1; k <= P; ++k) {
            add_b(L, {1, k}, {1, k - 1}, 1);
            add_b(L, {2, k}, {2, k - 1}, 1);
        }
        for (int p = -P; p <= P; ++p) add_b(L, {0, p}, {0, p - 1}, 1);
        detail::add_sym(L.c, w, {1, 0}, {2, 0}, 1);
        return L;
    }
    if (m == 0) {
        for (int k = 1; k <= P + 1; ++k) {
            add_b(L, {1, k}, {1, k}, k);
            add_b(L, {2, k - 1}, {2, k - 1}, k);
            add_b(L, {1, k}, {2, k - 1}, 2);
            add_b(L, {0, k}, {2, k - 1}, 1);
        }
        for (int p = -P; p <= P; ++p) add_b(L, {0, p}, {0, p}, p);
        detail::add_sym(L.c, w, {1, 0}, {1, 0}, 1);
        for (int k = 0; k <= P; ++k) detail::add_sym(L.c, w, {0, -k}, {1, k}, sign_pow(k));
        L.kappa_coeff = 1;
        return L;
    }
    for (int k = 1; k <= P + 1; ++k) {
        Rational bm = beta_coeff(m, k);
        add_b(L, {1, k}, {1, k + m}, bm);
        add_b(L, {2, k - 1}, {2, k + m - 1}, bm);
        add_b(L, {0, k}, {0, k + m}, bm);
        add_b(L, {0, -k - m}, {0, -k}, bm * sign_pow(m + 1));
    }
    for (int k = 0; k <= P; ++k) {
        Rational am = alpha_coeff(m, k);
        add_b(L, {1, k}, {2, k + m - 1}, am * 2);
        add_b(L, {0, k}, {2, k + m - 1}, am);
    }
    for (int k = 1 - m; k <= -1; ++k) {
        Rational am = alpha_coeff(m, k);
        detail::add_if(L.a, w, {2, k + m - 1}, {2, -k - 1}, am * sign_pow(k));
        add_b(L, {0, k}, {2, k + m - 1}, am);
    }
    for (int k = 0; k <= P; ++k) detail::add_sym(L.c, w, {0, -k - m}, {1, k}, alpha_coeff(m, k) * sign_pow(k + m));
    return L;
}

// ---- Weyl algebra in normal order (all t to the left of all d/dt)

inline bool is_symmetric(const std::map<VarPair, Rational>& coeffs)
{
    for (auto& [ij, v] : coeffs) {
        auto it = coeffs.find({ij.second, ij.first});
        if (it == coeffs.end() || it->second != v) return false;
    }
    return true;
}

// number of distinct unordered index pairs
inline std::size_t unordered_count(const std::map<VarPair, Rational>& coeffs)
{
    std::size_t n = 0;
    for (auto& [ij, v] : coeffs)
        if (!(ij.second < ij.first)) ++n;
    return n;
}

struct WeylMonomial {
    std::map<TimeVar, int> t;
    std::map<TimeVar, int> d;

    friend auto operator<=>(const WeylMonomial&, const WeylMonomial&) = default;

    std::string to_string() const
    {
        std::string s;
        auto put = [&](const std::string& head, const std::map<TimeVar, int>& f) {
            for (auto& [v, e] : f) {
                if (!s.empty()) s += " ";
                s += head + v.to_string();
                if (e > 1) s += "^" + std::to_string(e);
            }
        };
        put("", t);
        put("d/d", d);
        return s.empty() ? "1" : s;
    }

    int degree() const
    {
        int n = 0;
        for (auto& [v, e] : t) n += e;
        for (auto& [v, e] : d) n += e;
        return n;
    }
};

// constant terms carry a separate kappa coefficient
struct WeylElem {
    std::map<WeylMonomial, Rational> terms;
    Rational kappa = 0;

    void add(const WeylMonomial& mono, const Rational& v)
    {
        if (v == 0) return;
        auto it = terms.find(mono);
        if (it == terms.end()) {
            terms.emplace(mono, v);
        } else {
            it->second += v;
            if (it->second == 0) terms.erase(it);
        }
    }

    WeylElem& operator+=(const WeylElem& o)
    {
        for (auto& [mono, v] : o.terms) add(mono, v);
        kappa += o.kappa;
        return *this;
    }

    WeylElem scaled(const Rational& s) const
    {
        WeylElem r;
        for (auto& [mono, v] : terms) r.add(mono, v * s);
        r.kappa = kappa * s;
        return r;
    }
};

namespace detail {

// d^a t^b = sum_g C(a,g) C(b,g) g! t^{b-g} d^{a-g}, one variable at a time
inline void weyl_mul_into(WeylElem& out, const WeylMonomial& x, const WeylMonomial& y, const Rational& coeff)
{
    std::vector<TimeVar> shared;
    for (auto& [v, e] : x.d)
        if (y.t.count(v)) shared.push_back(v);

    std::vector<int> g(shared.size(), 0);
    while (true) {
        WeylMonomial r;
        r.t = x.t;
        r.d = y.d;
        Rational w = coeff;
        for (auto& [v, e] : y.t) r.t[v] += e;
        for (auto& [v, e] : x.d) r.d[v] += e;
        for (std::size_t s = 0; s < shared.size(); ++s) {
            const TimeVar& v = shared[s];
            int a = x.d.at(v), b = y.t.at(v), gg = g[s];
            w *= binomial(a, gg) * binomial(b, gg) * factorial(gg);
            if ((r.t[v] -= gg) == 0) r.t.erase(v);
            if ((r.d[v] -= gg) == 0) r.d.erase(v);
        }
        out.add(r, w);

        std::size_t s = 0;
        for (; s < shared.size(); ++s) {
            int cap = std::min(x.d.at(shared[s]), y.t.at(shared[s]));
            if (g[s] < cap) {
                ++g[s];
                break;
            }
            g[s] = 0;
        }
        if (s == shared.size()) break;
    }
}

} // namespace detail

inline WeylElem operator*(const WeylElem& x, const WeylElem& y)
{
    WeylElem r;
    for (auto& [mx, cx] : x.terms)
        for (auto& [my, cy] : y.terms) detail::weyl_mul_into(r, mx, my, cx * cy);
    return r;
}

inline WeylElem commutator(const WeylElem& x, const WeylElem& y)
{
    WeylElem r = x * y;
    r += (y * x).scaled(-1);
    return r;
}

inline WeylElem to_weyl(const VirasoroOp& L)
{
    WeylElem r;
    for (auto& [ij, v] : L.a) {
        WeylMonomial mono;
        mono.d[ij.first] += 1;
        mono.d[ij.second] += 1;
        r.add(mono, v);
    }
    for (auto& [ij, v] : L.b) {
        WeylMonomial mono;
        mono.t[ij.second] += 1;
        mono.d[ij.first] += 1;
        r.add(mono, v);
    }
    for (auto& [ij, v] : L.c) {
        WeylMonomial mono;
        mono.t[ij.first] += 1;
        mono.t[ij.second] += 1;
        r.add(mono, v);
    }
    r.kappa = L.kappa_coeff;
    return r;
}

struct VirasoroMismatch {
    std::string monomial;
    Rational lhs;
    Rational rhs;
};

struct VirasoroReport {
    int m = 0, n = 0;
    int pmax = 0;
    int interior = 0;
    std::size_t compared = 0;
    bool pass = false;
    // constant part of [L_m, L_n] - (m - n) L_{m+n} is `constant + kappa_coeff * kappa`
    Rational constant = 0;
    Rational kappa_coeff = 0;
    std::vector<VirasoroMismatch> mismatches;
};

inline bool interior_mono(const WeylMonomial& mono, const Window& in)
{
    for (auto& [v, e] : mono.t)
        if (!in.contains(v)) return false;
    for (auto& [v, e] : mono.d)
        if (!in.contains(v)) return false;
    return true;
}

// the constant term must vanish identically, or for kappa = 0 when kappa is the only obstruction
inline VirasoroReport virasoro_commutator(int m, int n, Window w = {})
{
    if (m < -1 || n < -1) throw std::domain_error("Virasoro indices start at -1");
    VirasoroReport rep{m, n, w.pmax, w.pmax - std::max(std::abs(m), std::abs(n)) - 1, 0, true, 0, 0, {}};
    if (rep.interior < 0) throw std::domain_error("window too small for the requested indices");
    WeylElem lhs = commutator(to_weyl(build_virasoro(m, w)), to_weyl(build_virasoro(n, w)));
    WeylElem rhs;
    if (m + n >= -1) rhs = to_weyl(build_virasoro(m + n, w)).scaled(m - n);
    else if (m != n) throw std::domain_error("m + n must be >= -1");

    Window in{rep.interior};
    WeylElem diff = lhs;
    diff += rhs.scaled(-1);
    std::map<WeylMonomial, bool> seen;
    for (auto* e : {&lhs, &rhs})
        for (auto& [mono, v] : e->terms)
            if (mono.degree() > 0 && interior_mono(mono, in)) seen[mono] = true;
    rep.compared = seen.size();
    auto value = [](const WeylElem& e, const WeylMonomial& mono) {
        auto it = e.terms.find(mono);
        return it == e.terms.end() ? Rational(0) : it->second;
    };
    for (auto& [mono, _] : seen) {
        Rational l = value(lhs, mono), r = value(rhs, mono);
        if (l != r) {
            rep.pass = false;
            rep.mismatches.push_back({mono.to_string(), l, r});
        }
    }
    rep.constant = value(diff, WeylMonomial{});
    rep.kappa_coeff = diff.kappa;
    if (rep.constant != 0) rep.pass = false;
    return rep;
}

// value of kappa forced by the constant terms, when some pair constrains it
inline Rational virasoro_kappa(Window w = {})
{
    VirasoroReport r = virasoro_commutator(1, -1, w);
    if (r.kappa_coeff == 0) throw std::logic_error("kappa is not constrained by [L_1, L_{-1}]");
    return -r.constant / r.kappa_coeff;
}

} // namespace alh
