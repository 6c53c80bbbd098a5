#pragma once

// Sparse Laurent polynomials over Q in jet generators.
//
// Two pictures never mix inside one element: the shift picture (P, Q at
// lattice offsets) and the derivative picture (x-jets P, P_x, P_xx, ...).
// eps_expand maps the first into the second.

#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alh {

enum class Kind : std::uint8_t { Shift = 0, Deriv = 1, Trans = 2 };

enum class Var : std::uint8_t { P = 0, Q = 1, v1 = 2, v2 = 3, w1 = 4, w2 = 5 };

enum class Tag : std::uint8_t {
    ExpV2 = 0,
    LogV1 = 1,
    SqrtV1ExpV2 = 2,
    LogExpV2MinusV1 = 3,  // log(e^{v2} - v1), the transcendental part of phi
    LogQminusLogP = 4,
    LogQ = 5,
    LogP = 6,
};

struct PictureMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

struct Generator {
    Kind kind = Kind::Shift;
    std::uint8_t id = 0;  // Var or Tag
    int idx = 0;          // lattice offset (Shift, shiftable Trans) or jet order (Deriv)

    static Generator shift(Var v, int offset) { return {Kind::Shift, static_cast<std::uint8_t>(v), offset}; }
    static Generator deriv(Var v, int order) { return {Kind::Deriv, static_cast<std::uint8_t>(v), order}; }
    static Generator trans(Tag t, int offset = 0) { return {Kind::Trans, static_cast<std::uint8_t>(t), offset}; }

    Var var() const { return static_cast<Var>(id); }
    Tag tag() const { return static_cast<Tag>(id); }

    std::uint32_t key() const
    {
        return (static_cast<std::uint32_t>(kind) << 24) | (static_cast<std::uint32_t>(id) << 16) |
               static_cast<std::uint32_t>(idx + 32768);
    }
    friend bool operator<(const Generator& a, const Generator& b) { return a.key() < b.key(); }
    friend bool operator==(const Generator& a, const Generator& b) { return a.key() == b.key(); }
    friend bool operator!=(const Generator& a, const Generator& b) { return !(a == b); }

    // Trans tags whose argument is a lattice field and therefore moves under shifts.
    bool shiftable() const
    {
        if (kind == Kind::Shift) return true;
        if (kind != Kind::Trans) return false;
        auto t = tag();
        return t == Tag::LogQminusLogP || t == Tag::LogQ || t == Tag::LogP;
    }
};

inline std::string var_name(Var v)
{
    switch (v) {
    case Var::P: return "P";
    case Var::Q: return "Q";
    case Var::v1: return "v1";
    case Var::v2: return "v2";
    case Var::w1: return "w1";
    case Var::w2: return "w2";
    }
    return "?";
}

inline std::string tag_name(Tag t)
{
    switch (t) {
    case Tag::ExpV2: return "exp(v2)";
    case Tag::LogV1: return "log(v1)";
    case Tag::SqrtV1ExpV2: return "sqrt(v1*exp(v2))";
    case Tag::LogExpV2MinusV1: return "log(exp(v2)-v1)";
    case Tag::LogQminusLogP: return "log(Q/P)";
    case Tag::LogQ: return "log(Q)";
    case Tag::LogP: return "log(P)";
    }
    return "?";
}

inline std::string offset_suffix(int k)
{
    if (k == 0) return "";
    return k > 0 ? "[+" + std::to_string(k) + "]" : "[" + std::to_string(k) + "]";
}

inline std::string to_string(const Generator& g)
{
    switch (g.kind) {
    case Kind::Shift: return var_name(g.var()) + offset_suffix(g.idx);
    case Kind::Deriv: return g.idx == 0 ? var_name(g.var()) : var_name(g.var()) + "_" + std::string(g.idx, 'x');
    case Kind::Trans: return tag_name(g.tag()) + offset_suffix(g.idx);
    }
    return "?";
}

// Sorted (generator, nonzero exponent) list.
using Monomial = std::vector<std::pair<Generator, int>>;

inline int degree(const Monomial& m)
{
    int d = 0;
    for (auto& [g, e] : m) d += e;
    return d;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b)
{
    Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            int e = a[i].second + b[j].second;
            if (e != 0) r.emplace_back(a[i].first, e);
            ++i;
            ++j;
        }
    }
    return r;
}

inline std::string to_string(const Monomial& m)
{
    std::string s;
    for (auto& [g, e] : m) {
        if (!s.empty()) s += "*";
        s += to_string(g);
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

// canonical print order: higher total degree first, then generator enumeration
struct GradedLex {
    bool operator()(const Monomial& a, const Monomial& b) const
    {
        int da = degree(a), db = degree(b);
        if (da != db) return da > db;
        return a < b;
    }
};

inline bool operator<(const std::pair<Generator, int>& a, const std::pair<Generator, int>& b)
{
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
}

class RingElem {
public:
    using Terms = std::map<Monomial, Rational>;

    RingElem() = default;
    RingElem(int c) { if (c != 0) terms_[{}] = Rational(c); }
    RingElem(const Rational& c) { if (c != 0) terms_[{}] = c; }

    static RingElem gen(const Generator& g, int e = 1)
    {
        RingElem r;
        if (e == 0) r.terms_[{}] = 1;
        else r.terms_[{{g, e}}] = 1;
        return r;
    }
    static RingElem monomial(const Monomial& m, const Rational& c = 1)
    {
        RingElem r;
        if (c != 0) r.terms_[m] = c;
        return r;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    Rational constant_term() const
    {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Monomial& m, const Rational& c)
    {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    RingElem& operator+=(const RingElem& o)
    {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    RingElem& operator-=(const RingElem& o)
    {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    RingElem& operator*=(const Rational& s)
    {
        if (s == 0) { terms_.clear(); return *this; }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    RingElem operator-() const
    {
        RingElem r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend RingElem operator+(RingElem a, const RingElem& b) { return a += b; }
    friend RingElem operator-(RingElem a, const RingElem& b) { return a -= b; }
    friend RingElem operator*(RingElem a, const Rational& s) { return a *= s; }
    friend RingElem operator*(const Rational& s, RingElem a) { return a *= s; }
    friend RingElem operator*(const RingElem& a, const RingElem& b)
    {
        RingElem r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    RingElem& operator*=(const RingElem& o) { return *this = *this * o; }

    friend bool operator==(const RingElem& a, const RingElem& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }
    friend bool operator<(const RingElem& a, const RingElem& b) { return a.terms_ < b.terms_; }

    // Only monomials are units.
    std::optional<RingElem> inverse() const
    {
        if (terms_.size() != 1) return std::nullopt;
        auto& [m, c] = *terms_.begin();
        Monomial inv;
        for (auto& [g, e] : m) inv.emplace_back(g, -e);
        return monomial(inv, Rational(1) / c);
    }

    RingElem pow(int n) const
    {
        if (n < 0) {
            auto inv = inverse();
            if (!inv) throw std::domain_error("negative power of a non-monomial RingElem");
            return inv->pow(-n);
        }
        RingElem r(1), b = *this;
        while (n) {
            if (n & 1) r *= b;
            n >>= 1;
            if (n) b = b * b;
        }
        return r;
    }

    template <class F>
    RingElem map_monomials(F&& f) const
    {
        RingElem r;
        for (auto& [m, c] : terms_) r += f(m, c);
        return r;
    }

    bool has_kind(Kind k) const
    {
        for (auto& [m, c] : terms_)
            for (auto& [g, e] : m)
                if (g.kind == k) return true;
        return false;
    }
    bool contains(const Generator& g) const
    {
        for (auto& [m, c] : terms_)
            for (auto& [h, e] : m)
                if (h == g) return true;
        return false;
    }

    std::string to_string() const
    {
        if (terms_.empty()) return "0";
        std::vector<std::pair<Monomial, Rational>> sorted(terms_.begin(), terms_.end());
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](auto& a, auto& b) { return GradedLex{}(a.first, b.first); });
        std::string s;
        bool first = true;
        for (auto& [m, c] : sorted) {
            bool neg = c < 0;
            Rational a = neg ? Rational(-c) : c;
            std::string body;
            if (m.empty()) body = alh::to_string(a);
            else if (a == 1) body = alh::to_string(m);
            else body = alh::to_string(a) + "*" + alh::to_string(m);
            if (first) s += neg ? "-" + body : body;
            else s += neg ? " - " + body : " + " + body;
            first = false;
        }
        return s;
    }

private:
    Terms terms_;
};

inline std::string to_string(const RingElem& e) { return e.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const RingElem& e) { return os << e.to_string(); }

// ---- common generators

inline RingElem sj(Var v, int k = 0, int e = 1) { return RingElem::gen(Generator::shift(v, k), e); }
inline RingElem dj(Var v, int n = 0, int e = 1) { return RingElem::gen(Generator::deriv(v, n), e); }
inline RingElem tr(Tag t, int k = 0, int e = 1) { return RingElem::gen(Generator::trans(t, k), e); }

inline RingElem P(int k = 0, int e = 1) { return sj(Var::P, k, e); }
inline RingElem Q(int k = 0, int e = 1) { return sj(Var::Q, k, e); }

// ---- pictures

inline bool in_shift_picture(const RingElem& e) { return !e.has_kind(Kind::Deriv); }
inline bool in_derivative_picture(const RingElem& e) { return !e.has_kind(Kind::Shift); }

inline RingElem shift(const RingElem& e, int k)
{
    if (e.has_kind(Kind::Deriv)) throw PictureMismatch("shift applied to a derivative-picture element");
    if (k == 0) return e;
    RingElem r;
    for (auto& [m, c] : e.terms()) {
        Monomial n = m;
        for (auto& [g, ex] : n)
            if (g.shiftable()) g.idx += k;
        r.add_term(n, c);
    }
    return r;
}

// lattice offsets spanned by the shift-carrying generators of a monomial
inline std::optional<std::pair<int, int>> offset_range(const Monomial& m)
{
    std::optional<std::pair<int, int>> r;
    for (auto& [g, e] : m) {
        if (!g.shiftable()) continue;
        if (!r) r = std::pair{g.idx, g.idx};
        else {
            r->first = std::min(r->first, g.idx);
            r->second = std::max(r->second, g.idx);
        }
    }
    return r;
}

// ---- derivatives

// d/dg treating every generator as independent
inline RingElem partial(const RingElem& e, const Generator& g)
{
    RingElem r;
    for (auto& [m, c] : e.terms()) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i].first != g) continue;
            int ex = m[i].second;
            Monomial n = m;
            if (ex == 1) n.erase(n.begin() + static_cast<long>(i));
            else n[i].second = ex - 1;
            r.add_term(n, c * ex);
        }
    }
    return r;
}

// Partial derivative of a transcendental generator with respect to the plain
// generator it depends on. Empty when the result is not a Laurent polynomial.
inline std::vector<std::pair<Generator, RingElem>> trans_gradient(const Generator& t, bool shift_pic)
{
    using G = Generator;
    auto base = [&](Var v) { return shift_pic ? G::shift(v, t.idx) : G::deriv(v, 0); };
    auto gen = [&](Var v, int e) { return RingElem::gen(base(v), e); };
    switch (t.tag()) {
    case Tag::ExpV2: return {{G::deriv(Var::v2, 0), RingElem::gen(t)}};
    case Tag::LogV1: return {{G::deriv(Var::v1, 0), dj(Var::v1, 0, -1)}};
    case Tag::SqrtV1ExpV2:
        return {{G::deriv(Var::v1, 0), Rational(1, 2) * RingElem::gen(t) * dj(Var::v1, 0, -1)},
                {G::deriv(Var::v2, 0), Rational(1, 2) * RingElem::gen(t)}};
    case Tag::LogExpV2MinusV1: throw std::domain_error("gradient of log(exp(v2)-v1) is not a Laurent polynomial");
    case Tag::LogQminusLogP: return {{base(Var::P), -gen(Var::P, -1)}, {base(Var::Q), gen(Var::Q, -1)}};
    case Tag::LogQ: return {{base(Var::Q), gen(Var::Q, -1)}};
    case Tag::LogP: return {{base(Var::P), gen(Var::P, -1)}};
    }
    return {};
}

inline std::vector<Generator> generators_of(const RingElem& e)
{
    std::vector<Generator> gs;
    for (auto& [m, c] : e.terms())
        for (auto& [g, ex] : m) gs.push_back(g);
    std::sort(gs.begin(), gs.end());
    gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
    return gs;
}

// d/dg with the chain rule through transcendental generators
inline RingElem chain_partial(const RingElem& e, const Generator& g)
{
    RingElem r = partial(e, g);
    for (auto& t : generators_of(e)) {
        if (t.kind != Kind::Trans) continue;
        for (auto& [b, d] : trans_gradient(t, g.kind == Kind::Shift))
            if (b == g) r += partial(e, t) * d;
    }
    return r;
}

inline RingElem total_x_derivative(const RingElem& e)
{
    if (e.has_kind(Kind::Shift)) throw PictureMismatch("total_x_derivative applied to a shift-picture element");
    for (auto& g : generators_of(e))
        if (g.kind == Kind::Trans && g.idx != 0)
            throw PictureMismatch("total_x_derivative applied to a shifted transcendental generator");
    RingElem r;
    for (auto& g : generators_of(e)) {
        RingElem pd = partial(e, g);
        if (g.kind == Kind::Deriv) {
            r += pd * RingElem::gen(Generator::deriv(g.var(), g.idx + 1));
        } else if (g.kind == Kind::Trans) {
            for (auto& [b, d] : trans_gradient(g, false))
                r += pd * d * RingElem::gen(Generator::deriv(b.var(), b.idx + 1));
        }
    }
    return r;
}

inline RingElem x_derivative(const RingElem& e, int n)
{
    RingElem r = e;
    for (int i = 0; i < n; ++i) r = total_x_derivative(r);
    return r;
}

// ---- substitution (ring homomorphism defined on generators)

inline RingElem substitute(const RingElem& e, const std::function<std::optional<RingElem>(const Generator&)>& f)
{
    RingElem r;
    for (auto& [m, c] : e.terms()) {
        RingElem t(c);
        for (auto& [g, ex] : m) {
            auto v = f(g);
            t *= v ? v->pow(ex) : RingElem::gen(g, ex);
        }
        r += t;
    }
    return r;
}

// ---- eps-expansion

class EpsSeries {
public:
    EpsSeries() = default;
    explicit EpsSeries(int N) : c_(static_cast<std::size_t>(N + 1)) {}
    EpsSeries(int N, const RingElem& e0) : c_(static_cast<std::size_t>(N + 1)) { c_[0] = e0; }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const RingElem& operator[](int s) const { return c_.at(static_cast<std::size_t>(s)); }
    RingElem& operator[](int s) { return c_.at(static_cast<std::size_t>(s)); }
    const std::vector<RingElem>& coeffs() const { return c_; }

    EpsSeries& operator+=(const EpsSeries& o)
    {
        int N = std::min(order(), o.order());
        c_.resize(static_cast<std::size_t>(N + 1));
        for (int s = 0; s <= N; ++s) c_[static_cast<std::size_t>(s)] += o[s];
        return *this;
    }
    EpsSeries& operator-=(const EpsSeries& o)
    {
        int N = std::min(order(), o.order());
        c_.resize(static_cast<std::size_t>(N + 1));
        for (int s = 0; s <= N; ++s) c_[static_cast<std::size_t>(s)] -= o[s];
        return *this;
    }
    friend EpsSeries operator+(EpsSeries a, const EpsSeries& b) { return a += b; }
    friend EpsSeries operator-(EpsSeries a, const EpsSeries& b) { return a -= b; }
    friend EpsSeries operator*(const EpsSeries& a, const EpsSeries& b)
    {
        int N = std::min(a.order(), b.order());
        EpsSeries r(N);
        for (int i = 0; i <= N; ++i) {
            if (a[i].is_zero()) continue;
            for (int j = 0; i + j <= N; ++j) r[i + j] += a[i] * b[j];
        }
        return r;
    }
    friend EpsSeries operator*(const Rational& s, EpsSeries a)
    {
        for (auto& c : a.c_) c *= s;
        return a;
    }
    friend bool operator==(const EpsSeries& a, const EpsSeries& b) { return a.c_ == b.c_; }

private:
    std::vector<RingElem> c_;
};

// derivative-picture image of an unshifted shift-picture generator
inline Generator unshifted(const Generator& g)
{
    if (g.kind == Kind::Shift) return Generator::deriv(g.var(), 0);
    if (g.kind == Kind::Trans) return Generator::trans(g.tag(), 0);
    return g;
}

// Lambda^k = exp(k eps d/dx): a factor g^e at offset k becomes
// sum_s (k eps)^s / s! d^s/dx^s (g^e) in the derivative picture.
inline EpsSeries eps_expand(const RingElem& e, int N)
{
    if (e.has_kind(Kind::Deriv)) throw PictureMismatch("eps_expand expects a shift-picture element");
    std::map<std::pair<Generator, int>, EpsSeries> cache;
    auto factor = [&](const Generator& g, int ex) -> const EpsSeries& {
        auto key = std::pair{g, ex};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        EpsSeries s(N);
        int k = g.shiftable() ? g.idx : 0;
        RingElem d = RingElem::gen(unshifted(g), ex);
        Rational kp = 1;
        for (int j = 0; j <= N; ++j) {
            if (j > 0) {
                kp *= k;
                if (kp == 0) break;
                d = total_x_derivative(d);
            }
            s[j] = d * (kp / factorial(j));
        }
        return cache.emplace(key, std::move(s)).first->second;
    };
    EpsSeries out(N);
    for (auto& [m, c] : e.terms()) {
        EpsSeries t(N, RingElem(c));
        for (auto& [g, ex] : m) t = t * factor(g, ex);
        out += t;
    }
    return out;
}

// ---- total differences

struct DifferenceSolution {
    bool exact = false;
    RingElem antidifference;  // g with shift(g,1) - g = e when exact
    RingElem residual;        // obstruction when not exact
};

// Telescoping over translation classes: write every monomial as a shift of a
// representative with minimal offset 0; e is exact iff the coefficients in
// each class sum to zero, and then g_a = -sum_{a' <= a} c_{a'}.
inline DifferenceSolution solve_total_difference(const RingElem& e)
{
    if (e.has_kind(Kind::Deriv)) throw PictureMismatch("solve_total_difference expects a shift-picture element");
    std::map<Monomial, std::map<int, Rational>> classes;
    RingElem unshiftable;
    for (auto& [m, c] : e.terms()) {
        auto range = offset_range(m);
        if (!range) {
            unshiftable.add_term(m, c);
            continue;
        }
        Monomial rep = m;
        for (auto& [g, ex] : rep)
            if (g.shiftable()) g.idx -= range->first;
        classes[rep][range->first] += c;
    }
    DifferenceSolution sol;
    sol.residual = unshiftable;
    for (auto& [rep, byoff] : classes) {
        Rational running = 0;
        RingElem repe = RingElem::monomial(rep);
        for (auto& [a, c] : byoff) {
            running += c;
            if (running != 0) {
                // g picks up -running at every offset between a and the next entry
                auto nx = std::next(byoff.find(a));
                int stop = nx == byoff.end() ? a + 1 : nx->first;
                for (int b = a; b < stop; ++b) sol.antidifference += shift(repe, b) * (-running);
            }
        }
        if (running != 0) sol.residual += repe * running;
    }
    sol.exact = sol.residual.is_zero();
    if (!sol.exact) sol.antidifference = RingElem();
    return sol;
}

// ---- numeric evaluation

inline double evaluate(const RingElem& e, const std::function<double(const Generator&)>& val)
{
    double s = 0;
    for (auto& [m, c] : e.terms()) {
        double t = to_double(c);
        for (auto& [g, ex] : m) t *= std::pow(val(g), ex);
        s += t;
    }
    return s;
}

} // namespace alh
