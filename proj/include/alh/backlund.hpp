#pragma once

// The auto-Backlund transformation
//   P~ = P^- (Q^+ - P) / (Q - P^-),   Q~ = Q (Q^+ - P) / (Q - P^-)
// with exact rational-function checks and its lattice application.

#include "hamiltonian.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace alh {

// num / prod f^e over non-monomial factors f; monomial denominators live in num
// as negative exponents. No gcd is taken, equality cross-multiplies.
class Frac {
public:
    Frac() = default;
    Frac(int c) : num_(c) {}
    Frac(const Rational& c) : num_(c) {}
    Frac(const RingElem& n) : num_(n) {}

    static Frac over(const RingElem& n, const RingElem& d)
    {
        Frac r(n);
        r.divide_by(d, 1);
        return r;
    }

    const RingElem& num() const { return num_; }
    const std::map<RingElem, int>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RingElem den_product() const
    {
        RingElem d(1);
        for (auto& [f, e] : den_) d *= f.pow(e);
        return d;
    }

    Frac& operator+=(const Frac& o) { return *this = add(*this, o, 1); }
    Frac& operator-=(const Frac& o) { return *this = add(*this, o, -1); }
    Frac operator-() const
    {
        Frac r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend Frac operator+(const Frac& a, const Frac& b) { return add(a, b, 1); }
    friend Frac operator-(const Frac& a, const Frac& b) { return add(a, b, -1); }
    friend Frac operator*(const Frac& a, const Frac& b)
    {
        Frac r;
        r.num_ = a.num_ * b.num_;
        if (r.num_.is_zero()) return r;
        r.den_ = a.den_;
        for (auto& [f, e] : b.den_) r.den_[f] += e;
        return r;
    }
    friend Frac operator*(const Frac& a, const Rational& s)
    {
        Frac r = a;
        r.num_ *= s;
        if (r.num_.is_zero()) r.den_.clear();
        return r;
    }

    Frac inverse() const
    {
        if (num_.is_zero()) throw std::domain_error("inverse of zero");
        Frac r(den_product());
        r.divide_by(num_, 1);
        return r;
    }
    friend Frac operator/(const Frac& a, const Frac& b) { return a * b.inverse(); }

    friend bool operator==(const Frac& a, const Frac& b)
    {
        std::map<RingElem, int> common = a.den_;
        for (auto& [f, e] : b.den_) common[f] = std::max(common[f], e);
        auto lift = [&](const Frac& x) {
            RingElem r = x.num_;
            for (auto& [f, e] : common) {
                auto it = x.den_.find(f);
                r *= f.pow(e - (it == x.den_.end() ? 0 : it->second));
            }
            return r;
        };
        return lift(a) == lift(b);
    }
    friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }

    friend Frac shift(const Frac& x, int k)
    {
        Frac r(shift(x.num_, k));
        for (auto& [f, e] : x.den_) r.divide_by(shift(f, k), e);
        return r;
    }

    // d/dg of num / prod f^e
    friend Frac partial(const Frac& x, const Generator& g)
    {
        Frac r(partial(x.num_, g));
        r.den_ = x.den_;
        for (auto& [f, e] : x.den_) {
            RingElem df = partial(f, g);
            if (df.is_zero()) continue;
            Frac t(x.num_ * df * Rational(-e));
            t.den_ = x.den_;
            t.den_[f] += 1;
            r += t;
        }
        return r;
    }

    std::string to_string() const
    {
        if (den_.empty()) return num_.to_string();
        std::string s = "(" + num_.to_string() + ")/(";
        bool first = true;
        for (auto& [f, e] : den_) {
            if (!first) s += "*";
            first = false;
            s += "(" + f.to_string() + ")";
            if (e != 1) s += "^" + std::to_string(e);
        }
        return s + ")";
    }

    double evaluate(const std::function<double(const Generator&)>& val) const
    {
        double d = 1;
        for (auto& [f, e] : den_) d *= std::pow(alh::evaluate(f, val), e);
        return alh::evaluate(num_, val) / d;
    }

private:
    void divide_by(const RingElem& d, int e)
    {
        if (d.is_zero()) throw std::domain_error("division by zero");
        if (auto inv = d.inverse()) {
            num_ *= inv->pow(e);
            return;
        }
        // unit-normalize so equal factors share a key
        Rational lead = d.terms().begin()->second;
        RingElem f = d * (Rational(1) / lead);
        for (int i = 0; i < e; ++i) num_ *= Rational(1) / lead;
        den_[f] += e;
    }

    static Frac add(const Frac& a, const Frac& b, int sign)
    {
        if (b.num_.is_zero()) return a;
        if (a.num_.is_zero()) return sign > 0 ? b : -b;
        std::map<RingElem, int> common = a.den_;
        for (auto& [f, e] : b.den_) common[f] = std::max(common[f], e);
        auto lift = [&](const Frac& x) {
            RingElem r = x.num_;
            for (auto& [f, e] : common) {
                auto it = x.den_.find(f);
                r *= f.pow(e - (it == x.den_.end() ? 0 : it->second));
            }
            return r;
        };
        Frac r;
        r.num_ = sign > 0 ? lift(a) + lift(b) : lift(a) - lift(b);
        if (!r.num_.is_zero()) r.den_ = common;
        return r;
    }

    RingElem num_;
    std::map<RingElem, int> den_;
};

inline bool coeff_is_zero(const Frac& c) { return c.is_zero(); }
inline std::string to_string(const Frac& f) { return f.to_string(); }

using FracOp = LaurentOp<Frac>;

inline FracOp to_frac_op(const Op& A)
{
    FracOp r;
    for (auto& [n, c] : A.coeffs()) r.set(n, Frac(c));
    return r;
}

// replace every shifted P, Q in e by the given Frac images
inline Frac substitute_frac(const RingElem& e, const std::function<Frac(const Generator&)>& image)
{
    Frac r;
    for (auto& [m, c] : e.terms()) {
        Frac t(c);
        for (auto& [g, ex] : m) {
            Frac x = image(g);
            if (ex < 0) x = x.inverse();
            for (int i = 0; i < std::abs(ex); ++i) t = t * x;
        }
        r += t;
    }
    return r;
}

struct BacklundPair {
    Frac Ptilde;
    Frac Qtilde;
};

inline BacklundPair backlund()
{
    RingElem common = Q(1) - P();
    RingElem den = Q() - P(-1);
    return {Frac::over(P(-1) * common, den), Frac::over(Q() * common, den)};
}

struct BacklundReport {
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> sides;
};

inline void record(BacklundReport& r, const std::string& what, const Frac& lhs, const Frac& rhs)
{
    if (lhs != rhs) {
        r.pass = false;
        r.sides.emplace_back(what + ": " + lhs.to_string(), rhs.to_string());
    }
}

// Q~/P~ = Q/P^- and (Q~/P~)(P^-/Q^-) = Q/Q^-
inline BacklundReport backlund_identity_check()
{
    BacklundReport r{"backlund multiplicative identity", true, {}};
    auto [Pt, Qt] = backlund();
    Frac ratio = Qt / Pt;
    record(r, "Q~/P~", ratio, Frac::over(Q(), P(-1)));
    record(r, "(Q~/P~)(P^-/Q^-)", ratio * Frac(P(-1)) * Frac(Q(-1, -1)), Frac(Q() * Q(-1, -1)));
    return r;
}

// eps^1 coefficients of P~ and Q~ against
//   A0 = (Q_x P - P_x Q)/(Q - P),  B0 = (Q_x - P_x) Q/(Q - P)
inline BacklundReport backlund_order_eps_check()
{
    BacklundReport r{"backlund eps expansion", true, {}};
    RingElem Pd = dj(Var::P), Qd = dj(Var::Q), Px = dj(Var::P, 1), Qx = dj(Var::Q, 1);
    RingElem common = Q(1) - P(), den = Q() - P(-1);
    EpsSeries D = eps_expand(den, 1);
    struct Case {
        const char* name;
        RingElem numer;
        RingElem leading;
        RingElem first_times_D0;  // eps^1 coefficient times (Q - P)
    };
    Case cases[] = {
        {"P~", P(-1) * common, Pd, Qx * Pd - Px * Qd},
        {"Q~", Q() * common, Qd, (Qx - Px) * Qd},
    };
    for (auto& c : cases) {
        EpsSeries N = eps_expand(c.numer, 1);
        Frac lead = Frac::over(N[0], D[0]);
        record(r, std::string(c.name) + " eps^0", lead, Frac(c.leading));
        // (N1 D0 - N0 D1)/D0^2 with D0 = Q - P
        record(r, std::string(c.name) + " eps^1", Frac(N[1] * D[0] - N[0] * D[1]), Frac(c.first_times_D0 * D[0]));
    }
    return r;
}

using FracHamOp = std::array<std::array<FracOp, 2>, 2>;

inline FracHamOp frac_hamop(const HamOp& A, const std::function<Frac(const Generator&)>& image)
{
    FracHamOp r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (auto& [n, c] : A.e[i][j].coeffs()) r[i][j].set(n, substitute_frac(c, image));
    return r;
}

inline FracHamOp matmul(const FracHamOp& X, const FracHamOp& Y)
{
    FracHamOp r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) r[i][j] += X[i][k] * Y[k][j];
    return r;
}

// J and J^* written out entry by entry as in the invariance statement
inline std::pair<FracHamOp, FracHamOp> backlund_frechet()
{
    auto [Pt, Qt] = backlund();
    Generator gP = Generator::shift(Var::P, 0), gPm = Generator::shift(Var::P, -1);
    Generator gQ = Generator::shift(Var::Q, 0), gQp = Generator::shift(Var::Q, 1);
    auto lam = [](int k) { return FracOp::lambda(k); };
    auto mul = [](const Frac& f) { return FracOp(f); };
    FracHamOp J, Js;
    const Frac* img[2] = {&Pt, &Qt};
    for (std::size_t i = 0; i < 2; ++i) {
        const Frac& t = *img[i];
        J[i][0] = mul(partial(t, gP)) + mul(partial(t, gPm)) * lam(-1);
        J[i][1] = mul(partial(t, gQ)) + mul(partial(t, gQp)) * lam(1);
        Js[0][i] = mul(partial(t, gP)) + lam(1) * mul(partial(t, gPm));
        Js[1][i] = mul(partial(t, gQ)) + lam(-1) * mul(partial(t, gQp));
    }
    return {J, Js};
}

// J P J^* = P|_{P -> P~, Q -> Q~} for P = P0, P1 in (P, Q) coordinates
inline BacklundReport backlund_frechet_invariance_check()
{
    BacklundReport r{"backlund preserves the bihamiltonian pair", true, {}};
    auto [Pt, Qt] = backlund();
    auto [J, Js] = backlund_frechet();
    auto identity = [](const Generator& g) { return Frac(RingElem::gen(g)); };
    auto tilde = [&](const Generator& g) -> Frac {
        if (g.kind != Kind::Shift) throw std::domain_error("unexpected generator in a Hamiltonian operator");
        return shift(g.var() == Var::P ? Pt : Qt, g.idx);
    };
    for (int which = 0; which < 2; ++which) {
        HamOp H = which == 0 ? P0(Coords::PQ) : P1(Coords::PQ);
        FracHamOp lhs = matmul(matmul(J, frac_hamop(H, identity)), Js);
        FracHamOp rhs = frac_hamop(H, tilde);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                if (lhs[i][j] == rhs[i][j]) continue;
                r.pass = false;
                r.sides.emplace_back("P" + std::to_string(which) + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                         "): " + to_string(lhs[i][j]),
                                     to_string(rhs[i][j]));
            }
        }
    }
    return r;
}

struct BacklundPole : std::domain_error {
    using std::domain_error::domain_error;
};

// periodic lattice version; throws when Q_n = P_{n-1}
inline void backlund_apply(const std::vector<double>& P, const std::vector<double>& Q, std::vector<double>& Pt,
                           std::vector<double>& Qt, double tol = 1e-14)
{
    const std::size_t n = P.size();
    if (Q.size() != n || n == 0) throw std::invalid_argument("lattice fields must have equal nonzero length");
    Pt.assign(n, 0.0);
    Qt.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double Pm = P[(i + n - 1) % n], Qp = Q[(i + 1) % n];
        double den = Q[i] - Pm;
        if (std::abs(den) <= tol * std::max(1.0, std::abs(Q[i]))) throw BacklundPole("Q_n = P_{n-1} at site " + std::to_string(i));
        double c = (Qp - P[i]) / den;
        Pt[i] = Pm * c;
        Qt[i] = Q[i] * c;
    }
}

} // namespace alh
