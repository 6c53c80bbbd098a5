#pragma once

// The generalized Frobenius manifold with potential
//   F = 1/2 (v1)^2 v2 + v1 e^{v2} + 1/2 (v1)^2 log v1,
// its theta-functions, superpotential residues, two-point functions and
// canonical coordinates.
//
// Functions on the manifold are VFrac = num / D^n with D = v1 - e^{v2}; the
// numerator lives in the derivative-picture ring generated by v1, v2,
// e^{v2}, log v1, log(e^{v2} - v1) and sqrt(v1 e^{v2}).

#include "ring.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace alh {

inline RingElem v1(int e = 1) { return dj(Var::v1, 0, e); }
inline RingElem v2(int e = 1) { return dj(Var::v2, 0, e); }
inline RingElem ev2(int e = 1) { return tr(Tag::ExpV2, 0, e); }
inline RingElem logv1(int e = 1) { return tr(Tag::LogV1, 0, e); }
inline RingElem log_emv1(int e = 1) { return tr(Tag::LogExpV2MinusV1, 0, e); }
inline RingElem sqrt_v1ev2(int e = 1) { return tr(Tag::SqrtV1ExpV2, 0, e); }
inline RingElem D_elem() { return v1() - ev2(); }

struct IntegrabilityError : std::logic_error {
    using std::logic_error::logic_error;
};

struct VFrac {
    RingElem num;
    int n = 0;

    VFrac() = default;
    VFrac(const RingElem& a, int k = 0) : num(a), n(k) {}
    explicit VFrac(int c) : num(c) {}

    bool is_zero() const { return num.is_zero(); }
    std::string to_string() const
    {
        if (n == 0) return num.to_string();
        return "(" + num.to_string() + ")/(v1 - exp(v2))^" + std::to_string(n);
    }
};

inline VFrac lift(const VFrac& a, int n) { return {a.num * D_elem().pow(n - a.n), n}; }

inline VFrac operator+(const VFrac& a, const VFrac& b)
{
    int n = std::max(a.n, b.n);
    return {lift(a, n).num + lift(b, n).num, n};
}
inline VFrac operator-(const VFrac& a) { return {-a.num, a.n}; }
inline VFrac operator-(const VFrac& a, const VFrac& b) { return a + (-b); }
inline VFrac operator*(const VFrac& a, const VFrac& b) { return {a.num * b.num, a.n + b.n}; }
inline VFrac operator*(const VFrac& a, const Rational& s) { return {a.num * s, a.n}; }
inline VFrac& operator+=(VFrac& a, const VFrac& b) { return a = a + b; }
inline VFrac& operator-=(VFrac& a, const VFrac& b) { return a = a - b; }

// Divide num by D = v1 - E where possible. num is viewed as a polynomial in
// v1 over the other generators, after clearing negative powers of v1.
inline std::optional<RingElem> divide_by_D(const RingElem& num)
{
    Generator gv1 = Generator::deriv(Var::v1, 0);
    int minpow = 0;
    std::map<int, RingElem> byp;
    for (auto& [m, c] : num.terms()) {
        int e = 0;
        Monomial rest;
        for (auto& [g, ex] : m) {
            if (g == gv1) e = ex;
            else rest.emplace_back(g, ex);
        }
        byp[e].add_term(rest, c);
        minpow = std::min(minpow, e);
    }
    if (byp.empty()) return RingElem();
    int top = byp.rbegin()->first - minpow;
    if (top == 0) return std::nullopt;
    std::vector<RingElem> a(static_cast<std::size_t>(top + 1)), b(static_cast<std::size_t>(top));
    for (auto& [k, c] : byp) a[static_cast<std::size_t>(k - minpow)] = c;
    RingElem E = ev2();
    b[static_cast<std::size_t>(top - 1)] = a[static_cast<std::size_t>(top)];
    for (int j = top - 1; j >= 1; --j) b[static_cast<std::size_t>(j - 1)] = a[static_cast<std::size_t>(j)] + E * b[static_cast<std::size_t>(j)];
    if (!(a[0] + E * b[0]).is_zero()) return std::nullopt;
    RingElem q;
    for (int j = 0; j < top; ++j) q += b[static_cast<std::size_t>(j)] * v1(j + minpow);
    return q;
}

inline VFrac normalize(VFrac a)
{
    if (a.num.is_zero()) return {RingElem(), 0};
    while (a.n > 0) {
        auto q = divide_by_D(a.num);
        if (!q) break;
        a.num = *q;
        --a.n;
    }
    while (a.n < 0) {
        a.num *= D_elem();
        ++a.n;
    }
    return a;
}

inline bool operator==(const VFrac& a, const VFrac& b)
{
    int n = std::max(a.n, b.n);
    return lift(a, n).num == lift(b, n).num;
}
inline bool operator!=(const VFrac& a, const VFrac& b) { return !(a == b); }

// S^2 -> v1 e^{v2}
inline RingElem reduce_sqrt(const RingElem& e)
{
    RingElem r;
    Generator S = Generator::trans(Tag::SqrtV1ExpV2);
    for (auto& [m, c] : e.terms()) {
        Monomial rest;
        int s = 0;
        for (auto& [g, ex] : m) {
            if (g == S) s = ex;
            else rest.emplace_back(g, ex);
        }
        int half = s >= 0 ? s / 2 : -((-s + 1) / 2);
        int odd = s - 2 * half;
        RingElem t = RingElem::monomial(rest, c) * (v1() * ev2()).pow(half);
        if (odd) t *= sqrt_v1ev2();
        r += t;
    }
    return r;
}

// d/dv^a, a = 1, 2
inline VFrac vpartial(const VFrac& f, int a)
{
    if (a != 1 && a != 2) throw std::domain_error("flat coordinate index must be 1 or 2");
    Generator gv = Generator::deriv(a == 1 ? Var::v1 : Var::v2, 0);
    RingElem d = partial(f.num, gv);
    RingElem dle;  // coefficient of 1/D coming from log(e^{v2} - v1)
    for (auto& g : generators_of(f.num)) {
        if (g.kind != Kind::Trans) continue;
        RingElem pg = partial(f.num, g);
        switch (g.tag()) {
        case Tag::ExpV2:
            if (a == 2) d += pg * ev2();
            break;
        case Tag::LogV1:
            if (a == 1) d += pg * v1(-1);
            break;
        case Tag::SqrtV1ExpV2:
            d += pg * sqrt_v1ev2() * (a == 1 ? v1(-1) * Rational(1, 2) : RingElem(Rational(1, 2)));
            break;
        case Tag::LogExpV2MinusV1:
            // d/dv1 = -1/(E - v1) = 1/D, d/dv2 = E/(E - v1) = -E/D
            dle += a == 1 ? pg : -(pg * ev2());
            break;
        default:
            break;
        }
    }
    RingElem dD = a == 1 ? RingElem(1) : -ev2();
    // d(num/D^n) = (d D + dle - n num dD) / D^{n+1}
    VFrac r{d * D_elem() + dle - f.num * dD * Rational(f.n), f.n + 1};
    return normalize(r);
}

inline VFrac euler(const VFrac& f) { return normalize(v1() * vpartial(f, 1) + vpartial(f, 2)); }

// ---- structure of the manifold

struct FrobeniusData {
    static constexpr int charge_d = 1;
    static inline const std::array<Rational, 2> mu{Rational(-1, 2), Rational(1, 2)};
    static inline const std::array<std::array<int, 2>, 2> R1{{{0, 0}, {2, 0}}};

    static RingElem potential()
    {
        return Rational(1, 2) * v1(2) * v2() + v1() * ev2() + Rational(1, 2) * v1(2) * logv1();
    }
    static VFrac phi() { return {v2() - log_emv1(), 0}; }

    // F_{abc}, indices 1..2
    static RingElem F3(int a, int b, int c)
    {
        int ones = (a == 1) + (b == 1) + (c == 1);
        switch (ones) {
        case 3: return v1(-1);
        case 2: return 1;
        case 1: return ev2();
        default: return v1() * ev2();
        }
    }
    // c^g_{ab} = eta^{g x} F_{x a b}, eta antidiagonal
    static RingElem c(int g, int a, int b) { return F3(3 - g, a, b); }

    // intersection form g^{ab}
    static RingElem g(int a, int b)
    {
        if (a == 1 && b == 1) return v1() * ev2() * Rational(2);
        if (a == 2 && b == 2) return 2;
        return v1() + ev2();
    }

    // unity e = (v1 d1 - d2) / (v1 - e^{v2})
    static std::array<VFrac, 2> unity() { return {VFrac{v1(), 1}, VFrac{RingElem(-1), 1}}; }
};

inline bool check_associativity()
{
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int g = 1; g <= 2; ++g)
                for (int nu = 1; nu <= 2; ++nu) {
                    RingElem l, r;
                    for (int m = 1; m <= 2; ++m) {
                        l += FrobeniusData::c(m, a, b) * FrobeniusData::c(nu, m, g);
                        r += FrobeniusData::c(m, b, g) * FrobeniusData::c(nu, m, a);
                    }
                    if (l != r) return false;
                }
    return true;
}

inline bool check_symmetry_of_c3()
{
    int idx[3];
    for (idx[0] = 1; idx[0] <= 2; ++idx[0])
        for (idx[1] = 1; idx[1] <= 2; ++idx[1])
            for (idx[2] = 1; idx[2] <= 2; ++idx[2]) {
                // third derivatives of the potential, computed directly
                RingElem f = FrobeniusData::potential();
                VFrac d{f, 0};
                for (int i : idx) d = vpartial(d, i);
                if (d != VFrac{FrobeniusData::F3(idx[0], idx[1], idx[2]), 0}) return false;
            }
    return true;
}

inline bool check_unity()
{
    auto e = FrobeniusData::unity();
    for (int b = 1; b <= 2; ++b)
        for (int g = 1; g <= 2; ++g) {
            VFrac s;
            for (int a = 1; a <= 2; ++a) s += e[static_cast<std::size_t>(a - 1)] * VFrac{FrobeniusData::c(g, a, b), 0};
            if (s != VFrac{RingElem(g == b ? 1 : 0), 0}) return false;
        }
    return true;
}

// ---- antiderivatives

// int v1^a log(v1)^d dv1
inline RingElem int_v1_power_log(int a, int d)
{
    if (a == -1) return logv1(d + 1) * Rational(1, d + 1);
    RingElem r = v1(a + 1) * logv1(d) * Rational(1, a + 1);
    if (d > 0) r -= int_v1_power_log(a, d - 1) * Rational(d, a + 1);
    return r;
}

// int v2^b e^{c v2} dv2
inline RingElem int_v2_power_exp(int b, int c)
{
    if (c == 0) return v2(b + 1) * Rational(1, b + 1);
    RingElem r = v2(b) * ev2(c) * Rational(1, c);
    if (b > 0) r -= int_v2_power_exp(b - 1, c) * Rational(b, c);
    return r;
}

inline void require_polynomial(const VFrac& f, const char* what)
{
    if (f.n != 0) throw IntegrabilityError(std::string(what) + ": integrand still has a pole at v1 = exp(v2)");
    for (auto& g : generators_of(f.num))
        if (g.kind == Kind::Trans && (g.tag() == Tag::LogExpV2MinusV1 || g.tag() == Tag::SqrtV1ExpV2))
            throw IntegrabilityError(std::string(what) + ": unsupported transcendental in integrand");
}

inline RingElem integrate(const RingElem& f, int a)
{
    Generator gvar = Generator::deriv(a == 1 ? Var::v1 : Var::v2, 0);
    Generator gtr = Generator::trans(a == 1 ? Tag::LogV1 : Tag::ExpV2);
    RingElem r;
    for (auto& [m, c] : f.terms()) {
        int p = 0, q = 0;
        Monomial rest;
        for (auto& [g, ex] : m) {
            if (g == gvar) p = ex;
            else if (g == gtr) q = ex;
            else rest.emplace_back(g, ex);
        }
        if (a == 2 && p < 0) throw IntegrabilityError("negative power of v2");
        if (a == 1 && q < 0) throw IntegrabilityError("negative power of log v1");
        RingElem prim = a == 1 ? int_v1_power_log(p, q) : int_v2_power_exp(p, q);
        r += RingElem::monomial(rest, c) * prim;
    }
    return r;
}

// phi with d1 phi = g1, d2 phi = g2 (zero integration constant)
inline RingElem integrate_gradient(const VFrac& g1in, const VFrac& g2in)
{
    VFrac g1 = normalize(g1in), g2 = normalize(g2in);
    require_polynomial(g1, "gradient");
    require_polynomial(g2, "gradient");
    if (vpartial(g1, 2) != vpartial(g2, 1)) throw IntegrabilityError("gradient is not closed");
    RingElem T = integrate(g1.num, 1);
    VFrac r = normalize(g2 - vpartial(VFrac{T, 0}, 2));
    if (!vpartial(r, 1).is_zero()) throw IntegrabilityError("v2-remainder depends on v1");
    require_polynomial(r, "remainder");
    return T + integrate(r.num, 2);
}

// ---- theta functions

struct ThetaKey {
    int alpha;
    int k;
    friend bool operator<(const ThetaKey& a, const ThetaKey& b) { return std::pair{a.alpha, a.k} < std::pair{b.alpha, b.k}; }
};

// Hessian prescribed by the recursion: H_{gb} = c^e_{gb} d_e theta
inline std::array<VFrac, 3> recursion_hessian(const VFrac& th)
{
    VFrac d1 = vpartial(th, 1), d2 = vpartial(th, 2);
    auto H = [&](int g, int b) {
        return normalize(VFrac{FrobeniusData::c(1, g, b), 0} * d1 + VFrac{FrobeniusData::c(2, g, b), 0} * d2);
    };
    return {H(1, 1), H(1, 2), H(2, 2)};
}

inline std::array<VFrac, 3> hessian(const VFrac& th)
{
    VFrac d1 = vpartial(th, 1), d2 = vpartial(th, 2);
    return {vpartial(d1, 1), vpartial(d1, 2), vpartial(d2, 2)};
}

class ThetaTable {
public:
    const VFrac& get(int alpha, int k)
    {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = t_.find({alpha, k});
        if (it != t_.end()) return it->second;
        VFrac v = compute(alpha, k);
        return t_.emplace(ThetaKey{alpha, k}, v).first->second;
    }
    const std::map<ThetaKey, VFrac>& entries() const { return t_; }

    // Euler-relation right-hand side: d_E theta_{a,k} = lambda theta + known
    std::pair<int, VFrac> euler_rule(int alpha, int k)
    {
        if (alpha == 2) return {k + 1, VFrac()};
        if (alpha == 1) return {k, get(2, k - 1) * Rational(2)};
        if (k >= 1) return {k, get(2, k - 1)};
        return {k, VFrac()};
    }

private:
    VFrac compute(int alpha, int k)
    {
        if (alpha == 1 && k == 0) return {v2(), 0};
        if (alpha == 2 && k == 0) return {v1(), 0};
        if (alpha == 0 && k == 0) return FrobeniusData::phi();
        if ((alpha == 1 || alpha == 2) && k < 0) throw std::domain_error("theta_{1,k}, theta_{2,k} need k >= 0");
        if (k > 0) return compute_positive(alpha, k);
        return compute_negative(-k);
    }

    VFrac compute_positive(int alpha, int k)
    {
        auto H = recursion_hessian(get(alpha, k - 1));
        // gradient components: g1 from (H11, H12), g2 from (H12, H22)
        RingElem g1 = integrate_gradient(H[0], H[1]);
        RingElem g2 = integrate_gradient(H[1], H[2]);
        RingElem T = integrate_gradient(VFrac{g1, 0}, VFrac{g2, 0});
        // remaining freedom a v1 + b v2 + c, fixed by the Euler relation
        auto [lam, known] = euler_rule(alpha, k);
        VFrac R = normalize(known + VFrac{T, 0} * Rational(lam) - euler(VFrac{T, 0}));
        if (R.n != 0) throw IntegrabilityError("Euler residual has a pole");
        Rational r0 = 0, r1 = 0, r2 = 0;
        for (auto& [m, c] : R.num.terms()) {
            if (m.empty()) r0 = c;
            else if (m.size() == 1 && m[0].second == 1 && m[0].first == Generator::deriv(Var::v1, 0)) r1 = c;
            else if (m.size() == 1 && m[0].second == 1 && m[0].first == Generator::deriv(Var::v2, 0)) r2 = c;
            else throw IntegrabilityError("theta_{" + std::to_string(alpha) + "," + std::to_string(k) + "} violates quasi-homogeneity: " + R.to_string());
        }
        Rational a = 0, b = 0, c = 0;
        if (lam != 1) a = r1 / Rational(1 - lam);
        else if (r1 != 0) throw IntegrabilityError("Euler residual has an unremovable v1 term");
        b = -r2 / Rational(lam);
        c = (b - r0) / Rational(lam);
        return {T + v1() * a + v2() * b + RingElem(c), 0};
    }

    VFrac compute_negative(int k)
    {
        auto m = hessian(get(0, -k + 1));
        // m11 = g1 + g2/v1, m12 = E g1 + g2, m22 = v1 E g1 + E g2
        VFrac g1 = normalize(VFrac{v1(), 0} * m[0] - m[1]) * VFrac{RingElem(1), 1};
        VFrac g2 = normalize(VFrac{v1(), 0} * (m[1] - VFrac{ev2(), 0} * m[0])) * VFrac{RingElem(1), 1};
        g1 = normalize(g1);
        g2 = normalize(g2);
        VFrac m22 = normalize(VFrac{v1() * ev2(), 0} * g1 + VFrac{ev2(), 0} * g2);
        if (m22 != m[2]) throw IntegrabilityError("negative recursion: (2,2) equation fails");
        VFrac th = normalize((VFrac{v1(), 0} * g1 + g2) * Rational(-1, k));
        if (vpartial(th, 1) != g1 || vpartial(th, 2) != g2) throw IntegrabilityError("negative recursion: gradient mismatch");
        return th;
    }

    std::map<ThetaKey, VFrac> t_;
    std::recursive_mutex mu_;
};

inline ThetaTable& theta_table()
{
    static ThetaTable t;
    return t;
}

inline VFrac theta(int alpha, int k) { return theta_table().get(alpha, k); }

// checks of the defining relations at one level
inline bool check_recursion(int alpha, int k)
{
    auto lhs = hessian(theta(alpha, k));
    auto rhs = recursion_hessian(theta(alpha, k - 1));
    for (int i = 0; i < 3; ++i)
        if (lhs[static_cast<std::size_t>(i)] != rhs[static_cast<std::size_t>(i)]) return false;
    return true;
}

inline bool check_quasi_homogeneity(int alpha, int k)
{
    auto [lam, known] = theta_table().euler_rule(alpha, k);
    return euler(theta(alpha, k)) == known + theta(alpha, k) * Rational(lam);
}

// ---- superpotential residues

// Laurent series in one variable with ring coefficients
template <class C>
using Series = std::map<int, C>;

template <class C>
Series<C> series_mul(const Series<C>& a, const Series<C>& b, int lo, int hi)
{
    Series<C> r;
    for (auto& [i, x] : a)
        for (auto& [j, y] : b) {
            int n = i + j;
            if (n < lo || n > hi) continue;
            r[n] += x * y;
        }
    return r;
}

template <class C>
Series<C> series_pow(const Series<C>& a, int k, int lo, int hi)
{
    Series<C> r{{0, C(1)}};
    for (int i = 0; i < k; ++i) r = series_mul(r, a, lo, hi);
    return r;
}

// log(1 + c x) = sum_{j>=1} (-1)^{j+1} c^j x^j / j, for x^{sign*j}
inline Series<RingElem> log1p_series(const RingElem& c, int sign, int terms)
{
    Series<RingElem> s;
    for (int j = 1; j <= terms; ++j) s[sign * j] = c.pow(j) * Rational(sign_pow(j + 1), j);
    return s;
}

// theta_{2,k} = -1/(k+1)! Res_{p=inf} lambda^{k+1} dp/p = [p^0] lambda^{k+1} / (k+1)!
inline VFrac theta2_by_residue(int k)
{
    Series<RingElem> lam{{1, RingElem(1)}, {0, v1()}};
    for (int j = 1; j <= k + 1; ++j) lam[-j] = v1() * ev2(j);
    auto pw = series_pow(lam, k + 1, -(k + 1), k + 1);
    return {pw[0] * (Rational(1) / factorial(k + 1)), 0};
}

// Res at p = e^{v2} with s = p - e^{v2}:
// lambda^k / p = (s + E)^{k-1} (s + v1)^k / s^k
inline RingElem residue_at_E(int k, bool include_minus_branch)
{
    RingElem E = ev2();
    Series<RingElem> sE{{1, RingElem(1)}, {0, E}}, sv{{1, RingElem(1)}, {0, v1()}};
    int span = 3 * k + 2;
    Series<RingElem> f = series_mul(series_pow(sE, k - 1, -span, span), series_pow(sv, k, -span, span), -span, span);
    Series<RingElem> g;
    for (auto& [n, c] : f) g[n - k] = c;
    // log^+ = v2 + log(1 + s/E) + log(1 + v1/s)
    Series<RingElem> logp = log1p_series(ev2(-1), 1, span);
    for (auto& [n, c] : log1p_series(v1(), -1, span)) logp[n] += c;
    logp[0] += v2();
    Series<RingElem> lg = logp;
    Rational H = harmonic(k);
    if (include_minus_branch) {
        // log^- = log v1 + log(1 + s/v1) + log(1 + E/s)
        lg[0] += logv1();
        for (auto& [n, c] : log1p_series(v1(-1), 1, span)) lg[n] += c;
        for (auto& [n, c] : log1p_series(E, -1, span)) lg[n] += c;
        lg[0] -= RingElem(H * 2);
    } else {
        lg[0] -= RingElem(H);
    }
    auto prod = series_mul(g, lg, -1, -1);
    return prod[-1] * (Rational(1) / factorial(k));
}

inline VFrac theta0_by_residue_positive(int k) { return {residue_at_E(k, false), 0}; }
inline VFrac theta1_by_residue(int k) { return {residue_at_E(k, true), 0}; }

// Res at p = 0. With u = E - v1 = -D, lambda E / p = u - v1 sum_{j>=1} p^j / E^j,
// so lambda^{-k}/p = E^k p^{-k-1} (lambda E/p)^{-k}. The returned value is
// Res_{p=0} lambda^{-k} dp/p; `normalization` multiplies it.
inline VFrac residue_at_zero(int k)
{
    // (lambda E / p)^{-1} = sum_m nu^m / u^{m+1}, nu = v1 sum_j p^j / E^j
    Series<VFrac> nu;
    for (int j = 1; j <= k; ++j) nu[j] = VFrac{v1() * ev2(-j), 0};
    Series<VFrac> inv;
    Series<VFrac> nupow{{0, VFrac(1)}};
    for (int m = 0; m <= k; ++m) {
        // 1/u^{m+1} = (-1)^{m+1} / D^{m+1}
        VFrac scale{RingElem(sign_pow(m + 1)), m + 1};
        for (auto& [n, c] : nupow) inv[n] += c * scale;
        nupow = series_mul(nupow, nu, 0, k);
    }
    auto pw = series_pow(inv, k, 0, k);
    return normalize(pw[k] * VFrac{ev2(k), 0});
}

// theta_{0,-k} = (-1)^k (k-1)! Res_{p=0} lambda^{-k} dp/p
inline VFrac theta0_negative_by_residue(int k)
{
    return normalize(residue_at_zero(k) * (factorial(k - 1) * sign_pow(k)));
}

// the normalization as printed next to the residue formula, kept for comparison
inline VFrac theta0_negative_by_residue_printed(int k)
{
    return normalize(residue_at_zero(k) * (factorial(k) * sign_pow(k - 1)));
}

inline VFrac theta_by_residue(int alpha, int k)
{
    if (alpha == 2 && k >= 1) return theta2_by_residue(k);
    if (alpha == 1 && k >= 1) return theta1_by_residue(k);
    if (alpha == 0 && k >= 1) return theta0_by_residue_positive(k);
    if (alpha == 0 && k <= -1) return theta0_negative_by_residue(-k);
    throw std::domain_error("no residue formula for this label");
}

// ---- Principal Hierarchy

// d v^a / d t^{beta,q} = eta^{a e} d_x d_e theta_{beta,q+1}, as (v1_t, v2_t)
inline std::array<VFrac, 2> principal_flow(int beta, int q)
{
    VFrac th = theta(beta, q + 1);
    std::array<VFrac, 2> grad{vpartial(th, 1), vpartial(th, 2)};
    auto dx = [&](const VFrac& f) {
        return normalize(vpartial(f, 1) * VFrac{dj(Var::v1, 1), 0} + vpartial(f, 2) * VFrac{dj(Var::v2, 1), 0});
    };
    return {dx(grad[1]), dx(grad[0])};
}

inline VFrac pairing(const VFrac& a, const VFrac& b)
{
    return normalize(vpartial(a, 1) * vpartial(b, 2) + vpartial(a, 2) * vpartial(b, 1));
}

inline bool is_label(int alpha, int k) { return alpha == 0 || k >= 0; }

inline VFrac omega0(int alpha, int k, int beta, int l)
{
    if (!is_label(alpha, k) || !is_label(beta, l)) throw std::domain_error("label outside the index set");
    if (alpha != 0 && beta == 0) return omega0(beta, l, alpha, k);
    VFrac s;
    if (beta != 0) {
        for (int m = 0; m <= l; ++m) s += pairing(theta(alpha, k + 1 + m), theta(beta, l - m)) * Rational(sign_pow(m));
        return normalize(s);
    }
    // alpha = beta = 0; for l < 0 the sum telescopes l upward to Omega_{0,k+l;0,0} = theta_{0,k+l}
    if (l >= 0) {
        for (int m = 0; m <= l - 1; ++m) s += pairing(theta(0, k + 1 + m), theta(0, l - m)) * Rational(sign_pow(m));
    } else {
        for (int m = 0; m <= -l - 1; ++m) s += pairing(theta(0, k - m), theta(0, l + 1 + m)) * Rational(sign_pow(m));
    }
    s += theta(0, k + l) * Rational(sign_pow(l));
    return normalize(s);
}

// d_g Omega_{a,k;b,l} = d_e theta_{a,k} eta^{e z} d_z d_g theta_{b,l+1}
inline bool check_omega_dx(int alpha, int k, int beta, int l)
{
    VFrac om = omega0(alpha, k, beta, l);
    VFrac ta = theta(alpha, k), tb = theta(beta, l + 1);
    for (int g = 1; g <= 2; ++g) {
        VFrac rhs = vpartial(ta, 1) * vpartial(vpartial(tb, 2), g) + vpartial(ta, 2) * vpartial(vpartial(tb, 1), g);
        if (vpartial(om, g) != normalize(rhs)) return false;
    }
    return true;
}

// ---- canonical coordinates

struct Canonical {
    RingElem u1, u2;
};

inline Canonical canonical_coords()
{
    RingElem base = ev2() + v1(), S = sqrt_v1ev2() * Rational(2);
    return {base + S, base - S};
}

// v1 = (u1 + u2 - 2 sqrt(u1 u2)) / 4 and e^{v2} = (u1 + u2 + 2 sqrt(u1 u2)) / 4,
// with sqrt(u1 u2) = e^{v2} - v1 on the branch where e^{v2} > v1.
inline std::pair<RingElem, RingElem> flat_from_canonical(const Canonical& u)
{
    RingElem prod = reduce_sqrt(u.u1 * u.u2);
    if (prod != (ev2() - v1()).pow(2)) throw std::logic_error("u1 u2 is not a perfect square");
    RingElem root = ev2() - v1();
    RingElem s = reduce_sqrt(u.u1 + u.u2);
    return {(s - root * Rational(2)) * Rational(1, 4), (s + root * Rational(2)) * Rational(1, 4)};
}

inline std::pair<double, double> canonical_numeric(double a, double b)
{
    double E = std::exp(b), S = std::sqrt(a * E);
    return {E + a + 2 * S, E + a - 2 * S};
}

inline std::pair<double, double> flat_numeric(double u1, double u2)
{
    double r1 = std::sqrt(u1), r2 = std::sqrt(u2);
    double a = (r1 - r2) / 2, b = (r1 + r2) / 2;
    return {a * a, 2 * std::log(b)};
}

// ---- map to lattice fields: w1 = Q - P = v1, e^{w2} = Q

inline RingElem to_pq(const VFrac& f)
{
    RingElem P0 = dj(Var::P), Q0 = dj(Var::Q);
    RingElem num = substitute(f.num, [&](const Generator& g) -> std::optional<RingElem> {
        if (g.kind == Kind::Deriv && g.var() == Var::v1 && g.idx == 0) return Q0 - P0;
        if (g.kind == Kind::Deriv && g.var() == Var::v2 && g.idx == 0) return tr(Tag::LogQ);
        if (g.kind == Kind::Deriv && g.var() == Var::v1 && g.idx == 1) return dj(Var::Q, 1) - dj(Var::P, 1);
        if (g.kind == Kind::Deriv && g.var() == Var::v2 && g.idx == 1) return dj(Var::Q, 1) * Q0.pow(-1);
        if (g.kind == Kind::Deriv) throw std::domain_error("to_pq handles first jets only");
        if (g.kind == Kind::Trans && g.tag() == Tag::ExpV2) return Q0;
        if (g.kind == Kind::Trans && g.tag() == Tag::LogExpV2MinusV1) return tr(Tag::LogP);
        if (g.kind == Kind::Trans) throw std::domain_error("no lattice image for " + to_string(g));
        return std::nullopt;
    });
    // D = v1 - e^{v2} = -P
    return num * P0.pow(-f.n) * Rational(sign_pow(f.n));
}

// log(Q/P) -> log Q - log P so that both sides use the same generators
inline RingElem split_log_ratio(const RingElem& e)
{
    return substitute(e, [](const Generator& g) -> std::optional<RingElem> {
        if (g.kind == Kind::Trans && g.tag() == Tag::LogQminusLogP) {
            if (g.idx != 0) throw std::domain_error("shifted log ratio in derivative picture");
            return tr(Tag::LogQ) - tr(Tag::LogP);
        }
        return std::nullopt;
    });
}

} // namespace alh
