#pragma once

// Laurent series in the shift symbol Lambda with coefficients in a ring C.
//
// Every operator carries an exactness window [lo, hi]: coefficients inside it
// are correct, coefficients outside it may be missing because a Neumann series
// was cut off. Finite operators have an unbounded window on both sides.

#include "ring.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <stdexcept>
#include <string>

namespace alh {

inline constexpr long long kInf = 1LL << 40;

inline bool coeff_is_zero(const RingElem& c) { return c.is_zero(); }

template <class C>
class LaurentOp {
public:
    LaurentOp() = default;
    LaurentOp(const C& c) { set(0, c); }

    static LaurentOp monomial(const C& c, int power)
    {
        LaurentOp r;
        r.set(power, c);
        return r;
    }
    static LaurentOp lambda(int power = 1) { return monomial(C(1), power); }

    const std::map<int, C>& coeffs() const { return c_; }
    long long lo() const { return lo_; }
    long long hi() const { return hi_; }
    bool truncated() const { return truncated_; }
    bool exact_at(long long n) const { return n >= lo_ && n <= hi_; }

    C coeff(int n) const
    {
        auto it = c_.find(n);
        return it == c_.end() ? C() : it->second;
    }
    void set(int n, const C& c)
    {
        if (coeff_is_zero(c)) c_.erase(n);
        else c_[n] = c;
    }
    void add(int n, const C& c)
    {
        auto it = c_.find(n);
        if (it == c_.end()) set(n, c);
        else {
            it->second += c;
            if (coeff_is_zero(it->second)) c_.erase(it);
        }
    }

    // declare that nothing below lo (above hi) is known
    LaurentOp& restrict_window(long long lo, long long hi)
    {
        lo_ = std::max(lo_, lo);
        hi_ = std::min(hi_, hi);
        for (auto it = c_.begin(); it != c_.end();) {
            if (it->first < lo_ || it->first > hi_) it = c_.erase(it);
            else ++it;
        }
        if (lo_ > -kInf || hi_ < kInf) truncated_ = true;
        return *this;
    }

    long long max_power() const { return c_.empty() ? -kInf : c_.rbegin()->first; }
    long long min_power() const { return c_.empty() ? kInf : c_.begin()->first; }

    LaurentOp& operator+=(const LaurentOp& o)
    {
        for (auto& [n, c] : o.c_) add(n, c);
        merge_window(o);
        return *this;
    }
    LaurentOp& operator-=(const LaurentOp& o)
    {
        for (auto& [n, c] : o.c_) add(n, -c);
        merge_window(o);
        return *this;
    }
    LaurentOp operator-() const
    {
        LaurentOp r = *this;
        for (auto& [n, c] : r.c_) c = -c;
        return r;
    }
    friend LaurentOp operator+(LaurentOp a, const LaurentOp& b) { return a += b; }
    friend LaurentOp operator-(LaurentOp a, const LaurentOp& b) { return a -= b; }

    // left multiplication by a coefficient
    friend LaurentOp operator*(const C& s, const LaurentOp& a)
    {
        LaurentOp r = a;
        r.c_.clear();
        for (auto& [n, c] : a.c_) r.set(n, s * c);
        return r;
    }
    LaurentOp scaled(const Rational& s) const
    {
        LaurentOp r = *this;
        r.c_.clear();
        for (auto& [n, c] : c_) r.set(n, c * s);
        return r;
    }

    // (AB)_n = sum_{i+j=n} a_i shift(b_j, i), restricted to the exact window
    // and optionally to powers >= floor.
    static LaurentOp mul(const LaurentOp& A, const LaurentOp& B, long long floor = -kInf)
    {
        long long lo = -kInf, hi = kInf;
        bool a_down = A.lo_ > -kInf, a_up = A.hi_ < kInf;
        bool b_down = B.lo_ > -kInf, b_up = B.hi_ < kInf;
        if ((a_down && b_up) || (a_up && b_down))
            throw std::logic_error("product of series truncated in opposite directions");
        if (a_down && !B.c_.empty()) lo = std::max(lo, A.lo_ + B.max_power());
        if (b_down && !A.c_.empty()) lo = std::max(lo, B.lo_ + A.max_power());
        if (a_up && !B.c_.empty()) hi = std::min(hi, A.hi_ + B.min_power());
        if (b_up && !A.c_.empty()) hi = std::min(hi, B.hi_ + A.min_power());
        lo = std::max(lo, floor);

        LaurentOp R;
        R.lo_ = lo;
        R.hi_ = hi;
        R.truncated_ = A.truncated_ || B.truncated_ || lo > -kInf || hi < kInf;
        for (auto& [i, a] : A.c_) {
            for (auto& [j, b] : B.c_) {
                long long n = static_cast<long long>(i) + j;
                if (n < lo || n > hi) continue;
                R.add(static_cast<int>(n), a * shift(b, i));
            }
        }
        return R;
    }
    friend LaurentOp operator*(const LaurentOp& A, const LaurentOp& B) { return mul(A, B); }

    LaurentOp plus_part() const { return part(0, INT_MAX); }
    LaurentOp minus_part() const { return part(INT_MIN, -1); }
    C residue() const { return coeff(0); }

    // equality of coefficients on the common exact window
    friend bool operator==(const LaurentOp& a, const LaurentOp& b)
    {
        long long lo = std::max(a.lo_, b.lo_), hi = std::min(a.hi_, b.hi_);
        for (auto& [n, c] : a.c_)
            if (n >= lo && n <= hi && !(c == b.coeff(n))) return false;
        for (auto& [n, c] : b.c_)
            if (n >= lo && n <= hi && !(c == a.coeff(n))) return false;
        return true;
    }
    friend bool operator!=(const LaurentOp& a, const LaurentOp& b) { return !(a == b); }

    bool is_zero() const { return c_.empty(); }

    template <class F>
    LaurentOp map_coeffs(F&& f) const
    {
        LaurentOp r = *this;
        r.c_.clear();
        for (auto& [n, c] : c_) r.set(n, f(c));
        return r;
    }

private:
    LaurentOp part(int from, int to) const
    {
        LaurentOp r;
        for (auto& [n, c] : c_)
            if (n >= from && n <= to) r.c_[n] = c;
        r.lo_ = lo_ > from ? lo_ : -kInf;
        r.hi_ = hi_ < to ? hi_ : kInf;
        r.truncated_ = truncated_;
        return r;
    }
    void merge_window(const LaurentOp& o)
    {
        lo_ = std::max(lo_, o.lo_);
        hi_ = std::min(hi_, o.hi_);
        truncated_ = truncated_ || o.truncated_;
        for (auto it = c_.begin(); it != c_.end();) {
            if (it->first < lo_ || it->first > hi_) it = c_.erase(it);
            else ++it;
        }
    }

    std::map<int, C> c_;
    long long lo_ = -kInf;
    long long hi_ = kInf;
    bool truncated_ = false;
};

using Op = LaurentOp<RingElem>;

template <class C>
LaurentOp<C> op_mul(const LaurentOp<C>& A, const LaurentOp<C>& B) { return LaurentOp<C>::mul(A, B); }

template <class C>
LaurentOp<C> power(const LaurentOp<C>& A, int n, long long floor = -kInf)
{
    if (n < 0) throw std::domain_error("negative operator power");
    LaurentOp<C> r(C(1));
    for (int i = 0; i < n; ++i) {
        // later factors can lift low powers by at most max_power each
        long long need = floor > -kInf ? floor - static_cast<long long>(n - 1 - i) * std::max(0LL, A.max_power()) : -kInf;
        r = LaurentOp<C>::mul(r, A, need);
    }
    return r;
}

template <class C>
LaurentOp<C> commutator(const LaurentOp<C>& A, const LaurentOp<C>& B) { return A * B - B * A; }

// (sum a_i Lambda^i) f = sum a_i shift(f, i)
template <class C>
C apply(const LaurentOp<C>& A, const C& f)
{
    C r;
    for (auto& [n, c] : A.coeffs()) r += c * shift(f, n);
    return r;
}

// formal adjoint: (a Lambda^i)^* = Lambda^{-i} a = shift(a, -i) Lambda^{-i}
template <class C>
LaurentOp<C> adjoint(const LaurentOp<C>& A)
{
    if (A.truncated()) throw std::logic_error("adjoint of a truncated series");
    LaurentOp<C> r;
    for (auto& [n, c] : A.coeffs()) r.set(-n, shift(c, -n));
    return r;
}

template <class C>
std::string to_string(const LaurentOp<C>& A)
{
    if (A.coeffs().empty()) return "0";
    std::string s;
    for (auto it = A.coeffs().rbegin(); it != A.coeffs().rend(); ++it) {
        if (!s.empty()) s += " + ";
        s += "(" + to_string(it->second) + ")";
        if (it->first != 0) s += "*Lambda^" + std::to_string(it->first);
    }
    if (A.lo() > -kInf) s += " + O(Lambda^" + std::to_string(A.lo() - 1) + ")";
    if (A.hi() < kInf) s += " + O(Lambda^" + std::to_string(A.hi() + 1) + ")";
    return s;
}

enum class InverseKind { OneMinusQLambdaInv, LambdaMinusP, LambdaMinusPUpward };

// Neumann series, exact on the window down to Lambda^{-depth}
// (up to Lambda^{depth} for the upward expansion).
//   (1 - Q Lambda^{-1})^{-1} = sum_k (Q Lambda^{-1})^k
//   (Lambda - P)^{-1}        = sum_k P^- ... P^{(-k)} Lambda^{-k-1}
//   (Lambda - P)^{-1}        = -sum_k (P P^+ ... P^{(k)})^{-1} Lambda^k
inline Op geometric_inverse(InverseKind kind, int depth)
{
    if (depth < 0) throw std::domain_error("negative depth");
    Op r;
    switch (kind) {
    case InverseKind::OneMinusQLambdaInv: {
        RingElem c(1);
        for (int k = 0; k <= depth; ++k) {
            r.set(-k, c);
            c *= Q(-k);
        }
        r.restrict_window(-depth, kInf);
        break;
    }
    case InverseKind::LambdaMinusP: {
        RingElem c(1);
        for (int k = 0; k + 1 <= depth; ++k) {
            r.set(-k - 1, c);
            c *= P(-k - 1);
        }
        r.restrict_window(-depth, kInf);
        break;
    }
    case InverseKind::LambdaMinusPUpward: {
        RingElem c(-1);
        for (int k = 0; k <= depth; ++k) {
            c *= P(k, -1);
            r.set(k, c);
        }
        r.restrict_window(-kInf, depth);
        break;
    }
    }
    return r;
}

// A = Lambda - P, B = 1 - Q Lambda^{-1}
inline Op op_A() { return Op::lambda(1) - Op(P()); }
inline Op op_B() { return Op(RingElem(1)) - Op::monomial(Q(), -1); }

} // namespace alh
