#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace alh {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational factorial(int n)
{
    if (n < 0) throw std::domain_error("factorial of negative integer");
    Integer r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return Rational(r);
}

// H_k = 1 + 1/2 + ... + 1/k, H_0 = 0
inline Rational harmonic(int k)
{
    Rational h = 0;
    for (int j = 1; j <= k; ++j) h += Rational(1, j);
    return h;
}

inline Rational binomial(int n, int k)
{
    if (k < 0 || k > n) return Rational(0);
    return factorial(n) / (factorial(k) * factorial(n - k));
}

inline std::string to_string(const Rational& q)
{
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline int sign_pow(int n) { return (n % 2 == 0) ? 1 : -1; }

} // namespace alh
