#pragma once

#include "alh/diffop.hpp"

#include <random>

namespace alh::test {

// sparse random polynomial in shifted P, Q (negative exponents allowed when `laurent`)
inline RingElem random_elem(std::mt19937& gen, int terms = 4, bool laurent = false)
{
    std::uniform_int_distribution<int> coeff(-3, 3), off(-2, 2), expo(laurent ? -1 : 1, 2), nfac(0, 2), var(0, 1);
    RingElem r;
    for (int t = 0; t < terms; ++t) {
        RingElem m(coeff(gen));
        int f = nfac(gen);
        for (int i = 0; i < f; ++i) {
            int e = expo(gen);
            if (e == 0) e = 1;
            m *= var(gen) == 0 ? P(off(gen), e) : Q(off(gen), e);
        }
        r += m;
    }
    return r;
}

inline Op random_op(std::mt19937& gen, int lo, int hi)
{
    Op A;
    for (int n = lo; n <= hi; ++n) A.set(n, random_elem(gen, 2));
    return A;
}

} // namespace alh::test
