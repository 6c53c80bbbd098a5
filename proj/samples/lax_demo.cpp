#include "alh/alh.hpp"

#include <iostream>

using namespace alh;

int main()
{
    Op L = build_L(3), M = build_M(3);
    std::cout << "L = " << to_string(L) << "\n\nM = " << to_string(M) << "\n\n";
    std::cout << "Res L^2 = " << to_string((L * L).residue()) << "\n";
}
