#include "alh/alh.hpp"

#include <iostream>

using namespace alh;

int main()
{
    for (int alpha : {0, 1, 2})
        for (int k = 1; k <= 2; ++k) std::cout << "theta_{" << alpha << "," << k << "} = " << theta(alpha, k).to_string() << "\n";
    for (int k = -1; k >= -3; --k) std::cout << "theta_{0," << k << "} = " << theta(0, k).to_string() << "\n";
}
