#include "alh/alh.hpp"

#include <cstdio>

using namespace alh;

int main()
{
    LatticeState s = random_state(64, 2024);
    RunResult r = integrate(s, LatticeFlow::T20, {1e-3, 2000, 500});
    for (const Sample& smp : r.samples) {
        std::printf("t = %.3f", smp.t);
        for (std::size_t i = 0; i < r.labels.size(); ++i) std::printf("  %s = %.12f", r.labels[i].c_str(), smp.values[i]);
        std::printf("\n");
    }
    std::printf("max relative drift %.3e\n", r.max_drift);
    std::printf("commutativity probe ratio %.3f\n", probe_ratio(LatticeFlow::T20, LatticeFlow::T0m1, 1e-2, s));
}
