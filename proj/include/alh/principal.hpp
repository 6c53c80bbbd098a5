#pragma once

// Dispersionless limits of the lattice hierarchy against the Principal
// Hierarchy of the Frobenius manifold, with w1 = Q - P = v1, e^{w2} = Q = e^{v2}.

#include "frobenius.hpp"
#include "hamiltonian.hpp"

#include <string>

namespace alh {

// eps^0 part of h_{2,p}, h_{0,-q} (q >= 1) or h_{0,0} against theta of the same label
inline IdentityReport density_leading_check(int alpha, int level)
{
    IdentityReport r{"leading term of h_{" + std::to_string(alpha) + "," + std::to_string(level) + "}", true, {}};
    RingElem lead;
    if (alpha == 0 && level == 0) lead = split_log_ratio(density_h00(0)[0]);
    else lead = eps_expand(density_for(FlowLabel{alpha, level}).value, 0)[0];
    RingElem expected = to_pq(theta(alpha, level));
    if (lead != expected) {
        r.pass = false;
        r.sides.emplace_back(lead.to_string(), expected.to_string());
    }
    return r;
}

// eps^1 part of the lattice flow, read in v, against the Principal Hierarchy flow
inline IdentityReport principal_flow_check(const FlowLabel& label)
{
    IdentityReport r{"dispersionless limit of " + label.to_string(), true, {}};
    FlowRHS f = lax_flow(label);
    RingElem dP = eps_expand(f.dP, 1)[1], dQ = eps_expand(f.dQ, 1)[1];
    RingElem lattice[2] = {dQ - dP, dQ * dj(Var::Q).pow(-1)};
    auto pf = principal_flow(label.alpha, label.q);
    for (std::size_t i = 0; i < 2; ++i) {
        RingElem expected = to_pq(pf[i]);
        if (lattice[i] != expected) {
            r.pass = false;
            r.sides.emplace_back(lattice[i].to_string(), expected.to_string());
        }
    }
    return r;
}

} // namespace alh
