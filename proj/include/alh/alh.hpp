#pragma once

#include "backlund.hpp"
#include "diffop.hpp"
#include "frobenius.hpp"
#include "hamiltonian.hpp"
#include "lax.hpp"
#include "principal.hpp"
#include "rational.hpp"
#include "ring.hpp"
#include "simulator.hpp"
#include "suites.hpp"
#include "super.hpp"
#include "virasoro.hpp"

namespace alh {

inline constexpr const char* version = "1.0.0";

} // namespace alh
