#pragma once

#include <string>

#include "crnkit/continuous.hpp"
#include "crnkit/counter_automaton.hpp"
#include "crnkit/crn_format.hpp"
#include "crnkit/decide.hpp"

namespace crnkit::catalog {

/// Decides x == y (mod 3) by halting.
extern const char* const kMod3Text;
/// min(x, y) with a single reaction.
extern const char* const kMinText;
/// max(x, y) through a trimolecular cleanup.
extern const char* const kMaxText;
/// (A1 or A2 present) and A3 absent, by or-ing bit-vector species.
extern const char* const kExistenceText;
/// L + L -> L.
extern const char* const kLeaderText;
/// out = 2 * in.
extern const char* const kDoublingCaText;

Crd mod3_crd();
Crc min_crc();
Crc max_crc();
Crd existence_crd();
Crn leader_election();
CounterAutomaton doubling_ca();

DualRailCrc dual_rail_min();
DualRailCrc dual_rail_max();

}  // namespace crnkit::catalog
