// Markov-chain builders for the three LCFS disciplines of the
// energy-harvesting transmitter, plus their closed-form steady states.
//
// State numbering (1-based, matching the chain diagrams):
//   WP/PS: 1 = (0 energy, idle); 2k = (k, idle); 2k+1 = (k, busy).
//   SA:    1 = (0, idle); 2+(k-1)(N+1) = (k, idle);
//          2+i+(k-1)(N+1) = (k, serving source i).
// Discarded events (update arrival with empty battery while idle, energy
// arrival at full battery, and in WP an update arrival while busy) change
// neither the state nor the age vector and are modeled as absent
// transitions, not self-transitions.
#pragma once

#include "aoi/params.hpp"
#include "aoi/shs.hpp"

namespace aoi {

enum class Discipline { WP, PS, SA };

const char* to_string(Discipline d);           // "wp" | "ps" | "sa"
Discipline discipline_from_string(const std::string& s);

// 1-based state id for a (battery, occupant) pair under the given
// discipline's numbering. occupant: 0 = idle, i >= 1 = source in service
// (WP/PS accept any i >= 1 as "busy").
int state_id(Discipline d, int n_sources, int battery, int occupant);
int state_count(Discipline d, int n_sources, int battery_capacity);

// Chain builders. `source` selects the source of interest whose age the
// continuous state tracks; update rates of the remaining sources are
// aggregated for WP/PS and kept per-source for SA.
ShsModel build_wp(const SystemParams& params, int source);
ShsModel build_ps(const SystemParams& params, int source);
ShsModel build_sa(const SystemParams& params, int source);
ShsModel build_chain(Discipline d, const SystemParams& params, int source);

// Closed-form stationary probabilities, indexed like the builders' states.
SteadyState steady_state_closed(Discipline d, const SystemParams& params,
                                int source);

}  // namespace aoi
