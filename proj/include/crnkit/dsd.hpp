#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crnkit/crn.hpp"
#include "crnkit/stochastic.hpp"

namespace crnkit {

struct Domain {
  enum class Kind { kToehold, kRecognition };
  std::string name;
  Kind kind = Kind::kRecognition;
  bool complement = false;

  Domain complemented() const { return {name, kind, !complement}; }
  std::string str() const { return complement ? name + "*" : name; }
  friend bool operator==(const Domain&, const Domain&) = default;
};

using Strand = std::vector<Domain>;

enum class DsdRole { kSignal, kFuelL, kFuelT, kIntermediateH, kStrandB, kStrandO, kWaste };

const char* to_string(DsdRole role);

/// A species of the implementation CRN: one complex of one or more strands.
struct DsdSpecies {
  std::string name;
  DsdRole role = DsdRole::kSignal;
  std::optional<std::size_t> reaction;  // owning abstract reaction, if any
  std::optional<std::size_t> abstract_species;  // for signals
  std::vector<Strand> strands;
};

/// Implementation species and reactions that realize one abstract reaction.
struct ReactionGroup {
  std::size_t abstract_reaction = 0;
  std::vector<std::size_t> reactions;  // implementation reaction indices
  /// Index of the reverse partner of each reaction in `reactions`, if any.
  std::vector<std::optional<std::size_t>> reverse;
  std::size_t fuel_l = 0;
  std::optional<std::size_t> fuel_t;
  std::optional<std::size_t> intermediate_h;
  std::optional<std::size_t> strand_o;
  /// Implementation reaction whose firing completes the abstract reaction.
  std::size_t completion = 0;
  /// Abstract species committed inside H (its first reactant).
  std::optional<std::size_t> h_reactant;
};

struct DsdProgram {
  Crn abstract;
  Crn implementation;
  std::vector<DsdSpecies> species;       // indexed like implementation species
  std::vector<std::size_t> signal_of;    // abstract species -> implementation species
  std::vector<ReactionGroup> groups;     // one per abstract reaction
  Count fuel_count = 0;
};

/// Compiles every uni- or bimolecular reaction into strand-displacement
/// steps driven by L and T fuels. Throws ContractError for other arities.
DsdProgram compile_dsd(const Crn& abstract, Count fuel_count);

Count default_fuel(const State& abstract_init);

/// Signals from the abstract state plus every fuel at fuel_count.
State implementation_state(const DsdProgram& prog, const State& abstract_init);

/// Implementation species that carry one strand each, weighted by strand
/// count; a conservation vector of the implementation CRN.
std::vector<Count> strand_weights(const DsdProgram& prog);

/// Abstract state from free signals only (intermediates erased).
State project_signals(const DsdProgram& prog, const State& impl);
/// Free signals plus, for each pending H, its committed first reactant.
State project_committed(const DsdProgram& prog, const State& impl);
/// Number of H and O complexes present.
Count pending(const DsdProgram& prog, const State& impl);
bool fuel_exhausted(const DsdProgram& prog, const State& impl);

struct FuelAudit {
  std::vector<Count> l_consumed;
  std::vector<Count> t_consumed;
  std::vector<Count> completed;
  std::vector<Count> pending_h;
  std::vector<Count> pending_o;
  bool balanced = true;
};

/// Per-reaction fuel consumption along a trajectory of the implementation.
/// Balanced iff L consumed = completed + pending H + pending O and
/// T consumed = completed for every reaction.
FuelAudit fuel_audit(const DsdProgram& prog, const Trajectory& trajectory);

struct CosimRun {
  bool settled = false;
  bool fuel_exhausted = false;
  bool projection_sound = true;   // every zero-pending state is abstractly reachable
  bool terminal_match = false;    // final projection is an abstract terminal state
  bool audit_balanced = false;
  State final_projection;
  std::optional<State> unsound_state;
  double time = 0.0;

  bool passed() const {
    return settled && !fuel_exhausted && projection_sound && terminal_match && audit_balanced;
  }
};

struct CosimReport {
  std::vector<CosimRun> runs;
  std::size_t passed = 0;
  std::size_t abstract_states = 0;
  std::vector<State> abstract_terminals;
  std::map<State, std::size_t> final_projections;

  bool ok() const { return passed == runs.size(); }
};

/// Simulates the implementation until its committed projection is an
/// abstract terminal state with no output strand in flight, and checks the
/// projection against the abstract reachability closure from `init`.
CosimReport cosimulate_check(const DsdProgram& prog, const State& abstract_init,
                             const StochasticConfig& config, std::size_t n_runs,
                             std::size_t bound = 1'000'000);

}  // namespace crnkit
