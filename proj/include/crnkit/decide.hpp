#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crnkit/crn.hpp"
#include "crnkit/reach.hpp"

namespace crnkit {

struct CrnDocument;

/// A chemical reaction decider: input species plus disjoint 0/1-voter sets.
/// Species are referenced by index into crn.
struct Crd {
  Crn crn;
  std::vector<std::size_t> input;
  std::vector<std::size_t> voters0;
  std::vector<std::size_t> voters1;

  /// Throws ContractError when the voter sets intersect or an index is out
  /// of range. With `require_total`, every species must be a voter.
  void validate(bool require_total = false) const;
  static Crd from_document(const CrnDocument& doc);
};

/// A chemical reaction computer: disjoint input and output species.
struct Crc {
  Crn crn;
  std::vector<std::size_t> input;
  std::vector<std::size_t> output;

  void validate() const;
  static Crc from_document(const CrnDocument& doc);
};

enum class VerdictKind { kAccept, kReject, kUndecided, kInconclusive };

const char* to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::kInconclusive;
  std::optional<State> witness;
  std::size_t states_explored = 0;
  bool truncated = false;
};

/// 1 if c holds a 1-voter and no 0-voter, 0 symmetrically, otherwise none.
std::optional<int> output_of(const Crd& crd, const State& c);

/// Builds the padded input state from counts listed in crd.input order.
State input_state(const Crd& crd, const std::vector<Count>& counts);

/// Output-b terminal states T_b of a closure, as an index mask.
std::vector<bool> terminal_with_output(const Crd& crd, const ReachResult& closure, int b);
/// Output-b stable states S_b of a closure (forward-closed universe).
std::vector<bool> stable_with_output(const Crd& crd, const ReachResult& closure, int b);

/// `input` is a full state over the CRD's species, zero outside the input
/// species and nonzero. Throws ContractError otherwise.
Verdict halting_verdict(const Crd& crd, const State& input, std::size_t bound);
Verdict stable_verdict(const Crd& crd, const State& input, std::size_t bound);

/// Verdicts against a precomputed closure of the padded input.
Verdict halting_verdict(const Crd& crd, const ReachResult& closure);
Verdict stable_verdict(const Crd& crd, const ReachResult& closure);

struct CrcVerdict {
  enum class Kind { kStable, kUnstable, kInconclusive } kind = Kind::kInconclusive;
  /// Counts of the output species, in crc.output order.
  std::optional<std::vector<Count>> output;
  std::optional<State> witness;
  std::size_t states_explored = 0;
  bool truncated = false;
};

const char* to_string(CrcVerdict::Kind kind);

CrcVerdict crc_output_verdict(const Crc& crc, const State& input, std::size_t bound);
CrcVerdict crc_output_verdict(const Crc& crc, const ReachResult& closure);

struct SpeedFaultResult {
  enum class Kind { kNone, kWitness, kInconclusive } kind = Kind::kInconclusive;
  std::optional<State> witness;
  /// The output b that the CRD stabilizes to on this input.
  std::optional<int> decided_output;
  std::size_t states_explored = 0;
};

const char* to_string(SpeedFaultResult::Kind kind);

/// A state of post(input) outside pre_{>=k}(S_b), earliest in BFS order.
/// Throws ContractError when the CRD does not stably decide the input.
SpeedFaultResult speed_fault_witness(const Crd& crd, const State& input, Count k,
                                     std::size_t bound);

}  // namespace crnkit
