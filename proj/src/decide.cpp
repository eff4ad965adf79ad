#include "crnkit/decide.hpp"

#include <algorithm>
#include <map>

#include "crnkit/crn_format.hpp"

namespace crnkit {

namespace {

std::vector<std::size_t> indices_of(const Crn& crn, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(crn.species_index(n));
  return out;
}

void check_range(const Crn& crn, const std::vector<std::size_t>& idx) {
  for (std::size_t i : idx) {
    if (i >= crn.species_count()) throw ContractError("species index out of range");
  }
}

bool intersects(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::any_of(a.begin(), a.end(), [&](std::size_t x) {
    return std::find(b.begin(), b.end(), x) != b.end();
  });
}

void check_input(const Crn& crn, const std::vector<std::size_t>& input_species,
                 const State& input, bool allow_zero) {
  if (input.size() != crn.species_count()) throw ContractError("input has wrong dimension");
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] != 0 &&
        std::find(input_species.begin(), input_species.end(), i) == input_species.end()) {
      throw ContractError("input state uses non-input species '" + crn.species_name(i) + "'");
    }
  }
  if (!allow_zero && input.is_zero()) throw ContractError("input state must be nonzero");
}

bool all_marked(const std::vector<bool>& v) {
  return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

Verdict verdict_from_pre(const ReachResult& closure, const std::vector<bool>& pre1,
                         const std::vector<bool>& pre0) {
  Verdict v;
  v.states_explored = closure.states.size();
  if (all_marked(pre1)) {
    v.kind = VerdictKind::kAccept;
  } else if (all_marked(pre0)) {
    v.kind = VerdictKind::kReject;
  } else {
    v.kind = VerdictKind::kUndecided;
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < closure.states.size() && !pick; ++i) {
      if (!pre1[i] && !pre0[i]) pick = i;
    }
    for (std::size_t i = 0; i < closure.states.size() && !pick; ++i) {
      if (!pre1[i]) pick = i;
    }
    v.witness = closure.states[*pick];
  }
  return v;
}

Verdict inconclusive(const ReachResult& closure) {
  Verdict v;
  v.kind = VerdictKind::kInconclusive;
  v.truncated = true;
  v.states_explored = closure.states.size();
  return v;
}

}  // namespace

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kAccept: return "Accept";
    case VerdictKind::kReject: return "Reject";
    case VerdictKind::kUndecided: return "Undecided";
    case VerdictKind::kInconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(CrcVerdict::Kind kind) {
  switch (kind) {
    case CrcVerdict::Kind::kStable: return "Stable";
    case CrcVerdict::Kind::kUnstable: return "Unstable";
    case CrcVerdict::Kind::kInconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(SpeedFaultResult::Kind kind) {
  switch (kind) {
    case SpeedFaultResult::Kind::kNone: return "None";
    case SpeedFaultResult::Kind::kWitness: return "Witness";
    case SpeedFaultResult::Kind::kInconclusive: return "Inconclusive";
  }
  return "?";
}

void Crd::validate(bool require_total) const {
  check_range(crn, input);
  check_range(crn, voters0);
  check_range(crn, voters1);
  if (intersects(voters0, voters1)) throw ContractError("0-voters and 1-voters overlap");
  if (require_total && voters0.size() + voters1.size() < crn.species_count()) {
    for (std::size_t i = 0; i < crn.species_count(); ++i) {
      if (std::find(voters0.begin(), voters0.end(), i) == voters0.end() &&
          std::find(voters1.begin(), voters1.end(), i) == voters1.end()) {
        throw ContractError("species '" + crn.species_name(i) + "' is not a voter");
      }
    }
  }
}

Crd Crd::from_document(const CrnDocument& doc) {
  Crd crd{doc.crn, indices_of(doc.crn, doc.input), indices_of(doc.crn, doc.vote0),
          indices_of(doc.crn, doc.vote1)};
  crd.validate();
  return crd;
}

void Crc::validate() const {
  check_range(crn, input);
  check_range(crn, output);
  if (intersects(input, output)) throw ContractError("input and output species overlap");
}

Crc Crc::from_document(const CrnDocument& doc) {
  Crc crc{doc.crn, indices_of(doc.crn, doc.input), indices_of(doc.crn, doc.output)};
  crc.validate();
  return crc;
}

std::optional<int> output_of(const Crd& crd, const State& c) {
  auto present = [&](const std::vector<std::size_t>& voters) {
    return std::any_of(voters.begin(), voters.end(), [&](std::size_t i) { return c[i] > 0; });
  };
  const bool has0 = present(crd.voters0);
  const bool has1 = present(crd.voters1);
  if (has1 && !has0) return 1;
  if (has0 && !has1) return 0;
  return std::nullopt;
}

State input_state(const Crd& crd, const std::vector<Count>& counts) {
  if (counts.size() != crd.input.size()) throw ContractError("input arity mismatch");
  State s = crd.crn.zero_state();
  for (std::size_t i = 0; i < counts.size(); ++i) s[crd.input[i]] += counts[i];
  return s;
}

std::vector<bool> terminal_with_output(const Crd& crd, const ReachResult& closure, int b) {
  std::vector<bool> out(closure.states.size(), false);
  for (std::size_t i = 0; i < closure.states.size(); ++i) {
    const State& s = closure.states[i];
    out[i] = output_of(crd, s) == b && is_terminal(crd.crn, s);
  }
  return out;
}

std::vector<bool> stable_with_output(const Crd& crd, const ReachResult& closure, int b) {
  std::vector<bool> bad(closure.states.size(), false);
  for (std::size_t i = 0; i < closure.states.size(); ++i) {
    bad[i] = output_of(crd, closure.states[i]) != b;
  }
  std::vector<bool> reaches_bad = pre_within(closure, bad);
  for (std::size_t i = 0; i < reaches_bad.size(); ++i) reaches_bad[i] = !reaches_bad[i];
  return reaches_bad;
}

Verdict halting_verdict(const Crd& crd, const ReachResult& closure) {
  if (closure.truncated) return inconclusive(closure);
  return verdict_from_pre(closure, pre_within(closure, terminal_with_output(crd, closure, 1)),
                          pre_within(closure, terminal_with_output(crd, closure, 0)));
}

Verdict stable_verdict(const Crd& crd, const ReachResult& closure) {
  if (closure.truncated) return inconclusive(closure);
  return verdict_from_pre(closure, pre_within(closure, stable_with_output(crd, closure, 1)),
                          pre_within(closure, stable_with_output(crd, closure, 0)));
}

Verdict halting_verdict(const Crd& crd, const State& input, std::size_t bound) {
  check_input(crd.crn, crd.input, input, false);
  return halting_verdict(crd, post(crd.crn, input, bound));
}

Verdict stable_verdict(const Crd& crd, const State& input, std::size_t bound) {
  check_input(crd.crn, crd.input, input, false);
  return stable_verdict(crd, post(crd.crn, input, bound));
}

CrcVerdict crc_output_verdict(const Crc& crc, const ReachResult& closure) {
  CrcVerdict v;
  v.states_explored = closure.states.size();
  if (closure.truncated) {
    v.truncated = true;
    return v;
  }
  auto project = [&](const State& s) {
    std::vector<Count> o;
    for (std::size_t i : crc.output) o.push_back(s[i]);
    return o;
  };
  bool changes_output_any = false;
  std::vector<bool> changes(closure.states.size(), false);
  for (const Edge& e : closure.edges) {
    const Reaction& r = crc.crn.reaction(e.reaction);
    for (const Term& t : r.net_terms()) {
      if (std::find(crc.output.begin(), crc.output.end(), t.species) != crc.output.end()) {
        changes[e.from] = true;
        changes_output_any = true;
      }
    }
  }
  std::vector<bool> stable = changes_output_any ? pre_within(closure, changes) : changes;
  for (std::size_t i = 0; i < stable.size(); ++i) stable[i] = !stable[i];

  std::optional<std::vector<Count>> o;
  for (std::size_t i = 0; i < closure.states.size(); ++i) {
    if (!stable[i]) continue;
    std::vector<Count> p = project(closure.states[i]);
    if (!o) {
      o = p;
    } else if (*o != p) {
      v.kind = CrcVerdict::Kind::kUnstable;
      v.witness = closure.states[i];
      return v;
    }
  }
  const std::vector<bool> reach_stable = pre_within(closure, stable);
  for (std::size_t i = 0; i < closure.states.size(); ++i) {
    if (!reach_stable[i]) {
      v.kind = CrcVerdict::Kind::kUnstable;
      v.witness = closure.states[i];
      return v;
    }
  }
  v.kind = CrcVerdict::Kind::kStable;
  v.output = o;
  return v;
}

CrcVerdict crc_output_verdict(const Crc& crc, const State& input, std::size_t bound) {
  check_input(crc.crn, crc.input, input, true);
  return crc_output_verdict(crc, post(crc.crn, input, bound));
}

SpeedFaultResult speed_fault_witness(const Crd& crd, const State& input, Count k,
                                     std::size_t bound) {
  if (k < 1) throw ContractError("k must be positive");
  for (const auto& r : crd.crn.reactions()) {
    if (r.order() > 2) throw ContractError("speed faults need uni- or bimolecular reactions");
  }
  check_input(crd.crn, crd.input, input, false);
  const ReachResult closure = post(crd.crn, input, bound);
  SpeedFaultResult res;
  res.states_explored = closure.states.size();
  if (closure.truncated) return res;
  const Verdict v = stable_verdict(crd, closure);
  if (v.kind != VerdictKind::kAccept && v.kind != VerdictKind::kReject) {
    throw ContractError("the CRD does not stably decide this input");
  }
  const int b = v.kind == VerdictKind::kAccept ? 1 : 0;
  res.decided_output = b;
  const std::vector<bool> fast_pre =
      pre_within(closure, stable_with_output(crd, closure, b), [&](const Edge& e) {
        return is_kfast(crd.crn.reaction(e.reaction), closure.states[e.from], k);
      });
  for (std::size_t i = 0; i < closure.states.size(); ++i) {
    if (!fast_pre[i]) {
      res.kind = SpeedFaultResult::Kind::kWitness;
      res.witness = closure.states[i];
      return res;
    }
  }
  res.kind = SpeedFaultResult::Kind::kNone;
  return res;
}

}  // namespace crnkit
