#include "crnkit/counter_automaton.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "crnkit/crn_format.hpp"
#include "crnkit/parallel.hpp"

namespace crnkit {

namespace {

std::size_t intern(std::vector<std::string>& names, const std::string& n) {
  auto it = std::find(names.begin(), names.end(), n);
  if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  names.push_back(n);
  return names.size() - 1;
}

}  // namespace

void CounterAutomaton::validate() const {
  if (states.empty()) throw ContractError("automaton has no states");
  if (start >= states.size() || halt >= states.size()) {
    throw ContractError("start or halt state out of range");
  }
  if (input_counter >= counters.size()) throw ContractError("input counter out of range");
  if (program.size() != states.size()) throw ContractError("program size mismatch");
  for (const auto& c : counters) {
    if (std::find(states.begin(), states.end(), c) != states.end()) {
      throw ContractError("'" + c + "' is both a state and a counter");
    }
  }
  for (std::size_t q = 0; q < states.size(); ++q) {
    const auto& ins = program[q];
    if (q == halt) {
      if (ins) throw ContractError("halt state must have no instruction");
      continue;
    }
    if (!ins) throw ContractError("state '" + states[q] + "' has no instruction");
    if (ins->counter >= counters.size() || ins->next >= states.size() ||
        (ins->kind == Instruction::Kind::kDec && ins->zero_next >= states.size())) {
      throw ContractError("instruction of '" + states[q] + "' references unknown names");
    }
  }
}

std::size_t CounterAutomaton::inc_count() const {
  return static_cast<std::size_t>(std::count_if(program.begin(), program.end(), [](const auto& i) {
    return i && i->kind == Instruction::Kind::kInc;
  }));
}

std::size_t CounterAutomaton::dec_count() const {
  return static_cast<std::size_t>(std::count_if(program.begin(), program.end(), [](const auto& i) {
    return i && i->kind == Instruction::Kind::kDec;
  }));
}

CounterAutomaton parse_ca(std::string_view text) {
  static const std::regex kInc(R"(^\s*state\s+(\S+?)\s*:\s*inc\s+(\S+)\s*->\s*(\S+)\s*$)");
  static const std::regex kDec(
      R"(^\s*state\s+(\S+?)\s*:\s*dec\s+(\S+)\s*->\s*(\S+)\s+else\s+(\S+)\s*$)");
  static const std::regex kDirective(R"(^\s*#(start|halt|input)\s+(\S+)\s*$)");

  CounterAutomaton ca;
  std::vector<std::pair<std::size_t, Instruction>> instructions;
  std::optional<std::string> start, halt, input;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pct = line.find('%'); pct != std::string::npos) line.erase(pct);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); })) {
      continue;
    }
    std::smatch m;
    auto check_name = [&](const std::string& n) {
      if (!is_valid_species_name(n) || n.find(':') != std::string::npos) {
        throw ParseError("invalid name '" + n + "'", line_no, 1);
      }
      return n;
    };
    if (std::regex_match(line, m, kInc) || std::regex_match(line, m, kDec)) {
      const std::size_t q = intern(ca.states, check_name(m[1]));
      if (std::any_of(instructions.begin(), instructions.end(),
                      [&](const auto& p) { return p.first == q; })) {
        throw ParseError("second instruction for state '" + ca.states[q] + "'", line_no, 1);
      }
      Instruction ins;
      ins.kind = m.size() == 5 && m[4].matched ? Instruction::Kind::kDec : Instruction::Kind::kInc;
      ins.counter = intern(ca.counters, check_name(m[2]));
      ins.next = intern(ca.states, check_name(m[3]));
      if (ins.kind == Instruction::Kind::kDec) ins.zero_next = intern(ca.states, check_name(m[4]));
      instructions.emplace_back(q, ins);
    } else if (std::regex_match(line, m, kDirective)) {
      const std::string name = check_name(m[2]);
      if (m[1] == "start") start = name;
      if (m[1] == "halt") halt = name;
      if (m[1] == "input") input = name;
    } else {
      throw ParseError("unrecognized line", line_no, 1);
    }
  }
  if (!start) throw ParseError("missing #start", line_no, 1);
  if (!halt) throw ParseError("missing #halt", line_no, 1);
  if (!input) throw ParseError("missing #input", line_no, 1);
  ca.start = intern(ca.states, *start);
  ca.halt = intern(ca.states, *halt);
  ca.input_counter = intern(ca.counters, *input);
  ca.program.assign(ca.states.size(), std::nullopt);
  for (const auto& [q, ins] : instructions) ca.program[q] = ins;
  try {
    ca.validate();
  } catch (const ContractError& e) {
    throw ParseError(e.what(), line_no, 1);
  }
  return ca;
}

std::string render_ca(const CounterAutomaton& ca) {
  std::string out;
  for (std::size_t q = 0; q < ca.states.size(); ++q) {
    const auto& ins = ca.program[q];
    if (!ins) continue;
    out += "state " + ca.states[q] + ": ";
    if (ins->kind == Instruction::Kind::kInc) {
      out += "inc " + ca.counters[ins->counter] + " -> " + ca.states[ins->next] + "\n";
    } else {
      out += "dec " + ca.counters[ins->counter] + " -> " + ca.states[ins->next] + " else " +
             ca.states[ins->zero_next] + "\n";
    }
  }
  out += "#start " + ca.states[ca.start] + "\n";
  out += "#halt " + ca.states[ca.halt] + "\n";
  out += "#input " + ca.counters[ca.input_counter] + "\n";
  return out;
}

CaRun run_ca(const CounterAutomaton& ca, Count input, std::uint64_t max_steps) {
  ca.validate();
  if (input < 0) throw ContractError("input must be nonnegative");
  CaRun run;
  run.counters.assign(ca.counters.size(), 0);
  run.counters[ca.input_counter] = input;
  std::size_t q = ca.start;
  while (q != ca.halt) {
    if (run.steps >= max_steps) return run;
    const Instruction& ins = *ca.program[q];
    Count& c = run.counters[ins.counter];
    if (ins.kind == Instruction::Kind::kInc) {
      if (c == std::numeric_limits<Count>::max()) throw OverflowError("counter overflow");
      ++c;
      q = ins.next;
    } else if (c > 0) {
      --c;
      q = ins.next;
    } else {
      q = ins.zero_next;
    }
    ++run.steps;
  }
  run.halted = true;
  return run;
}

CompiledCa compile_ca(const CounterAutomaton& ca, std::size_t l) {
  ca.validate();
  if (l < 1) throw ContractError("clock length must be at least 1");
  std::vector<std::string> clock;
  for (std::size_t i = 1; i <= l; ++i) clock.push_back("T" + std::to_string(i));
  auto reserved = [&](const std::string& n) {
    return n == "D" || std::find(clock.begin(), clock.end(), n) != clock.end();
  };
  for (const auto* names : {&ca.states, &ca.counters}) {
    for (const auto& n : *names) {
      if (reserved(n)) throw ContractError("name '" + n + "' collides with a clock species");
    }
  }

  CrnBuilder b;
  for (const auto& q : ca.states) b.add_species(q);
  for (const auto& c : ca.counters) b.add_species(c);
  for (const auto& t : clock) b.add_species(t);
  b.add_species("D");
  std::vector<std::optional<std::string>> zero_test;
  for (std::size_t q = 0; q < ca.states.size(); ++q) {
    const auto& ins = ca.program[q];
    if (!ins) continue;
    const std::string& qn = ca.states[q];
    const std::string& cn = ca.counters[ins->counter];
    if (ins->kind == Instruction::Kind::kInc) {
      b.add_reaction({{qn, 1}}, {{cn, 1}, {ca.states[ins->next], 1}});
      zero_test.emplace_back();
    } else {
      b.add_reaction({{qn, 1}, {cn, 1}}, {{ca.states[ins->next], 1}, {"D", 1}});
      zero_test.emplace_back();
      b.add_reaction({{clock.front(), 1}, {qn, 1}},
                     {{ca.states[ins->zero_next], 1}, {clock.back(), 1}});
      zero_test.emplace_back(cn);
    }
  }
  for (std::size_t i = 0; i + 1 < l; ++i) {
    b.add_reaction({{clock[i], 1}, {"D", 1}}, {{clock[i + 1], 1}, {"D", 1}});
    zero_test.emplace_back();
    b.add_reaction({{clock[i + 1], 1}}, {{clock[i], 1}});
    zero_test.emplace_back();
  }

  CompiledCa out;
  out.crn = b.build();
  out.l = l;
  for (const auto& q : ca.states) out.state_species.push_back(out.crn.species_index(q));
  for (const auto& c : ca.counters) out.counter_species.push_back(out.crn.species_index(c));
  for (const auto& t : clock) out.clock_species.push_back(out.crn.species_index(t));
  out.d_species = out.crn.species_index("D");
  for (const auto& z : zero_test) {
    out.zero_test.push_back(z ? std::optional<std::size_t>(out.crn.species_index(*z))
                              : std::nullopt);
  }
  return out;
}

Count default_n_d(Count nu) { return 10 * nu + 10; }

State initial_state(const CounterAutomaton& ca, const CompiledCa& compiled, Count nu,
                    Count n_d) {
  if (nu < 0 || n_d < 0) throw ContractError("counts must be nonnegative");
  State s = compiled.crn.zero_state();
  s[compiled.state_species[ca.start]] = 1;
  s[compiled.counter_species[ca.input_counter]] += nu;
  s[compiled.clock_species.back()] += 1;
  s[compiled.d_species] += n_d;
  return s;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double denom = 1 + z * z / nn;
  const double center = (p + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ErrorEstimate error_probability(const CounterAutomaton& ca, const CompiledCa& compiled,
                                Count nu, Count n_d, const StochasticConfig& config,
                                std::size_t n_runs, std::uint64_t max_ca_steps) {
  const CaRun oracle = run_ca(ca, nu, max_ca_steps);
  if (!oracle.halted) throw ContractError("the automaton does not halt on this input");
  const State init = initial_state(ca, compiled, nu, n_d);
  const std::size_t halt = compiled.state_species[ca.halt];

  ErrorEstimate est;
  est.runs = n_runs;
  est.outcomes.resize(n_runs);
  parallel_for(n_runs, config.jobs, [&](std::size_t i) {
    StochasticConfig run = config;
    run.seed = derive_seed(config.seed, i);
    run.record_events = true;
    const Trajectory tr =
        simulate(compiled.crn, init, run, [&](double, const State& c) { return c[halt] > 0; });
    CaRunOutcome& out = est.outcomes[i];
    out.halted = tr.stop == StopReason::kCondition;
    out.time = tr.end_time;
    for (std::size_t s : compiled.counter_species) out.counters.push_back(tr.final_state[s]);
    out.correct = out.halted && out.counters == oracle.counters;
    const State* before = &tr.initial;
    for (const Event& e : tr.events) {
      const auto& z = compiled.zero_test[e.reaction];
      if (z && (*before)[*z] > 0) out.wrong_zero = true;
      before = &e.state;
    }
  });
  for (const auto& o : est.outcomes) {
    if (!o.halted) ++est.timeouts;
    if (!o.correct) ++est.errors;
  }
  est.rate = n_runs ? static_cast<double>(est.errors) / static_cast<double>(n_runs) : 0.0;
  std::tie(est.ci_low, est.ci_high) = wilson_interval(est.errors, n_runs);
  return est;
}

}  // namespace crnkit
