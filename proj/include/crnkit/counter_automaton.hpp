#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crnkit/crn.hpp"
#include "crnkit/stochastic.hpp"

namespace crnkit {

struct Instruction {
  enum class Kind { kInc, kDec };
  Kind kind = Kind::kInc;
  std::size_t counter = 0;
  std::size_t next = 0;       // q'
  std::size_t zero_next = 0;  // q'' (dec only)
};

/// Finite control plus counters; states and counters are referenced by index.
struct CounterAutomaton {
  std::vector<std::string> states;
  std::vector<std::string> counters;
  std::size_t start = 0;
  std::size_t halt = 0;
  std::size_t input_counter = 0;
  /// One instruction per non-halt state; empty for the halt state.
  std::vector<std::optional<Instruction>> program;

  void validate() const;
  std::size_t inc_count() const;
  std::size_t dec_count() const;
};

/// Line format:
///   state q: inc c -> q1
///   state q: dec c -> q1 else q2
///   #start q   #halt q   #input c
CounterAutomaton parse_ca(std::string_view text);
std::string render_ca(const CounterAutomaton& ca);

struct CaRun {
  bool halted = false;
  std::vector<Count> counters;
  std::uint64_t steps = 0;
};

/// Reference interpreter.
CaRun run_ca(const CounterAutomaton& ca, Count input, std::uint64_t max_steps);

struct CompiledCa {
  Crn crn;
  std::size_t l = 1;
  std::vector<std::size_t> state_species;    // by CA state
  std::vector<std::size_t> counter_species;  // by CA counter
  std::vector<std::size_t> clock_species;    // T_1 .. T_l
  std::size_t d_species = 0;
  /// For each reaction, the counter species whose zero branch it implements.
  std::vector<std::optional<std::size_t>> zero_test;
};

/// Clock species names are T1..Tl, the delay species is D.
CompiledCa compile_ca(const CounterAutomaton& ca, std::size_t l);

Count default_n_d(Count nu);

/// q_start + nu * input counter + T_l + n_D * D.
State initial_state(const CounterAutomaton& ca, const CompiledCa& compiled, Count nu,
                    Count n_d);

struct CaRunOutcome {
  bool halted = false;      // q_halt appeared before the limits
  bool correct = false;     // halted with the oracle's counters
  bool wrong_zero = false;  // a zero-branch step fired while the counter was positive
  std::vector<Count> counters;
  double time = 0.0;
};

struct ErrorEstimate {
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t errors = 0;
  std::size_t timeouts = 0;
  std::size_t runs = 0;
  std::vector<CaRunOutcome> outcomes;
};

/// 95% Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n);

/// Empirical error rate of the compiled CRN against run_ca. Runs that hit
/// the time or step limit count as errors.
ErrorEstimate error_probability(const CounterAutomaton& ca, const CompiledCa& compiled,
                                Count nu, Count n_d, const StochasticConfig& config,
                                std::size_t n_runs, std::uint64_t max_ca_steps = 1'000'000);

}  // namespace crnkit
