#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "crnkit/crn.hpp"

namespace crnkit {

/// Name of the generator recorded in run metadata.
inline constexpr const char* kRngAlgorithm = "mt19937_64, seeded by splitmix64";

struct StochasticConfig {
  double volume = 1.0;
  std::uint64_t seed = 0;
  double max_time = std::numeric_limits<double>::infinity();
  std::uint64_t max_steps = 100'000'000;
  /// Stationary sampling time multiplier.
  double stationary_factor = 100.0;
  /// Warn when ||c|| / volume exceeds this.
  double density_cap = std::numeric_limits<double>::infinity();
  /// Keep every event in the trajectory (otherwise only the final state).
  bool record_events = true;
  /// Worker threads for batches; 0 means hardware concurrency.
  unsigned jobs = 0;
  /// State cap for the finite-space check of stationary sampling.
  std::size_t reach_bound = 1'000'000;

  void validate() const;
};

/// Seed of run `index` in a batch started from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform doubles in [0, 1) and exponential variates from a 64-bit engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

/// rho(c, alpha) = k / v^(||r||-1) * prod_X c(X)(c(X)-1)...(c(X)-r(X)+1).
double propensity(const Reaction& alpha, const State& c, double volume);
/// Sum of all propensities, mute reactions included.
double total_rate(const Crn& crn, const State& c, double volume);

/// Warning text when ||c||/volume exceeds the configured cap.
std::optional<std::string> density_warning(const State& c, const StochasticConfig& config);

enum class StopReason { kTerminal, kMaxTime, kMaxSteps, kCondition };

const char* to_string(StopReason reason);

struct Event {
  double time;
  std::size_t reaction;
  State state;
  bool mute;
};

struct Trajectory {
  State initial;
  std::vector<Event> events;
  bool terminated = false;
  StopReason stop = StopReason::kTerminal;
  double end_time = 0.0;
  std::uint64_t steps = 0;
  State final_state;
};

/// Called after the initial state and after every event; returning true
/// stops the run with StopReason::kCondition.
using StopCondition = std::function<bool(double time, const State& c)>;

/// Gillespie direct method.
Trajectory simulate(const Crn& crn, const State& init, const StochasticConfig& config,
                    const StopCondition& stop = {});

/// Runs simulate for seeds derive_seed(config.seed, i), i < n_runs, in
/// parallel; results are ordered by run index.
std::vector<Trajectory> simulate_batch(const Crn& crn, const State& init,
                                       const StochasticConfig& config, std::size_t n_runs,
                                       const StopCondition& stop = {});

struct TimeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t hits = 0;
  std::size_t misses = 0;  // runs that never satisfied the predicate
};

/// Monte-Carlo hitting time of `predicate`. Throws Error if no run hits.
TimeEstimate estimate_time_to(const Crn& crn, const State& init,
                              const std::function<bool(const State&)>& predicate,
                              const StochasticConfig& config, std::size_t n_runs);

struct Distribution {
  std::map<State, double> frequencies;
  double sample_time = 0.0;
  bool stationary = false;
  std::size_t runs = 0;
};

/// Empirical distribution of the state at time t.
Distribution empirical_distribution(const Crn& crn, const State& init, double t,
                                    const StochasticConfig& config, std::size_t n_runs);

/// Sampling time used for the stationary distribution from `init`.
double stationary_time(const Crn& crn, const State& init, const StochasticConfig& config);

/// Distribution at stationary_time(). Throws Error when the reachable space
/// from init is not finite within config.reach_bound.
Distribution stationary_distribution(const Crn& crn, const State& init,
                                     const StochasticConfig& config, std::size_t n_runs);

}  // namespace crnkit
