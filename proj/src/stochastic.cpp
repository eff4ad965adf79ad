#include "crnkit/stochastic.hpp"

#include <cmath>

#include "crnkit/parallel.hpp"
#include "crnkit/reach.hpp"

namespace crnkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// For each reaction j, the reactions whose propensity can change when j fires.
std::vector<std::vector<std::size_t>> dependency_graph(const Crn& crn) {
  const std::size_t n = crn.reaction_count();
  std::vector<std::vector<std::size_t>> readers(crn.species_count());
  for (std::size_t j = 0; j < n; ++j) {
    for (const Term& t : crn.reaction(j).reactant_terms()) readers[t.species].push_back(j);
  }
  std::vector<std::vector<std::size_t>> deps(n);
  std::vector<std::size_t> seen(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (const Term& t : crn.reaction(j).net_terms()) {
      for (std::size_t i : readers[t.species]) {
        if (seen[i] != j) {
          seen[i] = j;
          deps[j].push_back(i);
        }
      }
    }
  }
  return deps;
}

}  // namespace

void StochasticConfig::validate() const {
  if (!(volume > 0) || !std::isfinite(volume)) throw ContractError("volume must be positive");
  if (!(max_time > 0)) throw ContractError("max_time must be positive");
  if (max_steps == 0) throw ContractError("max_steps must be positive");
  if (!(stationary_factor > 0)) throw ContractError("stationary factor must be positive");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + index * 0x632be59bd9b4e019ULL);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

double propensity(const Reaction& alpha, const State& c, double volume) {
  double rho = alpha.rate();
  for (const Term& t : alpha.reactant_terms()) {
    const Count have = c[t.species];
    if (have < t.coeff) return 0.0;
    for (Count i = 0; i < t.coeff; ++i) rho *= static_cast<double>(have - i);
  }
  if (alpha.order() > 1) rho /= std::pow(volume, static_cast<double>(alpha.order() - 1));
  return rho;
}

double total_rate(const Crn& crn, const State& c, double volume) {
  double sum = 0.0;
  for (const auto& alpha : crn.reactions()) sum += propensity(alpha, c, volume);
  return sum;
}

std::optional<std::string> density_warning(const State& c, const StochasticConfig& config) {
  const double density = static_cast<double>(c.total()) / config.volume;
  if (density > config.density_cap) {
    return "molecule density " + std::to_string(density) + " exceeds cap " +
           std::to_string(config.density_cap);
  }
  return std::nullopt;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kTerminal: return "terminal";
    case StopReason::kMaxTime: return "max_time";
    case StopReason::kMaxSteps: return "max_steps";
    case StopReason::kCondition: return "condition";
  }
  return "?";
}

Trajectory simulate(const Crn& crn, const State& init, const StochasticConfig& config,
                    const StopCondition& stop) {
  config.validate();
  if (init.size() != crn.species_count()) throw ContractError("state has wrong dimension");
  const std::size_t n = crn.reaction_count();
  const auto deps = dependency_graph(crn);
  Rng rng(config.seed);

  Trajectory traj;
  traj.initial = init;
  State c = init;
  double t = 0.0;
  std::vector<double> props(n);
  for (std::size_t j = 0; j < n; ++j) props[j] = propensity(crn.reaction(j), c, config.volume);

  auto finish = [&](StopReason reason) {
    traj.stop = reason;
    traj.terminated = reason == StopReason::kTerminal;
    traj.end_time = t;
    traj.final_state = c;
    return traj;
  };

  for (;;) {
    if (stop && stop(t, c)) return finish(StopReason::kCondition);
    double total = 0.0;
    bool live = false;
    for (std::size_t j = 0; j < n; ++j) {
      total += props[j];
      if (props[j] > 0 && !crn.reaction(j).is_mute()) live = true;
    }
    if (!live) return finish(StopReason::kTerminal);
    if (traj.steps >= config.max_steps) return finish(StopReason::kMaxSteps);
    const double tau = rng.exponential(total);
    if (t + tau > config.max_time) {
      t = config.max_time;
      return finish(StopReason::kMaxTime);
    }
    t += tau;
    double target = rng.uniform() * total;
    std::size_t pick = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (props[j] <= 0) continue;
      pick = j;
      if (target < props[j]) break;
      target -= props[j];
    }
    const Reaction& alpha = crn.reaction(pick);
    for (const Term& term : alpha.net_terms()) {
      if (__builtin_add_overflow(c[term.species], term.coeff, &c[term.species])) {
        throw OverflowError("molecule count overflows 64 bits");
      }
    }
    for (std::size_t i : deps[pick]) props[i] = propensity(crn.reaction(i), c, config.volume);
    ++traj.steps;
    if (config.record_events) traj.events.push_back({t, pick, c, alpha.is_mute()});
  }
}

std::vector<Trajectory> simulate_batch(const Crn& crn, const State& init,
                                       const StochasticConfig& config, std::size_t n_runs,
                                       const StopCondition& stop) {
  std::vector<Trajectory> out(n_runs);
  parallel_for(n_runs, config.jobs, [&](std::size_t i) {
    StochasticConfig run = config;
    run.seed = derive_seed(config.seed, i);
    out[i] = simulate(crn, init, run, stop);
  });
  return out;
}

TimeEstimate estimate_time_to(const Crn& crn, const State& init,
                              const std::function<bool(const State&)>& predicate,
                              const StochasticConfig& config, std::size_t n_runs) {
  if (n_runs < 2) throw ContractError("need at least two runs");
  StochasticConfig run = config;
  run.record_events = false;
  const auto runs = simulate_batch(crn, init, run, n_runs,
                                   [&](double, const State& c) { return predicate(c); });
  TimeEstimate est;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& tr : runs) {
    if (tr.stop == StopReason::kCondition) {
      ++est.hits;
      sum += tr.end_time;
      sum_sq += tr.end_time * tr.end_time;
    } else {
      ++est.misses;
    }
  }
  if (est.hits == 0) throw Error("no run reached the target within the limits");
  const double k = static_cast<double>(est.hits);
  est.mean = sum / k;
  if (est.hits > 1) {
    const double var = std::max(0.0, (sum_sq - k * est.mean * est.mean) / (k - 1));
    est.std_error = std::sqrt(var / k);
  }
  return est;
}

Distribution empirical_distribution(const Crn& crn, const State& init, double t,
                                    const StochasticConfig& config, std::size_t n_runs) {
  if (n_runs == 0) throw ContractError("need at least one run");
  if (t < 0) throw ContractError("sampling time must be nonnegative");
  Distribution dist;
  dist.sample_time = t;
  dist.runs = n_runs;
  if (t == 0) {
    dist.frequencies[init] = 1.0;
    return dist;
  }
  StochasticConfig run = config;
  run.record_events = false;
  run.max_time = t;
  const auto runs = simulate_batch(crn, init, run, n_runs);
  for (const auto& tr : runs) {
    if (tr.stop == StopReason::kMaxSteps) {
      throw Error("step limit reached before the sampling time");
    }
    dist.frequencies[tr.final_state] += 1.0 / static_cast<double>(n_runs);
  }
  return dist;
}

double stationary_time(const Crn& crn, const State& init, const StochasticConfig& config) {
  double min_rate = std::numeric_limits<double>::infinity();
  for (const auto& alpha : crn.reactions()) {
    const double p = propensity(alpha, init, config.volume);
    if (p > 0) min_rate = std::min(min_rate, p);
  }
  if (!std::isfinite(min_rate)) return 0.0;
  const double size = std::max<double>(1.0, static_cast<double>(init.total()));
  return config.stationary_factor * size / min_rate;
}

Distribution stationary_distribution(const Crn& crn, const State& init,
                                     const StochasticConfig& config, std::size_t n_runs) {
  if (post(crn, init, config.reach_bound).truncated) {
    throw Error("reachable state space is not finite within the bound; "
                "stationary sampling refused");
  }
  Distribution dist =
      empirical_distribution(crn, init, stationary_time(crn, init, config), config, n_runs);
  dist.stationary = true;
  return dist;
}

}  // namespace crnkit
