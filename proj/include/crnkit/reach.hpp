#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "crnkit/crn.hpp"

namespace crnkit {

using StateSet = std::unordered_set<State, StateHash>;

struct Edge {
  std::size_t from;      // index into ReachResult::states
  std::size_t reaction;  // index into Crn::reactions
  std::size_t to;
};

/// A breadth-first reachability closure. states[0] is the start state and
/// states appear in discovery order.
struct ReachResult {
  std::vector<State> states;
  std::vector<Edge> edges;
  bool truncated = false;
  std::size_t frontier_bound = 0;

  std::optional<std::size_t> index_of(const State& c) const;
  bool contains(const State& c) const { return index_of(c).has_value(); }
  /// Outgoing edges of each state, in edge order.
  std::vector<std::vector<std::size_t>> successors() const;

  std::unordered_map<State, std::size_t, StateHash> index;
};

/// post(c). Stops with truncated=true once `bound` states are held and
/// another one is discovered. Mute self-loops never appear as edges.
ReachResult post(const Crn& crn, const State& c, std::size_t bound);

/// Like post, but only k-fast edges are followed: some reactant species of
/// the reaction has count >= k. Throws ContractError if any reaction has
/// more than two reactant molecules.
ReachResult post_kfast(const Crn& crn, const State& c, Count k, std::size_t bound);

/// Index-level backward closure: marks every state of `universe` that reaches
/// a marked target through universe edges.
std::vector<bool> pre_within(const ReachResult& universe, const std::vector<bool>& target);

/// As above, restricted to the edges accepted by `keep(edge)`.
template <typename EdgeFilter>
std::vector<bool> pre_within(const ReachResult& universe, const std::vector<bool>& target,
                             EdgeFilter keep);

/// Set-level form: states of `universe` that can reach `target` using only
/// states inside `universe`.
StateSet pre_within(const Crn& crn, const StateSet& target, const StateSet& universe);

/// No non-mute reaction is applicable.
bool is_terminal(const Crn& crn, const State& c);

/// Whether `alpha` is k-fast for c.
bool is_kfast(const Reaction& alpha, const State& c, Count k);

template <typename EdgeFilter>
std::vector<bool> pre_within(const ReachResult& universe, const std::vector<bool>& target,
                             EdgeFilter keep) {
  const std::size_t n = universe.states.size();
  std::vector<std::vector<std::size_t>> preds(n);
  for (const Edge& e : universe.edges) {
    if (keep(e)) preds[e.to].push_back(e.from);
  }
  std::vector<bool> marked(target);
  marked.resize(n, false);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (marked[i]) stack.push_back(i);
  }
  while (!stack.empty()) {
    const std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t p : preds[s]) {
      if (!marked[p]) {
        marked[p] = true;
        stack.push_back(p);
      }
    }
  }
  return marked;
}

}  // namespace crnkit
