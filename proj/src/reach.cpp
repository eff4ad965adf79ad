#include "crnkit/reach.hpp"

#include <deque>

namespace crnkit {

std::optional<std::size_t> ReachResult::index_of(const State& c) const {
  auto it = index.find(c);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::vector<std::vector<std::size_t>> ReachResult::successors() const {
  std::vector<std::vector<std::size_t>> out(states.size());
  for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].from].push_back(i);
  return out;
}

bool is_kfast(const Reaction& alpha, const State& c, Count k) {
  for (const Term& t : alpha.reactant_terms()) {
    if (c[t.species] >= k) return true;
  }
  return false;
}

namespace {

template <typename Admit>
ReachResult explore(const Crn& crn, const State& c, std::size_t bound, Admit admit) {
  if (bound == 0) throw ContractError("reachability bound must be at least 1");
  if (c.size() != crn.species_count()) throw ContractError("state has wrong dimension");
  ReachResult res;
  res.frontier_bound = bound;
  res.states.push_back(c);
  res.index.emplace(c, 0);
  for (std::size_t head = 0; head < res.states.size(); ++head) {
    for (std::size_t j = 0; j < crn.reaction_count(); ++j) {
      const Reaction& alpha = crn.reaction(j);
      if (alpha.is_mute() || !applicable(res.states[head], alpha)) continue;
      if (!admit(alpha, res.states[head])) continue;
      State next = apply(res.states[head], alpha);
      auto it = res.index.find(next);
      std::size_t to;
      if (it != res.index.end()) {
        to = it->second;
      } else {
        if (res.states.size() >= bound) {
          res.truncated = true;
          return res;
        }
        to = res.states.size();
        res.index.emplace(next, to);
        res.states.push_back(std::move(next));
      }
      res.edges.push_back({head, j, to});
    }
  }
  return res;
}

}  // namespace

ReachResult post(const Crn& crn, const State& c, std::size_t bound) {
  return explore(crn, c, bound, [](const Reaction&, const State&) { return true; });
}

ReachResult post_kfast(const Crn& crn, const State& c, Count k, std::size_t bound) {
  for (const auto& r : crn.reactions()) {
    if (r.order() > 2) {
      throw ContractError("k-fast reachability needs uni- or bimolecular reactions");
    }
  }
  return explore(crn, c, bound,
                 [k](const Reaction& r, const State& s) { return is_kfast(r, s, k); });
}

std::vector<bool> pre_within(const ReachResult& universe, const std::vector<bool>& target) {
  return pre_within(universe, target, [](const Edge&) { return true; });
}

StateSet pre_within(const Crn& crn, const StateSet& target, const StateSet& universe) {
  // Backward search: a predecessor p of s satisfies p = s - (p_alpha - r_alpha)
  // for some alpha applicable to p.
  StateSet marked;
  std::deque<State> queue;
  for (const State& t : target) {
    if (universe.count(t) && marked.insert(t).second) queue.push_back(t);
  }
  while (!queue.empty()) {
    State s = std::move(queue.front());
    queue.pop_front();
    for (const auto& alpha : crn.reactions()) {
      if (alpha.is_mute()) continue;
      State p = s;
      bool ok = true;
      for (const Term& t : alpha.net_terms()) {
        p[t.species] -= t.coeff;
        if (p[t.species] < 0) ok = false;
      }
      if (!ok || !applicable(p, alpha) || !universe.count(p)) continue;
      if (marked.insert(p).second) queue.push_back(std::move(p));
    }
  }
  return marked;
}

bool is_terminal(const Crn& crn, const State& c) {
  for (const auto& alpha : crn.reactions()) {
    if (!alpha.is_mute() && applicable(c, alpha)) return false;
  }
  return true;
}

}  // namespace crnkit
