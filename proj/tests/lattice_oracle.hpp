#pragma once

// Brute-force reference for rate-independent reachability: fluxes on a
// quarter grid in [0, 4], at most two straight-line segments.

#include <functional>
#include <random>
#include <vector>

#include "crnkit/continuous.hpp"
#include "crnkit/crn_format.hpp"

namespace testing_oracle {

using crnkit::Count;
using crnkit::Crn;
using crnkit::RationalVector;

struct Instance {
  Crn crn;
  RationalVector c;
  RationalVector d;
};

inline constexpr Count kGridSteps = 16;  // quarters up to 4

// Quarter units throughout: X holds 4x, U holds 4u.
using Quarters = std::vector<Count>;

inline bool applicable_at(const Crn& crn, const Quarters& x, std::size_t r) {
  for (const auto& t : crn.reaction(r).reactant_terms()) {
    if (x[t.species] <= 0) return false;
  }
  return true;
}

// Calls visit(next) for each grid flux applicable at x that keeps x >= 0.
template <typename Visit>
bool each_step(const Crn& crn, const Quarters& x, Visit visit) {
  const std::size_t n = crn.reaction_count();
  std::vector<bool> app(n);
  for (std::size_t r = 0; r < n; ++r) app[r] = applicable_at(crn, x, r);
  Quarters u(n, 0);
  for (;;) {
    Quarters y = x;
    for (std::size_t r = 0; r < n; ++r) {
      for (const auto& t : crn.reaction(r).net_terms()) y[t.species] += u[r] * t.coeff;
    }
    bool nonneg = true;
    for (Count v : y) nonneg &= v >= 0;
    if (nonneg && visit(y)) return true;
    std::size_t r = 0;
    while (r < n) {
      if (app[r] && u[r] < kGridSteps) {
        ++u[r];
        break;
      }
      u[r] = 0;
      ++r;
    }
    if (r == n) return false;
  }
}

inline Quarters to_quarters(const RationalVector& v) {
  Quarters q;
  for (const auto& x : v) q.push_back(static_cast<Count>(x * 4));
  return q;
}

inline bool lattice_reachable(const Crn& crn, const RationalVector& c, const RationalVector& d,
                              std::size_t segments) {
  const Quarters qc = to_quarters(c), qd = to_quarters(d);
  std::function<bool(const Quarters&, std::size_t)> search = [&](const Quarters& x,
                                                                 std::size_t left) {
    if (x == qd) return true;
    if (left == 0) return false;
    return each_step(crn, x, [&](const Quarters& y) { return y != x && search(y, left - 1); });
  };
  return search(qc, segments);
}

// Exact replay of a segment witness from c to d.
inline bool replays(const Crn& crn, const RationalVector& c, const RationalVector& d,
                    const crnkit::SegmentResult& s) {
  if (s.states.empty() || s.states.front() != c || s.states.back() != d) return false;
  if (s.states.size() != s.fluxes.size() + 1) return false;
  for (std::size_t j = 0; j < s.fluxes.size(); ++j) {
    const auto app = crnkit::applicable_reactions(crn, s.states[j]);
    RationalVector x = s.states[j];
    for (std::size_t r = 0; r < crn.reaction_count(); ++r) {
      const auto& u = s.fluxes[j][r];
      if (u < 0 || (u > 0 && !app[r])) return false;
      for (const auto& t : crn.reaction(r).net_terms()) x[t.species] += u * t.coeff;
    }
    for (const auto& v : x) {
      if (v < 0) return false;
    }
    if (x != s.states[j + 1]) return false;
  }
  return true;
}

// Three species, one or two reactions with unit coefficients. Half of the
// targets come from random grid paths, the rest are random points.
inline Instance random_instance(std::mt19937_64& gen) {
  const char* names[] = {"A", "B", "C"};
  auto coin = [&](int n) { return static_cast<int>(gen() % n); };
  for (;;) {
    crnkit::CrnBuilder b;
    for (const char* n : names) b.add_species(n);
    const int reactions = 1 + coin(2);
    for (int r = 0; r < reactions; ++r) {
      crnkit::CrnBuilder::Side lhs, rhs;
      const int mask_l = 1 + coin(7);
      const int mask_r = coin(8);
      for (int s = 0; s < 3; ++s) {
        if (mask_l >> s & 1) lhs.emplace_back(names[s], 1);
        if (mask_r >> s & 1) rhs.emplace_back(names[s], 1);
      }
      if (lhs.size() > 2 || mask_l == mask_r) {
        --r;
        continue;
      }
      b.add_reaction(lhs, rhs);
    }
    Instance in;
    in.crn = b.build();
    for (int s = 0; s < 3; ++s) in.c.emplace_back(coin(4));
    if (coin(2) == 0) {
      Quarters x = to_quarters(in.c);
      const int segments = 1 + coin(2);
      for (int j = 0; j < segments; ++j) {
        std::vector<Quarters> options;
        each_step(in.crn, x, [&](const Quarters& y) {
          options.push_back(y);
          return false;
        });
        x = options[gen() % options.size()];
      }
      for (Count q : x) in.d.push_back(crnkit::Rational(q, 4));
    } else {
      for (int s = 0; s < 3; ++s) in.d.emplace_back(coin(5));
    }
    return in;
  }
}

}  // namespace testing_oracle
