#include "crnkit/continuous.hpp"

#include <algorithm>
#include <cmath>

#include "crnkit/reach.hpp"

namespace crnkit {

Concentrations ode_rhs(const Crn& crn, const Concentrations& x) {
  if (x.size() != crn.species_count()) throw ContractError("state has wrong dimension");
  Concentrations dx(x.size(), 0.0);
  for (const auto& alpha : crn.reactions()) {
    double flux = alpha.rate();
    for (const Term& t : alpha.reactant_terms()) {
      flux *= t.coeff == 1 ? x[t.species] : std::pow(x[t.species], static_cast<double>(t.coeff));
    }
    if (flux == 0.0) continue;
    for (const Term& t : alpha.net_terms()) dx[t.species] += static_cast<double>(t.coeff) * flux;
  }
  return dx;
}

namespace {

double inf_norm(const Concentrations& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

}  // namespace

OdeResult integrate(const Crn& crn, const Concentrations& x0, double t_end, double tol,
                    const OdeOptions& options) {
  if (!(t_end > 0)) throw ContractError("t_end must be positive");
  if (!(tol > 0)) throw ContractError("tol must be positive");
  if (x0.size() != crn.species_count()) throw ContractError("state has wrong dimension");
  for (double v : x0) {
    if (!(v >= 0) || !std::isfinite(v)) throw ContractError("concentrations must be >= 0");
  }
  const std::size_t n = x0.size();
  OdeResult res;
  res.samples.push_back({0.0, x0});

  Concentrations y = x0;
  Concentrations k1 = ode_rhs(crn, y);
  double t = 0.0;
  double h = std::min(options.initial_step, t_end);
  std::size_t streak = 0;
  Concentrations tmp(n), k2, k3, k4, k5, k6, k7, y_new(n);

  auto stage = [&](std::initializer_list<std::pair<double, const Concentrations*>> terms) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = y[i];
      for (const auto& [a, k] : terms) s += h * a * (*k)[i];
      tmp[i] = s;
    }
    return ode_rhs(crn, tmp);
  };

  while (t < t_end) {
    if (res.accepted + res.rejected >= options.max_steps) {
      throw Error("integration exceeded the step limit");
    }
    h = std::min(h, t_end - t);
    if (h < options.min_step * std::max(1.0, std::abs(t))) {
      throw StiffnessError("step size underflow at t=" + std::to_string(t) +
                           " (system too stiff for an explicit method)");
    }
    k2 = stage({{kA21, &k1}});
    k3 = stage({{kA31, &k1}, {kA32, &k2}});
    k4 = stage({{kA41, &k1}, {kA42, &k2}, {kA43, &k3}});
    k5 = stage({{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}});
    k6 = stage({{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}});
    for (std::size_t i = 0; i < n; ++i) {
      y_new[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] +
                             kB6 * k6[i]);
    }
    k7 = ode_rhs(crn, y_new);
    double err = 0.0;
    bool negative = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                            kE6 * k6[i] + kE7 * k7[i]);
      const double scale = tol + tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
      if (y_new[i] < -tol) negative = true;
      if (!std::isfinite(y_new[i])) err = std::numeric_limits<double>::infinity();
    }
    if (err > 1.0 || negative) {
      ++res.rejected;
      const double factor = std::isfinite(err) && !negative
                                ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                                : 0.2;
      h *= factor;
      continue;
    }
    ++res.accepted;
    t = (t_end - t <= h) ? t_end : t + h;
    y = y_new;
    k1 = k7;
    Concentrations clipped = y;
    for (double& v : clipped) {
      if (v < 0) {
        res.max_clip = std::max(res.max_clip, -v);
        v = 0.0;
      }
    }
    res.samples.push_back({t, std::move(clipped)});
    streak = inf_norm(k1) < tol * std::max(1.0, inf_norm(y)) ? streak + 1 : 0;
    if (streak >= options.fixpoint_window) {
      res.fixpoint = true;
      if (options.stop_at_fixpoint) break;
    }
    const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
  }
  return res;
}

std::vector<bool> applicable_reactions(const Crn& crn, const RationalVector& c) {
  std::vector<bool> ok(crn.reaction_count(), true);
  for (std::size_t j = 0; j < crn.reaction_count(); ++j) {
    for (const Term& t : crn.reaction(j).reactant_terms()) {
      if (c[t.species] <= 0) ok[j] = false;
    }
  }
  return ok;
}

namespace {

void check_vector(const Crn& crn, const RationalVector& v) {
  if (v.size() != crn.species_count()) throw ContractError("state has wrong dimension");
  for (const auto& e : v) {
    if (e < 0) throw ContractError("concentrations must be >= 0");
  }
}

using Mask = std::uint64_t;

Mask support(const RationalVector& v) {
  Mask m = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0) m |= Mask{1} << i;
  }
  return m;
}

Mask reactant_mask(const Reaction& r) {
  Mask m = 0;
  for (const Term& t : r.reactant_terms()) m |= Mask{1} << t.species;
  return m;
}

Mask product_mask(const Reaction& r) {
  Mask m = 0;
  for (const Term& t : r.product_terms()) m |= Mask{1} << t.species;
  return m;
}

// Chain search for a fixed positivity pattern of the intermediate states.
std::optional<std::vector<RationalVector>> solve_pattern(const Crn& crn,
                                                         const RationalVector& c,
                                                         const RationalVector& d,
                                                         const std::vector<Mask>& pattern) {
  const std::size_t n = crn.species_count();
  const std::size_t k = pattern.size() - 1;  // pattern[0] = supp(c), pattern[k] = supp(d)
  const StoichMatrix m = stoichiometry(crn);

  // Variable layout: per segment the allowed reactions, then t, then slacks.
  std::vector<std::vector<std::size_t>> allowed(k);
  std::vector<std::size_t> offset(k);
  std::size_t vars = 0;
  for (std::size_t j = 0; j < k; ++j) {
    offset[j] = vars;
    for (std::size_t a = 0; a < crn.reaction_count(); ++a) {
      const Mask need = reactant_mask(crn.reaction(a));
      if ((need & pattern[j]) == need) allowed[j].push_back(a);
    }
    vars += allowed[j].size();
  }
  const std::size_t t_var = vars++;
  std::size_t positivity_rows = 0;
  for (std::size_t j = 1; j < k; ++j) {
    positivity_rows += static_cast<std::size_t>(__builtin_popcountll(pattern[j]));
  }
  const std::size_t first_slack = vars;
  vars += positivity_rows + 1;

  LinearProgram lp;
  lp.variables = vars;
  std::size_t slack = first_slack;
  for (std::size_t j = 1; j <= k; ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      const bool positive = j < k && ((pattern[j] >> x) & 1);
      RationalVector row(vars, Rational(0));
      for (std::size_t i = 0; i < j; ++i) {
        for (std::size_t p = 0; p < allowed[i].size(); ++p) {
          row[offset[i] + p] = m(x, allowed[i][p]);
        }
      }
      // x_j(X) is pinned to d(X) at the end and to 0 outside the pattern.
      if (j == k) {
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(d[x] - c[x]);
      } else if (!positive) {
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(-c[x]);
      } else {
        row[t_var] = -1;
        row[slack++] = -1;
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(-c[x]);
      }
    }
  }
  RationalVector cap(vars, Rational(0));
  cap[t_var] = 1;
  cap[slack] = 1;
  lp.rows.push_back(std::move(cap));
  lp.rhs.push_back(1);
  lp.objective.assign(vars, Rational(0));
  lp.objective[t_var] = 1;

  const LpResult r = solve(lp);
  if (r.status != LpStatus::kOptimal) return std::nullopt;
  if (positivity_rows > 0 && r.value <= 0) return std::nullopt;
  std::vector<RationalVector> fluxes(k, RationalVector(crn.reaction_count(), Rational(0)));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t p = 0; p < allowed[j].size(); ++p) {
      fluxes[j][allowed[j][p]] = r.x[offset[j] + p];
    }
  }
  return fluxes;
}

RationalVector apply_flux(const Crn& crn, const RationalVector& x, const RationalVector& u) {
  RationalVector y = x;
  for (std::size_t a = 0; a < crn.reaction_count(); ++a) {
    if (u[a] == 0) continue;
    for (const Term& t : crn.reaction(a).net_terms()) y[t.species] += u[a] * t.coeff;
  }
  return y;
}

}  // namespace

std::optional<RationalVector> straight_line_reach(const Crn& crn, const RationalVector& c,
                                                  const RationalVector& d) {
  check_vector(crn, c);
  check_vector(crn, d);
  const std::vector<bool> ok = applicable_reactions(crn, c);
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < ok.size(); ++j) {
    if (ok[j]) cols.push_back(j);
  }
  const StoichMatrix m = stoichiometry(crn);
  std::vector<RationalVector> rows;
  RationalVector rhs;
  for (std::size_t x = 0; x < crn.species_count(); ++x) {
    RationalVector row(cols.size());
    for (std::size_t p = 0; p < cols.size(); ++p) row[p] = m(x, cols[p]);
    rows.push_back(std::move(row));
    rhs.push_back(d[x] - c[x]);
  }
  LinearProgram lp;
  lp.variables = cols.size();
  lp.rows = std::move(rows);
  lp.rhs = std::move(rhs);
  const LpResult r = solve(lp);
  if (r.status != LpStatus::kOptimal) return std::nullopt;
  RationalVector u(crn.reaction_count(), Rational(0));
  for (std::size_t p = 0; p < cols.size(); ++p) u[cols[p]] = r.x[p];
  return u;
}

const char* to_string(SegmentResult::Kind kind) {
  switch (kind) {
    case SegmentResult::Kind::kReachable: return "reachable";
    case SegmentResult::Kind::kUnreachable: return "unreachable";
    case SegmentResult::Kind::kInconclusive: return "inconclusive";
  }
  return "?";
}

SegmentResult segment_reach(const Crn& crn, const RationalVector& c, const RationalVector& d,
                            std::size_t max_segments, std::size_t max_programs) {
  if (max_segments < 1) throw ContractError("max_segments must be at least 1");
  check_vector(crn, c);
  check_vector(crn, d);
  SegmentResult res;

  if (auto v = conservation_vector(crn)) {
    Rational wc = 0, wd = 0;
    for (std::size_t i = 0; i < v->size(); ++i) {
      wc += c[i] * (*v)[i];
      wd += d[i] * (*v)[i];
    }
    if (wc != wd) {
      res.kind = SegmentResult::Kind::kUnreachable;
      res.conservation_excluded = true;
      res.depth_searched = max_segments;
      return res;
    }
  }

  auto finish = [&](std::vector<RationalVector> fluxes) {
    res.kind = SegmentResult::Kind::kReachable;
    res.states.push_back(c);
    for (const auto& u : fluxes) res.states.push_back(apply_flux(crn, res.states.back(), u));
    res.fluxes = std::move(fluxes);
    return res;
  };

  if (auto u = straight_line_reach(crn, c, d)) return finish({*u});
  res.depth_searched = 1;
  if (max_segments == 1) return res;

  if (crn.species_count() > 62) {
    res.kind = SegmentResult::Kind::kInconclusive;
    return res;
  }
  // Species that can ever become positive starting from supp(c).
  Mask closure = support(c);
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& r : crn.reactions()) {
      const Mask need = reactant_mask(r);
      if ((need & closure) == need && (product_mask(r) & ~closure) != 0) {
        closure |= product_mask(r);
        grew = true;
      }
    }
  }
  std::vector<std::size_t> free_bits;
  for (std::size_t i = 0; i < crn.species_count(); ++i) {
    if ((closure >> i) & 1) free_bits.push_back(i);
  }
  auto expand = [&](std::uint64_t code) {
    Mask m = 0;
    for (std::size_t b = 0; b < free_bits.size(); ++b) {
      if ((code >> b) & 1) m |= Mask{1} << free_bits[b];
    }
    return m;
  };

  std::size_t programs = 1;
  for (std::size_t k = 2; k <= max_segments; ++k) {
    const std::size_t inner = k - 1;
    if (free_bits.size() * inner >= 62) {
      res.kind = SegmentResult::Kind::kInconclusive;
      return res;
    }
    const std::uint64_t per = std::uint64_t{1} << free_bits.size();
    std::vector<std::uint64_t> codes(inner, 0);
    for (;;) {
      std::vector<Mask> pattern{support(c)};
      for (auto code : codes) pattern.push_back(expand(code));
      pattern.push_back(support(d));
      if (++programs > max_programs) {
        res.kind = SegmentResult::Kind::kInconclusive;
        return res;
      }
      if (auto fluxes = solve_pattern(crn, c, d, pattern)) return finish(std::move(*fluxes));
      std::size_t pos = 0;
      while (pos < inner && ++codes[pos] == per) codes[pos++] = 0;
      if (pos == inner) break;
    }
    res.depth_searched = k;
  }
  res.kind = SegmentResult::Kind::kUnreachable;
  return res;
}

DualRailValue dual_rail_eval(const DualRailCrc& gadget, const std::vector<DualRailValue>& inputs,
                             EvalMode mode, std::size_t bound, double tol) {
  const Crc& crc = gadget.crc;
  if (inputs.size() != gadget.inputs.size()) throw ContractError("input arity mismatch");
  for (const auto& v : inputs) {
    if (v.plus < 0 || v.minus < 0) throw ContractError("dual-rail parts must be >= 0");
  }
  if (mode == EvalMode::kDiscrete) {
    State s = crc.crn.zero_state();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      for (auto [part, idx] : {std::pair{inputs[i].plus, gadget.inputs[i].first},
                               std::pair{inputs[i].minus, gadget.inputs[i].second}}) {
        if (part != std::floor(part)) throw ContractError("discrete inputs must be integral");
        s[idx] += static_cast<Count>(part);
      }
    }
    Crc probe = crc;
    probe.output = {gadget.output.first, gadget.output.second};
    const CrcVerdict v = crc_output_verdict(probe, s, bound);
    if (v.kind != CrcVerdict::Kind::kStable) {
      throw Error(std::string("dual-rail computation did not stabilize: ") + to_string(v.kind));
    }
    return {static_cast<double>((*v.output)[0]), static_cast<double>((*v.output)[1])};
  }
  Concentrations x(crc.crn.species_count(), 0.0);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    x[gadget.inputs[i].first] += inputs[i].plus;
    x[gadget.inputs[i].second] += inputs[i].minus;
  }
  const OdeResult r = integrate(crc.crn, x, 1e7, tol);
  if (!r.fixpoint) throw Error("dual-rail integration did not reach a fixpoint");
  return {r.final_state()[gadget.output.first], r.final_state()[gadget.output.second]};
}

}  // namespace crnkit
