// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "crnkit/catalog.hpp"
#include "crnkit/continuous.hpp"
#include "crnkit/counter_automaton.hpp"
#include "crnkit/crn_format.hpp"
#include "crnkit/decide.hpp"
#include "crnkit/dsd.hpp"
#include "crnkit/predicate.hpp"
#include "crnkit/reach.hpp"
#include "crnkit/stochastic.hpp"
#include "lattice_oracle.hpp"

using namespace crnkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

// 1. Mod-3 decider against x == y (mod 3), ||x|| <= 12.
Outcome criterion1() {
  const Crd crd = catalog::mod3_crd();
  std::size_t checked = 0;
  for (Count x = 0; x <= 12; ++x) {
    for (Count y = 0; x + y <= 12; ++y) {
      if (x == 0 && y == 0) continue;
      const Verdict v = halting_verdict(crd, input_state(crd, {x, y}), 1'000'000);
      const VerdictKind want = (x - y) % 3 == 0 ? VerdictKind::kAccept : VerdictKind::kReject;
      if (v.kind != want) {
        return fail("x=" + std::to_string(x) + " y=" + std::to_string(y) + " gave " +
                    to_string(v.kind));
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " inputs"};
}

Count floor_mod(Count a, Count m) { return ((a % m) + m) % m; }

// 2. Residue mod atoms against a.x == b (mod m).
Outcome criterion2() {
  std::size_t checked = 0;
  for (Count m = 2; m <= 5; ++m) {
    for (Count a1 = -2; a1 <= 2; ++a1) {
      for (Count a2 = -2; a2 <= 2; ++a2) {
        std::vector<Crd> crds;
        for (Count b = 0; b < m; ++b) crds.push_back(compile_mod_atom({a1, a2}, b, m));
        for (const Crd& c : crds) {
          if (!(c.crn == crds[0].crn)) return fail("residue network depends on b");
        }
        for (Count x1 = 0; x1 <= 8; ++x1) {
          for (Count x2 = 0; x1 + x2 <= 8; ++x2) {
            if (x1 == 0 && x2 == 0) continue;
            const ReachResult closure = post(crds[0].crn, input_state(crds[0], {x1, x2}), 1'000'000);
            for (Count b = 0; b < m; ++b) {
              const Verdict v = halting_verdict(crds[b], closure);
              const bool want = floor_mod(a1 * x1 + a2 * x2 - b, m) == 0;
              if (v.kind != (want ? VerdictKind::kAccept : VerdictKind::kReject)) {
                std::ostringstream why;
                why << "a=(" << a1 << "," << a2 << ") b=" << b << " m=" << m << " x=(" << x1
                    << "," << x2 << ") gave " << to_string(v.kind);
                return fail(why.str());
              }
              ++checked;
            }
          }
        }
      }
    }
  }
  return {true, std::to_string(checked) + " verdicts"};
}

// 3. min/max computers and dual-rail gadgets.
Outcome criterion3() {
  const Crc min = catalog::min_crc();
  const Crc max = catalog::max_crc();
  for (Count x = 0; x <= 10; ++x) {
    for (Count y = 0; y <= 10; ++y) {
      for (const auto* crc : {&min, &max}) {
        State in = crc->crn.zero_state();
        in[crc->input[0]] = x;
        in[crc->input[1]] = y;
        const CrcVerdict v = crc_output_verdict(*crc, in, 1'000'000);
        const Count want = crc == &min ? std::min(x, y) : std::max(x, y);
        if (v.kind != CrcVerdict::Kind::kStable || (*v.output)[0] != want) {
          return fail(std::string(crc == &min ? "min" : "max") + "(" + std::to_string(x) + "," +
                      std::to_string(y) + ") not stably computed");
        }
      }
    }
  }
  std::size_t edges = 0;
  for (const bool is_min : {true, false}) {
    const DualRailCrc g = is_min ? catalog::dual_rail_min() : catalog::dual_rail_max();
    const auto [xp, xm] = g.inputs[0];
    const auto [zp, zm] = g.output;
    for (Count x = -5; x <= 5; ++x) {
      for (Count y = -5; y <= 5; ++y) {
        auto rail = [](Count v) {
          return DualRailValue{static_cast<double>(std::max<Count>(v, 0)),
                               static_cast<double>(std::max<Count>(-v, 0))};
        };
        const DualRailValue out = dual_rail_eval(g, {rail(x), rail(y)}, EvalMode::kDiscrete);
        const Count want = is_min ? std::min(x, y) : std::max(x, y);
        if (out.value() != static_cast<double>(want)) {
          return fail(std::string("dual-rail ") + (is_min ? "min" : "max") + "(" +
                      std::to_string(x) + "," + std::to_string(y) + ") = " +
                      format_double(out.value()));
        }
        State in = g.crc.crn.zero_state();
        in[g.inputs[0].first] = std::max<Count>(x, 0);
        in[g.inputs[0].second] = std::max<Count>(-x, 0);
        in[g.inputs[1].first] = std::max<Count>(y, 0);
        in[g.inputs[1].second] = std::max<Count>(-y, 0);
        const ReachResult r = post(g.crc.crn, in, 1'000'000);
        auto inv = [&](const State& s) { return (s[xp] - s[xm]) + (s[zp] - s[zm]); };
        for (const Edge& e : r.edges) {
          if (inv(r.states[e.from]) != inv(r.states[e.to])) {
            return fail("dual-rail invariant broken by reaction " + std::to_string(e.reaction));
          }
        }
        edges += r.edges.size();
      }
    }
  }
  return {true, "242 discrete + 242 dual-rail values, " + std::to_string(edges) + " edges"};
}

// 4. Stochastic kernel.
Outcome criterion4() {
  std::ostringstream detail;
  {
    const Crn crn = parse_crn("A -> B\n2A -> C\nA + B -> 2B\nB -> 0\n").crn;
    State c = crn.zero_state();
    c[crn.species_index("A")] = 7;
    c[crn.species_index("B")] = 3;
    const double v = 2.0;
    const double total = total_rate(crn, c, v);
    const std::size_t n = 10'000;
    StochasticConfig cfg;
    cfg.volume = v;
    cfg.max_steps = 1;
    cfg.seed = 11;
    const auto runs = simulate_batch(crn, c, cfg, n);
    std::vector<std::size_t> hits(crn.reaction_count(), 0);
    for (const auto& t : runs) ++hits[t.events.at(0).reaction];
    double worst = 0;
    for (std::size_t r = 0; r < crn.reaction_count(); ++r) {
      const double p = propensity(crn.reaction(r), c, v) / total;
      const double sigma = std::sqrt(n * p * (1 - p));
      const double z = std::abs(static_cast<double>(hits[r]) - n * p) / sigma;
      worst = std::max(worst, z);
    }
    if (worst > 3.0) return fail("next-reaction frequency off by " + format_double(worst) + " sigma");
    detail << "(a) max |z|=" << std::round(worst * 100) / 100;
  }
  {
    const Crn crn = parse_crn("A -> B\n").crn;
    State c = crn.zero_state();
    c[0] = 100;
    StochasticConfig cfg;
    cfg.seed = 12;
    cfg.record_events = false;
    const auto runs = simulate_batch(crn, c, cfg, 1000);
    double mean = 0;
    for (const auto& t : runs) mean += t.end_time;
    mean /= runs.size();
    double harmonic = 0;
    for (int i = 1; i <= 100; ++i) harmonic += 1.0 / i;
    if (std::abs(mean - harmonic) > 0.1 * harmonic) {
      return fail("A->B mean completion " + format_double(mean));
    }
    detail << "; (b) mean=" << std::round(mean * 1000) / 1000;
  }
  {
    const Crn crn = catalog::leader_election();
    auto mean_time = [&](Count n, std::uint64_t seed) {
      StochasticConfig cfg;
      cfg.seed = seed;
      cfg.volume = static_cast<double>(n);
      cfg.record_events = false;
      State c = crn.zero_state();
      c[0] = n;
      const auto runs = simulate_batch(crn, c, cfg, 500);
      double mean = 0;
      for (const auto& t : runs) mean += t.end_time;
      return mean / runs.size();
    };
    const double ratio = mean_time(200, 13) / mean_time(100, 14);
    if (ratio < 1.5 || ratio > 2.5) return fail("leader election ratio " + format_double(ratio));
    detail << "; (c) ratio=" << std::round(ratio * 1000) / 1000;
  }
  return {true, detail.str()};
}

// 5. Clocked counter-automaton compilation, doubling at input 3.
Outcome criterion5() {
  const CounterAutomaton ca = catalog::doubling_ca();
  const Count nu = 3;
  const CaRun oracle = run_ca(ca, nu, 1000);
  StochasticConfig cfg;
  cfg.volume = 20.0;
  cfg.seed = 2024;
  cfg.max_steps = 50'000'000;
  const Count n_d = 60;
  const std::size_t n = 200;
  ErrorEstimate est[2];
  const std::size_t ls[2] = {2, 8};
  for (int i = 0; i < 2; ++i) {
    const CompiledCa compiled = compile_ca(ca, ls[i]);
    est[i] = error_probability(ca, compiled, nu, n_d, cfg, n);
    for (const CaRunOutcome& o : est[i].outcomes) {
      if (o.halted && !o.wrong_zero && o.counters != oracle.counters) {
        return fail("error-free run at l=" + std::to_string(ls[i]) + " disagrees with the oracle");
      }
    }
  }
  // H0: p8 <= p2, rejected when the pooled z statistic exceeds 1.645.
  const double p2 = est[0].rate, p8 = est[1].rate;
  const double pooled = (est[0].errors + est[1].errors) / (2.0 * n);
  const double se = std::sqrt(pooled * (1 - pooled) * 2.0 / n);
  const double z = se > 0 ? (p8 - p2) / se : 0.0;
  std::ostringstream d;
  d << "errors l=2: " << est[0].errors << "/" << n << ", l=8: " << est[1].errors << "/" << n
    << ", timeouts " << est[0].timeouts + est[1].timeouts << ", z=" << std::round(z * 100) / 100;
  if (z > 1.6448536269514722) return {false, d.str()};
  return {true, d.str()};
}

// 6. Continuous kernel.
Outcome criterion6() {
  const double tol = 1e-8;
  const char* networks[] = {
      "A + B -> C\nC -> A + B\n",
      "2A -> B\nB -> 2A\nA + B -> C\n",
      "X + Y -> Z\n",
      "A -> B\nB -> C\nC -> A\n",
      "A + B -> 2B\nB + C -> 2C\nC + A -> 2A\n",
  };
  double worst = 0;
  for (const char* text : networks) {
    const Crn crn = parse_crn(text).crn;
    const auto v = conservation_vector(crn);
    if (!v) return fail("test network lacks a conservation vector");
    Concentrations x0;
    for (std::size_t i = 0; i < crn.species_count(); ++i) x0.push_back(1.0 + 0.5 * i);
    OdeOptions opt;
    opt.stop_at_fixpoint = false;
    const OdeResult r = integrate(crn, x0, 20.0, tol, opt);
    auto mass = [&](const Concentrations& x) {
      double m = 0;
      for (std::size_t i = 0; i < x.size(); ++i) m += static_cast<double>((*v)[i]) * x[i];
      return m;
    };
    const double m0 = mass(x0);
    for (const OdeSample& s : r.samples) worst = std::max(worst, std::abs(mass(s.x) - m0));
  }
  if (worst > 10 * tol) return fail("conservation drift " + format_double(worst));

  const double h = 1e-6;
  double fd_err = 0;
  for (const char* text : networks) {
    const Crn crn = parse_crn(text).crn;
    Concentrations x0;
    for (std::size_t i = 0; i < crn.species_count(); ++i) x0.push_back(0.7 + 0.3 * i);
    OdeOptions opt;
    opt.stop_at_fixpoint = false;
    opt.initial_step = h;
    const OdeResult r = integrate(crn, x0, h, 1e-14, opt);
    const Concentrations f = ode_rhs(crn, x0);
    for (std::size_t i = 0; i < x0.size(); ++i) {
      fd_err = std::max(fd_err, std::abs((r.final_state()[i] - x0[i]) / h - f[i]));
    }
  }
  // Forward difference error is h/2 * |x''|; the test networks keep |x''| < 20.
  if (fd_err > 10 * h) return fail("finite difference error " + format_double(fd_err));

  const Crn xyz = parse_crn("X + Y -> Z\n").crn;
  double fix_err = 0;
  for (const auto& [x, y] : std::vector<std::pair<double, double>>{{1, 2}, {3, 5}, {0.5, 4}, {2, 2.5}}) {
    const OdeResult r = integrate(xyz, {x, y, 0.0}, 1e6, 1e-12);
    const Concentrations want{0.0, y - x, x};
    for (std::size_t i = 0; i < 3; ++i) {
      fix_err = std::max(fix_err, std::abs(r.final_state()[i] - want[i]));
    }
  }
  if (fix_err > 1e-6) return fail("X+Y->Z fixpoint error " + format_double(fix_err));
  std::ostringstream d;
  d << "drift " << worst << ", fd error " << fd_err << ", fixpoint error " << fix_err;
  return {true, d.str()};
}

// 7. Rate-independent reachability against exact replay and the lattice oracle.
Outcome criterion7() {
  std::mt19937_64 gen(7);
  std::size_t straight_found = 0, reachable = 0, unreachable = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const testing_oracle::Instance in = testing_oracle::random_instance(gen);
    if (auto u = straight_line_reach(in.crn, in.c, in.d)) {
      ++straight_found;
      const auto app = applicable_reactions(in.crn, in.c);
      RationalVector x = in.c;
      for (std::size_t r = 0; r < u->size(); ++r) {
        if ((*u)[r] < 0 || ((*u)[r] > 0 && !app[r])) return fail("straight-line flux invalid");
        for (const Term& t : in.crn.reaction(r).net_terms()) x[t.species] += (*u)[r] * t.coeff;
      }
      if (x != in.d) return fail("straight-line witness does not replay");
    }
    const SegmentResult s = segment_reach(in.crn, in.c, in.d, 2);
    const bool oracle = testing_oracle::lattice_reachable(in.crn, in.c, in.d, 2);
    if (s.kind == SegmentResult::Kind::kInconclusive) {
      return fail("segment search inconclusive on instance " + std::to_string(inst));
    }
    const bool found = s.kind == SegmentResult::Kind::kReachable;
    if (found && !testing_oracle::replays(in.crn, in.c, in.d, s)) return fail("segment witness does not replay");
    if (found != oracle) {
      return fail("instance " + std::to_string(inst) + ": segment_reach " + to_string(s.kind) +
                  ", lattice " + (oracle ? "reachable" : "unreachable"));
    }
    (found ? reachable : unreachable) += 1;
  }
  return {true, std::to_string(straight_found) + " straight-line witnesses, " +
                    std::to_string(reachable) + " reachable / " + std::to_string(unreachable) +
                    " unreachable agree"};
}

// 8. Strand-displacement compilation of A + B -> C.
Outcome criterion8() {
  const CrnDocument abs = parse_crn("A + B -> C\n");
  const DsdProgram prog = compile_dsd(abs.crn, 100);
  const Crn& impl = prog.implementation;
  std::set<std::size_t> reversible, step1;
  for (std::size_t i = 0; i < impl.reaction_count(); ++i) {
    for (std::size_t j = 0; j < impl.reaction_count(); ++j) {
      if (i != j && impl.reaction(i).reactants() == impl.reaction(j).products() &&
          impl.reaction(i).products() == impl.reaction(j).reactants()) {
        reversible.insert(i);
      }
    }
  }
  for (const ReactionGroup& g : prog.groups) {
    step1.insert(g.reactions[0]);
    step1.insert(g.reactions[1]);
  }
  if (reversible != step1) return fail("reverse partners outside the binding step");
  State init = abs.crn.zero_state();
  init[abs.crn.species_index("A")] = 3;
  init[abs.crn.species_index("B")] = 2;
  StochasticConfig cfg;
  cfg.seed = 8;
  const CosimReport rep = cosimulate_check(prog, init, cfg, 200);
  State want = abs.crn.zero_state();
  want[abs.crn.species_index("A")] = 1;
  want[abs.crn.species_index("C")] = 2;
  std::size_t at_want = 0, balanced = 0;
  for (const CosimRun& r : rep.runs) {
    at_want += r.settled && !r.fuel_exhausted && r.final_projection == want;
    balanced += r.audit_balanced;
  }
  std::ostringstream d;
  d << at_want << "/200 at A + 2C, " << balanced << "/200 audits balanced, "
    << reversible.size() << " reversible reactions";
  return {at_want == 200 && balanced == 200 && rep.ok(), d.str()};
}

// 9. Speed faults.
Outcome criterion9() {
  const Crd crd = catalog::existence_crd();
  const Crn& crn = crd.crn;
  std::ostringstream d;
  for (Count k : {1, 2, 4}) {
    State in = crn.zero_state();
    in[crn.species_index("X000")] = 8 * k;
    in[crn.species_index("X100")] = 1;
    in[crn.species_index("X010")] = 1;
    const SpeedFaultResult r = speed_fault_witness(crd, in, k, 1'000'000);
    if (r.kind != SpeedFaultResult::Kind::kNone) {
      return fail("existence decider has a speed fault at k=" + std::to_string(k));
    }
    d << "k=" << k << " none (" << r.states_explored << " states); ";
  }
  const Crd bad = Crd::from_document(parse_crn("#input X\n#vote1 Y\n#vote0 X\nX + X -> Y\n"));
  State in = bad.crn.zero_state();
  in[bad.crn.species_index("X")] = 2;
  const SpeedFaultResult r = speed_fault_witness(bad, in, 3, 1'000);
  if (r.kind != SpeedFaultResult::Kind::kWitness || !r.witness || *r.witness != in) {
    return fail("no witness 2X for X + X -> Y at k=3");
  }
  d << "X + X -> Y at k=3: witness " << format_state(bad.crn, *r.witness);
  return {true, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(static_cast<int>(i + 1))) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, secs,
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
