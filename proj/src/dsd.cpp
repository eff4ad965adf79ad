#include "crnkit/dsd.hpp"

#include <algorithm>
#include <set>

#include "crnkit/parallel.hpp"
#include "crnkit/reach.hpp"

namespace crnkit {

const char* to_string(DsdRole role) {
  switch (role) {
    case DsdRole::kSignal: return "signal";
    case DsdRole::kFuelL: return "fuel_L";
    case DsdRole::kFuelT: return "fuel_T";
    case DsdRole::kIntermediateH: return "intermediate_H";
    case DsdRole::kStrandB: return "strand_B";
    case DsdRole::kStrandO: return "strand_O";
    case DsdRole::kWaste: return "waste";
  }
  return "?";
}

namespace {

Domain toehold(const std::string& n) { return {n, Domain::Kind::kToehold, false}; }
Domain recognition(const std::string& n) { return {n, Domain::Kind::kRecognition, false}; }

Strand signal_strand(const std::string& x) {
  return {recognition("?"), toehold("i." + x), recognition("s." + x), toehold("o." + x)};
}

Strand complement(const Strand& s) {
  Strand out;
  for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back(it->complemented());
  return out;
}

class Namer {
 public:
  explicit Namer(const Crn& abstract) {
    for (const auto& s : abstract.species()) used_.insert(s);
  }
  std::string fresh(const std::string& base) {
    std::string n = base;
    while (used_.count(n)) n += "'";
    used_.insert(n);
    return n;
  }

 private:
  std::set<std::string> used_;
};

}  // namespace

DsdProgram compile_dsd(const Crn& abstract, Count fuel_count) {
  if (fuel_count < 1) throw ContractError("fuel count must be positive");
  for (std::size_t a = 0; a < abstract.reaction_count(); ++a) {
    const Count order = abstract.reaction(a).order();
    if (order < 1 || order > 2) {
      throw ContractError("reaction " + std::to_string(a) +
                          " is not uni- or bimolecular; strand displacement needs 1 or 2 "
                          "reactants");
    }
  }

  Namer namer(abstract);
  CrnBuilder b;
  std::map<std::string, DsdSpecies> table;
  auto declare = [&](const std::string& name, DsdRole role, std::optional<std::size_t> reaction,
                     std::vector<Strand> strands) {
    b.add_species(name);
    table[name] = DsdSpecies{name, role, reaction, std::nullopt, std::move(strands)};
  };
  for (std::size_t x = 0; x < abstract.species_count(); ++x) {
    const std::string& n = abstract.species_name(x);
    b.add_species(n);
    table[n] = DsdSpecies{n, DsdRole::kSignal, std::nullopt, x, {signal_strand(n)}};
  }

  struct Pending {
    std::string l, t, h, o;
    std::vector<std::size_t> rxn;  // builder reaction ordinals
    std::vector<std::optional<std::size_t>> reverse;
    std::size_t completion;
    std::optional<std::size_t> h_reactant;
  };
  std::vector<Pending> pending_groups;
  std::size_t next_rxn = 0;
  auto add = [&](Pending& g, const CrnBuilder::Side& lhs, const CrnBuilder::Side& rhs) {
    b.add_reaction(lhs, rhs);
    g.rxn.push_back(next_rxn);
    g.reverse.emplace_back();
    return next_rxn++;
  };

  for (std::size_t a = 0; a < abstract.reaction_count(); ++a) {
    const Reaction& alpha = abstract.reaction(a);
    const std::string tag = "a" + std::to_string(a);
    std::vector<std::string> reactants;
    for (const Term& t : alpha.reactant_terms()) {
      for (Count i = 0; i < t.coeff; ++i) reactants.push_back(abstract.species_name(t.species));
    }
    CrnBuilder::Side products;
    std::vector<Strand> product_strands;
    for (const Term& t : alpha.product_terms()) {
      const std::string& n = abstract.species_name(t.species);
      products.emplace_back(n, t.coeff);
      for (Count i = 0; i < t.coeff; ++i) product_strands.push_back(signal_strand(n));
    }
    const bool has_products = !products.empty();
    const Domain r = recognition("r." + tag);
    const std::string& A = reactants[0];
    Pending g;
    g.l = namer.fresh("L_" + tag);
    const std::string w1 = namer.fresh("W1_" + tag);
    if (has_products) {
      g.o = namer.fresh("O_" + tag);
      g.t = namer.fresh("T_" + tag);
    }

    Strand o_strand;
    Strand bottom_t;
    std::string w2;
    if (has_products) {
      // T: a template whose exposed toehold accepts O and covers every product.
      const std::string& last = reactants.back();
      o_strand = {recognition("s." + last), toehold("o." + last), r};
      bottom_t = complement(o_strand);
      for (const auto& p : product_strands) {
        Strand c = complement(Strand(p.begin() + 1, p.end()));
        bottom_t.insert(bottom_t.end(), c.begin(), c.end());
      }
      std::vector<Strand> t_strands{bottom_t};
      t_strands.insert(t_strands.end(), product_strands.begin(), product_strands.end());
      declare(g.t, DsdRole::kFuelT, a, t_strands);
      declare(g.o, DsdRole::kStrandO, a, {o_strand});
      w2 = namer.fresh("W2_" + tag);
      declare(w2, DsdRole::kWaste, a, {bottom_t, o_strand});
    }

    if (reactants.size() == 2) {
      const std::string& B = reactants[1];
      g.h = namer.fresh("H_" + tag);
      const std::string bstrand = namer.fresh("B_" + tag);
      const Strand bottom_l = {toehold("i." + A).complemented(), recognition("s." + A).complemented(),
                               toehold("i." + B).complemented(), recognition("s." + B).complemented(),
                               toehold("o." + B).complemented(), r.complemented()};
      const Strand b_strand = {recognition("s." + A), toehold("i." + B)};
      const Strand o_cover = has_products ? o_strand : Strand{recognition("s." + B), r};
      declare(g.l, DsdRole::kFuelL, a, {bottom_l, b_strand, o_cover});
      declare(g.h, DsdRole::kIntermediateH, a, {bottom_l, signal_strand(A), o_cover});
      declare(bstrand, DsdRole::kStrandB, a, {b_strand});
      std::vector<Strand> w1_strands{bottom_l, signal_strand(A), signal_strand(B)};
      if (!has_products) w1_strands.push_back(o_cover);
      declare(w1, DsdRole::kWaste, a, w1_strands);

      const std::size_t fwd = add(g, {{A, 1}, {g.l, 1}}, {{g.h, 1}, {bstrand, 1}});
      const std::size_t rev = add(g, {{g.h, 1}, {bstrand, 1}}, {{A, 1}, {g.l, 1}});
      g.reverse[0] = rev;
      g.reverse[1] = fwd;
      g.h_reactant = abstract.species_index(A);
      if (has_products) {
        add(g, {{B, 1}, {g.h, 1}}, {{g.o, 1}, {w1, 1}});
        CrnBuilder::Side rhs = products;
        rhs.emplace_back(w2, 1);
        g.completion = add(g, {{g.o, 1}, {g.t, 1}}, rhs);
      } else {
        g.completion = add(g, {{B, 1}, {g.h, 1}}, {{w1, 1}});
      }
    } else {
      const Strand bottom_l = {toehold("i." + A).complemented(), recognition("s." + A).complemented(),
                               toehold("o." + A).complemented(), r.complemented()};
      std::vector<Strand> l_strands{bottom_l};
      if (has_products) l_strands.push_back(o_strand);
      declare(g.l, DsdRole::kFuelL, a, l_strands);
      declare(w1, DsdRole::kWaste, a, {bottom_l, signal_strand(A)});
      if (has_products) {
        add(g, {{A, 1}, {g.l, 1}}, {{g.o, 1}, {w1, 1}});
        CrnBuilder::Side rhs = products;
        rhs.emplace_back(w2, 1);
        g.completion = add(g, {{g.o, 1}, {g.t, 1}}, rhs);
      } else {
        g.completion = add(g, {{A, 1}, {g.l, 1}}, {{w1, 1}});
      }
    }
    pending_groups.push_back(std::move(g));
  }

  DsdProgram prog;
  prog.abstract = abstract;
  prog.implementation = b.build();
  prog.fuel_count = fuel_count;
  const Crn& impl = prog.implementation;
  for (const auto& name : impl.species()) prog.species.push_back(table.at(name));
  for (const auto& n : abstract.species()) prog.signal_of.push_back(impl.species_index(n));
  for (std::size_t a = 0; a < pending_groups.size(); ++a) {
    const Pending& p = pending_groups[a];
    ReactionGroup g;
    g.abstract_reaction = a;
    g.reactions = p.rxn;
    g.reverse = p.reverse;
    g.completion = p.completion;
    g.fuel_l = impl.species_index(p.l);
    if (!p.t.empty()) g.fuel_t = impl.species_index(p.t);
    if (!p.h.empty()) g.intermediate_h = impl.species_index(p.h);
    if (!p.o.empty()) g.strand_o = impl.species_index(p.o);
    g.h_reactant = p.h_reactant;
    prog.groups.push_back(std::move(g));
  }
  return prog;
}

Count default_fuel(const State& abstract_init) {
  return std::max<Count>(1, 20 * abstract_init.total());
}

State implementation_state(const DsdProgram& prog, const State& abstract_init) {
  if (abstract_init.size() != prog.abstract.species_count()) {
    throw ContractError("abstract state has wrong dimension");
  }
  State s = prog.implementation.zero_state();
  for (std::size_t x = 0; x < abstract_init.size(); ++x) s[prog.signal_of[x]] = abstract_init[x];
  for (const auto& g : prog.groups) {
    s[g.fuel_l] = prog.fuel_count;
    if (g.fuel_t) s[*g.fuel_t] = prog.fuel_count;
  }
  return s;
}

std::vector<Count> strand_weights(const DsdProgram& prog) {
  std::vector<Count> w;
  for (const auto& s : prog.species) w.push_back(static_cast<Count>(s.strands.size()));
  return w;
}

State project_signals(const DsdProgram& prog, const State& impl) {
  State s = prog.abstract.zero_state();
  for (std::size_t x = 0; x < s.size(); ++x) s[x] = impl[prog.signal_of[x]];
  return s;
}

State project_committed(const DsdProgram& prog, const State& impl) {
  State s = project_signals(prog, impl);
  for (const auto& g : prog.groups) {
    if (g.intermediate_h) s[*g.h_reactant] += impl[*g.intermediate_h];
  }
  return s;
}

Count pending(const DsdProgram& prog, const State& impl) {
  Count n = 0;
  for (const auto& g : prog.groups) {
    if (g.intermediate_h) n += impl[*g.intermediate_h];
    if (g.strand_o) n += impl[*g.strand_o];
  }
  return n;
}

bool fuel_exhausted(const DsdProgram& prog, const State& impl) {
  for (const auto& g : prog.groups) {
    if (impl[g.fuel_l] == 0) return true;
    if (g.fuel_t && impl[*g.fuel_t] == 0) return true;
  }
  return false;
}

FuelAudit fuel_audit(const DsdProgram& prog, const Trajectory& trajectory) {
  const std::size_t n = prog.groups.size();
  FuelAudit audit;
  audit.l_consumed.assign(n, 0);
  audit.t_consumed.assign(n, 0);
  audit.completed.assign(n, 0);
  audit.pending_h.assign(n, 0);
  audit.pending_o.assign(n, 0);
  const State& first = trajectory.initial;
  const State& last = trajectory.events.empty() ? trajectory.initial : trajectory.events.back().state;
  std::vector<std::size_t> completion_of(prog.implementation.reaction_count(), n);
  for (std::size_t a = 0; a < n; ++a) completion_of[prog.groups[a].completion] = a;
  for (const Event& e : trajectory.events) {
    if (completion_of[e.reaction] < n) ++audit.completed[completion_of[e.reaction]];
  }
  for (std::size_t a = 0; a < n; ++a) {
    const ReactionGroup& g = prog.groups[a];
    audit.l_consumed[a] = first[g.fuel_l] - last[g.fuel_l];
    if (g.fuel_t) audit.t_consumed[a] = first[*g.fuel_t] - last[*g.fuel_t];
    if (g.intermediate_h) {
      audit.pending_h[a] = last[*g.intermediate_h] - first[*g.intermediate_h];
    }
    if (g.strand_o) audit.pending_o[a] = last[*g.strand_o] - first[*g.strand_o];
    const bool l_ok =
        audit.l_consumed[a] == audit.completed[a] + audit.pending_h[a] + audit.pending_o[a];
    const bool t_ok = !g.fuel_t || audit.t_consumed[a] == audit.completed[a];
    if (!l_ok || !t_ok) audit.balanced = false;
  }
  return audit;
}

CosimReport cosimulate_check(const DsdProgram& prog, const State& abstract_init,
                             const StochasticConfig& config, std::size_t n_runs,
                             std::size_t bound) {
  const ReachResult closure = post(prog.abstract, abstract_init, bound);
  if (closure.truncated) throw Error("abstract reachability closure was truncated");
  CosimReport report;
  report.abstract_states = closure.states.size();
  StateSet terminals;
  for (const State& s : closure.states) {
    if (is_terminal(prog.abstract, s)) {
      report.abstract_terminals.push_back(s);
      terminals.insert(s);
    }
  }
  const State init = implementation_state(prog, abstract_init);
  report.runs.resize(n_runs);
  parallel_for(n_runs, config.jobs, [&](std::size_t i) {
    CosimRun& run = report.runs[i];
    StochasticConfig cfg = config;
    cfg.seed = derive_seed(config.seed, i);
    cfg.record_events = true;
    auto stop = [&](double, const State& c) {
      if (fuel_exhausted(prog, c)) {
        run.fuel_exhausted = true;
        return true;
      }
      const Count in_flight = pending(prog, c);
      if (in_flight == 0 && run.projection_sound) {
        State p = project_signals(prog, c);
        if (!closure.contains(p)) {
          run.projection_sound = false;
          run.unsound_state = p;
        }
      }
      // Settled: nothing abstract can happen and no output strand is in flight.
      bool o_in_flight = false;
      for (const auto& g : prog.groups) {
        if (g.strand_o && c[*g.strand_o] > 0) o_in_flight = true;
      }
      return !o_in_flight && is_terminal(prog.abstract, project_committed(prog, c));
    };
    const Trajectory tr = simulate(prog.implementation, init, cfg, stop);
    run.time = tr.end_time;
    run.settled = tr.stop == StopReason::kCondition && !run.fuel_exhausted;
    if (tr.stop == StopReason::kTerminal) {
      run.settled = !fuel_exhausted(prog, tr.final_state) &&
                    is_terminal(prog.abstract, project_committed(prog, tr.final_state));
    }
    run.final_projection = project_committed(prog, tr.final_state);
    run.terminal_match = terminals.count(run.final_projection) > 0;
    run.audit_balanced = fuel_audit(prog, tr).balanced;
  });
  for (const auto& run : report.runs) {
    if (run.passed()) ++report.passed;
    ++report.final_projections[run.final_projection];
  }
  return report;
}

}  // namespace crnkit
