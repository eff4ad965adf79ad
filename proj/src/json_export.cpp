#include "crnkit/json_export.hpp"

#include <sstream>

#include "crnkit/crn_format.hpp"

namespace crnkit {

Json state_json(const Crn& crn, const State& c) {
  Json j = Json::object();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) j[crn.species_name(i)] = c[i];
  }
  return j;
}

Json verdict_json(const Crn& crn, const Verdict& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  if (v.witness) j["witness"] = state_json(crn, *v.witness);
  j["states_explored"] = v.states_explored;
  j["truncated"] = v.truncated;
  return j;
}

Json crc_verdict_json(const Crc& crc, const CrcVerdict& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  if (v.output) {
    Json out = Json::object();
    for (std::size_t i = 0; i < crc.output.size(); ++i) {
      out[crc.crn.species_name(crc.output[i])] = (*v.output)[i];
    }
    j["output"] = out;
  }
  if (v.witness) j["witness"] = state_json(crc.crn, *v.witness);
  j["states_explored"] = v.states_explored;
  j["truncated"] = v.truncated;
  return j;
}

Json speed_fault_json(const Crn& crn, const SpeedFaultResult& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  if (r.witness) j["witness"] = state_json(crn, *r.witness);
  if (r.decided_output) j["decided_output"] = *r.decided_output;
  j["states_explored"] = r.states_explored;
  return j;
}

Json reach_json(const Crn& crn, const ReachResult& r) {
  Json j;
  j["species"] = crn.species();
  Json states = Json::array();
  for (const State& s : r.states) states.push_back(state_json(crn, s));
  j["states"] = std::move(states);
  Json edges = Json::array();
  for (const Edge& e : r.edges) edges.push_back({e.from, e.reaction, e.to});
  j["edges"] = std::move(edges);
  j["truncated"] = r.truncated;
  j["bound"] = r.frontier_bound;
  return j;
}

std::string reach_dot(const Crn& crn, const ReachResult& r) {
  std::ostringstream out;
  out << "digraph reach {\n";
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    out << "  s" << i << " [label=\"" << format_state(crn, r.states[i]) << "\"";
    if (is_terminal(crn, r.states[i])) out << ", shape=box";
    out << "];\n";
  }
  for (const Edge& e : r.edges) {
    out << "  s" << e.from << " -> s" << e.to << " [label=\"r" << e.reaction << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

void csv_row(std::ostringstream& out, double t, const State& c) {
  out << format_double(t);
  for (std::size_t i = 0; i < c.size(); ++i) out << ',' << c[i];
  out << '\n';
}

std::string csv_header(const Crn& crn, const char* time_column) {
  std::string h = time_column;
  for (const auto& s : crn.species()) h += "," + s;
  return h + "\n";
}

}  // namespace

std::string trajectory_csv(const Crn& crn, const Trajectory& t) {
  std::ostringstream out;
  out << csv_header(crn, "time");
  csv_row(out, 0.0, t.initial);
  for (const Event& e : t.events) csv_row(out, e.time, e.state);
  if (t.events.empty() && t.steps > 0) csv_row(out, t.end_time, t.final_state);
  return out.str();
}

Json trajectory_json(const Crn& crn, const Trajectory& t) {
  Json j;
  j["species"] = crn.species();
  j["initial"] = state_json(crn, t.initial);
  Json events = Json::array();
  for (const Event& e : t.events) {
    events.push_back({{"time", format_double(e.time)},
                      {"reaction", e.reaction},
                      {"mute", e.mute},
                      {"state", state_json(crn, e.state)}});
  }
  j["events"] = std::move(events);
  j["stop"] = to_string(t.stop);
  j["terminated"] = t.terminated;
  j["end_time"] = format_double(t.end_time);
  j["steps"] = t.steps;
  j["final"] = state_json(crn, t.final_state);
  return j;
}

std::string ode_csv(const Crn& crn, const OdeResult& r) {
  std::ostringstream out;
  out << csv_header(crn, "t");
  for (const OdeSample& s : r.samples) {
    out << format_double(s.t);
    for (double x : s.x) out << ',' << format_double(x);
    out << '\n';
  }
  return out.str();
}

std::string rational_string(const Rational& q) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(q);
  cpp_int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  std::size_t twos = 0, fives = 0;
  cpp_int rest = den;
  while (rest % 2 == 0) rest /= 2, ++twos;
  while (rest % 5 == 0) rest /= 5, ++fives;
  if (rest != 1) return num.str() + "/" + den.str();
  const std::size_t digits = std::max(twos, fives);
  cpp_int scale = 1;
  for (std::size_t i = 0; i < digits; ++i) scale *= 10;
  const cpp_int scaled = num * (scale / den);
  const bool negative = scaled < 0;
  std::string s = (negative ? cpp_int(-scaled) : scaled).str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

namespace {

Json rational_map(const std::vector<std::string>& names, const RationalVector& v) {
  Json j = Json::object();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) j[names[i]] = rational_string(v[i]);
  }
  return j;
}

}  // namespace

Json segment_json(const Crn& crn, const SegmentResult& r) {
  std::vector<std::string> reaction_names;
  for (std::size_t i = 0; i < crn.reaction_count(); ++i) {
    reaction_names.push_back("r" + std::to_string(i));
  }
  Json j;
  j["kind"] = to_string(r.kind);
  Json segments = Json::array();
  for (std::size_t s = 0; s < r.fluxes.size(); ++s) {
    segments.push_back({{"flux", rational_map(reaction_names, r.fluxes[s])},
                        {"from", rational_map(crn.species(), r.states[s])},
                        {"to", rational_map(crn.species(), r.states[s + 1])}});
  }
  j["segments"] = std::move(segments);
  j["depth_searched"] = r.depth_searched;
  j["conservation_excluded"] = r.conservation_excluded;
  return j;
}

Json time_estimate_json(const TimeEstimate& e) {
  return {{"mean", format_double(e.mean)},
          {"stderr", format_double(e.std_error)},
          {"n", e.hits},
          {"misses", e.misses}};
}

Json distribution_json(const Crn& crn, const Distribution& d) {
  Json entries = Json::array();
  for (const auto& [s, p] : d.frequencies) {
    entries.push_back({{"state", state_json(crn, s)}, {"frequency", format_double(p)}});
  }
  return {{"sample_time", format_double(d.sample_time)},
          {"stationary", d.stationary},
          {"n", d.runs},
          {"distribution", std::move(entries)}};
}

Json error_estimate_json(const ErrorEstimate& e) {
  return {{"rate", format_double(e.rate)},
          {"ci95", {format_double(e.ci_low), format_double(e.ci_high)}},
          {"errors", e.errors},
          {"timeouts", e.timeouts},
          {"n", e.runs}};
}

namespace {

Json strand_json(const Strand& s) {
  Json j = Json::array();
  for (const Domain& d : s) j.push_back(d.str());
  return j;
}

}  // namespace

Json dsd_json(const DsdProgram& prog) {
  const Crn& impl = prog.implementation;
  Json species = Json::array();
  for (const DsdSpecies& s : prog.species) {
    Json j;
    j["name"] = s.name;
    j["role"] = to_string(s.role);
    if (s.reaction) j["reaction"] = *s.reaction;
    Json strands = Json::array();
    for (const Strand& st : s.strands) strands.push_back(strand_json(st));
    j["strands"] = std::move(strands);
    species.push_back(std::move(j));
  }
  Json signals = Json::object();
  for (std::size_t x = 0; x < prog.signal_of.size(); ++x) {
    signals[prog.abstract.species_name(x)] = impl.species_name(prog.signal_of[x]);
  }
  Json groups = Json::array();
  for (const ReactionGroup& g : prog.groups) {
    Json j;
    j["abstract"] = render_reaction(prog.abstract, prog.abstract.reaction(g.abstract_reaction));
    Json steps = Json::array();
    for (std::size_t i = 0; i < g.reactions.size(); ++i) {
      Json step;
      step["index"] = g.reactions[i];
      step["reaction"] = render_reaction(impl, impl.reaction(g.reactions[i]));
      if (g.reverse[i]) step["reverse"] = *g.reverse[i];
      steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    j["completion"] = g.completion;
    j["fuel_L"] = impl.species_name(g.fuel_l);
    if (g.fuel_t) j["fuel_T"] = impl.species_name(*g.fuel_t);
    groups.push_back(std::move(j));
  }
  Json out;
  out["abstract"] = render_crn(prog.abstract);
  out["fuel_count"] = prog.fuel_count;
  out["species"] = std::move(species);
  out["signals"] = std::move(signals);
  out["groups"] = std::move(groups);
  out["conventions"] = {"unimolecular and zero-product reactions use the extended L/T scheme",
                        "T releases all products in one step",
                        "implementation rates are 1"};
  return out;
}

Json cosim_json(const DsdProgram& prog, const CosimReport& report) {
  const Crn& a = prog.abstract;
  Json runs = Json::array();
  for (const CosimRun& r : report.runs) {
    Json j;
    j["passed"] = r.passed();
    j["settled"] = r.settled;
    j["fuel_exhausted"] = r.fuel_exhausted;
    j["projection_sound"] = r.projection_sound;
    j["terminal_match"] = r.terminal_match;
    j["audit_balanced"] = r.audit_balanced;
    j["final_projection"] = state_json(a, r.final_projection);
    if (r.unsound_state) j["unsound_state"] = state_json(a, *r.unsound_state);
    j["time"] = format_double(r.time);
    runs.push_back(std::move(j));
  }
  Json finals = Json::array();
  for (const auto& [s, n] : report.final_projections) {
    finals.push_back({{"state", state_json(a, s)}, {"runs", n}});
  }
  Json terminals = Json::array();
  for (const State& s : report.abstract_terminals) terminals.push_back(state_json(a, s));
  return {{"ok", report.ok()},
          {"passed", report.passed},
          {"n", report.runs.size()},
          {"abstract_states", report.abstract_states},
          {"abstract_terminals", std::move(terminals)},
          {"final_projections", std::move(finals)},
          {"runs", std::move(runs)}};
}

std::string cosim_report_text(const DsdProgram& prog, const CosimReport& report) {
  const Crn& a = prog.abstract;
  std::ostringstream out;
  out << (report.ok() ? "PASS" : "FAIL") << ": " << report.passed << "/" << report.runs.size()
      << " runs passed\n";
  out << "abstract closure: " << report.abstract_states << " states, "
      << report.abstract_terminals.size() << " terminal\n";
  for (const auto& [s, n] : report.final_projections) {
    out << "  final " << format_state(a, s) << ": " << n << " runs\n";
  }
  std::size_t unsettled = 0, exhausted = 0, unsound = 0, mismatched = 0, unbalanced = 0;
  for (const CosimRun& r : report.runs) {
    unsettled += !r.settled;
    exhausted += r.fuel_exhausted;
    unsound += !r.projection_sound;
    mismatched += !r.terminal_match;
    unbalanced += !r.audit_balanced;
  }
  if (unsettled) out << "  not settled: " << unsettled << "\n";
  if (exhausted) out << "  fuel exhausted: " << exhausted << "\n";
  if (unsound) out << "  unsound projection: " << unsound << "\n";
  if (mismatched) out << "  non-terminal final projection: " << mismatched << "\n";
  if (unbalanced) out << "  unbalanced fuel audit: " << unbalanced << "\n";
  return out.str();
}

}  // namespace crnkit
