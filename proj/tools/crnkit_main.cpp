#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "crnkit/continuous.hpp"
#include "crnkit/counter_automaton.hpp"
#include "crnkit/crn_format.hpp"
#include "crnkit/decide.hpp"
#include "crnkit/dsd.hpp"
#include "crnkit/json_export.hpp"
#include "crnkit/predicate.hpp"
#include "crnkit/reach.hpp"
#include "crnkit/stochastic.hpp"

namespace fs = std::filesystem;
using namespace crnkit;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit : int {
  kOk = 0,
  kReject = 1,
  kParse = 2,
  kUsage = 3,
  kRuntime = 4,
  kUndecided = 5,
};

/// Raised for semantic problems with the command line (exit 3).
class UsageError : public Error {
 public:
  using Error::Error;
};

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << v;
  return out.str();
}

struct Context {
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out_dir = ".";
  std::string format;
  std::string command_line;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, hash
  std::vector<std::pair<std::string, std::string>> outputs;
  std::vector<std::string> warnings;

  std::string read_input(const std::string& path) {
    std::string text = read_text_file(path);
    inputs.emplace_back(path, hex64(fnv1a(text)));
    return text;
  }

  std::string write(const std::string& name, const std::string& content) {
    fs::path p = fs::path(name).is_absolute() || fs::path(name).has_parent_path()
                     ? fs::path(name)
                     : fs::path(out_dir) / name;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    out << content;
    outputs.emplace_back(p.string(), hex64(fnv1a(content)));
    return p.string();
  }

  std::string format_or(const char* fallback) const { return format.empty() ? fallback : format; }

  StochasticConfig stochastic() const {
    StochasticConfig c;
    c.seed = seed;
    c.jobs = jobs;
    return c;
  }
};

CrnDocument load_crn(Context& ctx, const std::string& path) {
  return parse_crn(ctx.read_input(path));
}

State init_state(const CrnDocument& doc, const std::string& init_text) {
  if (!init_text.empty()) return parse_state(doc.crn, init_text);
  if (!doc.init) throw UsageError("no initial state: add #init or pass --init");
  return *doc.init;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

// ---------------------------------------------------------------- parse

struct ParseArgs {
  std::string file;
};

int cmd_parse(Context& ctx, const ParseArgs& a) {
  const std::string text = ctx.read_input(a.file);
  if (fs::path(a.file).extension() == ".ca") {
    const CounterAutomaton ca = parse_ca(text);
    if (ctx.format_or("crn") == "json") {
      std::cout << dump({{"states", ca.states},
                         {"counters", ca.counters},
                         {"inc", ca.inc_count()},
                         {"dec", ca.dec_count()}});
    } else {
      std::cout << render_ca(ca);
    }
    return kOk;
  }
  const CrnDocument doc = parse_crn(text);
  if (ctx.format_or("crn") == "json") {
    Json reactions = Json::array();
    for (const Reaction& r : doc.crn.reactions()) {
      reactions.push_back(render_reaction(doc.crn, r));
    }
    Json j{{"species", doc.crn.species()}, {"reactions", std::move(reactions)}};
    if (doc.init) j["init"] = state_json(doc.crn, *doc.init);
    std::cout << dump(j);
  } else {
    std::cout << render_crn(doc);
  }
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string file;
  std::string mode = "ssa";
  double t = std::numeric_limits<double>::infinity();
  std::size_t runs = 1;
  std::optional<double> volume;
  std::string init;
  std::uint64_t max_steps = 10'000'000;
  double tol = 1e-8;
};

int cmd_simulate(Context& ctx, const SimulateArgs& a) {
  const CrnDocument doc = load_crn(ctx, a.file);
  const State init = init_state(doc, a.init);
  const std::string fmt = ctx.format_or("csv");
  if (fmt != "csv" && fmt != "json") throw UsageError("simulate writes csv or json");
  const std::string base = stem(a.file);

  if (a.mode == "ode") {
    if (!std::isfinite(a.t)) throw UsageError("--mode ode needs --t");
    const double v = a.volume.value_or(doc.volume.value_or(1.0));
    Concentrations x0;
    for (Count n : init.counts()) x0.push_back(static_cast<double>(n) / v);
    OdeOptions opt;
    opt.stop_at_fixpoint = false;
    const OdeResult r = integrate(doc.crn, x0, a.t, a.tol, opt);
    if (fmt == "csv") {
      ctx.write(base + "_ode.csv", ode_csv(doc.crn, r));
    } else {
      Json samples = Json::array();
      for (const OdeSample& s : r.samples) {
        Json x = Json::array();
        for (double c : s.x) x.push_back(format_double(c));
        samples.push_back({{"t", format_double(s.t)}, {"x", std::move(x)}});
      }
      ctx.write(base + "_ode.json", dump({{"species", doc.crn.species()}, {"samples", samples}}));
    }
    Json final_x = Json::object();
    for (std::size_t i = 0; i < doc.crn.species_count(); ++i) {
      final_x[doc.crn.species_name(i)] = format_double(r.final_state()[i]);
    }
    if (r.max_clip > 0) ctx.warnings.push_back("negative excursions clipped, max " +
                                               format_double(r.max_clip));
    std::cout << dump({{"mode", "ode"},
                       {"t_end", format_double(r.samples.back().t)},
                       {"fixpoint", r.fixpoint},
                       {"accepted_steps", r.accepted},
                       {"rejected_steps", r.rejected},
                       {"final", final_x}});
    return kOk;
  }
  if (a.mode != "ssa") throw UsageError("unknown mode '" + a.mode + "'");
  if (a.runs == 0) throw UsageError("--runs must be positive");

  StochasticConfig config = ctx.stochastic();
  config.volume = a.volume.value_or(doc.volume.value_or(1.0));
  config.max_time = a.t;
  config.max_steps = a.max_steps;
  config.validate();
  if (auto w = density_warning(init, config)) ctx.warnings.push_back(*w);
  const auto runs = simulate_batch(doc.crn, init, config, a.runs);
  Json summary = Json::array();
  bool step_limited = false;
  const int width = static_cast<int>(std::to_string(a.runs - 1).size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string idx = std::to_string(i);
    idx.insert(0, width - idx.size(), '0');
    const std::string name = base + "_run" + idx + "." + fmt;
    ctx.write(name, fmt == "csv" ? trajectory_csv(doc.crn, runs[i])
                                 : dump(trajectory_json(doc.crn, runs[i])));
    summary.push_back({{"run", i},
                       {"seed", derive_seed(config.seed, i)},
                       {"stop", to_string(runs[i].stop)},
                       {"end_time", format_double(runs[i].end_time)},
                       {"steps", runs[i].steps},
                       {"final", state_json(doc.crn, runs[i].final_state)}});
    step_limited |= runs[i].stop == StopReason::kMaxSteps;
  }
  const Json report{{"mode", "ssa"}, {"runs", summary}};
  ctx.write(base + "_summary.json", dump(report));
  std::cout << dump(report);
  if (step_limited) {
    std::cerr << "error: a run reached --max-steps before terminating\n";
    return kRuntime;
  }
  return kOk;
}

// ---------------------------------------------------------------- decide

struct DecideArgs {
  std::string file;
  std::string input;
  std::string mode = "halting";
  std::size_t bound = 1'000'000;
};

int verdict_exit(VerdictKind k) {
  switch (k) {
    case VerdictKind::kAccept: return kOk;
    case VerdictKind::kReject: return kReject;
    default: return kUndecided;
  }
}

int cmd_decide(Context& ctx, const DecideArgs& a) {
  const CrnDocument doc = load_crn(ctx, a.file);
  const State input = init_state(doc, a.input);
  if (a.mode == "output") {
    const Crc crc = Crc::from_document(doc);
    const CrcVerdict v = crc_output_verdict(crc, input, a.bound);
    std::cout << dump(crc_verdict_json(crc, v));
    return v.kind == CrcVerdict::Kind::kStable ? kOk : kUndecided;
  }
  const Crd crd = Crd::from_document(doc);
  Verdict v;
  if (a.mode == "halting") {
    v = halting_verdict(crd, input, a.bound);
  } else if (a.mode == "stable") {
    v = stable_verdict(crd, input, a.bound);
  } else {
    throw UsageError("unknown mode '" + a.mode + "'");
  }
  std::cout << dump(verdict_json(crd.crn, v));
  return verdict_exit(v.kind);
}

// ---------------------------------------------------------------- compile

struct CompileArgs {
  std::string from;
  std::string source;
  std::size_t l = 1;
  std::optional<Count> fuel;
  std::optional<Count> nu;
  std::optional<Count> n_d;
  std::optional<Count> input;
  std::string out;
};

std::string header(const Context& ctx) { return "% generated by " + ctx.command_line + "\n"; }

int cmd_compile(Context& ctx, const CompileArgs& a) {
  if (a.from == "ca") {
    const CounterAutomaton ca = parse_ca(ctx.read_input(a.source));
    const CompiledCa compiled = compile_ca(ca, a.l);
    CrnDocument doc;
    doc.crn = compiled.crn;
    for (std::size_t c : compiled.counter_species) doc.output.push_back(doc.crn.species_name(c));
    if (a.input) {
      const Count nu = a.nu.value_or(1);
      doc.init = initial_state(ca, compiled, nu, a.n_d.value_or(default_n_d(nu)));
    }
    ctx.write(a.out.empty() ? stem(a.source) + "_l" + std::to_string(a.l) + ".crn" : a.out,
              header(ctx) + render_crn(doc));
    std::cout << dump({{"species", doc.crn.species_count()},
                       {"reactions", doc.crn.reaction_count()},
                       {"clock_reactions", 2 * (a.l - 1)}});
    return kOk;
  }
  if (a.from == "predicate") {
    const std::string text =
        fs::exists(a.source) ? ctx.read_input(a.source) : a.source;
    const Predicate p = parse_predicate(text);
    Json atoms = Json::array();
    for (std::size_t i = 0; i < p.atoms.size(); ++i) {
      const Crd crd = compile_atom(p.atoms[i], default_input_names(p.arity));
      CrnDocument doc;
      doc.crn = crd.crn;
      for (auto s : crd.input) doc.input.push_back(crd.crn.species_name(s));
      for (auto s : crd.voters0) doc.vote0.push_back(crd.crn.species_name(s));
      for (auto s : crd.voters1) doc.vote1.push_back(crd.crn.species_name(s));
      std::string name = p.atoms.size() == 1 && !a.out.empty()
                             ? a.out
                             : "atom" + std::to_string(i) + ".crn";
      name = ctx.write(name, header(ctx) + render_crn(doc));
      atoms.push_back({{"file", name},
                       {"species", crd.crn.species_count()},
                       {"reactions", crd.crn.reaction_count()}});
    }
    const Json j{{"predicate", to_string(p)}, {"arity", p.arity}, {"atoms", atoms}};
    ctx.write("predicate.json", dump(j));
    std::cout << dump(j);
    return kOk;
  }
  if (a.from == "dsd") {
    const CrnDocument abstract = load_crn(ctx, a.source);
    Count fuel = 0;
    if (a.fuel) {
      fuel = *a.fuel;
    } else if (abstract.init) {
      fuel = default_fuel(*abstract.init);
    } else {
      throw UsageError("--fuel is required when the source has no #init");
    }
    const DsdProgram prog = compile_dsd(abstract.crn, fuel);
    CrnDocument impl;
    impl.crn = prog.implementation;
    if (abstract.init) impl.init = implementation_state(prog, *abstract.init);
    const std::string crn_name = a.out.empty() ? stem(a.source) + "_dsd.crn" : a.out;
    ctx.write(crn_name, header(ctx) + render_crn(impl));
    Json j = dsd_json(prog);
    ctx.write(fs::path(crn_name).replace_extension(".json").string(), dump(j));
    std::cout << dump({{"species", prog.implementation.species_count()},
                       {"reactions", prog.implementation.reaction_count()},
                       {"fuel_count", fuel}});
    return kOk;
  }
  throw UsageError("unknown --from '" + a.from + "'");
}

// ---------------------------------------------------------------- reach

struct ReachArgs {
  std::string file;
  std::string init;
  std::size_t bound = 1'000'000;
  std::string target;
  std::size_t segments = 2;
};

int cmd_reach(Context& ctx, const ReachArgs& a) {
  const CrnDocument doc = load_crn(ctx, a.file);
  const State init = init_state(doc, a.init);
  const std::string base = stem(a.file);
  if (!a.target.empty()) {
    const State target = parse_state(doc.crn, a.target);
    RationalVector c, d;
    for (Count n : init.counts()) c.emplace_back(n);
    for (Count n : target.counts()) d.emplace_back(n);
    const SegmentResult r = segment_reach(doc.crn, c, d, a.segments);
    const Json j = segment_json(doc.crn, r);
    ctx.write(base + "_segments.json", dump(j));
    std::cout << dump(j);
    switch (r.kind) {
      case SegmentResult::Kind::kReachable: return kOk;
      case SegmentResult::Kind::kUnreachable: return kReject;
      default: return kUndecided;
    }
  }
  const ReachResult r = post(doc.crn, init, a.bound);
  const std::string fmt = ctx.format_or("json");
  if (fmt == "dot") {
    const std::string dot = reach_dot(doc.crn, r);
    ctx.write(base + "_reach.dot", dot);
    std::cout << dot;
  } else if (fmt == "json") {
    const Json j = reach_json(doc.crn, r);
    ctx.write(base + "_reach.json", dump(j));
    std::cout << dump({{"states", r.states.size()},
                       {"edges", r.edges.size()},
                       {"truncated", r.truncated}});
  } else {
    throw UsageError("reach writes json or dot");
  }
  return r.truncated ? kUndecided : kOk;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string what;
  std::string file;
  std::string input;
  Count k = 1;
  std::size_t bound = 1'000'000;
  std::optional<Count> fuel;
  std::size_t runs = 100;
};

int cmd_check(Context& ctx, const CheckArgs& a) {
  const CrnDocument doc = load_crn(ctx, a.file);
  if (a.what == "conservation") {
    const auto v = conservation_vector(doc.crn);
    Json j{{"species", doc.crn.species()}};
    j["conservation"] = v ? Json(*v) : Json(nullptr);
    std::cout << dump(j);
    return v ? kOk : kReject;
  }
  if (a.what == "speedfault") {
    const Crd crd = Crd::from_document(doc);
    const State input = init_state(doc, a.input);
    const SpeedFaultResult r = speed_fault_witness(crd, input, a.k, a.bound);
    Json j = speed_fault_json(crd.crn, r);
    if (r.kind == SpeedFaultResult::Kind::kNone) j["summary"] = "none found";
    std::cout << dump(j);
    switch (r.kind) {
      case SpeedFaultResult::Kind::kNone: return kOk;
      case SpeedFaultResult::Kind::kWitness: return kReject;
      default: return kUndecided;
    }
  }
  if (a.what == "cosim") {
    const State init = init_state(doc, a.input);
    const DsdProgram prog = compile_dsd(doc.crn, a.fuel.value_or(default_fuel(init)));
    const CosimReport report = cosimulate_check(prog, init, ctx.stochastic(), a.runs, a.bound);
    const std::string base = stem(a.file);
    ctx.write(base + "_cosim.json", dump(cosim_json(prog, report)));
    std::cout << cosim_report_text(prog, report);
    return report.ok() ? kOk : kReject;
  }
  throw UsageError("unknown --what '" + a.what + "'");
}

// ---------------------------------------------------------------- main

void write_manifest(Context& ctx, int exit_code, double seconds) {
  Json inputs = Json::array();
  for (const auto& [p, h] : ctx.inputs) inputs.push_back({{"path", p}, {"fnv1a64", h}});
  Json outputs = Json::array();
  for (const auto& [p, h] : ctx.outputs) outputs.push_back({{"path", p}, {"fnv1a64", h}});
  const Json j{{"command_line", ctx.command_line},
               {"version", kVersion},
               {"seed", ctx.seed},
               {"rng", kRngAlgorithm},
               {"jobs", ctx.jobs},
               {"inputs", std::move(inputs)},
               {"outputs", std::move(outputs)},
               {"warnings", ctx.warnings},
               {"exit_code", exit_code},
               {"wall_seconds", format_double(seconds)}};
  fs::create_directories(ctx.out_dir);
  std::ofstream(fs::path(ctx.out_dir) / "manifest.json") << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  for (int i = 0; i < argc; ++i) {
    if (i) ctx.command_line += ' ';
    ctx.command_line += i == 0 ? "crnkit" : argv[i];
  }

  CLI::App app{"Toolkit for chemical reaction networks", "crnkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", ctx.seed, "Base RNG seed");
  app.add_option("--jobs", ctx.jobs, "Worker threads (0 = all cores)");
  app.add_option("--out-dir", ctx.out_dir, "Directory for output files and manifest.json");
  app.add_option("--format", ctx.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "dot", "crn"}));

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Validate and print a .crn or .ca file");
  parse->add_option("file", parse_args.file)->required()->check(CLI::ExistingFile);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Stochastic or mass-action simulation");
  simulate->add_option("file", sim.file)->required()->check(CLI::ExistingFile);
  simulate->add_option("--mode", sim.mode)->check(CLI::IsMember({"ssa", "ode"}));
  simulate->add_option("--t", sim.t, "End time");
  simulate->add_option("--runs", sim.runs);
  simulate->add_option("--volume", sim.volume);
  simulate->add_option("--init", sim.init, "Initial state, e.g. \"2X + Y\"");
  simulate->add_option("--max-steps", sim.max_steps);
  simulate->add_option("--tol", sim.tol, "ODE error tolerance");

  DecideArgs dec;
  auto* decide = app.add_subcommand("decide", "Exact verdict of a decider on one input");
  decide->add_option("file", dec.file)->required()->check(CLI::ExistingFile);
  decide->add_option("--input", dec.input, "Input state, e.g. \"3X + 3Y\"");
  decide->add_option("--mode", dec.mode)->check(CLI::IsMember({"halting", "stable", "output"}));
  decide->add_option("--bound", dec.bound, "State bound");

  CompileArgs comp;
  auto* compile = app.add_subcommand("compile", "Compile a CA, predicate or CRN");
  compile->add_option("--from", comp.from)->required()->check(
      CLI::IsMember({"ca", "predicate", "dsd"}));
  compile->add_option("source", comp.source, "Source file or predicate text")->required();
  compile->add_option("--l", comp.l, "Clock length")->check(CLI::PositiveNumber);
  compile->add_option("--fuel", comp.fuel, "Fuel count per L and T");
  compile->add_option("--nu", comp.nu, "Input multiplier for the CA encoding");
  compile->add_option("--nd", comp.n_d, "Initial D count");
  compile->add_option("--input", comp.input, "CA input value (adds #init)");
  compile->add_option("--out", comp.out, "Output path");

  ReachArgs rch;
  auto* reach = app.add_subcommand("reach", "Reachability closure or continuous reachability");
  reach->add_option("file", rch.file)->required()->check(CLI::ExistingFile);
  reach->add_option("--init", rch.init);
  reach->add_option("--bound", rch.bound);
  reach->add_option("--target", rch.target, "Continuous target state");
  reach->add_option("--segments", rch.segments, "Straight-line segments to search");

  CheckArgs chk;
  auto* check = app.add_subcommand("check", "Conservation, speed-fault or DSD co-simulation");
  check->add_option("--what", chk.what)->required()->check(
      CLI::IsMember({"conservation", "speedfault", "cosim"}));
  check->add_option("file", chk.file)->required()->check(CLI::ExistingFile);
  check->add_option("--input", chk.input, "Input or initial state");
  check->add_option("--k", chk.k);
  check->add_option("--bound", chk.bound);
  check->add_option("--fuel", chk.fuel);
  check->add_option("--runs", chk.runs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (*parse) code = cmd_parse(ctx, parse_args);
    if (*simulate) code = cmd_simulate(ctx, sim);
    if (*decide) code = cmd_decide(ctx, dec);
    if (*compile) code = cmd_compile(ctx, comp);
    if (*reach) code = cmd_reach(ctx, rch);
    if (*check) code = cmd_check(ctx, chk);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    code = kParse;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kUsage;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kUsage;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    code = kRuntime;
  }
  for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << "\n";
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_manifest(ctx, code, seconds);
  } catch (const std::exception& e) {
    std::cerr << "warning: manifest not written: " << e.what() << "\n";
  }
  return code;
}
