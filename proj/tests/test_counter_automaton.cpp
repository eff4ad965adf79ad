#include <gtest/gtest.h>

#include "crnkit/catalog.hpp"
#include "crnkit/counter_automaton.hpp"
#include "crnkit/crn_format.hpp"

using namespace crnkit;

TEST(CaText, ParseRenderRoundTrip) {
  const CounterAutomaton ca = catalog::doubling_ca();
  EXPECT_EQ(ca.states.size(), 4u);
  EXPECT_EQ(ca.counters, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ca.inc_count(), 2u);
  EXPECT_EQ(ca.dec_count(), 1u);
  const CounterAutomaton again = parse_ca(render_ca(ca));
  EXPECT_EQ(again.states, ca.states);
  EXPECT_EQ(again.counters, ca.counters);
  EXPECT_EQ(render_ca(again), render_ca(ca));
}

TEST(CaText, Errors) {
  EXPECT_THROW(parse_ca("state q0: inc a -> q1\n#halt q1\n#input a\n"), ParseError);
  EXPECT_THROW(parse_ca("#start q0\n#halt q1\n#input a\nstate q0: jump q1\n"), ParseError);
  EXPECT_THROW(parse_ca("#start q0\n#halt q1\n#input a\n"
                        "state q0: inc a -> q1\nstate q0: inc a -> q1\n"),
               ParseError);
  // The halt state may not carry an instruction.
  EXPECT_THROW(parse_ca("#start q0\n#halt q0\n#input a\nstate q0: inc a -> q0\n"), ParseError);
}

TEST(RunCa, DoublingOracle) {
  const CounterAutomaton ca = catalog::doubling_ca();
  for (Count x = 0; x <= 6; ++x) {
    const CaRun r = run_ca(ca, x, 1000);
    ASSERT_TRUE(r.halted);
    EXPECT_EQ(r.counters, (std::vector<Count>{0, 2 * x}));
  }
  const CounterAutomaton loop = parse_ca("#start q\n#halt h\n#input a\nstate q: inc a -> q\n");
  EXPECT_FALSE(run_ca(loop, 0, 50).halted);
}

TEST(CompileCa, StructureAndClockCount) {
  const CounterAutomaton ca = catalog::doubling_ca();
  for (std::size_t l : {1u, 2u, 8u}) {
    const CompiledCa c = compile_ca(ca, l);
    EXPECT_EQ(c.clock_species.size(), l);
    // One reaction per inc, two per dec, two per clock link.
    EXPECT_EQ(c.crn.reaction_count(), ca.inc_count() + 2 * ca.dec_count() + 2 * (l - 1));
    std::size_t zero_tests = 0;
    for (const auto& z : c.zero_test) zero_tests += z.has_value();
    EXPECT_EQ(zero_tests, ca.dec_count());
    EXPECT_EQ(c.crn.species_name(c.d_species), "D");
    EXPECT_EQ(c.crn.species_name(c.clock_species.back()), "T" + std::to_string(l));
  }
  EXPECT_THROW(compile_ca(ca, 0), ContractError);
  const CounterAutomaton clash = parse_ca("#start q\n#halt h\n#input D\nstate q: dec D -> q else h\n");
  EXPECT_THROW(compile_ca(clash, 2), ContractError);
}

TEST(CompileCa, InitialState) {
  const CounterAutomaton ca = catalog::doubling_ca();
  const CompiledCa c = compile_ca(ca, 3);
  const State s = initial_state(ca, c, 4, 50);
  EXPECT_EQ(s[c.state_species[ca.start]], 1);
  EXPECT_EQ(s[c.counter_species[ca.input_counter]], 4);
  EXPECT_EQ(s[c.clock_species.back()], 1);
  EXPECT_EQ(s[c.d_species], 50);
  EXPECT_EQ(s.total(), 56);
  EXPECT_EQ(default_n_d(3), 40);
}

TEST(Wilson, KnownInterval) {
  const auto [lo, hi] = wilson_interval(10, 100);
  EXPECT_NEAR(lo, 0.0552, 1e-3);
  EXPECT_NEAR(hi, 0.1744, 1e-3);
  EXPECT_NEAR(wilson_interval(0, 50).first, 0.0, 1e-12);
}

TEST(ErrorProbability, LongClockIsReliable) {
  const CounterAutomaton ca = catalog::doubling_ca();
  const CompiledCa c = compile_ca(ca, 6);
  StochasticConfig cfg;
  cfg.seed = 17;
  cfg.volume = 10;
  const ErrorEstimate e = error_probability(ca, c, 2, 30, cfg, 40);
  EXPECT_EQ(e.runs, 40u);
  EXPECT_EQ(e.timeouts, 0u);
  EXPECT_LE(e.errors, 2u);
  for (const auto& o : e.outcomes) {
    if (o.halted && !o.wrong_zero) {
      EXPECT_EQ(o.counters, (std::vector<Count>{0, 4}));
    }
    EXPECT_EQ(o.correct, o.halted && !o.wrong_zero);
  }
  EXPECT_LE(e.ci_low, e.rate);
  EXPECT_GE(e.ci_high, e.rate);
}

TEST(ErrorProbability, NoClockErrsOften) {
  // With l = 1 the zero branch fires at the same rate as the decrement.
  const CounterAutomaton ca = catalog::doubling_ca();
  const CompiledCa c = compile_ca(ca, 1);
  StochasticConfig cfg;
  cfg.seed = 18;
  const ErrorEstimate e = error_probability(ca, c, 3, 0, cfg, 100);
  EXPECT_GT(e.errors, 20u);
  for (const auto& o : e.outcomes) EXPECT_EQ(o.correct, !o.wrong_zero);
}
