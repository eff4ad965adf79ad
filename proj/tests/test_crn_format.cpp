#include <gtest/gtest.h>

#include <cmath>

#include "crnkit/crn_format.hpp"

using namespace crnkit;

TEST(Parse, ReactionsRatesAndDirectives) {
  const CrnDocument doc = parse_crn(
      "% comment\n"
      "#input X, Y\n#vote1 V\n#vote0 X, Y\n#init 3X + 2Y\n#volume 2.5\n"
      "3X -> V [k=0.5]\nX + V -> X\n0 -> Y\nY -> 0\n");
  EXPECT_EQ(doc.crn.species(), (std::vector<std::string>{"V", "X", "Y"}));
  EXPECT_EQ(doc.crn.reaction_count(), 4u);
  EXPECT_DOUBLE_EQ(doc.crn.reaction(0).rate(), 0.5);
  EXPECT_EQ(doc.crn.reaction(0).reactants(), (std::vector<Count>{0, 3, 0}));
  EXPECT_EQ(doc.crn.reaction(2).order(), 0);
  EXPECT_EQ(doc.input, (std::vector<std::string>{"X", "Y"}));
  EXPECT_EQ(doc.vote1, (std::vector<std::string>{"V"}));
  ASSERT_TRUE(doc.init);
  EXPECT_EQ(*doc.init, State({0, 3, 2}));
  EXPECT_EQ(doc.volume, 2.5);
}

TEST(Parse, PrimedAndDottedNames) {
  const CrnDocument doc = parse_crn("X -> X' + Z\nX' + Y.1 -> 0\n");
  EXPECT_TRUE(doc.crn.find_species("X'"));
  EXPECT_TRUE(doc.crn.find_species("Y.1"));
}

TEST(Parse, ErrorsCarryPositions) {
  try {
    parse_crn("A -> B\nA + -> C\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
  }
  EXPECT_THROW(parse_crn("A => B\n"), ParseError);
  EXPECT_THROW(parse_crn("#input Q\nA -> B\n"), ParseError);
  EXPECT_THROW(parse_crn("#bogus A\nA -> B\n"), ParseError);
  EXPECT_THROW(parse_crn("A -> B [k=0]\n"), ParseError);
  EXPECT_THROW(parse_crn("A -> B [k=-1]\n"), ParseError);
  EXPECT_THROW(parse_crn("#volume 0\nA -> B\n"), ParseError);
}

TEST(Render, RoundTrips) {
  const char* texts[] = {
      "#input X, Y\n#output Z\n#init 3X + 5Y\nX + Y -> Z\n",
      "A -> 2B [k=0.25]\n2B -> A [k=3]\n0 -> C\n",
      "#species Q\n#vote1 Q\n#vote0 A\nA -> B\n",
      "#volume 7.5\nL + L -> L\n",
  };
  for (const char* t : texts) {
    const CrnDocument a = parse_crn(t);
    const CrnDocument b = parse_crn(render_crn(a));
    EXPECT_EQ(a.crn, b.crn) << t;
    EXPECT_EQ(a.input, b.input);
    EXPECT_EQ(a.output, b.output);
    EXPECT_EQ(a.vote0, b.vote0);
    EXPECT_EQ(a.vote1, b.vote1);
    EXPECT_EQ(a.init, b.init);
    EXPECT_EQ(a.volume, b.volume);
  }
}

TEST(States, ParseAndFormat) {
  const Crn crn = parse_crn("A + B -> C\n").crn;
  EXPECT_EQ(parse_state(crn, "2A + C"), State({2, 0, 1}));
  EXPECT_EQ(parse_state(crn, "0"), crn.zero_state());
  EXPECT_EQ(format_state(crn, State({2, 0, 1})), "2A + C");
  EXPECT_EQ(format_state(crn, crn.zero_state()), "0");
  EXPECT_THROW(parse_state(crn, "D"), ParseError);
}

TEST(Doubles, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 5.187377517639621, 1e-300, 12345.0}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}
