#include <gtest/gtest.h>

#include "crnkit/crn_format.hpp"
#include "crnkit/reach.hpp"

using namespace crnkit;

namespace {

CrnDocument doc(const char* text) { return parse_crn(text); }

}  // namespace

TEST(Post, BreadthFirstDiscoveryOrder) {
  const CrnDocument d = doc("#init 2A\nA -> B\nB -> C\n");
  const ReachResult r = post(d.crn, *d.init, 100);
  EXPECT_FALSE(r.truncated);
  ASSERT_EQ(r.states.size(), 6u);
  EXPECT_EQ(r.states[0], State({2, 0, 0}));
  EXPECT_EQ(r.states[1], State({1, 1, 0}));
  EXPECT_EQ(r.states[2], State({0, 2, 0}));
  EXPECT_EQ(r.states[3], State({1, 0, 1}));
  EXPECT_EQ(r.edges.size(), 6u);
  for (const Edge& e : r.edges) {
    EXPECT_EQ(apply(r.states[e.from], d.crn.reaction(e.reaction)), r.states[e.to]);
  }
  EXPECT_EQ(*r.index_of(State({0, 0, 2})), 5u);
}

TEST(Post, TruncatesAtBound) {
  const Crn crn = doc("0 -> A\n").crn;
  const ReachResult r = post(crn, crn.zero_state(), 10);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.states.size(), 10u);
  EXPECT_EQ(r.frontier_bound, 10u);
}

TEST(Post, MuteReactionsAddNoEdges) {
  const Crn crn = doc("A -> A\nA -> B\n").crn;
  const ReachResult r = post(crn, State({1, 0}), 10);
  EXPECT_EQ(r.states.size(), 2u);
  ASSERT_EQ(r.edges.size(), 1u);
  EXPECT_EQ(r.edges[0].reaction, 1u);
  EXPECT_TRUE(is_terminal(crn, State({0, 1})));
  EXPECT_TRUE(is_terminal(doc("A -> A\n").crn, State(std::vector<Count>{1})));
}

TEST(PreWithin, BackwardClosure) {
  const Crn crn = doc("A -> B\nA -> C\n").crn;
  const ReachResult r = post(crn, State({1, 0, 0}), 10);
  std::vector<bool> target(r.states.size(), false);
  target[*r.index_of(State({0, 1, 0}))] = true;
  const auto pre = pre_within(r, target);
  EXPECT_TRUE(pre[0]);
  EXPECT_FALSE(pre[*r.index_of(State({0, 0, 1}))]);

  StateSet universe(r.states.begin(), r.states.end());
  const StateSet set = pre_within(crn, {State({0, 0, 1})}, universe);
  EXPECT_EQ(set.size(), 2u);
  EXPECT_TRUE(set.count(State({1, 0, 0})));
}

TEST(KFast, OnlyFastEdgesFollowed) {
  const Crn crn = doc("A + B -> C\n").crn;
  const Reaction& r = crn.reaction(0);
  EXPECT_TRUE(is_kfast(r, State({3, 1, 0}), 3));
  EXPECT_FALSE(is_kfast(r, State({2, 2, 0}), 3));
  const ReachResult slow = post_kfast(crn, State({2, 2, 0}), 3, 100);
  EXPECT_EQ(slow.states.size(), 1u);
  const ReachResult fast = post_kfast(crn, State({4, 1, 0}), 3, 100);
  EXPECT_EQ(fast.states.size(), 2u);
  EXPECT_THROW(post_kfast(doc("3A -> B\n").crn, State({3, 0}), 1, 10), ContractError);
}

TEST(Post, EveryEdgeIsAnApplicationAndClosed) {
  const CrnDocument d = doc("#init 4X + 3Y\n3X -> V\n3Y -> V\nX + Y -> V\nX + V -> X\nY + V -> Y\n");
  const ReachResult r = post(d.crn, *d.init, 10000);
  ASSERT_FALSE(r.truncated);
  const auto succ = r.successors();
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    std::size_t expected = 0;
    for (const Reaction& a : d.crn.reactions()) expected += applicable(r.states[i], a) && !a.is_mute();
    EXPECT_EQ(succ[i].size(), expected);
  }
}
