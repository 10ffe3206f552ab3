#include <gtest/gtest.h>

#include <numeric>
#include <sstream>
#include <vector>

#include "metarole/engine.hpp"
#include "metarole/network.hpp"

using namespace metarole;

namespace {
struct World {
  std::vector<Agent> agents;
  explicit World(std::size_t n) : agents(n) {
    for (std::size_t i = 0; i < n; ++i) agents[i].id = static_cast<AgentId>(i);
  }
  auto lookup() {
    return [this](AgentId id) -> Agent& { return agents.at(id); };
  }
  std::vector<AgentId> ids() const {
    std::vector<AgentId> v(agents.size());
    std::iota(v.begin(), v.end(), 0u);
    return v;
  }
};

bool symmetric(const std::vector<Agent>& agents) {
  for (const auto& a : agents)
    for (AgentId f : a.friends)
      if (!agents[f].friends.count(a.id)) return false;
  return true;
}
}  // namespace

TEST(Attach, DegreeZeroLeavesNoEdges) {
  World w(6);
  Rng rng(1);
  auto ids = w.ids();
  EXPECT_TRUE(attach_recruit(5, ids, 0, rng, w.lookup()).empty());
  EXPECT_TRUE(w.agents[5].friends.empty());
}

TEST(Attach, FullDegreeInLargePopulation) {
  World w(466);
  Rng rng(2);
  auto ids = w.ids();
  auto chosen = attach_recruit(465, ids, 10, rng, w.lookup());
  EXPECT_EQ(chosen.size(), 10u);
  EXPECT_EQ(w.agents[465].friends.size(), 10u);
  EXPECT_FALSE(chosen.count(465));
  EXPECT_TRUE(symmetric(w.agents));
}

TEST(Attach, SmallPopulationLinksEveryone) {
  World w(5);
  Rng rng(3);
  std::vector<AgentId> pop{0, 1, 2, 3};
  auto chosen = attach_recruit(4, pop, 10, rng, w.lookup());
  EXPECT_EQ(chosen, (std::set<AgentId>{0, 1, 2, 3}));
}

TEST(Attach, RandomGraphsStaySymmetricWithoutSelfLoops) {
  Rng rng(4);
  World w(200);
  std::vector<AgentId> pop;
  for (AgentId i = 0; i < 200; ++i) {
    attach_recruit(i, pop, static_cast<int>(rng.index(12)), rng, w.lookup());
    pop.push_back(i);
  }
  EXPECT_TRUE(symmetric(w.agents));
  for (const auto& a : w.agents) EXPECT_FALSE(a.friends.count(a.id));
  detach(50, w.lookup());
  EXPECT_TRUE(w.agents[50].friends.empty());
  EXPECT_TRUE(symmetric(w.agents));
}

TEST(FriendTraders, Fractions) {
  World w(5);
  for (AgentId f = 1; f <= 4; ++f) {
    w.agents[0].friends.insert(f);
    w.agents[f].friends.insert(0);
  }
  w.agents[2].private_trade = true;
  EXPECT_DOUBLE_EQ(friend_trader_fraction(w.agents[0], w.lookup()), 0.25);
  w.agents[2].private_trade = false;
  EXPECT_DOUBLE_EQ(friend_trader_fraction(w.agents[0], w.lookup()), 0.0);
  for (AgentId f = 1; f <= 4; ++f) w.agents[f].private_trade = true;
  EXPECT_DOUBLE_EQ(friend_trader_fraction(w.agents[0], w.lookup()), 1.0);
  const Agent lonely;
  EXPECT_DOUBLE_EQ(friend_trader_fraction(lonely, w.lookup()), 0.0);
}

TEST(FriendTraders, DeadFriendsIgnored) {
  World w(3);
  w.agents[0].friends = {1, 2};
  w.agents[1].private_trade = true;
  w.agents[1].alive = false;
  EXPECT_DOUBLE_EQ(friend_trader_fraction(w.agents[0], w.lookup()), 0.0);
  w.agents[2].alive = false;
  EXPECT_DOUBLE_EQ(friend_trader_fraction(w.agents[0], w.lookup()), 0.0);
}

TEST(ObservedViolators, ToleranceFilters) {
  World w(3);
  w.agents[0].friends = {1, 2};
  w.agents[1].violation_cost_this_year = 0.9;
  w.agents[2].violation_cost_this_year = 0.2;
  w.agents[0].thresholds.report_tolerance = 0.5;
  EXPECT_EQ(observed_violators(w.agents[0], w.lookup()), (std::vector<Report>{{1, 0.9}}));
  w.agents[0].thresholds.report_tolerance = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(observed_violators(w.agents[0], w.lookup()).empty());
}

TEST(ObservedViolators, ZeroToleranceReportsAllSortedByCost) {
  World w(5);
  w.agents[0].friends = {1, 2, 3, 4};
  w.agents[1].violation_cost_this_year = 0.3;
  w.agents[2].violation_cost_this_year = 0.8;
  w.agents[3].violation_cost_this_year = 0.3;
  w.agents[4].violation_cost_this_year = 0.0;  // not a violation
  w.agents[0].thresholds.report_tolerance = 0.0;
  EXPECT_EQ(observed_violators(w.agents[0], w.lookup()), (std::vector<Report>{{2, 0.8}, {1, 0.3}, {3, 0.3}}));
  w.agents[2].alive = false;
  EXPECT_EQ(observed_violators(w.agents[0], w.lookup()).size(), 2u);
}

TEST(Society, NetworkInvariantsHoldAcrossYears) {
  auto c = default_config("E0F0");
  c.total_years = 40;
  auto s = init_society(c, 9);
  for (int y = 0; y < 40; ++y) {
    step_year(s);
    for (const auto& a : s.agents) {
      if (!a.alive) {
        ASSERT_TRUE(a.friends.empty());
        continue;
      }
      ASSERT_FALSE(a.friends.count(a.id));
      for (AgentId f : a.friends) {
        ASSERT_TRUE(s.at(f).alive);
        ASSERT_TRUE(s.at(f).friends.count(a.id));
      }
    }
  }
}

TEST(EdgeList, OncePerEdgeAscending) {
  World w(3);
  w.agents[0].friends = {2};
  w.agents[2].friends = {0, 1};
  w.agents[1].friends = {2};
  std::ostringstream os;
  write_edge_list(os, w.agents);
  EXPECT_EQ(os.str(), "0,2\n1,2\n");
}
