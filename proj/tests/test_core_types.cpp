#include <gtest/gtest.h>

#include "metarole/beliefs.hpp"
#include "metarole/rng.hpp"
#include "metarole/types.hpp"

using namespace metarole;

TEST(DefaultConfig, UnfairHarshSociety) {
  const auto c = default_config("E0F0");
  EXPECT_DOUBLE_EQ(c.fairness_constant, -0.4);
  EXPECT_EQ(c.mortality.kind, MortalityKind::Harsh);
  EXPECT_FALSE(c.environment_benign);
  EXPECT_FALSE(c.institutions_fair);
}

TEST(DefaultConfig, FairBenignSociety) {
  const auto c = default_config("E1F1");
  EXPECT_DOUBLE_EQ(c.fairness_constant, 0.6);
  EXPECT_EQ(c.mortality.kind, MortalityKind::Benign);
}

TEST(DefaultConfig, FairHarshSociety) {
  const auto c = default_config("E0F1");
  EXPECT_DOUBLE_EQ(c.fairness_constant, 0.6);
  EXPECT_EQ(c.mortality.kind, MortalityKind::Harsh);
}

TEST(DefaultConfig, TableOneDefaults) {
  const auto c = default_config("E1F0");
  EXPECT_EQ(c.population, 500);
  EXPECT_DOUBLE_EQ(c.director_fraction, 0.02);
  EXPECT_DOUBLE_EQ(c.manager_fraction, 0.05);
  EXPECT_EQ(c.board_size, 11);
  EXPECT_DOUBLE_EQ(c.vote_threshold, 0.70);
  EXPECT_EQ(c.reform_year, 70);
  EXPECT_EQ(c.total_years, 250);
  EXPECT_EQ(c.max_punish, 5);
  EXPECT_DOUBLE_EQ(c.fired_fraction, 0.30);
  EXPECT_DOUBLE_EQ(c.past_weight, 0.30);
  EXPECT_DOUBLE_EQ(c.monitoring_init_prob, 0.5);
  EXPECT_EQ(c.experience_gate, 3);
  EXPECT_EQ(c.manager_count(), 25);
  EXPECT_EQ(c.worker_count(), 464);
  EXPECT_NO_THROW(validate(c));
}

TEST(DefaultConfig, UnknownLabelIsConfigError) {
  EXPECT_THROW(default_config("E2F0"), ConfigError);
  EXPECT_THROW(default_config("EIC"), ConfigError);
  EXPECT_THROW(default_config(""), ConfigError);
}

TEST(DefaultConfig, IsPure) {
  for (const auto& l : society_labels()) EXPECT_EQ(default_config(l), default_config(l));
}

TEST(Validate, RejectsBadFractionsAndSizes) {
  auto c = default_config("E0F0");
  c.manager_fraction = 0.99;
  EXPECT_THROW(validate(c), ConfigError);
  c = default_config("E0F0");
  c.population = 10;
  EXPECT_THROW(validate(c), ConfigError);
  c = default_config("E0F0");
  c.vote_threshold = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(RoleSet, SkillIsNeverFormal) {
  EXPECT_THROW(RoleSet(MetaRole::Skill), DomainError);
  RoleSet r(MetaRole::Worker);
  EXPECT_THROW(r.set_formal(MetaRole::Skill), DomainError);
}

TEST(RoleSet, FormalAlwaysEffectiveUnderRandomMutation) {
  Rng rng(7);
  const MetaRole formal_choices[] = {MetaRole::Commander, MetaRole::Knowledge, MetaRole::Worker};
  const MetaRole any[] = {MetaRole::Commander, MetaRole::Knowledge, MetaRole::Skill, MetaRole::Worker};
  RoleSet r(MetaRole::Worker);
  for (int i = 0; i < 5000; ++i) {
    switch (rng.index(3)) {
      case 0: r.set_formal(formal_choices[rng.index(3)]); break;
      case 1: r.internalise(any[rng.index(4)]); break;
      default: r.drop(any[rng.index(4)]); break;
    }
    const auto eff = r.effective();
    ASSERT_TRUE(eff.count(r.formal()));
    ASSERT_TRUE(r.has(r.formal()));
    ASSERT_FALSE(r.internalised().count(r.formal()));
  }
}

TEST(Agent, AgeIsExperiencePlusFifteen) {
  Agent a;
  EXPECT_EQ(a.age(), 15);
  a.experience = 20;
  EXPECT_EQ(a.age(), 35);
}

TEST(Beliefs, StayInRangeUnderRandomUpdates) {
  Rng rng(11);
  Beliefs b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  for (int i = 0; i < 20000; ++i) {
    const double w = rng.uniform01();
    b.perceived_fairness = update_belief(b.perceived_fairness, observe_signal(rng.uniform(-1.5, 1.5), 0.5, rng), w);
    b.perceived_environment = update_belief(b.perceived_environment, rng.uniform(-1, 1), w);
    ASSERT_GE(b.perceived_fairness, -1.0);
    ASSERT_LE(b.perceived_fairness, 1.0);
    ASSERT_GE(b.perceived_environment, -1.0);
    ASSERT_LE(b.perceived_environment, 1.0);
  }
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform01();
    EXPECT_EQ(x, b.uniform01());
    differs = differs || x != c.uniform01();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, IndexStaysInRange) {
  Rng r(3);
  for (std::uint64_t n : {1u, 2u, 7u, 465u})
    for (int i = 0; i < 1000; ++i) ASSERT_LT(r.index(n), n);
}
