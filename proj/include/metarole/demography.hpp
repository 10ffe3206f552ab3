#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "metarole/rng.hpp"
#include "metarole/types.hpp"

namespace metarole {

/// Yearly probability of dying at `age` (>= 15).
inline double mortality_probability(int age, const MortalityProfile& profile) {
  if (age < kEntryAge) throw DomainError("age below entry age: " + std::to_string(age));
  if (age >= profile.cap_age) return 1.0;
  const double h = profile.hazard_scale * std::exp(profile.hazard_growth * (age - kEntryAge));
  return std::min(1.0, h);
}

/// Precomputed hazards for ages [15, cap_age].
class HazardTable {
 public:
  explicit HazardTable(const MortalityProfile& profile) : profile_(profile) {
    for (int age = kEntryAge; age <= profile.cap_age; ++age)
      hazards_.push_back(mortality_probability(age, profile));
  }

  double operator()(int age) const {
    if (age < kEntryAge) throw DomainError("age below entry age: " + std::to_string(age));
    if (age >= profile_.cap_age) return 1.0;
    return hazards_[static_cast<std::size_t>(age - kEntryAge)];
  }

  const MortalityProfile& profile() const { return profile_; }

 private:
  MortalityProfile profile_;
  std::vector<double> hazards_;
};

/// Exactly one draw from `rng`.
inline bool sample_death(const Agent& agent, const MortalityProfile& profile, Rng& rng) {
  return rng.uniform01() < mortality_probability(agent.age(), profile);
}

/// Mean age at death for someone who joins at 15 and first faces the
/// hazard at 16 (experience is incremented before the mortality draw).
inline double expected_death_age(const MortalityProfile& profile) {
  double survival = 1.0;
  double mean = 0.0;
  for (int age = kEntryAge + 1;; ++age) {
    const double h = mortality_probability(age, profile);
    mean += age * survival * h;
    survival *= 1.0 - h;
    if (h >= 1.0) return mean;
  }
}

/// One simulated lifetime: starts at 15, ages a year, then faces the hazard.
inline int sample_death_age(const MortalityProfile& profile, Rng& rng) {
  int age = kEntryAge;
  for (;;) {
    ++age;
    if (rng.uniform01() < mortality_probability(age, profile)) return age;
  }
}

/// Bisects hazard_scale so that expected_death_age hits `target_mean`.
inline double calibrate_hazard_scale(double target_mean, double growth, int cap_age = 90) {
  MortalityProfile p{MortalityKind::Harsh, 0.0, growth, cap_age};
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    p.hazard_scale = 0.5 * (lo + hi);
    if (expected_death_age(p) > target_mean)
      lo = p.hazard_scale;
    else
      hi = p.hazard_scale;
  }
  return 0.5 * (lo + hi);
}

struct PromotionResult {
  std::vector<AgentId> promoted;
  int shortfall = 0;
};

/// Picks the `n_vacancies` candidates with the most experience, ties to the
/// lower id. Does not mutate anything; callers apply the role change.
inline PromotionResult select_most_experienced(std::span<const Agent* const> candidates,
                                               int n_vacancies) {
  if (n_vacancies < 0) throw DomainError("negative vacancy count");
  std::vector<const Agent*> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end(), [](const Agent* a, const Agent* b) {
    return a->experience != b->experience ? a->experience > b->experience : a->id < b->id;
  });
  PromotionResult r;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(n_vacancies), order.size());
  for (std::size_t i = 0; i < n; ++i) r.promoted.push_back(order[i]->id);
  r.shortfall = n_vacancies - static_cast<int>(n);
  return r;
}

/// Moves the `n_vacancies` most experienced agents of `pool` into formal
/// role `to`. Promoted agents stop volunteering and keep their judging facet.
inline PromotionResult promote_most_experienced(std::span<Agent* const> pool, int n_vacancies,
                                                MetaRole to) {
  std::vector<const Agent*> view(pool.begin(), pool.end());
  auto r = select_most_experienced(view, n_vacancies);
  for (Agent* a : pool) {
    if (std::find(r.promoted.begin(), r.promoted.end(), a->id) == r.promoted.end()) continue;
    a->roles.set_formal(to);
    a->roles.drop(MetaRole::Knowledge);
    a->roles.internalise(MetaRole::Skill);
    a->volunteer_monitor = false;
  }
  return r;
}

inline PromotionResult promote_to_manager(std::span<Agent* const> workers, int n_vacancies) {
  return promote_most_experienced(workers, n_vacancies, MetaRole::Knowledge);
}

/// Fresh agent with random perceptions and thresholds. Draw order is part of
/// the determinism contract: fairness, environment, then the six thresholds,
/// then the monitoring coin.
inline Agent make_recruit(AgentId id, MetaRole formal, const SocietyConfig& config, Rng& rng) {
  Agent a;
  a.id = id;
  a.roles = RoleSet(formal);
  a.status = Status::New;
  a.experience = 0;
  a.beliefs.perceived_fairness = rng.uniform(-1.0, 1.0);
  a.beliefs.perceived_environment = rng.uniform(-1.0, 1.0);
  a.thresholds.dissonance = rng.uniform01();
  a.thresholds.environment = rng.uniform01();
  a.thresholds.fairness_thresh = rng.uniform01();
  a.thresholds.justif_thresh = rng.uniform01();
  a.thresholds.report_tolerance = rng.uniform01();
  a.thresholds.tol_punish = rng.uniform(0.0, config.fired_fraction);
  a.volunteer_monitor = rng.bernoulli(config.monitoring_init_prob);
  if (a.volunteer_monitor && formal == MetaRole::Worker) {
    a.roles.internalise(MetaRole::Knowledge);
    a.roles.internalise(MetaRole::Skill);
  }
  return a;
}

}  // namespace metarole
