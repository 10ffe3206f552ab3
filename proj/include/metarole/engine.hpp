#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "metarole/beliefs.hpp"
#include "metarole/demography.hpp"
#include "metarole/network.hpp"
#include "metarole/rng.hpp"
#include "metarole/state.hpp"
#include "metarole/types.hpp"

// Yearly step of one society. Within a year the order is fixed:
//
//   1. hiring and promotion (vacancies filled top-down, recruits at W)
//   2. violations realised for every worker, then worker decisions,
//      reporting, learning, ageing and mortality in ascending id order
//   3. each report handed to one alive manager
//   4. managers punish, learn, age and may die; post-reform directors
//      learn, age and may die
//   5. board reform and vote, at the reform year only
//   6. statistics
//
// Every random draw comes from `SocietyState::rng` in this order, so a
// (config, seed) pair fully determines a run.

namespace metarole {

struct ReplenishResult {
  std::vector<AgentId> to_director;
  std::vector<AgentId> to_manager;
  std::vector<AgentId> recruits;
  int shortfall = 0;
};

struct WorkerStepResult {
  std::vector<Report> reports;
  bool decided = false;  // passed the experience gate this year
  bool died = false;
};

struct ManagerStepResult {
  std::vector<AgentId> fired;
  bool died = false;
};

struct ReformOutcome {
  std::vector<AgentId> board;
  int yes_votes = 0;
  bool granted = false;
};

// Per-year audit trail, filled only when a trace is passed to step_year.
struct YearTrace {
  std::map<AgentId, std::vector<Report>> reports_by_manager;
  std::map<AgentId, std::vector<AgentId>> fired_by_manager;
  std::map<AgentId, double> tol_punish_by_manager;
  std::vector<AgentId> cheaters;
  std::vector<AgentId> deaths;
  std::optional<ReformOutcome> reform;
};

namespace detail {

inline void depart(SocietyState& s, AgentId id) {
  Agent& a = s.at(id);
  a.alive = false;
  detach(id, s.lookup());
}

inline void learn(SocietyState& s, Agent& a) {
  const auto& c = s.config;
  const double f = observe_signal(c.fairness_constant, c.observation_noise, s.rng);
  const double env_const = c.environment_benign ? c.environment_signal : -c.environment_signal;
  const double e = observe_signal(env_const, c.observation_noise, s.rng);
  a.beliefs.perceived_fairness = update_belief(a.beliefs.perceived_fairness, f, c.past_weight);
  a.beliefs.perceived_environment =
      update_belief(a.beliefs.perceived_environment, e, c.past_weight);
}

// Ages the agent by one year and draws mortality. Returns true on death.
inline bool age_and_maybe_die(SocietyState& s, Agent& a) {
  a.experience += 1;
  a.status = Status::Experienced;
  if (sample_death(a, s.config.mortality, s.rng)) {
    depart(s, a.id);
    return true;
  }
  return false;
}

inline TradeRule trade_rule(const SocietyConfig& c) {
  return {c.literal_justif_comparison, c.environment_gate};
}

}  // namespace detail

/// Builds the initial population: ids 0..board_size-1 are directors, the
/// next round(manager_fraction * population) are managers, the rest
/// workers. Each agent attaches to friends among the agents created
/// before it.
inline SocietyState init_society(const SocietyConfig& config, std::uint64_t seed) {
  validate(config);
  SocietyState s;
  s.config = config;
  s.rng = Rng(seed);
  const int n_directors = config.board_size;
  const int n_managers = config.manager_count();
  s.agents.reserve(static_cast<std::size_t>(config.population) * 4);
  for (int i = 0; i < config.population; ++i) {
    const MetaRole role = i < n_directors                ? MetaRole::Commander
                          : i < n_directors + n_managers ? MetaRole::Knowledge
                                                         : MetaRole::Worker;
    Agent a = make_recruit(static_cast<AgentId>(i), role, config, s.rng);
    if (role == MetaRole::Knowledge) a.roles.internalise(MetaRole::Skill);
    s.agents.push_back(std::move(a));
    if (role == MetaRole::Commander) s.board.push_back(static_cast<AgentId>(i));
  }
  std::vector<AgentId> earlier;
  for (int i = 0; i < config.population; ++i) {
    attach_recruit(static_cast<AgentId>(i), earlier, config.network_degree, s.rng, s.lookup());
    earlier.push_back(static_cast<AgentId>(i));
  }
  return s;
}

/// Fills director vacancies (post-reform only) from managers, manager
/// vacancies from workers, then hires one new worker per departed agent.
inline ReplenishResult replenish(SocietyState& s) {
  ReplenishResult r;
  const auto& c = s.config;

  auto promote = [&](MetaRole from, MetaRole to, int vacancies) {
    std::vector<Agent*> pool;
    for (AgentId id : s.alive_with_role(from)) pool.push_back(&s.at(id));
    auto sel = promote_most_experienced(pool, vacancies, to);
    r.shortfall += sel.shortfall;
    return sel.promoted;
  };

  if (s.board_reformed) {
    std::erase_if(s.board, [&](AgentId id) { return !s.at(id).alive; });
    const int vac = c.board_size - static_cast<int>(s.board.size());
    if (vac > 0) {
      r.to_director = promote(MetaRole::Knowledge, MetaRole::Commander, vac);
      s.board.insert(s.board.end(), r.to_director.begin(), r.to_director.end());
    }
  }
  const int k_vac = c.manager_count() - static_cast<int>(s.alive_with_role(MetaRole::Knowledge).size());
  if (k_vac > 0) r.to_manager = promote(MetaRole::Worker, MetaRole::Knowledge, k_vac);

  auto population = s.alive_ids();
  const int hires = c.population - static_cast<int>(population.size());
  for (int i = 0; i < hires; ++i) {
    const auto id = static_cast<AgentId>(s.agents.size());
    s.agents.push_back(make_recruit(id, MetaRole::Worker, c, s.rng));
    attach_recruit(id, population, c.network_degree, s.rng, s.lookup());
    population.push_back(id);
    r.recruits.push_back(id);
  }
  return r;
}

/// Draws this year's violation cost for every alive worker. Illegal private
/// trade costs Uniform(0,1); independently a residual violation (theft and
/// the like) adds another Uniform(0,1) with residual_violation_prob.
/// Returns the ids of workers who violated.
inline std::vector<AgentId> realise_violations(SocietyState& s) {
  std::vector<AgentId> cheaters;
  for (Agent& a : s.agents) {
    a.violation_cost_this_year = 0.0;
    if (!a.alive || a.roles.formal() != MetaRole::Worker) continue;
    bool violated = false;
    if (a.private_trade && !s.permission_private_trade) {
      a.violation_cost_this_year += s.rng.uniform01();
      violated = true;
    }
    if (s.rng.bernoulli(s.config.residual_violation_prob)) {
      a.violation_cost_this_year += s.rng.uniform01();
      violated = true;
    }
    if (violated) cheaters.push_back(a.id);
  }
  return cheaters;
}

/// Mercantile agent's year: monitoring and private-trade decisions (past
/// the experience gate), reporting, learning, ageing, mortality.
inline WorkerStepResult worker_step(SocietyState& s, AgentId id) {
  WorkerStepResult r;
  Agent& a = s.at(id);
  if (!a.alive || a.roles.formal() != MetaRole::Worker)
    throw std::logic_error("worker_step on a non-worker or departed agent");

  if (a.experience > s.config.experience_gate) {
    r.decided = true;
    switch (decide_monitoring(a)) {
      case MonitoringDecision::WithdrawK: {
        a.volunteer_monitor = false;
        a.roles.drop(MetaRole::Knowledge);
        a.roles.drop(MetaRole::Skill);
        const double frac = friend_trader_fraction(a, s.lookup());
        a.private_trade = decide_private_trade(a, frac, detail::trade_rule(s.config));
        break;
      }
      case MonitoringDecision::VolunteerK:
        a.volunteer_monitor = true;
        a.roles.internalise(MetaRole::Knowledge);
        a.roles.internalise(MetaRole::Skill);
        break;
      case MonitoringDecision::NoChange:
        break;
    }
    if (a.volunteer_monitor) r.reports = observed_violators(a, s.lookup());
  }
  detail::learn(s, a);
  r.died = detail::age_and_maybe_die(s, a);
  return r;
}

/// PotPunish = reports with cost > tol_punish; returns the `max_punish`
/// costliest (ties to the lower id), or all of them if fewer. Duplicate
/// reports about the same agent count once.
inline std::vector<AgentId> select_for_punishment(std::span<const Report> reports,
                                                  double tol_punish, int max_punish) {
  std::vector<Report> pot;
  std::unordered_set<AgentId> seen;
  for (const Report& rep : reports)
    if (rep.cost > tol_punish && seen.insert(rep.violator).second) pot.push_back(rep);
  std::sort(pot.begin(), pot.end(), [](const Report& a, const Report& b) {
    return a.cost != b.cost ? a.cost > b.cost : a.violator < b.violator;
  });
  if (static_cast<int>(pot.size()) > max_punish) pot.resize(static_cast<std::size_t>(std::max(max_punish, 0)));
  std::vector<AgentId> out;
  out.reserve(pot.size());
  for (const Report& rep : pot) out.push_back(rep.violator);
  return out;
}

/// Hands each report to one alive manager. Reports are taken in the given
/// order; with no managers alive they are dropped.
inline std::map<AgentId, std::vector<Report>> route_reports(SocietyState& s,
                                                            std::span<const Report> reports) {
  std::map<AgentId, std::vector<Report>> out;
  const auto managers = s.alive_with_role(MetaRole::Knowledge);
  if (managers.empty()) return out;
  for (const Report& rep : reports) {
    std::size_t pick = 0;
    if (s.config.report_routing == ReportRouting::Random)
      pick = static_cast<std::size_t>(s.rng.index(managers.size()));
    else
      pick = static_cast<std::size_t>(s.round_robin_cursor++ % managers.size());
    out[managers[pick]].push_back(rep);
  }
  return out;
}

/// Manager's year: punish from the routed reports, learn, age, mortality.
/// Reports about agents who already left this year are ignored.
inline ManagerStepResult manager_step(SocietyState& s, AgentId id, std::span<const Report> reports) {
  ManagerStepResult r;
  Agent& m = s.at(id);
  if (!m.alive || m.roles.formal() != MetaRole::Knowledge)
    throw std::logic_error("manager_step on a non-manager or departed agent");

  std::vector<Report> live;
  for (const Report& rep : reports)
    if (s.at(rep.violator).alive) live.push_back(rep);
  r.fired = select_for_punishment(live, m.thresholds.tol_punish, s.config.max_punish);
  for (AgentId f : r.fired) detail::depart(s, f);

  detail::learn(s, m);
  r.died = detail::age_and_maybe_die(s, m);
  return r;
}

/// Director's year once the board is made of former managers.
inline bool director_step(SocietyState& s, AgentId id) {
  Agent& d = s.at(id);
  detail::learn(s, d);
  return detail::age_and_maybe_die(s, d);
}

/// A director supports legalisation if they trade privately themselves or
/// no longer hold the rule fair enough to enforce it.
inline bool director_vote(const Agent& d) {
  return d.private_trade || dissonance(d.beliefs.perceived_fairness) < d.thresholds.dissonance;
}

/// Replaces the board with the most experienced managers and votes on
/// legalising private trade. Runs once, at the reform year.
inline ReformOutcome board_reform(SocietyState& s) {
  if (s.year != s.config.reform_year || s.board_reformed)
    throw std::logic_error("board_reform outside the reform year");
  ReformOutcome out;
  for (AgentId id : s.board)
    if (s.at(id).alive) detail::depart(s, id);
  s.board.clear();

  std::vector<Agent*> pool;
  for (AgentId id : s.alive_with_role(MetaRole::Knowledge)) pool.push_back(&s.at(id));
  const auto sel = promote_most_experienced(pool, s.config.board_size, MetaRole::Commander);
  for (AgentId id : sel.promoted) {
    s.board.push_back(id);
    out.yes_votes += director_vote(s.at(id)) ? 1 : 0;
  }
  s.board_reformed = true;
  out.board = s.board;

  const double share = static_cast<double>(out.yes_votes) / s.config.board_size;
  if (share >= s.config.vote_threshold) {
    out.granted = true;
    s.permission_private_trade = true;
    s.config.fairness_constant =
        std::max(-1.0, s.config.fairness_constant - s.config.wage_cut_penalty);
  }
  return out;
}

inline YearlyStats step_year(SocietyState& s, YearTrace* trace = nullptr) {
  if (s.year >= s.config.total_years) throw std::logic_error("stepping past total_years");
  YearlyStats st;
  st.year = s.year;

  replenish(s);
  st.n_commanders = static_cast<int>(s.alive_with_role(MetaRole::Commander).size());
  st.n_managers = static_cast<int>(s.alive_with_role(MetaRole::Knowledge).size());
  st.n_workers = static_cast<int>(s.alive_with_role(MetaRole::Worker).size());

  const auto cheaters = realise_violations(s);
  std::vector<Report> reports;
  int deciders = 0;
  int volunteers = 0;
  int deaths = 0;
  for (AgentId id : s.alive_with_role(MetaRole::Worker)) {
    auto r = worker_step(s, id);
    if (r.decided) {
      ++deciders;
      volunteers += s.at(id).volunteer_monitor ? 1 : 0;
    }
    reports.insert(reports.end(), r.reports.begin(), r.reports.end());
    if (r.died) {
      ++deaths;
      if (trace) trace->deaths.push_back(id);
    }
  }

  auto routed = route_reports(s, reports);
  int fired = 0;
  for (AgentId id : s.alive_with_role(MetaRole::Knowledge)) {
    const auto it = routed.find(id);
    const std::span<const Report> mine =
        it == routed.end() ? std::span<const Report>{} : std::span<const Report>(it->second);
    if (trace) trace->tol_punish_by_manager[id] = s.at(id).thresholds.tol_punish;
    auto r = manager_step(s, id, mine);
    fired += static_cast<int>(r.fired.size());
    if (trace) {
      trace->reports_by_manager[id].assign(mine.begin(), mine.end());
      trace->fired_by_manager[id] = r.fired;
      if (r.died) trace->deaths.push_back(id);
    }
    deaths += r.died ? 1 : 0;
  }
  if (s.board_reformed) {
    for (AgentId id : std::vector<AgentId>(s.board)) {
      if (!s.at(id).alive) continue;
      if (director_step(s, id)) {
        ++deaths;
        if (trace) trace->deaths.push_back(id);
      }
    }
  }

  if (s.year == s.config.reform_year) {
    auto out = board_reform(s);
    if (trace) trace->reform = out;
  }

  st.pct_cheaters_fired = cheaters.empty() ? 0.0 : 100.0 * fired / static_cast<double>(cheaters.size());
  st.pct_volunteer_monitors = deciders == 0 ? 0.0 : 100.0 * volunteers / static_cast<double>(deciders);
  for (const Agent& a : s.agents) st.n_private_traders += (a.alive && a.private_trade) ? 1 : 0;
  st.permission_granted = s.permission_private_trade;
  st.n_deaths = deaths;
  st.n_fired = fired;
  s.last_year_attrition = deaths + fired;
  if (trace) trace->cheaters = cheaters;

  ++s.year;
  return st;
}

inline RunResult summarise_run(const SocietyConfig& config, std::uint64_t seed,
                               std::vector<YearlyStats> series) {
  RunResult r;
  r.seed = seed;
  r.society_label = config.label;
  r.series = std::move(series);
  for (const auto& y : r.series) {
    if (y.permission_granted) {
      r.permission_ever_granted = true;
      r.permission_year = y.year;
      break;
    }
  }
  return r;
}

inline RunResult run_society(const SocietyConfig& config, std::uint64_t seed) {
  auto s = init_society(config, seed);
  std::vector<YearlyStats> series;
  series.reserve(static_cast<std::size_t>(config.total_years));
  while (s.year < config.total_years) series.push_back(step_year(s));
  return summarise_run(config, seed, std::move(series));
}

}  // namespace metarole
