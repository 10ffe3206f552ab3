#pragma once

#include <algorithm>
#include <string>

#include "metarole/rng.hpp"
#include "metarole/types.hpp"

namespace metarole {

namespace detail {
inline void require_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi))
    throw DomainError(std::string(what) + " out of range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]: " + std::to_string(v));
}
}  // namespace detail

inline double clamp_belief(double v) { return std::clamp(v, -1.0, 1.0); }

/// Exponential smoothing: past_weight * old + (1 - past_weight) * signal.
inline double update_belief(double old, double signal, double past_weight) {
  detail::require_range(old, -1.0, 1.0, "belief");
  detail::require_range(signal, -1.0, 1.0, "signal");
  detail::require_range(past_weight, 0.0, 1.0, "past_weight");
  return clamp_belief(past_weight * old + (1.0 - past_weight) * signal);
}

/// Maps perceived fairness in [-1,1] onto [0,1], increasing. A value under
/// the agent's dissonance threshold means the rule feels too unfair to
/// keep enforcing.
inline double dissonance(double perceived_fairness) {
  return (clamp_belief(perceived_fairness) + 1.0) / 2.0;
}

// One year's noisy observation of a society-level constant.
inline double observe_signal(double constant, double noise, Rng& rng) {
  return clamp_belief(constant + rng.uniform(-noise, noise));
}

enum class MonitoringDecision { WithdrawK, VolunteerK, NoChange };

inline MonitoringDecision decide_monitoring(const Agent& agent) {
  const double d = dissonance(agent.beliefs.perceived_fairness);
  if (d < agent.thresholds.dissonance) return MonitoringDecision::WithdrawK;
  if (d > agent.thresholds.dissonance) return MonitoringDecision::VolunteerK;
  return MonitoringDecision::NoChange;
}

struct TradeRule {
  // Literal "fraction < JustifThresh" instead of ">=".
  bool literal_justif_comparison = false;
  // Additionally require perceived environment (mapped to [0,1]) below the
  // agent's environment threshold.
  bool environment_gate = false;
};

/// Private-trade decision for an agent who has withdrawn from monitoring.
/// Absorbing: an agent already trading keeps trading.
inline bool decide_private_trade(const Agent& agent, double friend_trader_fraction,
                                 TradeRule rule = {}) {
  if (agent.private_trade) return true;
  const bool unfair = agent.beliefs.perceived_fairness < agent.thresholds.fairness_thresh;
  const bool justified = rule.literal_justif_comparison
                             ? friend_trader_fraction < agent.thresholds.justif_thresh
                             : friend_trader_fraction >= agent.thresholds.justif_thresh;
  bool decide = unfair || justified;
  if (decide && rule.environment_gate)
    decide = (clamp_belief(agent.beliefs.perceived_environment) + 1.0) / 2.0 <
             agent.thresholds.environment;
  return decide;
}

}  // namespace metarole
