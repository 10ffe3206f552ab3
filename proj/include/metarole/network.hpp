#pragma once

#include <algorithm>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "metarole/rng.hpp"
#include "metarole/types.hpp"

// Friend graph. Adjacency lives on the agents themselves (Agent::friends);
// every function here keeps it symmetric. `Lookup` is any callable
// AgentId -> Agent& (or const Agent& for the read-only queries).

namespace metarole {

struct Report {
  AgentId violator = 0;
  double cost = 0.0;
  bool operator==(const Report&) const = default;
};

/// Links `recruit` to min(degree, |population \ {recruit}|) distinct agents
/// drawn uniformly without replacement (partial Fisher-Yates over the
/// population in the given order). Returns the new friend ids.
template <typename Lookup>
std::set<AgentId> attach_recruit(AgentId recruit, std::span<const AgentId> population,
                                 int degree, Rng& rng, Lookup&& lookup) {
  std::vector<AgentId> pool;
  pool.reserve(population.size());
  for (AgentId id : population)
    if (id != recruit) pool.push_back(id);

  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(degree, 0)), pool.size());
  std::set<AgentId> chosen;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.index(pool.size() - i));
    std::swap(pool[i], pool[j]);
    chosen.insert(pool[i]);
  }
  Agent& self = lookup(recruit);
  for (AgentId f : chosen) {
    self.friends.insert(f);
    lookup(f).friends.insert(recruit);
  }
  return chosen;
}

/// Removes every edge touching `id`.
template <typename Lookup>
void detach(AgentId id, Lookup&& lookup) {
  Agent& self = lookup(id);
  for (AgentId f : self.friends) lookup(f).friends.erase(id);
  self.friends.clear();
}

/// Share of alive friends who trade privately; 0 with no alive friends.
template <typename Lookup>
double friend_trader_fraction(const Agent& agent, Lookup&& lookup) {
  int alive = 0;
  int traders = 0;
  for (AgentId f : agent.friends) {
    const Agent& other = lookup(f);
    if (!other.alive) continue;
    ++alive;
    traders += other.private_trade ? 1 : 0;
  }
  return alive == 0 ? 0.0 : static_cast<double>(traders) / alive;
}

/// Alive friends whose cost this year exceeds the monitor's tolerance,
/// ordered by descending cost, then ascending id.
template <typename Lookup>
std::vector<Report> observed_violators(const Agent& monitor, Lookup&& lookup) {
  std::vector<Report> out;
  for (AgentId f : monitor.friends) {
    const Agent& other = lookup(f);
    if (other.alive && other.violation_cost_this_year > monitor.thresholds.report_tolerance)
      out.push_back({f, other.violation_cost_this_year});
  }
  std::sort(out.begin(), out.end(), [](const Report& a, const Report& b) {
    return a.cost != b.cost ? a.cost > b.cost : a.violator < b.violator;
  });
  return out;
}

/// Plain `a,b` edge list with a < b, one edge per line, ascending.
inline void write_edge_list(std::ostream& os, std::span<const Agent> agents) {
  for (const Agent& a : agents) {
    if (!a.alive) continue;
    for (AgentId f : a.friends)
      if (a.id < f) os << a.id << ',' << f << '\n';
  }
}

}  // namespace metarole
