#pragma once

#include <cstdint>
#include <vector>

#include "metarole/rng.hpp"
#include "metarole/types.hpp"

namespace metarole {

/// Everything one society needs to advance a year. Agents are stored by id
/// (id == index); departed agents stay in the table with `alive == false`.
struct SocietyState {
  SocietyConfig config;
  int year = 0;
  std::vector<Agent> agents;
  std::vector<AgentId> board;
  bool permission_private_trade = false;
  bool board_reformed = false;
  Rng rng{0};
  int last_year_attrition = 0;
  std::uint64_t round_robin_cursor = 0;

  Agent& at(AgentId id) { return agents.at(id); }
  const Agent& at(AgentId id) const { return agents.at(id); }

  // Ascending ids of alive agents holding `role` formally.
  std::vector<AgentId> alive_with_role(MetaRole role) const {
    std::vector<AgentId> out;
    for (const auto& a : agents)
      if (a.alive && a.roles.formal() == role) out.push_back(a.id);
    return out;
  }

  std::vector<AgentId> alive_ids() const {
    std::vector<AgentId> out;
    for (const auto& a : agents)
      if (a.alive) out.push_back(a.id);
    return out;
  }

  int alive_count() const {
    int n = 0;
    for (const auto& a : agents) n += a.alive ? 1 : 0;
    return n;
  }

  auto lookup() {
    return [this](AgentId id) -> Agent& { return agents.at(id); };
  }
  auto lookup() const {
    return [this](AgentId id) -> const Agent& { return agents.at(id); };
  }

  bool operator==(const SocietyState&) const = default;
};

}  // namespace metarole
