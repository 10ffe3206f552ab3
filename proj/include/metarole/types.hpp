#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metarole {

// Errors ---------------------------------------------------------------------

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Roles ----------------------------------------------------------------------

enum class MetaRole : std::uint8_t { Commander, Knowledge, Skill, Worker };

inline constexpr std::string_view to_string(MetaRole r) {
  switch (r) {
    case MetaRole::Commander: return "C";
    case MetaRole::Knowledge: return "K";
    case MetaRole::Skill: return "S";
    case MetaRole::Worker: return "W";
  }
  return "?";
}

/// Formal meta-role plus any self-assigned (internalised) ones.
///
/// Skill is never a formal role: rule interpretation only shows up as an
/// internalised facet of monitors and managers.
class RoleSet {
 public:
  explicit RoleSet(MetaRole formal = MetaRole::Worker) { set_formal(formal); }

  MetaRole formal() const { return formal_; }

  void set_formal(MetaRole r) {
    if (r == MetaRole::Skill) throw DomainError("Skill cannot be a formal meta-role");
    formal_ = r;
    internalised_.erase(r);
  }

  const std::set<MetaRole>& internalised() const { return internalised_; }

  void internalise(MetaRole r) {
    if (r != formal_) internalised_.insert(r);
  }
  void drop(MetaRole r) { internalised_.erase(r); }

  bool has(MetaRole r) const { return r == formal_ || internalised_.count(r) != 0; }

  std::set<MetaRole> effective() const {
    auto all = internalised_;
    all.insert(formal_);
    return all;
  }

  bool operator==(const RoleSet&) const = default;

 private:
  MetaRole formal_ = MetaRole::Worker;
  std::set<MetaRole> internalised_;
};

// Agent state ----------------------------------------------------------------

struct Beliefs {
  double perceived_fairness = 0.0;     // [-1, 1]
  double perceived_environment = 0.0;  // [-1, 1]
  bool operator==(const Beliefs&) const = default;
};

struct Thresholds {
  double dissonance = 0.5;       // [0, 1]
  double environment = 0.5;      // [0, 1]
  double fairness_thresh = 0.5;  // [0, 1]
  double justif_thresh = 0.5;    // [0, 1]
  double report_tolerance = 0.5; // violation-cost units
  double tol_punish = 0.15;      // violation-cost units, only read for managers
  bool operator==(const Thresholds&) const = default;
};

enum class Status : std::uint8_t { New, Experienced };

using AgentId = std::uint32_t;

struct Agent {
  AgentId id = 0;
  RoleSet roles;
  Status status = Status::New;
  int experience = 0;
  Beliefs beliefs;
  Thresholds thresholds;
  bool private_trade = false;
  bool volunteer_monitor = false;
  double violation_cost_this_year = 0.0;
  std::set<AgentId> friends;
  bool alive = true;

  int age() const { return experience + 15; }
  bool operator==(const Agent&) const = default;
};

inline constexpr int kEntryAge = 15;

// Configuration --------------------------------------------------------------

enum class MortalityKind : std::uint8_t { Harsh, Benign };

/// Gompertz-style yearly hazard: min(1, scale * exp(growth * (age - 15))),
/// forced to 1 at `cap_age`.
struct MortalityProfile {
  MortalityKind kind = MortalityKind::Harsh;
  double hazard_scale = 0.0;
  double hazard_growth = 0.0;
  int cap_age = 90;
  bool operator==(const MortalityProfile&) const = default;
};

// Calibrated against the analytic mean death age (35 harsh, 60 benign) for
// recruits entering at 15; see `calibrate_hazard_scale`.
inline constexpr double kDefaultHazardGrowth = 0.08;
inline constexpr double kHarshHazardScale = 0.01356;
inline constexpr double kBenignHazardScale = 0.0013;

inline MortalityProfile harsh_mortality() {
  return {MortalityKind::Harsh, kHarshHazardScale, kDefaultHazardGrowth, 90};
}
inline MortalityProfile benign_mortality() {
  return {MortalityKind::Benign, kBenignHazardScale, kDefaultHazardGrowth, 90};
}

enum class ReportRouting : std::uint8_t { Random, RoundRobin };

struct SocietyConfig {
  std::string label = "E0F0";
  bool environment_benign = false;
  bool institutions_fair = false;
  double fairness_constant = -0.4;
  int population = 500;
  double director_fraction = 0.02;
  double manager_fraction = 0.05;
  int board_size = 11;
  double vote_threshold = 0.70;
  int reform_year = 70;
  int total_years = 250;
  int max_punish = 5;
  double fired_fraction = 0.30;  // upper bound of the per-manager TolPunish draw
  double past_weight = 0.30;
  int network_degree = 10;
  double monitoring_init_prob = 0.5;
  int experience_gate = 3;
  MortalityProfile mortality = harsh_mortality();

  // Engine knobs without a value in the original model.
  double observation_noise = 0.1;         // half-width of the fairness/env signal noise
  double environment_signal = 0.5;        // |signal| for benign (+) / harsh (-)
  double wage_cut_penalty = 0.1;          // fairness drop when trade is legalised
  double residual_violation_prob = 0.05;  // yearly non-trade violation chance
  bool literal_justif_comparison = false;
  bool environment_gate = false;
  ReportRouting report_routing = ReportRouting::Random;

  int manager_count() const {
    return static_cast<int>(manager_fraction * population + 0.5);
  }
  int worker_count() const { return population - board_size - manager_count(); }

  bool operator==(const SocietyConfig&) const = default;
};

inline void validate(const SocietyConfig& c) {
  auto fail = [&](const std::string& what) {
    throw ConfigError("society " + c.label + ": " + what);
  };
  if (c.population <= 0) fail("population must be > 0");
  if (c.board_size <= 0) fail("board_size must be > 0");
  if (c.director_fraction < 0 || c.manager_fraction < 0 ||
      c.director_fraction + c.manager_fraction >= 1.0)
    fail("director_fraction + manager_fraction must be < 1");
  if (c.population < c.board_size + c.manager_count())
    fail("population smaller than board_size + managers");
  if (!(c.vote_threshold > 0.0 && c.vote_threshold <= 1.0)) fail("vote_threshold must be in (0,1]");
  if (c.fairness_constant < -1.0 || c.fairness_constant > 1.0)
    fail("fairness_constant must be in [-1,1]");
  if (c.total_years < 0) fail("total_years must be >= 0");
  if (c.max_punish < 0) fail("max_punish must be >= 0");
  if (c.fired_fraction < 0 || c.fired_fraction > 1) fail("fired_fraction must be in [0,1]");
  if (c.past_weight < 0 || c.past_weight > 1) fail("past_weight must be in [0,1]");
  if (c.network_degree < 0) fail("network_degree must be >= 0");
  if (c.monitoring_init_prob < 0 || c.monitoring_init_prob > 1)
    fail("monitoring_init_prob must be in [0,1]");
  if (c.observation_noise < 0) fail("observation_noise must be >= 0");
  if (c.residual_violation_prob < 0 || c.residual_violation_prob > 1)
    fail("residual_violation_prob must be in [0,1]");
  if (c.mortality.hazard_scale < 0 || c.mortality.hazard_growth < 0)
    fail("mortality hazard parameters must be >= 0");
  if (c.mortality.cap_age <= kEntryAge) fail("mortality cap_age must be > 15");
}

inline const std::vector<std::string>& society_labels() {
  static const std::vector<std::string> labels{"E0F0", "E0F1", "E1F0", "E1F1"};
  return labels;
}

/// Built-in defaults for one of the four environment/fairness societies.
inline SocietyConfig default_config(std::string_view label) {
  if (label.size() != 4 || label[0] != 'E' || label[2] != 'F' ||
      (label[1] != '0' && label[1] != '1') || (label[3] != '0' && label[3] != '1'))
    throw ConfigError("unknown society label '" + std::string(label) + "'");
  SocietyConfig c;
  c.label = std::string(label);
  c.environment_benign = label[1] == '1';
  c.institutions_fair = label[3] == '1';
  c.fairness_constant = c.institutions_fair ? 0.6 : -0.4;
  c.mortality = c.environment_benign ? benign_mortality() : harsh_mortality();
  return c;
}

// Results --------------------------------------------------------------------

struct YearlyStats {
  int year = 0;
  double pct_cheaters_fired = 0.0;
  double pct_volunteer_monitors = 0.0;
  int n_private_traders = 0;
  bool permission_granted = false;
  int n_deaths = 0;
  int n_fired = 0;
  // Headcounts right after hiring and promotion; not serialised.
  int n_commanders = 0;
  int n_managers = 0;
  int n_workers = 0;
  bool operator==(const YearlyStats&) const = default;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::string society_label;
  std::vector<YearlyStats> series;
  bool permission_ever_granted = false;
  std::optional<int> permission_year;
  bool operator==(const RunResult&) const = default;
};

}  // namespace metarole
