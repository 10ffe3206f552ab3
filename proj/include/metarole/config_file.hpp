#pragma once

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "metarole/types.hpp"

// Flat key=value overrides grouped by `[society.LABEL]` sections. Keys that
// appear before any section, or under `[all]`, apply to every society.
//
//   # comment
//   network_degree = 8
//   [society.E0F0]
//   max_punish = 3
//   mortality.hazard_scale = 0.012

namespace metarole {

namespace config_detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("key '" + key + "': not a number: '" + std::string(v) + "'");
  return out;
}

inline int parse_int(const std::string& key, std::string_view v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("key '" + key + "': not an integer: '" + std::string(v) + "'");
  return out;
}

inline bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError("key '" + key + "': not a boolean: '" + std::string(v) + "'");
}

inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace config_detail

struct ConfigKey {
  std::string name;
  std::function<void(SocietyConfig&, std::string_view)> set;
  std::function<std::string(const SocietyConfig&)> get;
};

inline const std::vector<ConfigKey>& config_keys() {
  using namespace config_detail;
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    auto real = [&](const char* name, double SocietyConfig::*field) {
      k.push_back({name, [=](SocietyConfig& c, std::string_view v) { c.*field = parse_double(name, v); },
                   [=](const SocietyConfig& c) { return format_double(c.*field); }});
    };
    auto integer = [&](const char* name, int SocietyConfig::*field) {
      k.push_back({name, [=](SocietyConfig& c, std::string_view v) { c.*field = parse_int(name, v); },
                   [=](const SocietyConfig& c) { return std::to_string(c.*field); }});
    };
    auto flag = [&](const char* name, bool SocietyConfig::*field) {
      k.push_back({name, [=](SocietyConfig& c, std::string_view v) { c.*field = parse_bool(name, v); },
                   [=](const SocietyConfig& c) { return std::string(c.*field ? "1" : "0"); }});
    };
    flag("environment_benign", &SocietyConfig::environment_benign);
    flag("institutions_fair", &SocietyConfig::institutions_fair);
    real("fairness_constant", &SocietyConfig::fairness_constant);
    integer("population", &SocietyConfig::population);
    real("director_fraction", &SocietyConfig::director_fraction);
    real("manager_fraction", &SocietyConfig::manager_fraction);
    integer("board_size", &SocietyConfig::board_size);
    real("vote_threshold", &SocietyConfig::vote_threshold);
    integer("reform_year", &SocietyConfig::reform_year);
    integer("total_years", &SocietyConfig::total_years);
    integer("max_punish", &SocietyConfig::max_punish);
    real("fired_fraction", &SocietyConfig::fired_fraction);
    real("past_weight", &SocietyConfig::past_weight);
    integer("network_degree", &SocietyConfig::network_degree);
    real("monitoring_init_prob", &SocietyConfig::monitoring_init_prob);
    integer("experience_gate", &SocietyConfig::experience_gate);
    k.push_back({"mortality.kind",
                 [](SocietyConfig& c, std::string_view v) {
                   if (v == "harsh")
                     c.mortality = harsh_mortality();
                   else if (v == "benign")
                     c.mortality = benign_mortality();
                   else
                     throw ConfigError("key 'mortality.kind': expected harsh or benign, got '" +
                                       std::string(v) + "'");
                 },
                 [](const SocietyConfig& c) {
                   return std::string(c.mortality.kind == MortalityKind::Harsh ? "harsh" : "benign");
                 }});
    k.push_back({"mortality.hazard_scale",
                 [](SocietyConfig& c, std::string_view v) {
                   c.mortality.hazard_scale = parse_double("mortality.hazard_scale", v);
                 },
                 [](const SocietyConfig& c) { return format_double(c.mortality.hazard_scale); }});
    k.push_back({"mortality.hazard_growth",
                 [](SocietyConfig& c, std::string_view v) {
                   c.mortality.hazard_growth = parse_double("mortality.hazard_growth", v);
                 },
                 [](const SocietyConfig& c) { return format_double(c.mortality.hazard_growth); }});
    k.push_back({"mortality.cap_age",
                 [](SocietyConfig& c, std::string_view v) {
                   c.mortality.cap_age = parse_int("mortality.cap_age", v);
                 },
                 [](const SocietyConfig& c) { return std::to_string(c.mortality.cap_age); }});
    real("observation_noise", &SocietyConfig::observation_noise);
    real("environment_signal", &SocietyConfig::environment_signal);
    real("wage_cut_penalty", &SocietyConfig::wage_cut_penalty);
    real("residual_violation_prob", &SocietyConfig::residual_violation_prob);
    flag("literal_justif_comparison", &SocietyConfig::literal_justif_comparison);
    flag("environment_gate", &SocietyConfig::environment_gate);
    k.push_back({"report_routing",
                 [](SocietyConfig& c, std::string_view v) {
                   if (v == "random")
                     c.report_routing = ReportRouting::Random;
                   else if (v == "round_robin")
                     c.report_routing = ReportRouting::RoundRobin;
                   else
                     throw ConfigError("key 'report_routing': expected random or round_robin, got '" +
                                       std::string(v) + "'");
                 },
                 [](const SocietyConfig& c) {
                   return std::string(c.report_routing == ReportRouting::Random ? "random" : "round_robin");
                 }});
    return k;
  }();
  return keys;
}

inline void set_config_key(SocietyConfig& c, const std::string& key, std::string_view value) {
  for (const auto& k : config_keys()) {
    if (k.name == key) {
      k.set(c, value);
      return;
    }
  }
  throw ConfigError("unknown key '" + key + "'");
}

/// Writes every key in config-file syntax under a `[society.LABEL]` header,
/// so the output can be fed back through `--config`.
inline void print_config(std::ostream& os, const SocietyConfig& c) {
  os << "[society." << c.label << "]\n";
  for (const auto& k : config_keys()) os << k.name << " = " << k.get(c) << '\n';
}

struct ConfigOverrides {
  // Section name ("" for global) -> ordered (key, value, line) entries.
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::vector<Entry>> sections;
  std::string source = "<config>";
};

inline ConfigOverrides parse_config_text(std::string_view text, std::string source = "<config>") {
  using config_detail::trim;
  ConfigOverrides out;
  out.source = std::move(source);
  std::string section;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    auto where = [&] { return out.source + ":" + std::to_string(lineno) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "malformed section header");
      auto name = trim(line.substr(1, line.size() - 2));
      if (name == "all") {
        section.clear();
      } else if (name.substr(0, 8) == "society.") {
        section = std::string(name.substr(8));
        try {
          default_config(section);
        } catch (const ConfigError& e) {
          throw ConfigError(where() + e.what());
        }
      } else {
        throw ConfigError(where() + "unknown section '" + std::string(name) + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    bool known = false;
    for (const auto& k : config_keys()) known = known || k.name == key;
    if (!known) throw ConfigError(where() + "unknown key '" + key + "'");
    out.sections[section].push_back({key, value, lineno});
  }
  return out;
}

inline ConfigOverrides load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

/// Applies global entries, then the society's own section.
inline void apply_overrides(SocietyConfig& c, const ConfigOverrides& o) {
  auto apply = [&](const std::vector<ConfigOverrides::Entry>& entries) {
    for (const auto& e : entries) {
      try {
        set_config_key(c, e.key, e.value);
      } catch (const ConfigError& err) {
        throw ConfigError(o.source + ":" + std::to_string(e.line) + ": " + err.what());
      }
    }
  };
  if (auto it = o.sections.find(""); it != o.sections.end()) apply(it->second);
  if (auto it = o.sections.find(c.label); it != o.sections.end()) apply(it->second);
}

// Command-line flags that override both defaults and the config file.
struct CliOverrides {
  std::optional<int> degree;
  bool literal_justif = false;
};

/// Built-in defaults, then the config file, then command-line flags.
inline SocietyConfig resolve_config(const std::string& label, const ConfigOverrides* file,
                                    const CliOverrides& cli) {
  SocietyConfig c = default_config(label);
  if (file) apply_overrides(c, *file);
  if (cli.degree) c.network_degree = *cli.degree;
  if (cli.literal_justif) c.literal_justif_comparison = true;
  validate(c);
  return c;
}

}  // namespace metarole
