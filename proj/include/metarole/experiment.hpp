#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "metarole/engine.hpp"
#include "metarole/types.hpp"

namespace metarole {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BatchSpec {
  std::vector<SocietyConfig> societies;
  int runs_per_society = 30;
  std::uint64_t base_seed = 42;
  std::filesystem::path output_dir;  // empty: nothing written
  unsigned jobs = 0;                 // 0: hardware concurrency
};

// Per-year means across runs. `permission_share` is the fraction of runs
// with trade legal in that year.
struct MeanYearlyStats {
  int year = 0;
  double pct_cheaters_fired = 0.0;
  double pct_volunteer_monitors = 0.0;
  double n_private_traders = 0.0;
  double permission_share = 0.0;
  double n_deaths = 0.0;
  double n_fired = 0.0;
};

struct Aggregate {
  double permission_rate = 0.0;
  std::vector<MeanYearlyStats> mean_series;
};

struct SocietySummary {
  std::string label;
  int runs = 0;
  int reform_year = 0;
  double permission_rate = 0.0;
  double mean_pct_fired_pre_reform = 0.0;
  double mean_pct_fired_post_reform = 0.0;
  std::vector<MeanYearlyStats> mean_series;
  std::vector<RunResult> results;  // ordered by run index
};

struct GridSummary {
  std::vector<SocietySummary> per_society;  // in BatchSpec order

  const SocietySummary& at(const std::string& label) const {
    for (const auto& s : per_society)
      if (s.label == label) return s;
    throw std::out_of_range("no society " + label);
  }
};

/// Arithmetic mean per year per metric, plus the share of granted runs.
inline Aggregate aggregate(const std::vector<RunResult>& results) {
  if (results.empty()) throw std::invalid_argument("aggregate over no runs");
  const std::size_t len = results.front().series.size();
  for (const auto& r : results)
    if (r.series.size() != len) throw std::invalid_argument("runs have different series lengths");

  Aggregate a;
  const double n = static_cast<double>(results.size());
  int granted = 0;
  for (const auto& r : results) granted += r.permission_ever_granted ? 1 : 0;
  a.permission_rate = granted / n;
  a.mean_series.resize(len);
  for (std::size_t t = 0; t < len; ++t) {
    MeanYearlyStats& m = a.mean_series[t];
    m.year = results.front().series[t].year;
    for (const auto& r : results) {
      const YearlyStats& y = r.series[t];
      m.pct_cheaters_fired += y.pct_cheaters_fired;
      m.pct_volunteer_monitors += y.pct_volunteer_monitors;
      m.n_private_traders += y.n_private_traders;
      m.permission_share += y.permission_granted ? 1.0 : 0.0;
      m.n_deaths += y.n_deaths;
      m.n_fired += y.n_fired;
    }
    m.pct_cheaters_fired /= n;
    m.pct_volunteer_monitors /= n;
    m.n_private_traders /= n;
    m.permission_share /= n;
    m.n_deaths /= n;
    m.n_fired /= n;
  }
  return a;
}

// Serialisation ---------------------------------------------------------------

inline constexpr const char* kRunCsvHeader =
    "year,pct_cheaters_fired,pct_volunteer_monitors,n_private_traders,permission_granted,"
    "n_deaths,n_fired";
inline constexpr const char* kSummaryCsvHeader =
    "society,runs,permission_rate,mean_pct_fired_pre70,mean_pct_fired_post70";

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline void write_run_csv(std::ostream& os, const RunResult& r) {
  os << kRunCsvHeader << '\n';
  for (const auto& y : r.series) {
    os << y.year << ',' << fixed6(y.pct_cheaters_fired) << ',' << fixed6(y.pct_volunteer_monitors)
       << ',' << y.n_private_traders << ',' << (y.permission_granted ? 1 : 0) << ','
       << y.n_deaths << ',' << y.n_fired << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const GridSummary& g) {
  os << kSummaryCsvHeader << '\n';
  for (const auto& s : g.per_society)
    os << s.label << ',' << s.runs << ',' << fixed6(s.permission_rate) << ','
       << fixed6(s.mean_pct_fired_pre_reform) << ',' << fixed6(s.mean_pct_fired_post_reform)
       << '\n';
}

inline nlohmann::ordered_json summary_json(const GridSummary& g, const BatchSpec& spec) {
  nlohmann::ordered_json j;
  j["base_seed"] = spec.base_seed;
  j["runs_per_society"] = spec.runs_per_society;
  auto& arr = j["societies"] = nlohmann::ordered_json::array();
  for (const auto& s : g.per_society) {
    nlohmann::ordered_json e;
    e["society"] = s.label;
    e["runs"] = s.runs;
    e["reform_year"] = s.reform_year;
    e["permission_rate"] = s.permission_rate;
    e["mean_pct_fired_pre70"] = s.mean_pct_fired_pre_reform;
    e["mean_pct_fired_post70"] = s.mean_pct_fired_post_reform;
    auto& runs = e["runs_detail"] = nlohmann::ordered_json::array();
    for (const auto& r : s.results) {
      nlohmann::ordered_json rj;
      rj["seed"] = r.seed;
      rj["permission_granted"] = r.permission_ever_granted;
      rj["permission_year"] = r.permission_year ? nlohmann::ordered_json(*r.permission_year)
                                                : nlohmann::ordered_json(nullptr);
      runs.push_back(std::move(rj));
    }
    auto& ms = e["mean_series"];
    for (const char* key : {"pct_cheaters_fired", "pct_volunteer_monitors", "n_private_traders",
                            "permission_share", "n_deaths", "n_fired"})
      ms[key] = nlohmann::ordered_json::array();
    for (const auto& m : s.mean_series) {
      ms["pct_cheaters_fired"].push_back(m.pct_cheaters_fired);
      ms["pct_volunteer_monitors"].push_back(m.pct_volunteer_monitors);
      ms["n_private_traders"].push_back(m.n_private_traders);
      ms["permission_share"].push_back(m.permission_share);
      ms["n_deaths"].push_back(m.n_deaths);
      ms["n_fired"].push_back(m.n_fired);
    }
    arr.push_back(std::move(e));
  }
  return j;
}

inline std::filesystem::path run_csv_path(const std::filesystem::path& out, const std::string& label,
                                          std::uint64_t seed) {
  return out / label / ("run_" + std::to_string(seed) + ".csv");
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + p.string());
  f << content;
  if (!f) throw IoError("write failed for " + p.string());
}

/// Creates `dir` (and per-society subdirectories) and checks it accepts files.
inline void prepare_output_dir(const std::filesystem::path& dir, const std::vector<std::string>& labels) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
  for (const auto& l : labels) {
    std::filesystem::create_directories(dir / l, ec);
    if (ec) throw IoError("cannot create " + (dir / l).string());
  }
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f || !(f << "ok")) throw IoError("output directory not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

// Batch runner ----------------------------------------------------------------

/// Runs every society `runs_per_society` times with seeds base_seed + i.
/// Results are placed by (society, run) index, so thread scheduling never
/// affects the output.
inline GridSummary run_batch(const BatchSpec& spec) {
  if (spec.runs_per_society < 1) throw ConfigError("runs_per_society must be >= 1");
  if (spec.societies.empty()) throw ConfigError("no societies in batch");
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& c : spec.societies) {
    validate(c);
    if (!seen.insert(c.label).second) throw ConfigError("duplicate society label " + c.label);
    labels.push_back(c.label);
  }
  const bool write = !spec.output_dir.empty();
  if (write) prepare_output_dir(spec.output_dir, labels);

  const std::size_t n_soc = spec.societies.size();
  const std::size_t n_runs = static_cast<std::size_t>(spec.runs_per_society);
  std::vector<std::vector<RunResult>> results(n_soc, std::vector<RunResult>(n_runs));

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto work = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_soc * n_runs) return;
      const std::size_t si = task / n_runs;
      const std::size_t ri = task % n_runs;
      try {
        const auto& cfg = spec.societies[si];
        const std::uint64_t seed = spec.base_seed + ri;
        RunResult r = run_society(cfg, seed);
        if (write) {
          std::ostringstream os;
          write_run_csv(os, r);
          write_file(run_csv_path(spec.output_dir, cfg.label, seed), os.str());
        }
        results[si][ri] = std::move(r);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(n_soc * n_runs);
      }
    }
  };
  unsigned jobs = spec.jobs ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n_soc * n_runs));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < jobs; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  GridSummary g;
  for (std::size_t si = 0; si < n_soc; ++si) {
    const auto& cfg = spec.societies[si];
    auto agg = aggregate(results[si]);
    SocietySummary s;
    s.label = cfg.label;
    s.runs = spec.runs_per_society;
    s.reform_year = cfg.reform_year;
    s.permission_rate = agg.permission_rate;
    double pre = 0, post = 0;
    int n_pre = 0, n_post = 0;
    for (const auto& m : agg.mean_series) {
      if (m.year < cfg.reform_year) {
        pre += m.pct_cheaters_fired;
        ++n_pre;
      } else {
        post += m.pct_cheaters_fired;
        ++n_post;
      }
    }
    s.mean_pct_fired_pre_reform = n_pre ? pre / n_pre : 0.0;
    s.mean_pct_fired_post_reform = n_post ? post / n_post : 0.0;
    s.mean_series = std::move(agg.mean_series);
    s.results = std::move(results[si]);
    g.per_society.push_back(std::move(s));
  }

  if (write) {
    std::ostringstream csv;
    write_summary_csv(csv, g);
    write_file(spec.output_dir / "summary.csv", csv.str());
    write_file(spec.output_dir / "summary.json", summary_json(g, spec).dump(2) + "\n");
  }
  return g;
}

}  // namespace metarole
