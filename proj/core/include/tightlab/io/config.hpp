#pragma once

// Pipeline configuration: one INI file with a section per module.
//
//   [paths]        input CSVs, calibration JSON and the output directory
//   [simulation]   synthetic economy (EconomyConfig field names)
//   [tightness]    notification-share gross-up and flow adjustment switches
//   [zones]        threshold grid and contiguity handling
//   [estimation]   lag, fixed effects, cluster key, base year, instrument options
//   [policy]       minimum-wage and counterfactual inputs
//   [run]          seed
//
// Unknown keys are rejected so that typos do not silently fall back to defaults.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tightlab/market_sim.hpp"
#include "tightlab/policy.hpp"
#include "tightlab/shift_share.hpp"
#include "tightlab/zones.hpp"

namespace tightlab::io {

struct PathSettings {
  std::string firm_panel = "firm_panel.csv";
  std::string markets = "markets.csv";
  std::string notification_shares = "notification_shares.csv";
  std::string transitions = "transitions.csv";
  std::string occupation_employment = "occupation_employment.csv";
  std::string commuting = "commuting.csv";
  std::string labor_force = "labor_force.csv";
  std::string region_employment = "region_employment.csv";
  std::string region_markets = "region_markets.csv";
  std::string zones;  // optional region -> zone map for clustering and feedback regressions
  std::string calibration = "calibration.json";
  std::string employment_series = "employment_series.csv";
  std::string tightness_series = "tightness_series.csv";
  std::string output_dir = "out";
};

struct TightnessSettings {
  bool notification_shares = true;
  bool flow_adjustment = false;
  double flow_warn_above = 100.0;
};

struct ZoneSettings {
  double threshold_lo = 0.01;
  double threshold_hi = 0.50;
  double threshold_step = 0.01;
  std::string contiguity = "none";  // none | split | attach
};

struct EstimationSettings {
  int lag = 2;
  std::vector<std::string> fixed_effects{"year"};
  std::string cluster = "firm";
  std::string weights;  // empty, or "employment" for base-period employment weights
  bool small_sample = true;
  double weak_instrument_f = 10.0;
  Year base_year = 0;         // 0: first year in the panel
  Year estimation_start = 0;  // 0: base year + 1
  shiftshare::WageWeighting wage_weighting = shiftshare::WageWeighting::Employment;
  double missing_share_cap = 0.05;
  bool feedback = true;     // run the regional feedback regressions when region files exist
  bool concessions = true;  // run the wage and skill concession regressions
};

struct MinWageSettings {
  policy::Estimate elasticity{-0.494, 0.022};
  policy::Estimate wage_effect{0.0069, 0.00004};
  double workforce = 19717863.0;
  std::size_t draws = 10000;
};

struct CounterfactualSettings {
  bool enabled = true;
  Year base_year = 2012;
  policy::CounterfactualMode mode = policy::CounterfactualMode::CumulativeLog;
  std::size_t draws = 1000;
  // per worker group: eta_theta and its SE, keyed by the group name in employment_series
  std::vector<std::pair<std::string, policy::Estimate>> eta_theta{
      {"full_time", {-0.048, 0.002}}, {"part_time", {-0.043, 0.002}}};
};

struct PolicySettings {
  MinWageSettings minwage;
  CounterfactualSettings counterfactual;
};

struct PipelineConfig {
  PathSettings paths;
  sim::EconomyConfig simulation;
  TightnessSettings tightness;
  ZoneSettings zones;
  EstimationSettings estimation;
  PolicySettings policy;
  std::uint64_t seed = 1;
  std::string base_dir;  // directory of the config file; relative paths resolve against it

  void validate() const;
};

PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& text, const std::string& source = "<config>");

// Applies a seed to every seeded component.
void apply_seed(PipelineConfig& cfg, std::uint64_t seed);

// Documented defaults in INI form, used by --help and `--print-config`.
std::string default_config_text();

// Resolves a path relative to the directory of the config file (or as given when absolute).
std::string resolve(const PipelineConfig& cfg, const std::string& path);

zones::ContiguityMode parse_contiguity(const std::string& text);

}  // namespace tightlab::io
