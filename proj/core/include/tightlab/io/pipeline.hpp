#pragma once

// Assembly of estimation datasets from the raw inputs and the per-subcommand drivers
// behind the command-line tool.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tightlab/dataset.hpp"
#include "tightlab/estimator.hpp"
#include "tightlab/io/config.hpp"
#include "tightlab/panel.hpp"
#include "tightlab/rotemberg.hpp"
#include "tightlab/shift_share.hpp"
#include "tightlab/tightness.hpp"

namespace tightlab::io {

struct FirmInputs {
  FirmPanel panel;
  std::vector<MarketCell> cells;
  std::optional<tightness::NotificationShares> notification_shares;
  std::optional<tightness::TransitionMatrix> transitions;
  std::optional<std::map<RegionId, std::int64_t>> zones;
};

// Differenced firm-year dataset: columns dln_l, dln_w, dln_theta, d_unskilled_share,
// base_l, z_w, z_v, z_u; keys firm, year, region, zone.
struct FirmDesign {
  est::Dataset data;
  std::size_t firm_years = 0;
  std::size_t dropped_without_lag = 0;
  shiftshare::BaseShares shares;
  shiftshare::NationalGrowth growth;
  std::vector<tightness::MarketTightnessRow> markets;
  std::vector<tightness::FirmTightnessRow> firm_tightness;
  std::vector<shiftshare::InstrumentRow> instruments;
  std::vector<std::string> warnings;
};

FirmDesign build_firm_design(const FirmInputs& in, const TightnessSettings& tight,
                             const EstimationSettings& es);

// One-year differenced region panel: columns dln_l, dln_theta, dln_u, z_l; keys region,
// zone, year. Z_L uses base-year occupation shares and national employment growth.
struct RegionDesign {
  est::Dataset data;
  std::size_t dropped_without_lag = 0;
};
RegionDesign build_region_design(const std::vector<RegionEmploymentRecord>& employment,
                                 const std::vector<RegionMarketRecord>& markets,
                                 const std::optional<std::map<RegionId, std::int64_t>>& zones = std::nullopt);

// Main specification: dln_l on dln_w and dln_theta, instruments z_w, z_v, z_u.
est::RegressionSpec main_spec(const EstimationSettings& es);

// OLS, reduced forms, 2SLS (and concessions / feedback when requested) as one document.
nlohmann::json estimate_document(const FirmDesign& design, const EstimationSettings& es,
                                 const RegionDesign* region, std::string* table = nullptr);

// One decomposition per instrument family: wage shares for dln_w, vacancy and job-seeker
// shares for dln_theta, each run as its own single-endogenous specification.
struct RotembergFamily {
  std::string family;
  std::string endogenous;
  est::RotembergReport report;
};
std::vector<RotembergFamily> rotemberg_families(const FirmDesign& design, const EstimationSettings& es);

policy::CalibrationInputs read_calibration(const std::string& path);

struct RunOptions {
  bool dry_run = false;
  std::ostream* out = nullptr;  // progress and results; std::cout when null
};

inline const std::vector<std::string> kSubcommands{
    "simulate", "delineate-zones", "build-tightness", "build-instruments",
    "estimate", "rotemberg",       "calibrate",       "policy"};

// Runs one subcommand. Throws on invalid inputs; returns the process exit status.
int run(const std::string& subcommand, const PipelineConfig& cfg, const RunOptions& opts = {});

}  // namespace tightlab::io
