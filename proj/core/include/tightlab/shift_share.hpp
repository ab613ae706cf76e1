#pragma once

// Firm-level shift-share (Bartik) instruments: predetermined occupation shares
// interacted with national occupation-specific log growth.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tightlab/panel.hpp"

namespace tightlab::shiftshare {

// Base-year occupation shares for one unit (firm or region).
struct UnitShares {
  Year base_year = 0;
  std::map<OccupationCode, double> shares;
};

enum class ExclusionReason { BornInEstimationWindow, NoPositiveEmployment, NoLaterYears };
std::string to_string(ExclusionReason reason);

struct BaseShares {
  std::map<std::int64_t, UnitShares> units;
  std::map<std::int64_t, ExclusionReason> excluded;
};

struct BaseShareRule {
  Year base_year = 0;          // global base year
  Year estimation_start = 1;   // first year whose data may not inform shares
};

// Shares from each unit's first observed year at or after rule.base_year (its birth year
// if later). Units first observed at or after rule.estimation_start are excluded.
BaseShares base_year_shares(const FirmPanel& panel, const BaseShareRule& rule);
BaseShares base_year_shares(const std::vector<RegionEmploymentRecord>& panel,
                            const BaseShareRule& rule);

// Level of a national series per occupation and year.
using OccupationSeries = std::map<OccupationCode, std::map<Year, double>>;

// Log growth over `lag` years per occupation and year; missing when either level is absent
// or non-positive.
using GrowthSeries = std::map<OccupationCode, std::map<Year, double>>;

// Sums stocks over regions: vacancies (total) and job seekers.
struct NationalStocks {
  OccupationSeries vacancies;
  OccupationSeries job_seekers;
};
NationalStocks national_stocks(const std::vector<MarketCell>& cells);

enum class WageWeighting { Employment, Unweighted };

// National mean daily wage per occupation and year across firm records.
OccupationSeries national_wages(const FirmPanel& panel, WageWeighting weighting);

// National employment per occupation and year from a region x occupation panel.
OccupationSeries national_employment(const std::vector<RegionEmploymentRecord>& panel);

GrowthSeries log_growth(const OccupationSeries& levels, int lag);

struct NationalGrowth {
  GrowthSeries wage;
  GrowthSeries vacancies;
  GrowthSeries job_seekers;
  int lag = 1;
};

NationalGrowth national_growth(const FirmPanel& panel, const std::vector<MarketCell>& cells,
                               int lag, WageWeighting weighting = WageWeighting::Employment);

struct BartikOptions {
  double missing_share_cap = 0.05;  // share mass on missing growth that may be renormalized away
};

// Z_it = sum_o s_io * g_ot for every unit and every year after its base year that has at
// least one growth value. Missing (nullopt) when the missing mass exceeds the cap.
std::map<std::int64_t, std::map<Year, std::optional<double>>> bartik(
    const BaseShares& shares, const GrowthSeries& growth, const BartikOptions& opts = {});

struct InstrumentRow {
  FirmId firm = 0;
  Year year = 0;
  Year base_year = 0;
  std::optional<double> z_w;
  std::optional<double> z_v;
  std::optional<double> z_u;

  bool complete() const noexcept { return z_w && z_v && z_u; }
};

// Wage, vacancy and job-seeker instruments, ordered by (firm, year).
std::vector<InstrumentRow> build_instruments(const BaseShares& shares, const NationalGrowth& growth,
                                             const BartikOptions& opts = {});

}  // namespace tightlab::shiftshare
