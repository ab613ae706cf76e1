#pragma once

// Long-format records shared by the simulator, the tightness builder, the instrument
// builder and the CSV layer.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tightlab {

using FirmId = std::int64_t;
using RegionId = std::int64_t;
using Year = int;
using OccupationCode = std::string;  // 5-digit classification code

// One firm x occupation x year observation.
struct FirmRecord {
  FirmId firm = 0;
  Year year = 0;
  OccupationCode occupation;
  RegionId region = 0;
  double employment = 0.0;
  double wage_daily = 0.0;

  bool operator==(const FirmRecord&) const = default;
};

using FirmPanel = std::vector<FirmRecord>;

// Occupation x region x year stocks. total_vacancies equals registered_vacancies until
// grossed up by notification shares.
struct MarketCell {
  OccupationCode occupation;
  RegionId region = 0;
  Year year = 0;
  double registered_vacancies = 0.0;
  double total_vacancies = 0.0;
  double job_seekers = 0.0;

  bool operator==(const MarketCell&) const = default;
};

// Firm-year aggregate: total employment, employment-weighted mean daily wage and
// occupation employment shares (sorted by occupation code).
struct FirmYear {
  FirmId firm = 0;
  Year year = 0;
  RegionId region = 0;
  double employment = 0.0;
  double wage = 0.0;
  std::vector<std::pair<OccupationCode, double>> shares;
};

// Aggregates a long panel by (firm, year). Output is ordered by (firm, year).
// Throws InvalidArgument when a firm appears in more than one region.
std::vector<FirmYear> aggregate_firm_years(const FirmPanel& panel);

// Region x occupation x year employment used by the feedback regressions.
struct RegionEmploymentRecord {
  RegionId region = 0;
  Year year = 0;
  OccupationCode occupation;
  double employment = 0.0;

  bool operator==(const RegionEmploymentRecord&) const = default;
};

// Region x year stocks used by the feedback regressions.
struct RegionMarketRecord {
  RegionId region = 0;
  Year year = 0;
  double vacancies = 0.0;
  double job_seekers = 0.0;

  bool operator==(const RegionMarketRecord&) const = default;
};

}  // namespace tightlab
