#pragma once

// Readers and writers for the pipeline's CSV files. Readers check the header exactly and
// report the first bad field as a SchemaError with its line and column.

#include <map>
#include <string>
#include <vector>

#include "tightlab/market_sim.hpp"
#include "tightlab/panel.hpp"
#include "tightlab/policy.hpp"
#include "tightlab/shift_share.hpp"
#include "tightlab/tightness.hpp"
#include "tightlab/zones.hpp"

namespace tightlab::io {

namespace header {
inline const std::vector<std::string> firm_panel{"firm_id", "year", "occupation", "region", "employment", "wage_daily"};
inline const std::vector<std::string> markets{"occupation", "region", "year", "registered_vacancies", "job_seekers"};
inline const std::vector<std::string> notification_shares{"year", "level", "share"};
inline const std::vector<std::string> transitions{"from_occupation", "to_occupation", "probability"};
inline const std::vector<std::string> occupation_employment{"occupation", "employment"};
inline const std::vector<std::string> commuting{"from_region", "to_region", "workers"};
inline const std::vector<std::string> labor_force{"region", "labor_force"};
inline const std::vector<std::string> region_employment{"region", "year", "occupation", "employment"};
inline const std::vector<std::string> region_markets{"region", "year", "vacancies", "job_seekers"};
inline const std::vector<std::string> zones{"region", "zone"};
inline const std::vector<std::string> market_tightness{
    "occupation", "region", "year", "registered_vacancies", "share_used", "total_vacancies",
    "job_seekers", "adjusted_vacancies", "adjusted_job_seekers", "tightness"};
inline const std::vector<std::string> firm_tightness{"firm_id", "year", "region", "tightness", "dropped_share"};
inline const std::vector<std::string> instruments{"firm_id", "year", "base_year", "z_w", "z_v", "z_u"};
inline const std::vector<std::string> employment_series{"group", "year", "employment"};
inline const std::vector<std::string> tightness_series{"year", "tightness"};
inline const std::vector<std::string> counterfactual{"group", "year", "factual", "counterfactual"};
}  // namespace header

FirmPanel read_firm_panel(const std::string& path);
std::string format_firm_panel(const FirmPanel& panel);

// total_vacancies is set equal to registered_vacancies.
std::vector<MarketCell> read_markets(const std::string& path);
std::string format_markets(const std::vector<MarketCell>& cells);

tightness::NotificationShares read_notification_shares(const std::string& path);
std::string format_notification_shares(const tightness::NotificationShares& shares);

// Occupation employment defines the occupation order; pairs missing from the transitions
// file have probability zero.
tightness::TransitionMatrix read_transitions(const std::string& transitions_path,
                                             const std::string& employment_path);
std::string format_transitions(const tightness::TransitionMatrix& tm);
std::string format_occupation_employment(const tightness::TransitionMatrix& tm);

struct RegionGraph {
  std::vector<RegionId> regions;  // node order of the graph
  zones::CommutingGraph graph;
};
RegionGraph read_commuting(const std::string& commuting_path, const std::string& labor_force_path);
std::string format_commuting(const std::vector<RegionId>& regions, const Eigen::MatrixXd& directed);
std::string format_labor_force(const std::vector<RegionId>& regions, const Eigen::VectorXd& labor_force);

std::vector<RegionEmploymentRecord> read_region_employment(const std::string& path);
std::string format_region_employment(const std::vector<RegionEmploymentRecord>& rows);
std::vector<RegionMarketRecord> read_region_markets(const std::string& path);
std::string format_region_markets(const std::vector<RegionMarketRecord>& rows);

std::map<RegionId, std::int64_t> read_zones(const std::string& path);
std::string format_zones(const std::vector<RegionId>& regions, const zones::Partition& partition);

std::string format_market_tightness(const std::vector<tightness::MarketTightnessRow>& rows);
std::string format_firm_tightness(const std::vector<tightness::FirmTightnessRow>& rows);
std::string format_instruments(const std::vector<shiftshare::InstrumentRow>& rows);
std::vector<shiftshare::InstrumentRow> read_instruments(const std::string& path);

// group -> year -> employment
std::map<std::string, std::map<Year, double>> read_employment_series(const std::string& path);
std::map<Year, double> read_tightness_series(const std::string& path);
std::string format_counterfactual(const policy::CounterfactualResult& result);

}  // namespace tightlab::io
