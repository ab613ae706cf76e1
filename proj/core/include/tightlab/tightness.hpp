#pragma once

// Market-level and firm-specific labor market tightness: notification-share gross-up of
// registered vacancies, share-weighted firm tightness and the flow-adjusted variant that
// counts vacancies and job seekers in neighboring occupations.

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tightlab/panel.hpp"

namespace tightlab::tightness {

enum class RequirementLevel { Helper = 1, Professional = 2, Specialist = 3, Expert = 4 };

// Buckets used by notification shares; specialists and experts are pooled.
enum class NotificationLevel { Helper, Professional, SpecialistExpert };

// Reads the fifth digit of a 5-digit occupation code.
RequirementLevel requirement_level(std::string_view occupation_code);
NotificationLevel notification_bucket(RequirementLevel level);
NotificationLevel notification_bucket(std::string_view occupation_code);

std::string to_string(NotificationLevel level);
NotificationLevel parse_notification_level(std::string_view text);

class NotificationShares {
public:
  // Throws InvalidArgument unless share lies in (0, 1].
  void set(Year year, NotificationLevel level, double share);
  std::optional<double> find(Year year, NotificationLevel level) const;
  // Throws InvalidArgument when missing.
  double at(Year year, NotificationLevel level) const;

  bool empty() const noexcept { return shares_.empty(); }
  const std::map<std::pair<Year, NotificationLevel>, double>& entries() const noexcept {
    return shares_;
  }

private:
  std::map<std::pair<Year, NotificationLevel>, double> shares_;
};

// registered / share(year, level)
double total_vacancies(double registered, const NotificationShares& shares, Year year,
                       NotificationLevel level);

// V / U, or nullopt when there are no job seekers.
std::optional<double> market_tightness(const MarketCell& cell);

struct FirmTightness {
  std::optional<double> value;  // nullopt when no share mass has a defined ratio
  double dropped_share = 0.0;   // share mass sitting on undefined cells
};

// Share-weighted sum of per-occupation V/U ratios. Undefined ratios are dropped and the
// remaining shares renormalized; the dropped mass is reported.
FirmTightness firm_tightness(std::span<const double> shares,
                             std::span<const std::optional<double>> ratios);

struct TransitionMatrix {
  std::vector<OccupationCode> occupations;
  Eigen::MatrixXd probability;  // row o: P(h | o)
  Eigen::VectorXd employment;   // L_o

  void validate() const;
  std::size_t size() const noexcept { return occupations.size(); }
};

// Sums per-region/per-year transition counts before row-normalizing.
TransitionMatrix pool_transitions(const std::vector<OccupationCode>& occupations,
                                  std::span<const Eigen::MatrixXd> counts,
                                  const Eigen::VectorXd& employment);

struct FlowWeights {
  std::vector<OccupationCode> occupations;
  Eigen::MatrixXd weight;             // omega(o, h), omega(o, o) == 1
  std::vector<std::string> warnings;  // entries above the configured threshold

  std::size_t size() const noexcept { return occupations.size(); }
  std::optional<std::size_t> index_of(std::string_view occupation) const;
};

// omega(o, h) = (P(h|o) / P(o|o)) * (L_o / L_h)
FlowWeights flow_weights(const TransitionMatrix& tm, double warn_above = 100.0);

struct AdjustedStocks {
  Eigen::VectorXd vacancies;
  Eigen::VectorXd job_seekers;
};

// V~_o = sum_h omega(o, h) V_h and likewise for U, summed left to right.
AdjustedStocks flow_adjusted_stocks(const FlowWeights& weights, const Eigen::VectorXd& vacancies,
                                    const Eigen::VectorXd& job_seekers);

// Firm tightness over adjusted stocks; shares are indexed like the weight matrix.
FirmTightness flow_adjusted_firm_tightness(const Eigen::VectorXd& shares,
                                           const AdjustedStocks& stocks);

struct MarketTightnessRow {
  OccupationCode occupation;
  RegionId region = 0;
  Year year = 0;
  double registered_vacancies = 0.0;
  double share_used = 1.0;
  double total_vacancies = 0.0;
  double job_seekers = 0.0;
  double adjusted_vacancies = 0.0;
  double adjusted_job_seekers = 0.0;
  std::optional<double> tightness;
};

// Builds per-cell tightness. Notification shares gross up registered vacancies when
// given; flow weights adjust stocks within each region-year when given. Occupations
// missing from a region-year count as zero stocks for the adjustment.
std::vector<MarketTightnessRow> build_market_tightness(const std::vector<MarketCell>& cells,
                                                       const NotificationShares* shares,
                                                       const FlowWeights* flows);

struct FirmTightnessRow {
  FirmId firm = 0;
  Year year = 0;
  RegionId region = 0;
  std::optional<double> tightness;
  double dropped_share = 0.0;
};

// Contemporaneous-share firm tightness for every firm-year. Uses adjusted stocks (which
// equal raw totals when no flow adjustment was applied).
std::vector<FirmTightnessRow> build_firm_tightness(const std::vector<FirmYear>& firms,
                                                   const std::vector<MarketTightnessRow>& markets);

}  // namespace tightlab::tightness
