#pragma once

// Downstream analyses built on the model and the estimator: hiring-cost calibration,
// minimum-wage employment effects with simulated standard errors, the DiDiD wage effect,
// counterfactual employment under frozen tightness and wage/skill concessions.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tightlab/dataset.hpp"
#include "tightlab/estimator.hpp"
#include "tightlab/panel.hpp"

namespace tightlab::policy {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

// Standard normal draw number `counter` of stream `stream`; a pure function of its
// arguments so parallel draws do not depend on scheduling.
double counter_normal(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream);

struct CalibrationInputs {
  double delta = 0.0;
  double r = 0.0;
  double eta_lw = 0.0;
  double eta_lt = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  std::optional<double> phi_over_w;  // reported value to compare against
  std::optional<double> nu;          // adds the aggregate elasticity when set
};

struct CalibrationResult {
  double phi_over_w = 0.0;
  double elasticity_ratio = 0.0;  // eta_lt / eta_lw
  std::optional<double> reported_gap;
  std::optional<double> omega;
  std::optional<double> aggregate_eta_lw;
  std::optional<double> shrinkage;
};

CalibrationResult calibrate(const CalibrationInputs& in);

struct MinWageInputs {
  Estimate elasticity;   // employment elasticity
  Estimate wage_effect;  // aggregate proportional wage change
  double workforce = 0.0;
  std::size_t draws = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 uses the hardware concurrency

  void validate() const;
};

struct MinWageResult {
  double employment_change = 0.0;  // point estimate
  double se = 0.0;                 // standard deviation across draws
  double draw_mean = 0.0;
  std::size_t draws = 0;
};

MinWageResult minwage_effect(const MinWageInputs& in);

// Exact SE of the product for independent normal inputs.
double minwage_analytic_se(const MinWageInputs& in);

// OLS of `outcome` on bite, cohort and bite x cohort; returns the interaction.
struct DididResult {
  Estimate beta;
  est::EstimateReport report;
};
DididResult didid_wage_effect(const est::Dataset& workers, const std::string& outcome = "d2ln_w",
                              const std::string& cluster = "");

enum class CounterfactualMode {
  CumulativeLog,    // f_t (1 - eta ln(theta_t / theta_base))
  CumulativeLevel,  // f_t (1 - eta (theta_t - theta_base) / theta_base)
  ChainedLog,       // f_t prod_s (1 - eta ln(theta_s / theta_{s-1}))
};
std::string to_string(CounterfactualMode mode);
CounterfactualMode parse_counterfactual_mode(const std::string& text);

struct WorkerGroup {
  std::string name;
  std::map<Year, double> employment;
  Estimate eta_theta;
};

struct CounterfactualInputs {
  std::vector<WorkerGroup> groups;
  std::map<Year, double> tightness;
  Year base_year = 0;
  CounterfactualMode mode = CounterfactualMode::CumulativeLog;
  std::size_t draws = 0;  // elasticity draws for the gap interval; 0 skips
  std::uint64_t seed = 1;
  double interval = 0.95;

  void validate() const;
};

struct CounterfactualPoint {
  Year year = 0;
  double factual = 0.0;
  double counterfactual = 0.0;
};

struct GroupPath {
  std::string name;
  std::vector<CounterfactualPoint> points;
  double gap = 0.0;  // counterfactual - factual in the last year
};

struct CounterfactualResult {
  std::vector<GroupPath> groups;
  std::vector<CounterfactualPoint> total;
  double gap = 0.0;
  std::optional<double> gap_se;
  std::optional<std::pair<double, double>> gap_interval;
};

CounterfactualResult counterfactual_employment(const CounterfactualInputs& in);

struct ConcessionSpec {
  std::string dln_w = "dln_w";
  std::string dln_theta = "dln_theta";
  std::string unskilled_share = "d_unskilled_share";
  std::string z_w = "z_w";
  std::string z_v = "z_v";
  std::string z_u = "z_u";
  std::vector<std::string> fixed_effects{"year"};
  std::string cluster = "firm";
};

struct ConcessionResult {
  est::EstimateReport wage;   // d ln W on d ln theta, instruments Z_V and Z_U
  est::EstimateReport skill;  // unskilled share on d ln theta and d ln W, all three instruments
};

ConcessionResult concession_regressions(const est::Dataset& data, const ConcessionSpec& spec = {});

}  // namespace tightlab::policy
