#pragma once

// Synthetic labor markets with known labor-demand elasticities.
//
// The firm block generates a long firm x occupation x year panel whose log employment
// moves exactly as
//
//   ln L_it - ln L_i0 = eta_lw (ln W_it - ln W_i0) + eta_lt (ln theta_it - ln theta_i0) + u_it
//
// where W_it is the firm's employment-weighted mean wage, theta_it is the firm-specific
// tightness built from the simulated market stocks, and u_it accumulates a latent
// productivity term that also raises the firm's wage (the OLS confound) plus noise.
//
// The region block generates a zone-level panel obeying the steady-state matching
// condition, so that d ln theta / d ln L = nu is known.

#include <cstdint>
#include <map>
#include <vector>

#include "tightlab/panel.hpp"
#include "tightlab/tightness.hpp"

namespace tightlab::sim {

struct MatchingParams {
  double kappa = 0.5;  // matching efficiency
  double mu = 0.46;    // elasticity of matches w.r.t. job seekers

  void validate() const;
};

// M = kappa * U^mu * V^(1 - mu)
double matches(double job_seekers, double vacancies, const MatchingParams& m);

// Tightness at which matches(U, theta * U) equals delta * L.
double steady_state_tightness(double delta, double employment, double kappa, double job_seekers,
                              double mu);

// Cumulative employment change after `horizon` rounds of the feedback cycle
// dlnL_{t+1} = omega * dlnL_t with omega = nu * eta_lt.
double apply_feedback_cycle(double first_round_dlnL, double nu, double eta_lt,
                            std::size_t horizon);

// CES technology with a perfectly elastic capital supply and isoelastic product demand.
struct ProductionParams {
  double tfp = 1.0;           // A
  double labor_weight = 0.5;  // CES distribution parameter on labor, in (0, 1)
  double capital_rate = 0.1;  // R
  double demand_scale = 1.0;  // D in Y = D * P^(-eta)

  void validate() const;
};

struct FirmOptimum {
  double labor = 0.0;
  double capital = 0.0;
  double output = 0.0;
  double price = 0.0;
  double marginal_cost = 0.0;
  double labor_share = 0.0;  // labor cost share W* L / (W* L + R K)
};

// Profit-maximizing input choice of a monopolistic firm facing unit labor cost w_star.
// Requires sigma >= 0 and demand_elasticity > 1.
FirmOptimum solve_firm(const ProductionParams& prod, double sigma, double demand_elasticity,
                       double w_star);

struct EconomyConfig {
  // dimensions
  int n_occupations = 40;
  int n_regions = 10;
  int n_firms = 2000;
  int n_years = 8;
  Year first_year = 2010;
  Year base_year = 2010;
  std::uint64_t seed = 1;

  // ground truth
  double true_eta_lw = -0.7;
  double true_eta_lt = -0.05;

  // national occupation-year log growth shocks
  double national_shock_sd = 0.10;       // vacancies and job seekers
  double national_wage_sd = 0.03;        // occupational wage index
  double regional_shock_sd = 0.02;       // occupation x region deviations of stocks
  // firm-level shocks
  double idiosyncratic_sd = 0.03;        // firm wage growth
  double demand_confound_sd = 0.03;      // latent productivity growth
  double confound_wage_loading = 1.0;    // how strongly it raises wages
  double employment_noise_sd = 0.02;
  double cluster_shock_sd = 0.0;         // region x year employment shock

  // firm composition
  int max_occupations_per_firm = 4;
  double share_concentration = 1.0;  // symmetric Dirichlet parameter
  double share_drift_sd = 0.0;
  double mean_log_firm_size = 3.0;
  double sd_log_firm_size = 1.0;
  bool round_employment = false;

  // notification shares applied to emit registered vacancies, per bucket
  double notification_share_helper = 0.461;
  double notification_share_professional = 0.456;
  double notification_share_specialist = 0.311;

  // region block for the feedback regressions
  int n_feedback_regions = 100;
  int occupations_per_region = 6;
  MatchingParams matching{};
  double separation_rate = 0.331;
  double dlnU_dlnL = -4.039;
  double national_employment_sd = 0.05;
  double region_demand_sd = 0.01;
  double region_supply_sd = 0.02;
  double supply_employment_loading = 0.5;

  void validate() const;
  std::vector<Year> years() const;
  // nu implied by the matching elasticity and dlnU_dlnL
  double true_nu() const;
};

struct GeneratingShocks {
  // [year index][occupation]
  std::vector<std::vector<double>> wage_growth;
  std::vector<std::vector<double>> vacancy_growth;
  std::vector<std::vector<double>> seeker_growth;
  std::vector<std::vector<double>> employment_growth;  // region block
  // [firm][year index]: cumulative latent productivity entering wages and employment
  std::vector<std::vector<double>> firm_confound;
};

struct SyntheticPanel {
  EconomyConfig config;
  FirmPanel firms;
  std::vector<MarketCell> markets;
  tightness::NotificationShares notification_shares;
  std::vector<OccupationCode> occupations;
  std::map<FirmId, RegionId> firm_region;
  std::vector<RegionEmploymentRecord> region_employment;
  std::vector<RegionMarketRecord> region_markets;
  GeneratingShocks shocks;
};

// Deterministic given config.seed. Throws InvalidArgument on an invalid or degenerate
// configuration (no national variation means the instruments carry no information).
SyntheticPanel simulate_economy(const EconomyConfig& cfg);

// Occupation code used by the simulator for occupation index o (requirement level cycles).
OccupationCode simulated_occupation_code(int index);

}  // namespace tightlab::sim
