#pragma once

// Closed-form structural labor-demand model with hiring costs.
//
// Unit labor cost is W* = W + (delta + r) * H(W, theta), where the unit hiring cost is
// H = c * W^phi1 * theta^phi2 + psi. Elasticities below are with respect to the
// wage W and market tightness theta, holding the other fixed.
//
// All functions are pure and thread-safe.

#include <cstddef>
#include <vector>

namespace tightlab::model {

struct TechnologyParams {
  double sigma = 0.0;   // elasticity of substitution labor/capital
  double eta_yp = 0.0;  // product-demand price elasticity, stored as a magnitude (>= 0)
  double s_l = 0.5;     // labor share in total cost, in (0, 1)

  void validate() const;
};

struct HiringCostParams {
  double c = 0.0;        // pre-match scale
  double phi1 = 0.0;     // wage elasticity of the pre-match cost
  double phi2 = 0.0;     // tightness elasticity of the pre-match cost
  double psi = 0.0;      // post-match cost per hire
  double gamma = 0.0;    // wage-curve elasticity of wages to tightness
  double w_scale = 1.0;  // wage-curve scale

  void validate() const;
};

struct AmortizationParams {
  double delta = 0.1;  // yearly separation rate, in (0, 1]
  double r = 0.0;      // yearly discount rate

  double rate() const noexcept { return delta + r; }
  void validate() const;
};

struct MarketState {
  double wage = 1.0;   // W > 0
  double theta = 1.0;  // V/U > 0

  void validate() const;
};

struct ElasticityPair {
  double eta_lw = 0.0;
  double eta_lt = 0.0;
};

// -(1 - s_L) sigma - s_L eta: labor demand elasticity w.r.t. unit labor cost.
double scale_substitution_effect(const TechnologyParams& tech);

// Pre-match component c * W^phi1 * theta^phi2, evaluated in log space.
double prematch_hiring_cost(const HiringCostParams& hc, const MarketState& s);

double unit_hiring_cost(const HiringCostParams& hc, const MarketState& s);

double unit_labor_cost(const HiringCostParams& hc, const AmortizationParams& am,
                       const MarketState& s);

double wage_elasticity(const TechnologyParams& tech, const HiringCostParams& hc,
                       const AmortizationParams& am, const MarketState& s);

double tightness_elasticity(const TechnologyParams& tech, const HiringCostParams& hc,
                            const AmortizationParams& am, const MarketState& s);

// Tightness elasticity when wages move along the wage curve W = w * theta^gamma.
double tightness_elasticity_wage_curve(const TechnologyParams& tech, const HiringCostParams& hc,
                                       const AmortizationParams& am, const MarketState& s);

ElasticityPair elasticities(const TechnologyParams& tech, const HiringCostParams& hc,
                            const AmortizationParams& am, const MarketState& s);

// Ratio of the tightness elasticity to the own-wage elasticity; independent of technology.
double elasticity_ratio(const HiringCostParams& hc, const AmortizationParams& am,
                        const MarketState& s);

// Pre-match hiring cost as a fraction of wage payments implied by observed elasticities.
// Throws CalibrationInfeasible when the implied denominator is not positive.
double prematch_cost_share(const AmortizationParams& am, double phi1, double phi2,
                           const ElasticityPair& eta);

// 1 - (1 - daily)^365.25
double annualize_separation_rate(double daily_rate);

// nu = (1 / (1 - mu)) * (1 - dlnU/dlnL)
double feedback_nu(double mu, double dlnU_dlnL);

// Inverse of feedback_nu: the vacancy elasticity of matching, 1 - mu.
double vacancy_matching_elasticity(double nu, double dlnU_dlnL);

// eta_lw / (1 - nu * eta_lt). Throws DivergentFeedback when |nu * eta_lt| >= 1.
double aggregate_wage_elasticity(double eta_lw, double eta_lt, double nu);

// Fractional reduction in magnitude, 1 - aggregate/firm = -omega / (1 - omega).
double feedback_shrinkage(double eta_lt, double nu);

// Partial sums of omega^t for t = 0..horizon (horizon + 1 entries).
std::vector<double> feedback_partial_sums(double omega, std::size_t horizon);

}  // namespace tightlab::model
