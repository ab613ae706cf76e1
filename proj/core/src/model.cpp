#include "tightlab/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tightlab/error.hpp"

namespace tightlab::model {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

double checked_ratio(double num, double den) {
  if (den == 0.0 || !std::isfinite(den))
    throw DomainError("unit labor cost is zero or non-finite");
  return num / den;
}

}  // namespace

void TechnologyParams::validate() const {
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be >= 0");
  require(std::isfinite(eta_yp) && eta_yp >= 0.0, "eta_yp must be >= 0");
  require(s_l > 0.0 && s_l < 1.0, "labor share s_l must lie in (0, 1)");
}

void HiringCostParams::validate() const {
  require(std::isfinite(c) && c >= 0.0, "hiring cost scale c must be >= 0");
  require(std::isfinite(phi1), "phi1 must be finite");
  require(std::isfinite(phi2) && phi2 >= 0.0, "phi2 must be >= 0");
  require(std::isfinite(psi) && psi >= 0.0, "post-match cost psi must be >= 0");
  require(std::isfinite(gamma) && gamma >= 0.0, "wage-curve gamma must be >= 0");
  require(std::isfinite(w_scale) && w_scale > 0.0, "wage-curve scale must be > 0");
}

void AmortizationParams::validate() const {
  require(delta > 0.0 && delta <= 1.0, "separation rate delta must lie in (0, 1]");
  require(std::isfinite(r) && r >= 0.0, "discount rate r must be >= 0");
}

void MarketState::validate() const {
  require(std::isfinite(wage) && wage > 0.0, "wage must be > 0");
  require(std::isfinite(theta) && theta > 0.0, "tightness must be > 0");
}

double scale_substitution_effect(const TechnologyParams& tech) {
  tech.validate();
  return -(1.0 - tech.s_l) * tech.sigma - tech.s_l * tech.eta_yp;
}

double prematch_hiring_cost(const HiringCostParams& hc, const MarketState& s) {
  hc.validate();
  s.validate();
  if (hc.c == 0.0) return 0.0;
  const double log_term = std::log(hc.c) + hc.phi1 * std::log(s.wage) + hc.phi2 * std::log(s.theta);
  if (!std::isfinite(log_term) || log_term > std::log(std::numeric_limits<double>::max()))
    throw DomainError("pre-match hiring cost overflows: log value " + std::to_string(log_term));
  return std::exp(log_term);
}

double unit_hiring_cost(const HiringCostParams& hc, const MarketState& s) {
  const double h = prematch_hiring_cost(hc, s) + hc.psi;
  if (!std::isfinite(h)) throw DomainError("unit hiring cost is not finite");
  return h;
}

double unit_labor_cost(const HiringCostParams& hc, const AmortizationParams& am,
                       const MarketState& s) {
  am.validate();
  const double w_star = s.wage + am.rate() * unit_hiring_cost(hc, s);
  if (!std::isfinite(w_star)) throw DomainError("unit labor cost is not finite");
  return w_star;
}

double wage_elasticity(const TechnologyParams& tech, const HiringCostParams& hc,
                       const AmortizationParams& am, const MarketState& s) {
  const double base = scale_substitution_effect(tech);
  const double w_star = unit_labor_cost(hc, am, s);
  const double phi_amort = am.rate() * prematch_hiring_cost(hc, s);
  return checked_ratio(s.wage + hc.phi1 * phi_amort, w_star) * base;
}

double tightness_elasticity(const TechnologyParams& tech, const HiringCostParams& hc,
                            const AmortizationParams& am, const MarketState& s) {
  const double base = scale_substitution_effect(tech);
  const double w_star = unit_labor_cost(hc, am, s);
  const double phi_amort = am.rate() * prematch_hiring_cost(hc, s);
  return checked_ratio(hc.phi2 * phi_amort, w_star) * base;
}

double tightness_elasticity_wage_curve(const TechnologyParams& tech, const HiringCostParams& hc,
                                       const AmortizationParams& am, const MarketState& s) {
  const double base = scale_substitution_effect(tech);
  const double w_star = unit_labor_cost(hc, am, s);
  const double phi_amort = am.rate() * prematch_hiring_cost(hc, s);
  const double num = hc.gamma * s.wage + (hc.gamma * hc.phi1 + hc.phi2) * phi_amort;
  return checked_ratio(num, w_star) * base;
}

ElasticityPair elasticities(const TechnologyParams& tech, const HiringCostParams& hc,
                            const AmortizationParams& am, const MarketState& s) {
  return {wage_elasticity(tech, hc, am, s), tightness_elasticity(tech, hc, am, s)};
}

double elasticity_ratio(const HiringCostParams& hc, const AmortizationParams& am,
                        const MarketState& s) {
  am.validate();
  const double phi_amort = am.rate() * prematch_hiring_cost(hc, s);
  const double den = s.wage + hc.phi1 * phi_amort;
  if (den == 0.0) throw DomainError("elasticity ratio has a zero denominator");
  return hc.phi2 * phi_amort / den;
}

double prematch_cost_share(const AmortizationParams& am, double phi1, double phi2,
                           const ElasticityPair& eta) {
  am.validate();
  if (eta.eta_lt == 0.0)
    throw CalibrationInfeasible("tightness elasticity is zero; the wage/tightness ratio is undefined",
                                0.0);
  const double inner = phi2 * eta.eta_lw / eta.eta_lt - phi1;
  const double den = am.rate() * inner;
  if (!(den > 0.0)) {
    throw CalibrationInfeasible(
        std::string("calibration denominator (delta + r)(phi2 * eta_lw / eta_lt - phi1) is ") +
            (den < 0.0 ? "negative" : "zero") + " (" + std::to_string(den) + ")",
        den);
  }
  return 1.0 / den;
}

double annualize_separation_rate(double daily_rate) {
  if (!(daily_rate >= 0.0 && daily_rate <= 1.0))
    throw InvalidArgument("daily separation rate must lie in [0, 1]");
  return 1.0 - std::pow(1.0 - daily_rate, 365.25);
}

double feedback_nu(double mu, double dlnU_dlnL) {
  if (!(mu > 0.0 && mu < 1.0)) throw InvalidArgument("matching elasticity mu must lie in (0, 1)");
  return (1.0 / (1.0 - mu)) * (1.0 - dlnU_dlnL);
}

double vacancy_matching_elasticity(double nu, double dlnU_dlnL) {
  if (nu == 0.0) throw DomainError("nu must be nonzero to invert the feedback relation");
  return (1.0 - dlnU_dlnL) / nu;
}

double aggregate_wage_elasticity(double eta_lw, double eta_lt, double nu) {
  const double omega = nu * eta_lt;
  if (!(std::fabs(omega) < 1.0))
    throw DivergentFeedback("feedback factor |nu * eta_lt| = " + std::to_string(std::fabs(omega)) +
                                " >= 1; the feedback series diverges",
                            omega);
  return eta_lw / (1.0 - omega);
}

double feedback_shrinkage(double eta_lt, double nu) {
  const double omega = nu * eta_lt;
  if (!(std::fabs(omega) < 1.0))
    throw DivergentFeedback("feedback factor |nu * eta_lt| >= 1", omega);
  return -omega / (1.0 - omega);
}

std::vector<double> feedback_partial_sums(double omega, std::size_t horizon) {
  std::vector<double> sums;
  sums.reserve(horizon + 1);
  double term = 1.0;
  double total = 0.0;
  for (std::size_t t = 0; t <= horizon; ++t) {
    total += term;
    sums.push_back(total);
    term *= omega;
  }
  return sums;
}

}  // namespace tightlab::model
