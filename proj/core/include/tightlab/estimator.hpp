#pragma once

// Panel regression engine: OLS, 2SLS and reduced forms with absorbed fixed effects,
// optional weights and cluster-robust sandwich covariance. Least squares are solved by
// column-pivoted Householder QR.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "tightlab/dataset.hpp"

namespace tightlab::est {

struct RegressionSpec {
  std::string dependent;
  std::vector<std::string> endogenous;   // regressors of interest (all of them for OLS)
  std::vector<std::string> exogenous;    // included controls
  std::vector<std::string> instruments;  // excluded instruments (2SLS)
  std::vector<std::string> fixed_effects;  // key names or interactions "year*zone"
  std::string cluster;                   // key name; empty clusters by observation
  std::string weights;                   // column name; empty for unweighted
  bool intercept = true;                 // added only when there are no fixed effects
  // Scale the sandwich by G/(G-1) * (N-1)/(N-K).
  bool small_sample = true;
  double weak_instrument_f = 10.0;
};

struct FirstStage {
  std::string endogenous;
  std::vector<std::string> names;  // excluded instruments then exogenous regressors
  Eigen::VectorXd coef;
  Eigen::VectorXd std_error;
  double f_stat = 0.0;  // cluster-robust Wald F of the excluded instruments
  int f_df = 0;
  bool weak = false;
};

struct EstimateReport {
  std::string method;  // "ols", "2sls", "reduced_form"
  std::string dependent;
  std::vector<std::string> names;
  Eigen::VectorXd coef;
  Eigen::MatrixXd vcov;
  std::vector<FirstStage> first_stages;
  std::vector<std::string> warnings;
  std::size_t n_obs = 0;
  std::size_t n_clusters = 0;
  std::size_t n_dropped = 0;       // rows with non-finite values
  std::size_t absorbed_levels = 0;  // degrees of freedom absorbed by fixed effects
  double r2_within = 0.0;

  std::size_t index_of(const std::string& name) const;
  double coefficient(const std::string& name) const;
  double std_error(const std::string& name) const;
};

EstimateReport ols(const RegressionSpec& spec, const Dataset& data);
EstimateReport tsls(const RegressionSpec& spec, const Dataset& data);
// OLS of the dependent variable on the excluded instruments and the controls.
EstimateReport reduced_form(const RegressionSpec& spec, const Dataset& data);

// Regional feedback regression: outcome (d ln theta or d ln U) on d ln L instrumented by
// the regional Bartik z_l, year fixed effects, clustered by zone. Expects columns
// `outcome`, "dln_l", "z_l" and keys "year", "zone".
EstimateReport feedback_regression(const Dataset& region_data, const std::string& outcome = "dln_theta");

// Residuals of `column` after absorbing fixed effects and partialling out controls,
// weighted when spec.weights is set. Used by diagnostics that work on residualized data.
struct Residualized {
  std::vector<Eigen::VectorXd> columns;  // same order as requested
  Eigen::VectorXd weights;               // ones when unweighted
  std::vector<std::int64_t> clusters;
  std::vector<char> used;                // rows of the input that survived
  std::size_t absorbed_levels = 0;
};
Residualized residualize(const RegressionSpec& spec, const Dataset& data,
                         const std::vector<std::string>& columns,
                         const std::vector<std::string>& extra_required = {});

}  // namespace tightlab::est
