#pragma once

// Rotemberg decomposition of a shift-share 2SLS estimate into just-identified
// estimates, one per occupation x year share instrument.
//
//   alpha_k = g_k z_k'W x~ / sum_j g_j z_j'W x~      beta_k = z_k'W y~ / z_k'W x~
//
// x~ and y~ are the endogenous regressor and the outcome after absorbing fixed effects and
// partialling out controls. sum_k alpha_k beta_k is the 2SLS estimate that instruments x
// with the composite B = sum_k g_k z_k.
//
// Defined for a single endogenous regressor. With several endogenous regressors run one
// decomposition per instrument family on its own specification.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tightlab/dataset.hpp"
#include "tightlab/estimator.hpp"
#include "tightlab/shift_share.hpp"

namespace tightlab::est {

struct RotembergInstrument {
  OccupationCode occupation;
  Year year = 0;
  std::string column;  // share-by-year column in the dataset
  double growth = 0.0;
};

struct RotembergSpec {
  // dependent, exactly one endogenous regressor, controls, fixed effects, cluster, weights.
  // Instruments listed here are ignored.
  RegressionSpec regression;
  std::vector<RotembergInstrument> instruments;
};

struct RotembergRow {
  OccupationCode occupation;
  Year year = 0;
  double growth = 0.0;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> f_stat;  // first stage of x on z_k alone
};

struct RotembergAggregate {
  double alpha_sum = 0.0;
  double weighted_beta = 0.0;  // sum alpha_k beta_k over the group
  std::size_t count = 0;
};

struct RotembergReport {
  std::vector<RotembergRow> rows;
  double bartik_estimate = 0.0;  // B'W y~ / B'W x~
  double alpha_sum = 0.0;
  double alpha_beta_sum = 0.0;
  RotembergAggregate positive;
  RotembergAggregate negative;
  std::map<Year, RotembergAggregate> by_year;
  std::vector<std::string> warnings;
  std::size_t n_obs = 0;
  std::size_t n_missing = 0;

  // |alpha_sum - 1| and the relative gap between alpha_beta_sum and bartik_estimate.
  double alpha_sum_error() const;
  double identity_error() const;
};

RotembergReport rotemberg(const RotembergSpec& spec, const Dataset& data);

// Adds one column per (occupation, year) holding the unit's base share in rows of that
// year and zero elsewhere, plus a composite column `bartik_column` = sum_k g_k z_k.
// Units are matched through the key `unit_key`, years through the key "year". Rows whose
// unit has no base shares get NaN in every added column. Occupation-years without growth
// are skipped.
std::vector<RotembergInstrument> add_share_instruments(Dataset& data, const shiftshare::BaseShares& shares,
                                                       const shiftshare::GrowthSeries& growth,
                                                       const std::string& unit_key = "firm",
                                                       const std::string& bartik_column = "bartik");

}  // namespace tightlab::est
