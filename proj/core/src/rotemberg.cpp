#include "tightlab/rotemberg.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "tightlab/error.hpp"

namespace tightlab::est {

double RotembergReport::alpha_sum_error() const { return std::abs(alpha_sum - 1.0); }

double RotembergReport::identity_error() const {
  const double scale = std::max(std::abs(bartik_estimate), 1e-300);
  return std::abs(alpha_beta_sum - bartik_estimate) / scale;
}

RotembergReport rotemberg(const RotembergSpec& spec, const Dataset& data) {
  const auto& reg = spec.regression;
  if (reg.endogenous.size() != 1)
    throw InvalidArgument("Rotemberg decomposition needs exactly one endogenous regressor, got " +
                          std::to_string(reg.endogenous.size()));
  if (spec.instruments.empty()) throw UnderIdentified("Rotemberg decomposition needs instruments");

  std::vector<std::string> columns{reg.dependent, reg.endogenous.front()};
  for (const auto& inst : spec.instruments) columns.push_back(inst.column);
  const auto res = residualize(reg, data, columns);

  const Eigen::VectorXd& y = res.columns[0];
  const Eigen::VectorXd& x = res.columns[1];
  const Eigen::VectorXd& w = res.weights;
  const auto n = y.size();
  const Eigen::VectorXd wx = w.cwiseProduct(x);
  const Eigen::VectorXd wy = w.cwiseProduct(y);

  // small-sample factor of the per-instrument first stages
  std::size_t n_clusters = 0;
  for (auto c : res.clusters) n_clusters = std::max<std::size_t>(n_clusters, static_cast<std::size_t>(c) + 1);
  const double g = static_cast<double>(n_clusters);
  const double nn = static_cast<double>(n);
  const double k_fs = 1.0 + static_cast<double>(reg.exogenous.size() + res.absorbed_levels) +
                      (reg.fixed_effects.empty() && reg.intercept ? 1.0 : 0.0);
  const double factor =
      reg.small_sample && g > 1.0 && nn > k_fs ? (g / (g - 1.0)) * ((nn - 1.0) / (nn - k_fs)) : 1.0;

  RotembergReport rep;
  rep.n_obs = static_cast<std::size_t>(n);
  std::vector<double> num(spec.instruments.size());
  std::vector<double> den(spec.instruments.size());
  double b_x = 0.0;
  double b_y = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < spec.instruments.size(); ++k) {
    const Eigen::VectorXd& z = res.columns[k + 2];
    den[k] = z.dot(wx);
    num[k] = z.dot(wy);
    b_x += spec.instruments[k].growth * den[k];
    b_y += spec.instruments[k].growth * num[k];
    scale = std::max(scale, std::abs(spec.instruments[k].growth * den[k]));
  }
  if (!(std::abs(b_x) > 0.0))
    throw RankDeficient("composite shift-share instrument is orthogonal to the regressor",
                        {reg.endogenous.front()});
  rep.bartik_estimate = b_y / b_x;

  const double zero_tol = 1e-13 * std::max(scale, 1e-300);
  for (std::size_t k = 0; k < spec.instruments.size(); ++k) {
    const auto& inst = spec.instruments[k];
    RotembergRow row{inst.occupation, inst.year, inst.growth, std::nullopt, std::nullopt, std::nullopt};
    const Eigen::VectorXd& z = res.columns[k + 2];
    if (std::abs(den[k]) <= zero_tol) {
      ++rep.n_missing;
      rep.rows.push_back(std::move(row));
      continue;
    }
    const double alpha = inst.growth * den[k] / b_x;
    const double beta = num[k] / den[k];
    row.alpha = alpha;
    row.beta = beta;

    const double zz = z.dot(w.cwiseProduct(z));
    if (zz > 0.0) {
      const double pi = den[k] / zz;
      std::vector<double> score(n_clusters, 0.0);
      for (Eigen::Index i = 0; i < n; ++i)
        score[res.clusters[i]] += w(i) * z(i) * (x(i) - pi * z(i));
      double meat = 0.0;
      for (double s : score) meat += s * s;
      const double var = factor * meat / (zz * zz);
      row.f_stat = var > 0.0 ? pi * pi / var : std::numeric_limits<double>::infinity();
    }

    rep.alpha_sum += alpha;
    rep.alpha_beta_sum += alpha * beta;
    auto& sign = alpha >= 0.0 ? rep.positive : rep.negative;
    sign.alpha_sum += alpha;
    sign.weighted_beta += alpha * beta;
    ++sign.count;
    auto& yr = rep.by_year[inst.year];
    yr.alpha_sum += alpha;
    yr.weighted_beta += alpha * beta;
    ++yr.count;
    rep.rows.push_back(std::move(row));
  }
  if (rep.n_missing > 0)
    rep.warnings.push_back(std::to_string(rep.n_missing) +
                           " instruments have a zero first-stage covariance; their weights are "
                           "missing and the identity is checked over the remaining mass");
  return rep;
}

std::vector<RotembergInstrument> add_share_instruments(Dataset& data, const shiftshare::BaseShares& shares,
                                                       const shiftshare::GrowthSeries& growth,
                                                       const std::string& unit_key,
                                                       const std::string& bartik_column) {
  const auto& units = data.key(unit_key);
  const auto& years = data.key("year");
  const auto n = static_cast<Eigen::Index>(data.rows());
  std::set<Year> data_years(years.begin(), years.end());

  std::set<OccupationCode> occupations;
  for (const auto& [id, u] : shares.units)
    for (const auto& [occ, s] : u.shares) occupations.insert(occ);

  std::vector<RotembergInstrument> out;
  Eigen::VectorXd composite = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!shares.units.count(units[i])) composite(i) = std::numeric_limits<double>::quiet_NaN();

  for (const auto& occ : occupations) {
    const auto g = growth.find(occ);
    if (g == growth.end()) continue;
    for (Year year : data_years) {
      const auto gy = g->second.find(year);
      if (gy == g->second.end()) continue;
      Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
      bool held = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto u = shares.units.find(units[i]);
        if (u == shares.units.end()) {
          col(i) = std::numeric_limits<double>::quiet_NaN();
          continue;
        }
        if (years[i] != year) continue;
        const auto s = u->second.shares.find(occ);
        if (s != u->second.shares.end()) {
          col(i) = s->second;
          held = true;
        }
      }
      if (!held) continue;
      composite += gy->second * col;
      std::string name = "share_" + occ + "_" + std::to_string(year);
      data.add_column(name, std::move(col));
      out.push_back({occ, year, std::move(name), gy->second});
    }
  }
  data.add_column(bartik_column, std::move(composite));
  return out;
}

}  // namespace tightlab::est
