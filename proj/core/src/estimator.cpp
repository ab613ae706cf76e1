#include "tightlab/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "tightlab/error.hpp"

namespace tightlab::est {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr int kMaxDemeanIterations = 10000;

struct Design {
  Eigen::VectorXd y;
  Eigen::MatrixXd endog;
  Eigen::MatrixXd exog;
  Eigen::MatrixXd instr;
  std::vector<std::string> endog_names;
  std::vector<std::string> exog_names;
  std::vector<std::string> instr_names;
  std::vector<std::int64_t> clusters;  // dense ids
  std::size_t n_clusters = 0;
  Eigen::VectorXd sqrt_w;
  std::vector<char> used;
  std::size_t n_dropped = 0;
  std::size_t absorbed = 0;
};

std::vector<std::int64_t> densify(const std::vector<std::int64_t>& raw, std::size_t& count) {
  std::map<std::int64_t, std::int64_t> ids;
  std::vector<std::int64_t> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = ids.emplace(raw[i], static_cast<std::int64_t>(ids.size()));
    out[i] = it->second;
  }
  count = ids.size();
  return out;
}

// Subtracts weighted group means, alternating over several fixed effects until stable.
void absorb(Eigen::MatrixXd& m, const std::vector<std::vector<std::int64_t>>& groups,
            const std::vector<std::size_t>& counts, const Eigen::VectorXd& w) {
  if (groups.empty() || m.cols() == 0) return;
  const auto n = m.rows();
  auto one_pass = [&](std::size_t f) {
    const auto& g = groups[f];
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(counts[f]), m.cols());
    Eigen::VectorXd wsum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(counts[f]));
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(g[i]) += w(i) * m.row(i);
      wsum(g[i]) += w(i);
    }
    for (Eigen::Index k = 0; k < sums.rows(); ++k) sums.row(k) /= wsum(k);
    double change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      m.row(i) -= sums.row(g[i]);
      change = std::max(change, sums.row(g[i]).cwiseAbs().maxCoeff());
    }
    return change;
  };
  if (groups.size() == 1) {
    one_pass(0);
    return;
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int it = 0; it < kMaxDemeanIterations; ++it) {
    double change = 0.0;
    for (std::size_t f = 0; f < groups.size(); ++f) change = std::max(change, one_pass(f));
    if (change < 1e-14 * scale) return;
  }
}

Design build_design(const RegressionSpec& spec, const Dataset& data, bool with_instruments,
                    const std::vector<std::string>& extra_required = {}) {
  if (spec.dependent.empty()) throw InvalidArgument("regression needs a dependent variable");
  std::vector<std::string> needed{spec.dependent};
  needed.insert(needed.end(), spec.endogenous.begin(), spec.endogenous.end());
  needed.insert(needed.end(), spec.exogenous.begin(), spec.exogenous.end());
  if (with_instruments) needed.insert(needed.end(), spec.instruments.begin(), spec.instruments.end());
  needed.insert(needed.end(), extra_required.begin(), extra_required.end());
  for (const auto& name : needed) (void)data.column(name);
  for (const auto& fe : spec.fixed_effects) (void)data.group_ids(fe);
  if (!spec.cluster.empty()) (void)data.key(spec.cluster);

  const std::size_t n_all = data.rows();
  Design d;
  d.used.assign(n_all, 1);
  for (const auto& name : needed) {
    const auto& col = data.column(name);
    for (std::size_t i = 0; i < n_all; ++i)
      if (!std::isfinite(col(static_cast<Eigen::Index>(i)))) d.used[i] = 0;
  }
  if (!spec.weights.empty()) {
    const auto& w = data.column(spec.weights);
    for (std::size_t i = 0; i < n_all; ++i) {
      const double wi = w(static_cast<Eigen::Index>(i));
      if (!std::isfinite(wi) || wi < 0.0) throw InvalidArgument("weights must be finite and >= 0");
      if (wi == 0.0) d.used[i] = 0;
    }
  }
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < n_all; ++i)
    if (d.used[i]) rows.push_back(static_cast<Eigen::Index>(i));
  d.n_dropped = n_all - rows.size();
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw InvalidArgument("no complete observations for '" + spec.dependent + "'");

  auto gather = [&](const std::vector<std::string>& names) {
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(names.size()));
    for (std::size_t c = 0; c < names.size(); ++c) {
      const auto& col = data.column(names[c]);
      for (Eigen::Index i = 0; i < n; ++i) m(i, static_cast<Eigen::Index>(c)) = col(rows[i]);
    }
    return m;
  };
  Eigen::MatrixXd y = gather({spec.dependent});
  d.endog = gather(spec.endogenous);
  d.exog = gather(spec.exogenous);
  d.instr = with_instruments ? gather(spec.instruments) : Eigen::MatrixXd(n, 0);
  d.endog_names = spec.endogenous;
  d.exog_names = spec.exogenous;
  if (with_instruments) d.instr_names = spec.instruments;

  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  if (!spec.weights.empty()) {
    const auto& wc = data.column(spec.weights);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = wc(rows[i]);
  }

  std::vector<std::vector<std::int64_t>> groups;
  std::vector<std::size_t> counts;
  for (const auto& fe : spec.fixed_effects) {
    const auto ids = data.group_ids(fe);
    std::vector<std::int64_t> sub(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) sub[i] = ids[rows[i]];
    std::size_t count = 0;
    groups.push_back(densify(sub, count));
    counts.push_back(count);
  }
  if (!groups.empty()) {
    d.absorbed = std::accumulate(counts.begin(), counts.end(), std::size_t{0}) - (groups.size() - 1);
    absorb(y, groups, counts, w);
    absorb(d.endog, groups, counts, w);
    absorb(d.exog, groups, counts, w);
    absorb(d.instr, groups, counts, w);
  } else if (spec.intercept) {
    d.exog.conservativeResize(n, d.exog.cols() + 1);
    d.exog.col(d.exog.cols() - 1).setOnes();
    d.exog_names.push_back("(intercept)");
  }

  d.sqrt_w = w.cwiseSqrt();
  d.y = y.col(0).cwiseProduct(d.sqrt_w);
  d.endog = d.sqrt_w.asDiagonal() * d.endog;
  d.exog = d.sqrt_w.asDiagonal() * d.exog;
  d.instr = d.sqrt_w.asDiagonal() * d.instr;

  std::vector<std::int64_t> raw_clusters(static_cast<std::size_t>(n));
  if (spec.cluster.empty()) {
    std::iota(raw_clusters.begin(), raw_clusters.end(), 0);
  } else {
    const auto& key = data.key(spec.cluster);
    for (Eigen::Index i = 0; i < n; ++i) raw_clusters[i] = key[rows[i]];
  }
  d.clusters = densify(raw_clusters, d.n_clusters);
  return d;
}

Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  // Block copies: the comma initializer mishandles zero-width operands.
  Eigen::MatrixXd m(a.rows(), a.cols() + b.cols());
  m.leftCols(a.cols()) = a;
  m.rightCols(b.cols()) = b;
  return m;
}

template <typename T>
std::vector<T> concat(std::vector<T> a, const std::vector<T>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

struct Fit {
  Eigen::MatrixXd coef;  // one column per right-hand side
  Eigen::MatrixXd bread;  // (X'X)^-1
};

Fit least_squares(const Eigen::MatrixXd& x, const Eigen::MatrixXd& rhs,
                  const std::vector<std::string>& names) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(kRankThreshold);
  const auto k = x.cols();
  if (x.rows() < k)
    throw RankDeficient("fewer observations (" + std::to_string(x.rows()) + ") than regressors (" +
                            std::to_string(k) + ")",
                        names);
  if (qr.rank() < k) {
    std::vector<std::string> dropped;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < k; ++j) dropped.push_back(names[perm(j)]);
    std::ostringstream msg;
    msg << "design matrix is rank deficient; collinear columns:";
    for (const auto& c : dropped) msg << ' ' << c;
    throw RankDeficient(msg.str(), dropped);
  }
  Fit fit;
  fit.coef = qr.solve(rhs);
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd inv_perm = r_inv * r_inv.transpose();
  const auto& p = qr.colsPermutation();
  fit.bread = p * inv_perm * p.transpose();
  return fit;
}

Eigen::MatrixXd sandwich(const Eigen::MatrixXd& scores_x, const Eigen::VectorXd& resid,
                         const Eigen::MatrixXd& bread, const Design& d, std::size_t k_total,
                         bool small_sample) {
  const auto k = scores_x.cols();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.n_clusters), k);
  for (Eigen::Index i = 0; i < scores_x.rows(); ++i) sums.row(d.clusters[i]) += resid(i) * scores_x.row(i);
  const Eigen::MatrixXd meat = sums.transpose() * sums;
  double factor = 1.0;
  if (small_sample) {
    const double g = static_cast<double>(d.n_clusters);
    const double n = static_cast<double>(scores_x.rows());
    const double kk = static_cast<double>(k_total);
    if (g > 1.0 && n > kk) factor = (g / (g - 1.0)) * ((n - 1.0) / (n - kk));
  }
  Eigen::MatrixXd v = factor * bread * meat * bread;
  return 0.5 * (v + v.transpose());
}

double within_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& resid) {
  const double tss = y.squaredNorm();
  return tss > 0.0 ? 1.0 - resid.squaredNorm() / tss : 0.0;
}

EstimateReport ols_on(const Design& d, const Eigen::MatrixXd& x, std::vector<std::string> names,
                      const RegressionSpec& spec, std::string method) {
  const auto fit = least_squares(x, d.y, names);
  const Eigen::VectorXd resid = d.y - x * fit.coef;
  EstimateReport rep;
  rep.method = std::move(method);
  rep.dependent = spec.dependent;
  rep.names = std::move(names);
  rep.coef = fit.coef;
  rep.vcov = sandwich(x, resid, fit.bread, d, static_cast<std::size_t>(x.cols()) + d.absorbed,
                      spec.small_sample);
  rep.n_obs = static_cast<std::size_t>(x.rows());
  rep.n_clusters = d.n_clusters;
  rep.n_dropped = d.n_dropped;
  rep.absorbed_levels = d.absorbed;
  rep.r2_within = within_r2(d.y, resid);
  return rep;
}

}  // namespace

std::size_t EstimateReport::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw InvalidArgument("no coefficient named '" + name + "'");
}

double EstimateReport::coefficient(const std::string& name) const {
  return coef(static_cast<Eigen::Index>(index_of(name)));
}

double EstimateReport::std_error(const std::string& name) const {
  const auto i = static_cast<Eigen::Index>(index_of(name));
  return std::sqrt(vcov(i, i));
}

EstimateReport ols(const RegressionSpec& spec, const Dataset& data) {
  const auto d = build_design(spec, data, false);
  return ols_on(d, hcat(d.endog, d.exog), concat(d.endog_names, d.exog_names), spec, "ols");
}

EstimateReport reduced_form(const RegressionSpec& spec, const Dataset& data) {
  if (spec.instruments.empty()) throw UnderIdentified("reduced form needs excluded instruments");
  const auto d = build_design(spec, data, true);
  return ols_on(d, hcat(d.instr, d.exog), concat(d.instr_names, d.exog_names), spec,
                "reduced_form");
}

EstimateReport tsls(const RegressionSpec& spec, const Dataset& data) {
  if (spec.endogenous.empty()) throw InvalidArgument("2SLS needs at least one endogenous regressor");
  if (spec.instruments.size() < spec.endogenous.size())
    throw UnderIdentified("2SLS is under-identified: " + std::to_string(spec.instruments.size()) +
                          " excluded instruments for " + std::to_string(spec.endogenous.size()) +
                          " endogenous regressors");
  const auto d = build_design(spec, data, true);
  const Eigen::MatrixXd z = hcat(d.instr, d.exog);
  const auto z_names = concat(d.instr_names, d.exog_names);
  const Eigen::MatrixXd x = hcat(d.endog, d.exog);
  const auto x_names = concat(d.endog_names, d.exog_names);

  const auto first = least_squares(z, x, z_names);
  const Eigen::MatrixXd x_hat = z * first.coef;
  const auto second = least_squares(x_hat, d.y, x_names);
  const Eigen::VectorXd resid = d.y - x * second.coef;

  EstimateReport rep;
  rep.method = "2sls";
  rep.dependent = spec.dependent;
  rep.names = x_names;
  rep.coef = second.coef;
  rep.vcov = sandwich(x_hat, resid, second.bread, d,
                      static_cast<std::size_t>(x.cols()) + d.absorbed, spec.small_sample);
  rep.n_obs = static_cast<std::size_t>(x.rows());
  rep.n_clusters = d.n_clusters;
  rep.n_dropped = d.n_dropped;
  rep.absorbed_levels = d.absorbed;
  rep.r2_within = within_r2(d.y, resid);

  const auto q = d.instr.cols();
  for (Eigen::Index j = 0; j < d.endog.cols(); ++j) {
    FirstStage fs;
    fs.endogenous = d.endog_names[j];
    fs.names = z_names;
    fs.coef = first.coef.col(j);
    const Eigen::VectorXd u = d.endog.col(j) - z * fs.coef;
    const Eigen::MatrixXd v = sandwich(z, u, first.bread, d,
                                       static_cast<std::size_t>(z.cols()) + d.absorbed,
                                       spec.small_sample);
    fs.std_error = v.diagonal().cwiseSqrt();
    const Eigen::VectorXd pi = fs.coef.head(q);
    const Eigen::MatrixXd v_ee = v.topLeftCorner(q, q);
    fs.f_stat = pi.dot(v_ee.ldlt().solve(pi)) / static_cast<double>(q);
    fs.f_df = static_cast<int>(q);
    fs.weak = !(fs.f_stat >= spec.weak_instrument_f);
    if (fs.weak) {
      std::ostringstream msg;
      msg << "weak instruments for " << fs.endogenous << ": first-stage F = " << fs.f_stat
          << " < " << spec.weak_instrument_f;
      rep.warnings.push_back(msg.str());
    }
    rep.first_stages.push_back(std::move(fs));
  }
  return rep;
}

EstimateReport feedback_regression(const Dataset& region_data, const std::string& outcome) {
  std::set<std::int64_t> zones(region_data.key("zone").begin(), region_data.key("zone").end());
  if (zones.size() < 2)
    throw InvalidArgument("feedback regression needs at least two regions; got " +
                          std::to_string(zones.size()));
  RegressionSpec spec;
  spec.dependent = outcome;
  spec.endogenous = {"dln_l"};
  spec.instruments = {"z_l"};
  spec.fixed_effects = {"year"};
  spec.cluster = "zone";
  return tsls(spec, region_data);
}

Residualized residualize(const RegressionSpec& spec, const Dataset& data,
                         const std::vector<std::string>& columns,
                         const std::vector<std::string>& extra_required) {
  RegressionSpec s = spec;
  s.dependent = spec.dependent.empty() ? columns.front() : spec.dependent;
  s.endogenous = columns;
  const auto d = build_design(s, data, false, extra_required);

  Residualized out;
  out.used = d.used;
  out.clusters = d.clusters;
  out.absorbed_levels = d.absorbed;
  out.weights = d.sqrt_w.cwiseProduct(d.sqrt_w);
  Eigen::MatrixXd resid = d.endog;
  if (d.exog.cols() > 0) {
    const auto fit = least_squares(d.exog, d.endog, d.exog_names);
    resid -= d.exog * fit.coef;
  }
  for (Eigen::Index c = 0; c < resid.cols(); ++c)
    out.columns.push_back(resid.col(c).cwiseQuotient(d.sqrt_w));
  return out;
}

}  // namespace tightlab::est
