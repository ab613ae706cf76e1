#include "tightlab/io/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tightlab::io {

namespace {

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

template <typename T>
nlohmann::json optional_number(const std::optional<T>& v) {
  return v ? number(static_cast<double>(*v)) : nlohmann::json();
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

nlohmann::json envelope(const std::string& kind, nlohmann::json body) {
  return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"result", std::move(body)}};
}

nlohmann::json to_json(const est::EstimateReport& rep) {
  nlohmann::json coefs = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    coefs.push_back({{"name", rep.names[i]},
                     {"estimate", number(rep.coef(k))},
                     {"std_error", number(std::sqrt(rep.vcov(k, k)))}});
  }
  nlohmann::json vcov = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rep.vcov.rows(); ++i) vcov.push_back(vector_json(rep.vcov.row(i).transpose()));
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& fs : rep.first_stages) {
    nlohmann::json c = nlohmann::json::array();
    for (std::size_t i = 0; i < fs.names.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      c.push_back({{"name", fs.names[i]}, {"estimate", number(fs.coef(k))}, {"std_error", number(fs.std_error(k))}});
    }
    stages.push_back({{"endogenous", fs.endogenous},
                      {"coefficients", std::move(c)},
                      {"f_stat", number(fs.f_stat)},
                      {"f_df", fs.f_df},
                      {"weak", fs.weak}});
  }
  return {{"method", rep.method},
          {"dependent", rep.dependent},
          {"coefficients", std::move(coefs)},
          {"vcov", std::move(vcov)},
          {"first_stages", std::move(stages)},
          {"warnings", rep.warnings},
          {"n_obs", rep.n_obs},
          {"n_clusters", rep.n_clusters},
          {"n_dropped", rep.n_dropped},
          {"absorbed_levels", rep.absorbed_levels},
          {"r2_within", number(rep.r2_within)}};
}

nlohmann::json to_json(const est::RotembergReport& rep) {
  auto rows = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"occupation", r.occupation},
                    {"year", r.year},
                    {"growth", number(r.growth)},
                    {"alpha", optional_number(r.alpha)},
                    {"beta", optional_number(r.beta)},
                    {"f_stat", optional_number(r.f_stat)}});
  auto agg = [](const est::RotembergAggregate& a) {
    return nlohmann::json{{"alpha_sum", number(a.alpha_sum)},
                          {"weighted_beta", number(a.weighted_beta)},
                          {"count", a.count}};
  };
  auto by_year = nlohmann::json::array();
  for (const auto& [year, a] : rep.by_year) {
    auto j = agg(a);
    j["year"] = year;
    by_year.push_back(std::move(j));
  }
  return {{"bartik_estimate", number(rep.bartik_estimate)},
          {"alpha_sum", number(rep.alpha_sum)},
          {"alpha_beta_sum", number(rep.alpha_beta_sum)},
          {"identity_error", number(rep.identity_error())},
          {"positive", agg(rep.positive)},
          {"negative", agg(rep.negative)},
          {"by_year", std::move(by_year)},
          {"instruments", std::move(rows)},
          {"warnings", rep.warnings},
          {"n_obs", rep.n_obs},
          {"n_missing", rep.n_missing}};
}

nlohmann::json to_json(const zones::SweepResult& sweep) {
  auto points = nlohmann::json::array();
  for (const auto& p : sweep.points)
    points.push_back({{"threshold", number(p.threshold)},
                      {"modularity", number(p.modularity)},
                      {"zones", p.zone_count},
                      {"commuter_share", number(p.commuter_share)}});
  return {{"best_threshold", number(sweep.best_threshold)},
          {"modularity", number(sweep.best.modularity)},
          {"zones", sweep.best.zone_count},
          {"commuter_share", number(sweep.best.commuter_share)},
          {"sweep", std::move(points)}};
}

nlohmann::json to_json(const policy::CalibrationResult& res) {
  return {{"phi_over_w", number(res.phi_over_w)},
          {"elasticity_ratio", number(res.elasticity_ratio)},
          {"reported_gap", optional_number(res.reported_gap)},
          {"omega", optional_number(res.omega)},
          {"aggregate_eta_lw", optional_number(res.aggregate_eta_lw)},
          {"shrinkage", optional_number(res.shrinkage)}};
}

nlohmann::json to_json(const policy::MinWageResult& res) {
  return {{"employment_change", number(res.employment_change)},
          {"std_error", number(res.se)},
          {"draw_mean", number(res.draw_mean)},
          {"draws", res.draws}};
}

nlohmann::json to_json(const policy::CounterfactualResult& res) {
  auto path = [](const std::vector<policy::CounterfactualPoint>& pts) {
    auto a = nlohmann::json::array();
    for (const auto& p : pts)
      a.push_back({{"year", p.year}, {"factual", number(p.factual)}, {"counterfactual", number(p.counterfactual)}});
    return a;
  };
  auto groups = nlohmann::json::array();
  for (const auto& g : res.groups)
    groups.push_back({{"group", g.name}, {"gap", number(g.gap)}, {"series", path(g.points)}});
  nlohmann::json out{{"gap", number(res.gap)}, {"groups", std::move(groups)}, {"total", path(res.total)}};
  out["gap_std_error"] = optional_number(res.gap_se);
  if (res.gap_interval)
    out["gap_interval"] = {number(res.gap_interval->first), number(res.gap_interval->second)};
  else
    out["gap_interval"] = nullptr;
  return out;
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

std::string format_table(const std::vector<std::pair<std::string, const est::EstimateReport*>>& columns,
                         const std::vector<std::string>& rows) {
  constexpr int label_width = 20;
  constexpr int col_width = 14;
  std::ostringstream out;
  auto cell = [&](const std::string& s) {
    out << std::string(std::max<int>(0, col_width - static_cast<int>(s.size())), ' ') << s;
  };
  auto label = [&](const std::string& s) {
    out << s << std::string(std::max<int>(1, label_width - static_cast<int>(s.size())), ' ');
  };

  label("");
  for (const auto& [name, rep] : columns) cell(name);
  out << '\n';
  label("");
  for (std::size_t i = 0; i < columns.size(); ++i) cell("(" + std::to_string(i + 1) + ")");
  out << '\n' << std::string(label_width + col_width * columns.size(), '-') << '\n';

  for (const auto& row : rows) {
    label(row);
    for (const auto& [name, rep] : columns) {
      bool has = false;
      for (const auto& n : rep->names) has = has || n == row;
      cell(has ? fixed(rep->coefficient(row), 3) : "");
    }
    out << '\n';
    label("");
    for (const auto& [name, rep] : columns) {
      bool has = false;
      for (const auto& n : rep->names) has = has || n == row;
      cell(has ? "(" + fixed(rep->std_error(row), 3) + ")" : "");
    }
    out << '\n';
  }
  out << std::string(label_width + col_width * columns.size(), '-') << '\n';

  std::vector<std::string> endogenous;
  for (const auto& [name, rep] : columns)
    for (const auto& fs : rep->first_stages)
      if (std::find(endogenous.begin(), endogenous.end(), fs.endogenous) == endogenous.end())
        endogenous.push_back(fs.endogenous);
  for (const auto& e : endogenous) {
    label("F " + e);
    for (const auto& [name, rep] : columns) {
      std::string v;
      for (const auto& fs : rep->first_stages)
        if (fs.endogenous == e) v = fixed(fs.f_stat, 1);
      cell(v);
    }
    out << '\n';
  }
  label("N");
  for (const auto& [name, rep] : columns) cell(std::to_string(rep->n_obs));
  out << '\n';
  label("Clusters");
  for (const auto& [name, rep] : columns) cell(std::to_string(rep->n_clusters));
  out << '\n';
  return out.str();
}

}  // namespace tightlab::io
