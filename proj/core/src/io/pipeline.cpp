#include "tightlab/io/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <set>

#include "tightlab/error.hpp"
#include "tightlab/io/csv.hpp"
#include "tightlab/io/reports.hpp"
#include "tightlab/io/schemas.hpp"
#include "tightlab/market_sim.hpp"
#include "tightlab/model.hpp"
#include "tightlab/policy.hpp"
#include "tightlab/zones.hpp"

namespace tightlab::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t zone_of(const std::optional<std::map<RegionId, std::int64_t>>& zones, RegionId region) {
  if (!zones) return region;
  const auto it = zones->find(region);
  if (it == zones->end())
    throw InvalidArgument("region " + std::to_string(region) + " is missing from the zone map");
  return it->second;
}

Eigen::VectorXd lookup_column(const est::Dataset& data, const std::string& unit_key,
                              const std::map<std::pair<std::int64_t, Year>, double>& values) {
  const auto& units = data.key(unit_key);
  const auto& years = data.key("year");
  Eigen::VectorXd out(static_cast<Eigen::Index>(data.rows()));
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto it = values.find({units[i], static_cast<Year>(years[i])});
    out(static_cast<Eigen::Index>(i)) = it == values.end() ? kNaN : it->second;
  }
  return out;
}

}  // namespace

FirmDesign build_firm_design(const FirmInputs& in, const TightnessSettings& tight,
                             const EstimationSettings& es) {
  if (in.panel.empty()) throw InvalidArgument("firm panel is empty");
  FirmDesign d;

  const tightness::NotificationShares* shares =
      tight.notification_shares && in.notification_shares ? &*in.notification_shares : nullptr;
  std::optional<tightness::FlowWeights> flows;
  if (tight.flow_adjustment) {
    if (!in.transitions) throw InvalidArgument("flow adjustment needs a transition matrix");
    flows = tightness::flow_weights(*in.transitions, tight.flow_warn_above);
    d.warnings.insert(d.warnings.end(), flows->warnings.begin(), flows->warnings.end());
  }
  d.markets = tightness::build_market_tightness(in.cells, shares, flows ? &*flows : nullptr);

  // national stocks use grossed-up vacancies
  std::vector<MarketCell> grossed;
  grossed.reserve(d.markets.size());
  for (const auto& m : d.markets)
    grossed.push_back({m.occupation, m.region, m.year, m.registered_vacancies, m.total_vacancies, m.job_seekers});

  const auto firm_years = aggregate_firm_years(in.panel);
  d.firm_years = firm_years.size();
  d.firm_tightness = tightness::build_firm_tightness(firm_years, d.markets);

  Year first_year = std::numeric_limits<Year>::max();
  for (const auto& r : in.panel) first_year = std::min(first_year, r.year);
  shiftshare::BaseShareRule rule;
  rule.base_year = es.base_year ? es.base_year : first_year;
  rule.estimation_start = es.estimation_start ? es.estimation_start : rule.base_year + 1;
  d.shares = shiftshare::base_year_shares(in.panel, rule);
  d.growth = shiftshare::national_growth(in.panel, grossed, es.lag, es.wage_weighting);
  d.instruments = shiftshare::build_instruments(d.shares, d.growth, {es.missing_share_cap});

  est::LevelPanel levels;
  std::vector<double> l, w, theta, unskilled;
  std::vector<std::int64_t> region, zone;
  for (std::size_t i = 0; i < firm_years.size(); ++i) {
    const auto& fy = firm_years[i];
    levels.unit.push_back(fy.firm);
    levels.year.push_back(fy.year);
    l.push_back(fy.employment);
    w.push_back(fy.wage);
    theta.push_back(d.firm_tightness[i].tightness.value_or(kNaN));
    double helper = 0.0;
    for (const auto& [occ, s] : fy.shares)
      if (tightness::requirement_level(occ) == tightness::RequirementLevel::Helper) helper += s;
    unskilled.push_back(helper);
    region.push_back(fy.region);
    zone.push_back(zone_of(in.zones, fy.region));
  }
  levels.logged = {{"l", std::move(l)}, {"w", std::move(w)}, {"theta", std::move(theta)}};
  levels.levels = {{"unskilled_share", std::move(unskilled)}};
  levels.keys = {{"region", std::move(region)}, {"zone", std::move(zone)}};
  auto diff = est::first_difference(levels, es.lag, "firm");
  d.dropped_without_lag = diff.dropped;
  d.data = std::move(diff.data);

  std::map<std::pair<std::int64_t, Year>, double> zw, zv, zu;
  for (const auto& r : d.instruments) {
    if (r.z_w) zw[{r.firm, r.year}] = *r.z_w;
    if (r.z_v) zv[{r.firm, r.year}] = *r.z_v;
    if (r.z_u) zu[{r.firm, r.year}] = *r.z_u;
  }
  d.data.add_column("z_w", lookup_column(d.data, "firm", zw));
  d.data.add_column("z_v", lookup_column(d.data, "firm", zv));
  d.data.add_column("z_u", lookup_column(d.data, "firm", zu));
  return d;
}

RegionDesign build_region_design(const std::vector<RegionEmploymentRecord>& employment,
                                 const std::vector<RegionMarketRecord>& markets,
                                 const std::optional<std::map<RegionId, std::int64_t>>& zones) {
  if (employment.empty()) throw InvalidArgument("region employment panel is empty");
  std::map<std::pair<RegionId, Year>, double> total;
  Year first_year = std::numeric_limits<Year>::max();
  for (const auto& r : employment) {
    total[{r.region, r.year}] += r.employment;
    first_year = std::min(first_year, r.year);
  }
  std::map<std::pair<RegionId, Year>, const RegionMarketRecord*> market;
  for (const auto& m : markets) market[{m.region, m.year}] = &m;

  est::LevelPanel levels;
  std::vector<double> l, theta, u;
  std::vector<std::int64_t> zone;
  for (const auto& [key, emp] : total) {
    levels.unit.push_back(key.first);
    levels.year.push_back(key.second);
    l.push_back(emp);
    const auto m = market.find(key);
    if (m == market.end() || !(m->second->job_seekers > 0.0)) {
      theta.push_back(kNaN);
      u.push_back(m == market.end() ? kNaN : m->second->job_seekers);
    } else {
      theta.push_back(m->second->vacancies / m->second->job_seekers);
      u.push_back(m->second->job_seekers);
    }
    zone.push_back(zone_of(zones, key.first));
  }
  levels.logged = {{"l", std::move(l)}, {"theta", std::move(theta)}, {"u", std::move(u)}};
  levels.keys = {{"zone", std::move(zone)}};

  RegionDesign out;
  auto diff = est::first_difference(levels, 1, "region");
  out.dropped_without_lag = diff.dropped;
  out.data = std::move(diff.data);

  const auto shares = shiftshare::base_year_shares(employment, {first_year, first_year + 1});
  const auto growth = shiftshare::log_growth(shiftshare::national_employment(employment), 1);
  std::map<std::pair<std::int64_t, Year>, double> zl;
  for (const auto& [region, years] : shiftshare::bartik(shares, growth))
    for (const auto& [year, v] : years)
      if (v) zl[{region, year}] = *v;
  out.data.add_column("z_l", lookup_column(out.data, "region", zl));
  return out;
}

est::RegressionSpec main_spec(const EstimationSettings& es) {
  est::RegressionSpec s;
  s.dependent = "dln_l";
  s.endogenous = {"dln_w", "dln_theta"};
  s.instruments = {"z_w", "z_v", "z_u"};
  s.fixed_effects = es.fixed_effects;
  s.cluster = es.cluster;
  s.weights = es.weights == "employment" ? "base_l" : "";
  s.small_sample = es.small_sample;
  s.weak_instrument_f = es.weak_instrument_f;
  return s;
}

nlohmann::json estimate_document(const FirmDesign& design, const EstimationSettings& es,
                                 const RegionDesign* region, std::string* table) {
  const auto spec = main_spec(es);
  const auto ols = est::ols(spec, design.data);

  auto wage_only = spec;
  wage_only.endogenous = {"dln_w"};
  wage_only.instruments = {"z_w"};
  auto tight_only = spec;
  tight_only.endogenous = {"dln_theta"};
  tight_only.instruments = {"z_v", "z_u"};
  const auto iv_wage = est::tsls(wage_only, design.data);
  const auto iv_tight = est::tsls(tight_only, design.data);
  const auto iv = est::tsls(spec, design.data);
  const auto rf = est::reduced_form(spec, design.data);

  nlohmann::json excluded = nlohmann::json::object();
  for (const auto& [firm, reason] : design.shares.excluded) {
    const auto key = shiftshare::to_string(reason);
    excluded[key] = excluded.value(key, 0) + 1;
  }
  nlohmann::json doc{
      {"design",
       {{"firm_years", design.firm_years},
        {"differenced_rows", design.data.rows()},
        {"dropped_without_lag", design.dropped_without_lag},
        {"lag", es.lag},
        {"firms_with_shares", design.shares.units.size()},
        {"excluded_firms", std::move(excluded)},
        {"warnings", design.warnings}}},
      {"ols", to_json(ols)},
      {"iv_wage", to_json(iv_wage)},
      {"iv_tightness", to_json(iv_tight)},
      {"iv", to_json(iv)},
      {"reduced_form", to_json(rf)},
  };

  if (es.concessions) {
    policy::ConcessionSpec cs;
    cs.fixed_effects = es.fixed_effects;
    cs.cluster = es.cluster;
    const auto con = policy::concession_regressions(design.data, cs);
    doc["concessions"] = {{"wage", to_json(con.wage)}, {"skill", to_json(con.skill)}};
  }
  if (region) {
    const auto fb_theta = est::feedback_regression(region->data, "dln_theta");
    const auto fb_u = est::feedback_regression(region->data, "dln_u");
    doc["feedback"] = {{"dln_theta", to_json(fb_theta)},
                       {"dln_u", to_json(fb_u)},
                       {"dropped_without_lag", region->dropped_without_lag}};
    const double nu = fb_theta.coefficient("dln_l");
    const double eta_lw = iv.coefficient("dln_w");
    const double eta_lt = iv.coefficient("dln_theta");
    nlohmann::json agg{{"nu", nu}, {"omega", nu * eta_lt}};
    try {
      agg["aggregate_eta_lw"] = model::aggregate_wage_elasticity(eta_lw, eta_lt, nu);
      agg["shrinkage"] = model::feedback_shrinkage(eta_lt, nu);
    } catch (const DivergentFeedback& err) {
      agg["error"] = err.what();
    }
    doc["aggregate"] = std::move(agg);
  }
  if (table)
    *table = format_table({{"OLS", &ols}, {"IV wage", &iv_wage}, {"IV tightness", &iv_tight}, {"IV both", &iv}},
                          {"dln_w", "dln_theta"});
  return doc;
}

std::vector<RotembergFamily> rotemberg_families(const FirmDesign& design, const EstimationSettings& es) {
  struct Family {
    const char* name;
    const char* endogenous;
    const shiftshare::GrowthSeries* growth;
  };
  const Family families[] = {{"wage", "dln_w", &design.growth.wage},
                             {"vacancies", "dln_theta", &design.growth.vacancies},
                             {"job_seekers", "dln_theta", &design.growth.job_seekers}};
  std::vector<RotembergFamily> out;
  for (const auto& f : families) {
    est::Dataset data = design.data;
    est::RotembergSpec spec;
    spec.instruments = est::add_share_instruments(data, design.shares, *f.growth, "firm", "bartik");
    spec.regression = main_spec(es);
    spec.regression.endogenous = {f.endogenous};
    spec.regression.instruments.clear();
    out.push_back({f.name, f.endogenous, est::rotemberg(spec, data)});
  }
  return out;
}

policy::CalibrationInputs read_calibration(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& err) {
    throw SchemaError(path, 0, "", err.what());
  }
  if (!doc.is_object()) throw SchemaError(path, 0, "", "calibration file must hold a JSON object");
  static const std::set<std::string> known{"delta", "r", "eta_lw", "eta_lt", "phi1", "phi2", "phi_over_w", "nu"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw SchemaError(path, 0, key, "unknown calibration key");
  auto get = [&](const char* key) {
    if (!doc.contains(key)) throw SchemaError(path, 0, key, "missing required key");
    if (!doc[key].is_number()) throw SchemaError(path, 0, key, "must be a number");
    return doc[key].get<double>();
  };
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    return get(key);
  };
  policy::CalibrationInputs in;
  in.delta = get("delta");
  in.r = get("r");
  in.eta_lw = get("eta_lw");
  in.eta_lt = get("eta_lt");
  in.phi1 = get("phi1");
  in.phi2 = get("phi2");
  in.phi_over_w = opt("phi_over_w");
  in.nu = opt("nu");
  return in;
}

namespace {

namespace fs = std::filesystem;

struct Context {
  const PipelineConfig& cfg;
  const RunOptions& opts;
  std::ostream& out;

  std::string input(const std::string& path) const {
    const auto p = resolve(cfg, path);
    if (!fs::exists(p)) throw InvalidArgument("input file not found: " + p);
    return p;
  }
  bool present(const std::string& path) const { return !path.empty() && fs::exists(resolve(cfg, path)); }
  std::string output(const std::string& name) const {
    return (fs::path(resolve(cfg, cfg.paths.output_dir)) / name).string();
  }
  void write(const std::string& name, const std::string& content) const {
    const auto path = output(name);
    write_file_atomic(path, content);
    out << "wrote " << path << '\n';
  }
  void checked(const std::string& what, std::size_t rows) const {
    out << "ok " << what << " (" << rows << " rows)\n";
  }
};

FirmInputs load_firm_inputs(const Context& c) {
  FirmInputs in;
  in.panel = read_firm_panel(c.input(c.cfg.paths.firm_panel));
  c.checked(c.cfg.paths.firm_panel, in.panel.size());
  in.cells = read_markets(c.input(c.cfg.paths.markets));
  c.checked(c.cfg.paths.markets, in.cells.size());
  if (c.cfg.tightness.notification_shares) {
    in.notification_shares = read_notification_shares(c.input(c.cfg.paths.notification_shares));
    c.checked(c.cfg.paths.notification_shares, in.notification_shares->entries().size());
  }
  if (c.cfg.tightness.flow_adjustment) {
    in.transitions = read_transitions(c.input(c.cfg.paths.transitions), c.input(c.cfg.paths.occupation_employment));
    c.checked(c.cfg.paths.transitions, in.transitions->size());
  }
  if (!c.cfg.paths.zones.empty()) {
    in.zones = read_zones(c.input(c.cfg.paths.zones));
    c.checked(c.cfg.paths.zones, in.zones->size());
  }
  return in;
}

std::optional<RegionDesign> load_region_design(const Context& c) {
  if (!c.cfg.estimation.feedback || !c.present(c.cfg.paths.region_employment) ||
      !c.present(c.cfg.paths.region_markets))
    return std::nullopt;
  const auto emp = read_region_employment(c.input(c.cfg.paths.region_employment));
  c.checked(c.cfg.paths.region_employment, emp.size());
  const auto mk = read_region_markets(c.input(c.cfg.paths.region_markets));
  c.checked(c.cfg.paths.region_markets, mk.size());
  if (c.opts.dry_run) return std::nullopt;
  // the zone map covers firm regions; feedback regions cluster on themselves
  return build_region_design(emp, mk);
}

int run_simulate(const Context& c) {
  c.cfg.simulation.validate();
  if (c.opts.dry_run) {
    c.out << "ok simulation settings\n";
    return 0;
  }
  const auto panel = sim::simulate_economy(c.cfg.simulation);
  c.write("firm_panel.csv", format_firm_panel(panel.firms));
  c.write("markets.csv", format_markets(panel.markets));
  c.write("notification_shares.csv", format_notification_shares(panel.notification_shares));
  c.write("region_employment.csv", format_region_employment(panel.region_employment));
  c.write("region_markets.csv", format_region_markets(panel.region_markets));
  const auto& s = c.cfg.simulation;
  nlohmann::json truth{{"eta_lw", s.true_eta_lw},
                       {"eta_lt", s.true_eta_lt},
                       {"nu", s.true_nu()},
                       {"seed", s.seed},
                       {"firms", s.n_firms},
                       {"years", s.n_years},
                       {"occupations", s.n_occupations},
                       {"firm_records", panel.firms.size()},
                       {"market_cells", panel.markets.size()}};
  c.write("simulation.json", dump(envelope("simulate", std::move(truth))));
  return 0;
}

int run_zones(const Context& c) {
  auto rg = read_commuting(c.input(c.cfg.paths.commuting), c.input(c.cfg.paths.labor_force));
  c.checked(c.cfg.paths.commuting, static_cast<std::size_t>(rg.graph.size()));
  if (c.opts.dry_run) return 0;
  const auto grid = zones::threshold_grid(c.cfg.zones.threshold_lo, c.cfg.zones.threshold_hi, c.cfg.zones.threshold_step);
  auto sweep = zones::sweep_thresholds(rg.graph, grid);
  std::vector<std::string> warnings;
  if (c.cfg.zones.contiguity != "none") {
    auto res = zones::enforce_contiguity(rg.graph, sweep.best, parse_contiguity(c.cfg.zones.contiguity));
    sweep.best = res.partition;
    warnings = res.warnings;
  }
  c.write("zones.csv", format_zones(rg.regions, sweep.best));
  auto body = to_json(sweep);
  body["warnings"] = warnings;
  c.write("zones.json", dump(envelope("delineate-zones", std::move(body))));
  c.out << "zones: " << sweep.best.zone_count << ", Q = " << sweep.best.modularity << '\n';
  return 0;
}

int run_tightness(const Context& c) {
  const auto in = load_firm_inputs(c);
  if (c.opts.dry_run) return 0;
  const auto d = build_firm_design(in, c.cfg.tightness, c.cfg.estimation);
  c.write("market_tightness.csv", format_market_tightness(d.markets));
  c.write("firm_tightness.csv", format_firm_tightness(d.firm_tightness));
  std::size_t undefined = 0;
  for (const auto& m : d.markets) undefined += !m.tightness;
  std::size_t firm_undefined = 0;
  for (const auto& f : d.firm_tightness) firm_undefined += !f.tightness;
  nlohmann::json body{{"market_cells", d.markets.size()},
                      {"undefined_market_cells", undefined},
                      {"firm_years", d.firm_tightness.size()},
                      {"undefined_firm_years", firm_undefined},
                      {"notification_shares", c.cfg.tightness.notification_shares},
                      {"flow_adjustment", c.cfg.tightness.flow_adjustment},
                      {"warnings", d.warnings}};
  c.write("tightness.json", dump(envelope("build-tightness", std::move(body))));
  return 0;
}

int run_instruments(const Context& c) {
  const auto in = load_firm_inputs(c);
  if (c.opts.dry_run) return 0;
  const auto d = build_firm_design(in, c.cfg.tightness, c.cfg.estimation);
  c.write("instruments.csv", format_instruments(d.instruments));
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& [firm, reason] : d.shares.excluded)
    excluded.push_back({{"firm_id", firm}, {"reason", shiftshare::to_string(reason)}});
  std::size_t complete = 0;
  for (const auto& r : d.instruments) complete += r.complete();
  nlohmann::json body{{"lag", c.cfg.estimation.lag},
                      {"firms_with_shares", d.shares.units.size()},
                      {"rows", d.instruments.size()},
                      {"complete_rows", complete},
                      {"excluded", std::move(excluded)}};
  c.write("instruments.json", dump(envelope("build-instruments", std::move(body))));
  return 0;
}

int run_estimate(const Context& c) {
  const auto in = load_firm_inputs(c);
  const auto region = load_region_design(c);
  if (c.opts.dry_run) return 0;
  const auto d = build_firm_design(in, c.cfg.tightness, c.cfg.estimation);
  std::string table;
  auto doc = estimate_document(d, c.cfg.estimation, region ? &*region : nullptr, &table);
  c.write("estimate.json", dump(envelope("estimate", std::move(doc))));
  c.write("estimate.txt", table);
  c.out << table;
  return 0;
}

int run_rotemberg(const Context& c) {
  const auto in = load_firm_inputs(c);
  if (c.opts.dry_run) return 0;
  const auto d = build_firm_design(in, c.cfg.tightness, c.cfg.estimation);
  const auto families = rotemberg_families(d, c.cfg.estimation);
  nlohmann::json body = nlohmann::json::array();
  CsvWriter w({"family", "endogenous", "occupation", "year", "growth", "alpha", "beta", "f_stat"});
  for (const auto& f : families) {
    auto j = to_json(f.report);
    j["family"] = f.family;
    j["endogenous"] = f.endogenous;
    body.push_back(std::move(j));
    for (const auto& r : f.report.rows) {
      w.field(f.family).field(f.endogenous).field(r.occupation).field(r.year).field(r.growth);
      for (const auto* v : {&r.alpha, &r.beta, &r.f_stat}) {
        if (*v) w.field(**v);
        else w.empty_field();
      }
      w.end_row();
    }
    c.out << f.family << ": bartik " << f.report.bartik_estimate << ", sum alpha " << f.report.alpha_sum
          << ", identity error " << f.report.identity_error() << '\n';
  }
  c.write("rotemberg.json", dump(envelope("rotemberg", {{"families", std::move(body)}})));
  c.write("rotemberg.csv", w.str());
  return 0;
}

int run_calibrate(const Context& c) {
  const auto in = read_calibration(c.input(c.cfg.paths.calibration));
  c.out << "ok " << c.cfg.paths.calibration << '\n';
  if (c.opts.dry_run) return 0;
  const auto res = policy::calibrate(in);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", res.phi_over_w);
  c.out << "Phi/W = " << buf << '\n';
  if (res.aggregate_eta_lw) c.out << "aggregate eta_lw = " << *res.aggregate_eta_lw << '\n';
  c.write("calibration_report.json", dump(envelope("calibrate", to_json(res))));
  return 0;
}

int run_policy(const Context& c) {
  const auto& pc = c.cfg.policy;
  std::map<std::string, std::map<Year, double>> series;
  std::map<Year, double> theta;
  if (pc.counterfactual.enabled) {
    series = read_employment_series(c.input(c.cfg.paths.employment_series));
    c.checked(c.cfg.paths.employment_series, series.size());
    theta = read_tightness_series(c.input(c.cfg.paths.tightness_series));
    c.checked(c.cfg.paths.tightness_series, theta.size());
  }
  if (c.opts.dry_run) return 0;

  policy::MinWageInputs mw;
  mw.elasticity = pc.minwage.elasticity;
  mw.wage_effect = pc.minwage.wage_effect;
  mw.workforce = pc.minwage.workforce;
  mw.draws = pc.minwage.draws;
  mw.seed = c.cfg.seed;
  const auto mres = policy::minwage_effect(mw);
  nlohmann::json body{{"minimum_wage", to_json(mres)}};
  c.out << "minimum wage employment effect " << mres.employment_change << " (SE " << mres.se << ")\n";

  if (pc.counterfactual.enabled) {
    policy::CounterfactualInputs ci;
    ci.tightness = theta;
    ci.base_year = pc.counterfactual.base_year;
    ci.mode = pc.counterfactual.mode;
    ci.draws = pc.counterfactual.draws;
    ci.seed = c.cfg.seed;
    for (const auto& [name, eta] : pc.counterfactual.eta_theta) {
      const auto it = series.find(name);
      if (it == series.end())
        throw InvalidArgument("employment series has no group '" + name + "'");
      ci.groups.push_back({name, it->second, eta});
    }
    const auto cres = policy::counterfactual_employment(ci);
    auto j = to_json(cres);
    j["mode"] = policy::to_string(ci.mode);
    j["base_year"] = ci.base_year;
    body["counterfactual"] = std::move(j);
    c.write("counterfactual.csv", format_counterfactual(cres));
    c.out << "counterfactual gap " << cres.gap << '\n';
  }
  c.write("policy.json", dump(envelope("policy", std::move(body))));
  return 0;
}

}  // namespace

int run(const std::string& subcommand, const PipelineConfig& cfg, const RunOptions& opts) {
  Context c{cfg, opts, opts.out ? *opts.out : std::cout};
  if (subcommand == "simulate") return run_simulate(c);
  if (subcommand == "delineate-zones") return run_zones(c);
  if (subcommand == "build-tightness") return run_tightness(c);
  if (subcommand == "build-instruments") return run_instruments(c);
  if (subcommand == "estimate") return run_estimate(c);
  if (subcommand == "rotemberg") return run_rotemberg(c);
  if (subcommand == "calibrate") return run_calibrate(c);
  if (subcommand == "policy") return run_policy(c);
  throw InvalidArgument("unknown subcommand '" + subcommand + "'");
}

}  // namespace tightlab::io
