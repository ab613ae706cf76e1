#include "tightlab/io/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <functional>
#include <sstream>

#include "tightlab/error.hpp"
#include "tightlab/io/csv.hpp"

namespace tightlab::io {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string doc;
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text) {
  T v{};
  const auto s = trim(text);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument("'" + text + "' is not a valid number");
  return v;
}

bool parse_bool(const std::string& text) {
  const auto s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw InvalidArgument("'" + text + "' is not a boolean");
}

std::string show(double v) { return format_double(v); }
std::string show(bool v) { return v ? "true" : "false"; }

template <typename T>
std::string show_int(T v) {
  return std::to_string(v);
}

Entry str(std::string sec, std::string key, std::string doc, std::string& ref) {
  return {std::move(sec), std::move(key), std::move(doc), [&ref] { return ref; },
          [&ref](const std::string& v) { ref = trim(v); }};
}

Entry dbl(std::string sec, std::string key, std::string doc, double& ref) {
  return {std::move(sec), std::move(key), std::move(doc), [&ref] { return show(ref); },
          [&ref](const std::string& v) { ref = parse_number<double>(v); }};
}

template <typename T>
Entry integer(std::string sec, std::string key, std::string doc, T& ref) {
  return {std::move(sec), std::move(key), std::move(doc), [&ref] { return show_int(ref); },
          [&ref](const std::string& v) { ref = parse_number<T>(v); }};
}

Entry boolean(std::string sec, std::string key, std::string doc, bool& ref) {
  return {std::move(sec), std::move(key), std::move(doc), [&ref] { return show(ref); },
          [&ref](const std::string& v) { ref = parse_bool(v); }};
}

std::vector<Entry> entries(PipelineConfig& c) {
  auto& p = c.paths;
  auto& s = c.simulation;
  auto& e = c.estimation;
  auto& mw = c.policy.minwage;
  auto& cf = c.policy.counterfactual;
  std::vector<Entry> v{
      integer("run", "seed", "seed for simulation and Monte Carlo draws (--seed overrides)", c.seed),

      str("paths", "firm_panel", "firm x occupation x year panel", p.firm_panel),
      str("paths", "markets", "occupation x region x year vacancy and job-seeker stocks", p.markets),
      str("paths", "notification_shares", "share of vacancies registered, by year and level",
          p.notification_shares),
      str("paths", "transitions", "occupational transition probabilities", p.transitions),
      str("paths", "occupation_employment", "employment per occupation", p.occupation_employment),
      str("paths", "commuting", "directed commuter counts between regions", p.commuting),
      str("paths", "labor_force", "resident labor force per region", p.labor_force),
      str("paths", "region_employment", "region x year x occupation employment", p.region_employment),
      str("paths", "region_markets", "region x year vacancies and job seekers", p.region_markets),
      str("paths", "zones", "optional region -> zone map (zones.csv from delineate-zones)", p.zones),
      str("paths", "calibration", "calibration inputs (JSON)", p.calibration),
      str("paths", "employment_series", "group, year, employment for the counterfactual",
          p.employment_series),
      str("paths", "tightness_series", "year, tightness for the counterfactual", p.tightness_series),
      str("paths", "output_dir", "directory receiving all outputs", p.output_dir),

      integer("simulation", "n_occupations", "occupations", s.n_occupations),
      integer("simulation", "n_regions", "regions of the firm block", s.n_regions),
      integer("simulation", "n_firms", "firms", s.n_firms),
      integer("simulation", "n_years", "years", s.n_years),
      integer("simulation", "first_year", "first calendar year", s.first_year),
      integer("simulation", "base_year", "year fixing the instrument shares", s.base_year),
      dbl("simulation", "true_eta_lw", "true own-wage elasticity", s.true_eta_lw),
      dbl("simulation", "true_eta_lt", "true tightness elasticity", s.true_eta_lt),
      dbl("simulation", "national_shock_sd", "sd of national vacancy and job-seeker growth",
          s.national_shock_sd),
      dbl("simulation", "national_wage_sd", "sd of national occupational wage growth",
          s.national_wage_sd),
      dbl("simulation", "regional_shock_sd", "sd of regional stock deviations", s.regional_shock_sd),
      dbl("simulation", "idiosyncratic_sd", "sd of firm wage growth", s.idiosyncratic_sd),
      dbl("simulation", "demand_confound_sd", "sd of latent productivity growth",
          s.demand_confound_sd),
      dbl("simulation", "confound_wage_loading", "loading of latent productivity on wages",
          s.confound_wage_loading),
      dbl("simulation", "employment_noise_sd", "sd of employment noise", s.employment_noise_sd),
      dbl("simulation", "cluster_shock_sd", "sd of region x year employment shocks",
          s.cluster_shock_sd),
      integer("simulation", "max_occupations_per_firm", "occupations per firm, at most",
              s.max_occupations_per_firm),
      dbl("simulation", "share_concentration", "Dirichlet parameter of firm shares",
          s.share_concentration),
      dbl("simulation", "share_drift_sd", "sd of yearly share drift", s.share_drift_sd),
      dbl("simulation", "mean_log_firm_size", "mean log firm size", s.mean_log_firm_size),
      dbl("simulation", "sd_log_firm_size", "sd of log firm size", s.sd_log_firm_size),
      boolean("simulation", "round_employment", "round employment to whole workers",
              s.round_employment),
      dbl("simulation", "notification_share_helper", "registered share, helper level",
          s.notification_share_helper),
      dbl("simulation", "notification_share_professional", "registered share, professional level",
          s.notification_share_professional),
      dbl("simulation", "notification_share_specialist", "registered share, specialist/expert level",
          s.notification_share_specialist),
      integer("simulation", "n_feedback_regions", "regions of the feedback block",
              s.n_feedback_regions),
      integer("simulation", "occupations_per_region", "occupations per feedback region",
              s.occupations_per_region),
      dbl("simulation", "kappa", "matching efficiency", s.matching.kappa),
      dbl("simulation", "mu", "matching elasticity w.r.t. job seekers", s.matching.mu),
      dbl("simulation", "separation_rate", "yearly separation rate", s.separation_rate),
      dbl("simulation", "dlnU_dlnL", "response of job seekers to employment", s.dlnU_dlnL),
      dbl("simulation", "national_employment_sd", "sd of national employment growth",
          s.national_employment_sd),
      dbl("simulation", "region_demand_sd", "sd of regional demand shocks", s.region_demand_sd),
      dbl("simulation", "region_supply_sd", "sd of regional supply shocks", s.region_supply_sd),
      dbl("simulation", "supply_employment_loading", "loading of supply shocks on employment",
          s.supply_employment_loading),

      boolean("tightness", "notification_shares", "gross registered vacancies up to totals",
              c.tightness.notification_shares),
      boolean("tightness", "flow_adjustment", "count stocks of neighboring occupations",
              c.tightness.flow_adjustment),
      dbl("tightness", "flow_warn_above", "warn on flow weights above this value",
          c.tightness.flow_warn_above),

      dbl("zones", "threshold_lo", "lowest merge threshold", c.zones.threshold_lo),
      dbl("zones", "threshold_hi", "highest merge threshold", c.zones.threshold_hi),
      dbl("zones", "threshold_step", "threshold grid step", c.zones.threshold_step),
      str("zones", "contiguity", "none | split | attach", c.zones.contiguity),

      integer("estimation", "lag", "difference length in years", e.lag),
      {"estimation", "fixed_effects", "comma-separated keys; interactions as year*zone",
       [&e] {
         std::string out;
         for (std::size_t i = 0; i < e.fixed_effects.size(); ++i)
           out += (i ? "," : "") + e.fixed_effects[i];
         return out;
       },
       [&e](const std::string& v) { e.fixed_effects = split(v, ','); }},
      str("estimation", "cluster", "cluster key: firm | zone | region", e.cluster),
      str("estimation", "weights", "empty or employment", e.weights),
      boolean("estimation", "small_sample", "apply G/(G-1)*(N-1)/(N-K) to the sandwich",
              e.small_sample),
      dbl("estimation", "weak_instrument_f", "warn when a first-stage F falls below",
          e.weak_instrument_f),
      integer("estimation", "base_year", "share base year (0: first panel year)", e.base_year),
      integer("estimation", "estimation_start",
              "first year that may not inform shares (0: base year + 1)", e.estimation_start),
      {"estimation", "wage_weighting", "national wage index: employment | unweighted",
       [&e] { return e.wage_weighting == shiftshare::WageWeighting::Employment ? "employment" : "unweighted"; },
       [&e](const std::string& v) {
         const auto t = trim(v);
         if (t == "employment") e.wage_weighting = shiftshare::WageWeighting::Employment;
         else if (t == "unweighted") e.wage_weighting = shiftshare::WageWeighting::Unweighted;
         else throw InvalidArgument("wage_weighting must be employment or unweighted");
       }},
      dbl("estimation", "missing_share_cap", "share mass on missing growth that may be dropped",
          e.missing_share_cap),
      boolean("estimation", "feedback", "run regional feedback regressions", e.feedback),
      boolean("estimation", "concessions", "run wage and skill concession regressions",
              e.concessions),

      dbl("policy", "minwage_elasticity", "employment elasticity", mw.elasticity.value),
      dbl("policy", "minwage_elasticity_se", "its standard error", mw.elasticity.se),
      dbl("policy", "minwage_wage_effect", "aggregate proportional wage change", mw.wage_effect.value),
      dbl("policy", "minwage_wage_effect_se", "its standard error", mw.wage_effect.se),
      dbl("policy", "minwage_workforce", "employment affected", mw.workforce),
      integer("policy", "minwage_draws", "Monte Carlo draws for the SE", mw.draws),
      boolean("policy", "counterfactual", "run the frozen-tightness counterfactual", cf.enabled),
      integer("policy", "counterfactual_base_year", "year tightness is frozen at", cf.base_year),
      {"policy", "counterfactual_mode", "cumulative_log | cumulative_level | chained_log",
       [&cf] { return policy::to_string(cf.mode); },
       [&cf](const std::string& v) { cf.mode = policy::parse_counterfactual_mode(trim(v)); }},
      integer("policy", "counterfactual_draws", "elasticity draws for the gap interval", cf.draws),
      {"policy", "eta_theta", "group:elasticity:se, comma-separated",
       [&cf] {
         std::string out;
         for (std::size_t i = 0; i < cf.eta_theta.size(); ++i)
           out += (i ? "," : "") + cf.eta_theta[i].first + ":" +
                  show(cf.eta_theta[i].second.value) + ":" + show(cf.eta_theta[i].second.se);
         return out;
       },
       [&cf](const std::string& v) {
         cf.eta_theta.clear();
         for (const auto& item : split(v, ',')) {
           const auto parts = split(item, ':');
           if (parts.size() != 3) throw InvalidArgument("eta_theta entries are group:value:se");
           cf.eta_theta.push_back(
               {parts[0], {parse_number<double>(parts[1]), parse_number<double>(parts[2])}});
         }
       }},
  };
  return v;
}

// Line of `key` inside `[section]`, for diagnostics; 0 when not found.
std::size_t line_of(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  std::string current;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (current == section && eq != std::string::npos && trim(t.substr(0, eq)) == key) return n;
  }
  return 0;
}

}  // namespace

void PipelineConfig::validate() const {
  simulation.validate();
  if (estimation.lag < 1) throw InvalidArgument("estimation.lag must be >= 1");
  if (estimation.cluster.empty()) throw InvalidArgument("estimation.cluster must name a key");
  if (!estimation.weights.empty() && estimation.weights != "employment")
    throw InvalidArgument("estimation.weights must be empty or 'employment'");
  if (!(estimation.missing_share_cap >= 0.0 && estimation.missing_share_cap < 1.0))
    throw InvalidArgument("estimation.missing_share_cap must lie in [0, 1)");
  if (!(zones.threshold_step > 0.0) || zones.threshold_lo > zones.threshold_hi)
    throw InvalidArgument("zones threshold grid is empty");
  (void)parse_contiguity(zones.contiguity);
  if (policy.minwage.draws < 1) throw InvalidArgument("policy.minwage_draws must be >= 1");
  if (!(policy.minwage.workforce > 0.0)) throw InvalidArgument("policy.minwage_workforce must be > 0");
}

PipelineConfig parse_config(const std::string& text, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& err) {
    throw SchemaError(source, err.line(), "", err.message());
  }
  PipelineConfig cfg;
  auto table = entries(cfg);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw SchemaError(source, line_of(text, "", section), section, "key outside any section");
    for (const auto& [key, value] : body) {
      auto it = std::find_if(table.begin(), table.end(),
                             [&](const Entry& e) { return e.section == section && e.key == key; });
      if (it == table.end())
        throw SchemaError(source, line_of(text, section, key), section + "." + key,
                          "unknown configuration key");
      try {
        it->set(value.data());
      } catch (const InvalidArgument& err) {
        throw SchemaError(source, line_of(text, section, key), section + "." + key, err.what());
      }
    }
  }
  cfg.simulation.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  auto cfg = parse_config(read_file(path), path);
  cfg.base_dir = std::filesystem::path(path).parent_path().string();
  return cfg;
}

void apply_seed(PipelineConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.simulation.seed = seed;
}

std::string default_config_text() {
  PipelineConfig cfg;
  const auto table = entries(cfg);
  std::ostringstream out;
  std::string section;
  for (const auto& e : table) {
    if (e.section != section) {
      if (!section.empty()) out << '\n';
      section = e.section;
      out << '[' << section << "]\n";
    }
    out << "; " << e.doc << '\n' << e.key << " = " << e.get() << '\n';
  }
  return out.str();
}

std::string resolve(const PipelineConfig& cfg, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || cfg.base_dir.empty()) return path;
  return (std::filesystem::path(cfg.base_dir) / p).string();
}

zones::ContiguityMode parse_contiguity(const std::string& text) {
  if (text == "split") return zones::ContiguityMode::Split;
  if (text == "attach") return zones::ContiguityMode::Attach;
  if (text == "none") return zones::ContiguityMode::Split;  // caller skips enforcement
  throw InvalidArgument("zones.contiguity must be none, split or attach");
}

}  // namespace tightlab::io
