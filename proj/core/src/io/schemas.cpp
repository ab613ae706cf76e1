#include "tightlab/io/schemas.hpp"

#include <set>
#include <tuple>

#include "tightlab/error.hpp"
#include "tightlab/io/csv.hpp"

namespace tightlab::io {

namespace {

[[noreturn]] void fail(const CsvTable& t, std::size_t row, std::size_t col, const std::string& msg) {
  throw SchemaError(t.source, t.line[row], t.header[col], msg);
}

double non_negative(const CsvTable& t, std::size_t row, std::size_t col) {
  const double v = field_double(t, row, col);
  if (v < 0.0) fail(t, row, col, "must be >= 0, got " + format_double(v));
  return v;
}

double positive(const CsvTable& t, std::size_t row, std::size_t col) {
  const double v = field_double(t, row, col);
  if (!(v > 0.0)) fail(t, row, col, "must be > 0, got " + format_double(v));
  return v;
}

Year year_field(const CsvTable& t, std::size_t row, std::size_t col) {
  const auto v = field_int(t, row, col);
  if (v < 1000 || v > 9999) fail(t, row, col, "year out of range: " + std::to_string(v));
  return static_cast<Year>(v);
}

OccupationCode occupation_field(const CsvTable& t, std::size_t row, std::size_t col) {
  const auto& code = field_string(t, row, col);
  try {
    (void)tightness::requirement_level(code);
  } catch (const InvalidArgument& err) {
    fail(t, row, col, err.what());
  }
  return code;
}

std::optional<double> optional_double(const CsvTable& t, std::size_t row, std::size_t col) {
  if (t.rows[row][col].empty()) return std::nullopt;
  return field_double(t, row, col);
}

void maybe(CsvWriter& w, const std::optional<double>& v) {
  if (v) w.field(*v);
  else w.empty_field();
}

}  // namespace

FirmPanel read_firm_panel(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::firm_panel);
  FirmPanel out;
  out.reserve(t.rows.size());
  std::set<std::tuple<FirmId, Year, OccupationCode>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    FirmRecord rec{field_int(t, r, 0), year_field(t, r, 1), occupation_field(t, r, 2),
                   field_int(t, r, 3),  non_negative(t, r, 4), positive(t, r, 5)};
    if (!seen.emplace(rec.firm, rec.year, rec.occupation).second)
      fail(t, r, 2, "duplicate (firm_id, year, occupation)");
    out.push_back(std::move(rec));
  }
  return out;
}

std::string format_firm_panel(const FirmPanel& panel) {
  CsvWriter w(header::firm_panel);
  for (const auto& r : panel) {
    w.field(r.firm).field(r.year).field(r.occupation).field(r.region).field(r.employment).field(r.wage_daily);
    w.end_row();
  }
  return w.str();
}

std::vector<MarketCell> read_markets(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::markets);
  std::vector<MarketCell> out;
  out.reserve(t.rows.size());
  std::set<std::tuple<OccupationCode, RegionId, Year>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    MarketCell c;
    c.occupation = occupation_field(t, r, 0);
    c.region = field_int(t, r, 1);
    c.year = year_field(t, r, 2);
    c.registered_vacancies = non_negative(t, r, 3);
    c.total_vacancies = c.registered_vacancies;
    c.job_seekers = non_negative(t, r, 4);
    if (!seen.emplace(c.occupation, c.region, c.year).second)
      fail(t, r, 0, "duplicate (occupation, region, year)");
    out.push_back(std::move(c));
  }
  return out;
}

std::string format_markets(const std::vector<MarketCell>& cells) {
  CsvWriter w(header::markets);
  for (const auto& c : cells) {
    w.field(c.occupation).field(c.region).field(c.year).field(c.registered_vacancies).field(c.job_seekers);
    w.end_row();
  }
  return w.str();
}

tightness::NotificationShares read_notification_shares(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::notification_shares);
  tightness::NotificationShares out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Year year = year_field(t, r, 0);
    tightness::NotificationLevel level{};
    try {
      level = tightness::parse_notification_level(field_string(t, r, 1));
    } catch (const InvalidArgument& err) {
      fail(t, r, 1, err.what());
    }
    const double share = field_double(t, r, 2);
    if (!(share > 0.0 && share <= 1.0)) fail(t, r, 2, "share must lie in (0, 1]");
    if (out.find(year, level)) fail(t, r, 1, "duplicate (year, level)");
    out.set(year, level, share);
  }
  return out;
}

std::string format_notification_shares(const tightness::NotificationShares& shares) {
  CsvWriter w(header::notification_shares);
  for (const auto& [key, share] : shares.entries()) {
    w.field(key.first).field(tightness::to_string(key.second)).field(share);
    w.end_row();
  }
  return w.str();
}

tightness::TransitionMatrix read_transitions(const std::string& transitions_path,
                                             const std::string& employment_path) {
  const auto e = read_csv(employment_path);
  require_header(e, header::occupation_employment);
  tightness::TransitionMatrix tm;
  std::map<OccupationCode, Eigen::Index> index;
  std::vector<double> emp;
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    auto occ = occupation_field(e, r, 0);
    if (!index.emplace(occ, static_cast<Eigen::Index>(tm.occupations.size())).second)
      fail(e, r, 0, "duplicate occupation");
    tm.occupations.push_back(std::move(occ));
    emp.push_back(non_negative(e, r, 1));
  }
  const auto n = static_cast<Eigen::Index>(tm.occupations.size());
  tm.employment = Eigen::Map<Eigen::VectorXd>(emp.data(), n);
  tm.probability = Eigen::MatrixXd::Zero(n, n);

  const auto t = read_csv(transitions_path);
  require_header(t, header::transitions);
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto from = index.find(occupation_field(t, r, 0));
    if (from == index.end()) fail(t, r, 0, "occupation missing from " + employment_path);
    const auto to = index.find(occupation_field(t, r, 1));
    if (to == index.end()) fail(t, r, 1, "occupation missing from " + employment_path);
    const double p = field_double(t, r, 2);
    if (!(p >= 0.0 && p <= 1.0)) fail(t, r, 2, "probability must lie in [0, 1]");
    if (!seen.emplace(from->second, to->second).second) fail(t, r, 1, "duplicate transition");
    tm.probability(from->second, to->second) = p;
  }
  return tm;
}

std::string format_transitions(const tightness::TransitionMatrix& tm) {
  CsvWriter w(header::transitions);
  for (std::size_t i = 0; i < tm.size(); ++i)
    for (std::size_t j = 0; j < tm.size(); ++j) {
      const double p = tm.probability(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (p == 0.0) continue;
      w.field(tm.occupations[i]).field(tm.occupations[j]).field(p);
      w.end_row();
    }
  return w.str();
}

std::string format_occupation_employment(const tightness::TransitionMatrix& tm) {
  CsvWriter w(header::occupation_employment);
  for (std::size_t i = 0; i < tm.size(); ++i) {
    w.field(tm.occupations[i]).field(tm.employment(static_cast<Eigen::Index>(i)));
    w.end_row();
  }
  return w.str();
}

RegionGraph read_commuting(const std::string& commuting_path, const std::string& labor_force_path) {
  const auto lf = read_csv(labor_force_path);
  require_header(lf, header::labor_force);
  RegionGraph out;
  std::map<RegionId, Eigen::Index> index;
  std::vector<double> force;
  for (std::size_t r = 0; r < lf.rows.size(); ++r) {
    const RegionId id = field_int(lf, r, 0);
    if (!index.emplace(id, static_cast<Eigen::Index>(out.regions.size())).second)
      fail(lf, r, 0, "duplicate region");
    out.regions.push_back(id);
    force.push_back(positive(lf, r, 1));
  }
  const auto n = static_cast<Eigen::Index>(out.regions.size());
  Eigen::MatrixXd directed = Eigen::MatrixXd::Zero(n, n);

  const auto t = read_csv(commuting_path);
  require_header(t, header::commuting);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto from = index.find(field_int(t, r, 0));
    if (from == index.end()) fail(t, r, 0, "region missing from " + labor_force_path);
    const auto to = index.find(field_int(t, r, 1));
    if (to == index.end()) fail(t, r, 1, "region missing from " + labor_force_path);
    directed(from->second, to->second) += non_negative(t, r, 2);
  }
  out.graph = zones::CommutingGraph::from_directed(directed, Eigen::Map<Eigen::VectorXd>(force.data(), n));
  return out;
}

std::string format_commuting(const std::vector<RegionId>& regions, const Eigen::MatrixXd& directed) {
  CsvWriter w(header::commuting);
  for (Eigen::Index i = 0; i < directed.rows(); ++i)
    for (Eigen::Index j = 0; j < directed.cols(); ++j) {
      if (i == j || directed(i, j) == 0.0) continue;
      w.field(regions[i]).field(regions[j]).field(directed(i, j));
      w.end_row();
    }
  return w.str();
}

std::string format_labor_force(const std::vector<RegionId>& regions, const Eigen::VectorXd& labor_force) {
  CsvWriter w(header::labor_force);
  for (Eigen::Index i = 0; i < labor_force.size(); ++i) {
    w.field(regions[i]).field(labor_force(i));
    w.end_row();
  }
  return w.str();
}

std::vector<RegionEmploymentRecord> read_region_employment(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::region_employment);
  std::vector<RegionEmploymentRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    out.push_back({field_int(t, r, 0), year_field(t, r, 1), occupation_field(t, r, 2),
                   non_negative(t, r, 3)});
  return out;
}

std::string format_region_employment(const std::vector<RegionEmploymentRecord>& rows) {
  CsvWriter w(header::region_employment);
  for (const auto& r : rows) {
    w.field(r.region).field(r.year).field(r.occupation).field(r.employment);
    w.end_row();
  }
  return w.str();
}

std::vector<RegionMarketRecord> read_region_markets(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::region_markets);
  std::vector<RegionMarketRecord> out;
  std::set<std::pair<RegionId, Year>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    RegionMarketRecord rec{field_int(t, r, 0), year_field(t, r, 1), non_negative(t, r, 2),
                           non_negative(t, r, 3)};
    if (!seen.emplace(rec.region, rec.year).second) fail(t, r, 1, "duplicate (region, year)");
    out.push_back(rec);
  }
  return out;
}

std::string format_region_markets(const std::vector<RegionMarketRecord>& rows) {
  CsvWriter w(header::region_markets);
  for (const auto& r : rows) {
    w.field(r.region).field(r.year).field(r.vacancies).field(r.job_seekers);
    w.end_row();
  }
  return w.str();
}

std::map<RegionId, std::int64_t> read_zones(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::zones);
  std::map<RegionId, std::int64_t> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (!out.emplace(field_int(t, r, 0), field_int(t, r, 1)).second) fail(t, r, 0, "duplicate region");
  return out;
}

std::string format_zones(const std::vector<RegionId>& regions, const zones::Partition& partition) {
  CsvWriter w(header::zones);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    w.field(regions[i]).field(partition.zone_of[i]);
    w.end_row();
  }
  return w.str();
}

std::string format_market_tightness(const std::vector<tightness::MarketTightnessRow>& rows) {
  CsvWriter w(header::market_tightness);
  for (const auto& r : rows) {
    w.field(r.occupation).field(r.region).field(r.year).field(r.registered_vacancies).field(r.share_used);
    w.field(r.total_vacancies).field(r.job_seekers).field(r.adjusted_vacancies).field(r.adjusted_job_seekers);
    maybe(w, r.tightness);
    w.end_row();
  }
  return w.str();
}

std::string format_firm_tightness(const std::vector<tightness::FirmTightnessRow>& rows) {
  CsvWriter w(header::firm_tightness);
  for (const auto& r : rows) {
    w.field(r.firm).field(r.year).field(r.region);
    maybe(w, r.tightness);
    w.field(r.dropped_share);
    w.end_row();
  }
  return w.str();
}

std::string format_instruments(const std::vector<shiftshare::InstrumentRow>& rows) {
  CsvWriter w(header::instruments);
  for (const auto& r : rows) {
    w.field(r.firm).field(r.year).field(r.base_year);
    maybe(w, r.z_w);
    maybe(w, r.z_v);
    maybe(w, r.z_u);
    w.end_row();
  }
  return w.str();
}

std::vector<shiftshare::InstrumentRow> read_instruments(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::instruments);
  std::vector<shiftshare::InstrumentRow> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    out.push_back({field_int(t, r, 0), year_field(t, r, 1), year_field(t, r, 2), optional_double(t, r, 3),
                   optional_double(t, r, 4), optional_double(t, r, 5)});
  return out;
}

std::map<std::string, std::map<Year, double>> read_employment_series(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::employment_series);
  std::map<std::string, std::map<Year, double>> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (!out[field_string(t, r, 0)].emplace(year_field(t, r, 1), non_negative(t, r, 2)).second)
      fail(t, r, 1, "duplicate (group, year)");
  return out;
}

std::map<Year, double> read_tightness_series(const std::string& path) {
  const auto t = read_csv(path);
  require_header(t, header::tightness_series);
  std::map<Year, double> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (!out.emplace(year_field(t, r, 0), positive(t, r, 1)).second) fail(t, r, 0, "duplicate year");
  return out;
}

std::string format_counterfactual(const policy::CounterfactualResult& result) {
  CsvWriter w(header::counterfactual);
  for (const auto& g : result.groups)
    for (const auto& p : g.points) {
      w.field(g.name).field(p.year).field(p.factual).field(p.counterfactual);
      w.end_row();
    }
  for (const auto& p : result.total) {
    w.field("total").field(p.year).field(p.factual).field(p.counterfactual);
    w.end_row();
  }
  return w.str();
}

}  // namespace tightlab::io
