#include "tightlab/tightness.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "tightlab/error.hpp"

namespace tightlab::tightness {

RequirementLevel requirement_level(std::string_view occupation_code) {
  if (occupation_code.size() != 5)
    throw InvalidArgument("occupation code '" + std::string(occupation_code) +
                          "' is not a 5-digit code");
  switch (occupation_code[4]) {
    case '1': return RequirementLevel::Helper;
    case '2': return RequirementLevel::Professional;
    case '3': return RequirementLevel::Specialist;
    case '4': return RequirementLevel::Expert;
    default:
      throw InvalidArgument("occupation code '" + std::string(occupation_code) +
                            "' has requirement digit outside 1-4");
  }
}

NotificationLevel notification_bucket(RequirementLevel level) {
  switch (level) {
    case RequirementLevel::Helper: return NotificationLevel::Helper;
    case RequirementLevel::Professional: return NotificationLevel::Professional;
    default: return NotificationLevel::SpecialistExpert;
  }
}

NotificationLevel notification_bucket(std::string_view occupation_code) {
  return notification_bucket(requirement_level(occupation_code));
}

std::string to_string(NotificationLevel level) {
  switch (level) {
    case NotificationLevel::Helper: return "helper";
    case NotificationLevel::Professional: return "professional";
    case NotificationLevel::SpecialistExpert: return "specialist_expert";
  }
  return "unknown";
}

NotificationLevel parse_notification_level(std::string_view text) {
  if (text == "helper") return NotificationLevel::Helper;
  if (text == "professional") return NotificationLevel::Professional;
  if (text == "specialist_expert" || text == "specialist" || text == "expert")
    return NotificationLevel::SpecialistExpert;
  throw InvalidArgument("unknown requirement level '" + std::string(text) + "'");
}

void NotificationShares::set(Year year, NotificationLevel level, double share) {
  if (!(share > 0.0 && share <= 1.0))
    throw InvalidArgument("notification share for " + to_string(level) + " in " +
                          std::to_string(year) + " must lie in (0, 1]");
  shares_[{year, level}] = share;
}

std::optional<double> NotificationShares::find(Year year, NotificationLevel level) const {
  if (auto it = shares_.find({year, level}); it != shares_.end()) return it->second;
  return std::nullopt;
}

double NotificationShares::at(Year year, NotificationLevel level) const {
  if (auto s = find(year, level)) return *s;
  throw InvalidArgument("no notification share for " + to_string(level) + " in " +
                        std::to_string(year));
}

double total_vacancies(double registered, const NotificationShares& shares, Year year,
                       NotificationLevel level) {
  if (registered < 0.0) throw InvalidArgument("registered vacancies must be >= 0");
  return registered / shares.at(year, level);
}

std::optional<double> market_tightness(const MarketCell& cell) {
  if (cell.job_seekers <= 0.0) return std::nullopt;
  return cell.total_vacancies / cell.job_seekers;
}

FirmTightness firm_tightness(std::span<const double> shares,
                             std::span<const std::optional<double>> ratios) {
  if (shares.size() != ratios.size())
    throw InvalidArgument("firm_tightness: shares and ratios differ in length");
  double defined_mass = 0.0;
  double weighted = 0.0;
  double dropped = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (shares[i] < 0.0) throw InvalidArgument("firm_tightness: negative share");
    if (shares[i] == 0.0) continue;
    if (ratios[i]) {
      defined_mass += shares[i];
      weighted += shares[i] * *ratios[i];
    } else {
      dropped += shares[i];
    }
  }
  FirmTightness out;
  out.dropped_share = dropped;
  if (defined_mass > 0.0) out.value = weighted / defined_mass;
  return out;
}

void TransitionMatrix::validate() const {
  const auto n = static_cast<Eigen::Index>(occupations.size());
  if (probability.rows() != n || probability.cols() != n || employment.size() != n)
    throw InvalidArgument("transition matrix dimensions do not match the occupation list");
  for (Eigen::Index o = 0; o < n; ++o) {
    double row = 0.0;
    for (Eigen::Index h = 0; h < n; ++h) {
      if (probability(o, h) < 0.0)
        throw InvalidArgument("negative transition probability from " + occupations[o]);
      row += probability(o, h);
    }
    if (std::fabs(row - 1.0) > 1e-9)
      throw InvalidArgument("transition probabilities from " + occupations[o] +
                            " sum to " + std::to_string(row));
  }
}

TransitionMatrix pool_transitions(const std::vector<OccupationCode>& occupations,
                                  std::span<const Eigen::MatrixXd> counts,
                                  const Eigen::VectorXd& employment) {
  const auto n = static_cast<Eigen::Index>(occupations.size());
  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : counts) {
    if (c.rows() != n || c.cols() != n)
      throw InvalidArgument("transition count matrix has wrong dimensions");
    pooled += c;
  }
  TransitionMatrix tm{occupations, Eigen::MatrixXd::Zero(n, n), employment};
  for (Eigen::Index o = 0; o < n; ++o) {
    double row = 0.0;
    for (Eigen::Index h = 0; h < n; ++h) row += pooled(o, h);
    if (!(row > 0.0))
      throw InvalidArgument("no observed transitions out of occupation " + occupations[o]);
    for (Eigen::Index h = 0; h < n; ++h) tm.probability(o, h) = pooled(o, h) / row;
  }
  return tm;
}

std::optional<std::size_t> FlowWeights::index_of(std::string_view occupation) const {
  for (std::size_t i = 0; i < occupations.size(); ++i)
    if (occupations[i] == occupation) return i;
  return std::nullopt;
}

FlowWeights flow_weights(const TransitionMatrix& tm, double warn_above) {
  tm.validate();
  const auto n = static_cast<Eigen::Index>(tm.size());
  FlowWeights fw{tm.occupations, Eigen::MatrixXd::Zero(n, n), {}};
  for (Eigen::Index o = 0; o < n; ++o) {
    const double stay = tm.probability(o, o);
    if (!(stay > 0.0))
      throw InvalidArgument("occupation " + tm.occupations[o] +
                            " has zero staying probability P(o|o)");
    for (Eigen::Index h = 0; h < n; ++h) {
      if (o == h) {
        fw.weight(o, h) = 1.0;
        continue;
      }
      if (tm.probability(o, h) == 0.0) continue;
      if (!(tm.employment(h) > 0.0))
        throw InvalidArgument("occupation " + tm.occupations[h] + " has zero employment");
      const double w = (tm.probability(o, h) / stay) * (tm.employment(o) / tm.employment(h));
      fw.weight(o, h) = w;
      if (w > warn_above) {
        std::ostringstream msg;
        msg << "weight " << tm.occupations[o] << "->" << tm.occupations[h] << " = " << w
            << " exceeds " << warn_above;
        fw.warnings.push_back(msg.str());
      }
    }
  }
  return fw;
}

AdjustedStocks flow_adjusted_stocks(const FlowWeights& weights, const Eigen::VectorXd& vacancies,
                                    const Eigen::VectorXd& job_seekers) {
  const auto n = static_cast<Eigen::Index>(weights.size());
  if (vacancies.size() != n || job_seekers.size() != n)
    throw InvalidArgument("stock vectors do not match the weight matrix");
  AdjustedStocks out{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  for (Eigen::Index o = 0; o < n; ++o) {
    double v = 0.0;
    double u = 0.0;
    for (Eigen::Index h = 0; h < n; ++h) {
      v += weights.weight(o, h) * vacancies(h);
      u += weights.weight(o, h) * job_seekers(h);
    }
    out.vacancies(o) = v;
    out.job_seekers(o) = u;
  }
  return out;
}

FirmTightness flow_adjusted_firm_tightness(const Eigen::VectorXd& shares,
                                           const AdjustedStocks& stocks) {
  const auto n = shares.size();
  if (stocks.vacancies.size() != n || stocks.job_seekers.size() != n)
    throw InvalidArgument("share vector does not match the adjusted stocks");
  std::vector<double> s(static_cast<std::size_t>(n));
  std::vector<std::optional<double>> ratios(static_cast<std::size_t>(n));
  for (Eigen::Index o = 0; o < n; ++o) {
    s[o] = shares(o);
    if (stocks.job_seekers(o) > 0.0) ratios[o] = stocks.vacancies(o) / stocks.job_seekers(o);
  }
  return firm_tightness(s, ratios);
}

std::vector<MarketTightnessRow> build_market_tightness(const std::vector<MarketCell>& cells,
                                                       const NotificationShares* shares,
                                                       const FlowWeights* flows) {
  std::vector<MarketTightnessRow> rows;
  rows.reserve(cells.size());
  std::set<std::tuple<OccupationCode, RegionId, Year>> seen;
  for (const auto& cell : cells) {
    if (!seen.emplace(cell.occupation, cell.region, cell.year).second)
      throw InvalidArgument("duplicate market cell " + cell.occupation + "/" +
                            std::to_string(cell.region) + "/" + std::to_string(cell.year));
    MarketTightnessRow row;
    row.occupation = cell.occupation;
    row.region = cell.region;
    row.year = cell.year;
    row.registered_vacancies = cell.registered_vacancies;
    row.job_seekers = cell.job_seekers;
    if (shares != nullptr) {
      row.share_used = shares->at(cell.year, notification_bucket(cell.occupation));
      row.total_vacancies = cell.registered_vacancies / row.share_used;
    } else {
      row.share_used = 1.0;
      row.total_vacancies = cell.total_vacancies;
    }
    row.adjusted_vacancies = row.total_vacancies;
    row.adjusted_job_seekers = row.job_seekers;
    rows.push_back(std::move(row));
  }

  if (flows != nullptr) {
    std::map<std::pair<RegionId, Year>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) groups[{rows[i].region, rows[i].year}].push_back(i);
    const auto n = static_cast<Eigen::Index>(flows->size());
    for (const auto& [key, members] : groups) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
      std::vector<std::optional<std::size_t>> slot(members.size());
      for (std::size_t m = 0; m < members.size(); ++m) {
        const auto& row = rows[members[m]];
        slot[m] = flows->index_of(row.occupation);
        if (!slot[m]) continue;
        v(static_cast<Eigen::Index>(*slot[m])) = row.total_vacancies;
        u(static_cast<Eigen::Index>(*slot[m])) = row.job_seekers;
      }
      const auto adj = flow_adjusted_stocks(*flows, v, u);
      for (std::size_t m = 0; m < members.size(); ++m) {
        if (!slot[m]) continue;
        auto& row = rows[members[m]];
        row.adjusted_vacancies = adj.vacancies(static_cast<Eigen::Index>(*slot[m]));
        row.adjusted_job_seekers = adj.job_seekers(static_cast<Eigen::Index>(*slot[m]));
      }
    }
  }

  for (auto& row : rows)
    if (row.adjusted_job_seekers > 0.0) row.tightness = row.adjusted_vacancies / row.adjusted_job_seekers;
  return rows;
}

std::vector<FirmTightnessRow> build_firm_tightness(const std::vector<FirmYear>& firms,
                                                   const std::vector<MarketTightnessRow>& markets) {
  std::map<std::tuple<OccupationCode, RegionId, Year>, std::optional<double>> lookup;
  for (const auto& m : markets) lookup.emplace(std::make_tuple(m.occupation, m.region, m.year), m.tightness);

  std::vector<FirmTightnessRow> out;
  out.reserve(firms.size());
  std::vector<double> shares;
  std::vector<std::optional<double>> ratios;
  for (const auto& fy : firms) {
    shares.clear();
    ratios.clear();
    for (const auto& [occ, share] : fy.shares) {
      shares.push_back(share);
      auto it = lookup.find({occ, fy.region, fy.year});
      ratios.push_back(it == lookup.end() ? std::nullopt : it->second);
    }
    const auto ft = firm_tightness(shares, ratios);
    out.push_back({fy.firm, fy.year, fy.region, ft.value, ft.dropped_share});
  }
  return out;
}

}  // namespace tightlab::tightness
