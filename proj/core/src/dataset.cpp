#include "tightlab/dataset.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tightlab/error.hpp"

namespace tightlab::est {

void Dataset::add_column(const std::string& name, Eigen::VectorXd values) {
  if (static_cast<std::size_t>(values.size()) != rows_)
    throw InvalidArgument("column '" + name + "' has " + std::to_string(values.size()) +
                          " rows, dataset has " + std::to_string(rows_));
  columns_[name] = std::move(values);
}

void Dataset::add_key(const std::string& name, std::vector<std::int64_t> values) {
  if (values.size() != rows_)
    throw InvalidArgument("key '" + name + "' has " + std::to_string(values.size()) +
                          " rows, dataset has " + std::to_string(rows_));
  keys_[name] = std::move(values);
}

bool Dataset::has_column(std::string_view name) const { return columns_.find(name) != columns_.end(); }
bool Dataset::has_key(std::string_view name) const { return keys_.find(name) != keys_.end(); }

const Eigen::VectorXd& Dataset::column(std::string_view name) const {
  auto it = columns_.find(name);
  if (it == columns_.end()) throw InvalidArgument("unknown column '" + std::string(name) + "'");
  return it->second;
}

const std::vector<std::int64_t>& Dataset::key(std::string_view name) const {
  auto it = keys_.find(name);
  if (it == keys_.end()) throw InvalidArgument("unknown key '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> Dataset::column_names() const {
  std::vector<std::string> out;
  for (const auto& [name, col] : columns_) out.push_back(name);
  return out;
}

std::vector<std::string> Dataset::key_names() const {
  std::vector<std::string> out;
  for (const auto& [name, col] : keys_) out.push_back(name);
  return out;
}

std::vector<std::int64_t> Dataset::group_ids(std::string_view spec) const {
  std::vector<std::string> parts;
  std::string current;
  for (char c : spec) {
    if (c == '*' || c == '#') {
      parts.push_back(current);
      current.clear();
    } else if (c != ' ') {
      current.push_back(c);
    }
  }
  parts.push_back(current);

  std::vector<const std::vector<std::int64_t>*> cols;
  for (const auto& p : parts) cols.push_back(&key(p));

  std::map<std::vector<std::int64_t>, std::int64_t> ids;
  std::vector<std::int64_t> out(rows_);
  std::vector<std::int64_t> tuple(cols.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) tuple[c] = (*cols[c])[i];
    auto [it, inserted] = ids.emplace(tuple, static_cast<std::int64_t>(ids.size()));
    out[i] = it->second;
  }
  return out;
}

Dataset Dataset::filter(const std::vector<char>& keep) const {
  if (keep.size() != rows_) throw InvalidArgument("filter mask has the wrong length");
  std::size_t n = 0;
  for (char k : keep) n += k != 0;
  Dataset out(n);
  for (const auto& [name, col] : columns_) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    Eigen::Index j = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      if (keep[i]) v(j++) = col(static_cast<Eigen::Index>(i));
    out.columns_[name] = std::move(v);
  }
  for (const auto& [name, col] : keys_) {
    std::vector<std::int64_t> v;
    v.reserve(n);
    for (std::size_t i = 0; i < rows_; ++i)
      if (keep[i]) v.push_back(col[i]);
    out.keys_[name] = std::move(v);
  }
  return out;
}

Differenced first_difference(const LevelPanel& panel, int lag, const std::string& unit_key) {
  if (lag < 1) throw InvalidArgument("lag must be >= 1");
  const std::size_t n = panel.unit.size();
  if (panel.year.size() != n) throw InvalidArgument("unit and year vectors differ in length");
  for (const auto* group : {&panel.logged, &panel.levels})
    for (const auto& [name, v] : *group)
      if (v.size() != n) throw InvalidArgument("column '" + name + "' has the wrong length");
  for (const auto& [name, v] : panel.keys)
    if (v.size() != n) throw InvalidArgument("key '" + name + "' has the wrong length");

  std::map<std::pair<std::int64_t, int>, std::size_t> at;
  for (std::size_t i = 0; i < n; ++i)
    if (!at.emplace(std::make_pair(panel.unit[i], panel.year[i]), i).second)
      throw InvalidArgument("duplicate unit-year (" + std::to_string(panel.unit[i]) + ", " +
                            std::to_string(panel.year[i]) + ")");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (current, lagged), ordered by unit, year
  std::size_t dropped = 0;
  for (const auto& [key, i] : at) {
    auto prev = at.find({key.first, key.second - lag});
    if (prev == at.end()) {
      ++dropped;
      continue;
    }
    pairs.emplace_back(i, prev->second);
  }

  const auto m = pairs.size();
  Differenced out{Dataset(m), dropped};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::int64_t> unit(m), year(m);
  for (std::size_t r = 0; r < m; ++r) {
    unit[r] = panel.unit[pairs[r].first];
    year[r] = panel.year[pairs[r].first];
  }
  out.data.add_key(unit_key, std::move(unit));
  out.data.add_key("year", std::move(year));
  for (const auto& [name, v] : panel.logged) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(m)), base(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
      const double now = v[pairs[r].first];
      const double then = v[pairs[r].second];
      d(static_cast<Eigen::Index>(r)) = now > 0.0 && then > 0.0 ? std::log(now) - std::log(then) : nan;
      base(static_cast<Eigen::Index>(r)) = then;
    }
    out.data.add_column("dln_" + name, std::move(d));
    out.data.add_column("base_" + name, std::move(base));
  }
  for (const auto& [name, v] : panel.levels) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r)
      d(static_cast<Eigen::Index>(r)) = v[pairs[r].first] - v[pairs[r].second];
    out.data.add_column("d_" + name, std::move(d));
  }
  for (const auto& [name, v] : panel.keys) {
    std::vector<std::int64_t> k(m);
    for (std::size_t r = 0; r < m; ++r) k[r] = v[pairs[r].first];
    out.data.add_key(name, std::move(k));
  }
  return out;
}

}  // namespace tightlab::est
