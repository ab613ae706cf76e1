#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tightlab::est {

// Column store of named numeric columns and named integer keys (for fixed effects and
// clustering). All columns share one row count.
class Dataset {
public:
  Dataset() = default;
  explicit Dataset(std::size_t rows) : rows_(rows) {}

  std::size_t rows() const noexcept { return rows_; }

  void add_column(const std::string& name, Eigen::VectorXd values);
  void add_key(const std::string& name, std::vector<std::int64_t> values);

  bool has_column(std::string_view name) const;
  bool has_key(std::string_view name) const;
  const Eigen::VectorXd& column(std::string_view name) const;
  const std::vector<std::int64_t>& key(std::string_view name) const;

  std::vector<std::string> column_names() const;
  std::vector<std::string> key_names() const;

  // Dense group ids for a key or an interaction written "a*b" (also "a#b").
  std::vector<std::int64_t> group_ids(std::string_view spec) const;

  // Rows where keep[i] != 0, in order.
  Dataset filter(const std::vector<char>& keep) const;

private:
  std::size_t rows_ = 0;
  std::map<std::string, Eigen::VectorXd, std::less<>> columns_;
  std::map<std::string, std::vector<std::int64_t>, std::less<>> keys_;
};

// Unit x year levels to be differenced.
struct LevelPanel {
  std::vector<std::int64_t> unit;
  std::vector<int> year;
  std::vector<std::pair<std::string, std::vector<double>>> logged;  // -> "dln_<name>", "base_<name>"
  std::vector<std::pair<std::string, std::vector<double>>> levels;  // -> "d_<name>"
  std::vector<std::pair<std::string, std::vector<std::int64_t>>> keys;  // copied from year t
};

struct Differenced {
  Dataset data;
  std::size_t dropped = 0;  // rows without the lagged observation
};

// x_t - x_{t-lag} per unit (in logs for `logged`, non-positive levels give NaN). The output
// has keys `unit_key` and "year" and one row per unit-year whose lag is observed.
Differenced first_difference(const LevelPanel& panel, int lag, const std::string& unit_key = "firm");

}  // namespace tightlab::est
