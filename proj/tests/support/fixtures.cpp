#include "fixtures.hpp"

#include <atomic>
#include <unistd.h>

namespace tightlab::testing {

ScratchDir::ScratchDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("tightlab-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

IvPanel make_iv_panel(std::size_t units, std::size_t periods, std::uint64_t seed, double b1,
                      double b2, std::size_t cluster_size) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  const std::size_t n = units * periods;
  Eigen::VectorXd z1(n), z2(n), c(n), x1(n), x2(n), y(n);
  std::vector<std::int64_t> unit(n), period(n), cluster(n);
  std::vector<double> unit_fe(units), period_fe(periods);
  for (auto& v : unit_fe) v = 2.0 * n01(rng);
  for (auto& v : period_fe) v = n01(rng);
  for (std::size_t i = 0; i < units; ++i) {
    for (std::size_t t = 0; t < periods; ++t) {
      const auto r = static_cast<Eigen::Index>(i * periods + t);
      unit[r] = static_cast<std::int64_t>(i);
      period[r] = static_cast<std::int64_t>(2000 + t);
      cluster[r] = static_cast<std::int64_t>(i / cluster_size);
      z1(r) = n01(rng);
      z2(r) = n01(rng);
      c(r) = n01(rng) + 0.3 * unit_fe[i];
      const double v = 0.5 * n01(rng);
      x1(r) = z1(r) + 0.5 * z2(r) + 0.3 * c(r) + 0.5 * n01(rng) + v;
      x2(r) = 0.4 * z1(r) + z2(r) + 0.5 * n01(rng) - v;
      y(r) = b1 * x1(r) + b2 * x2(r) + 0.7 * c(r) + unit_fe[i] + period_fe[t] + v + 0.3 * n01(rng);
    }
  }
  IvPanel out{est::Dataset(n), b1, b2};
  out.data.add_column("z1", z1);
  out.data.add_column("z2", z2);
  out.data.add_column("c", c);
  out.data.add_column("x1", x1);
  out.data.add_column("x2", x2);
  out.data.add_column("y", y);
  out.data.add_key("unit", unit);
  out.data.add_key("period", period);
  out.data.add_key("cluster", cluster);
  return out;
}

sim::EconomyConfig small_economy(std::uint64_t seed) {
  sim::EconomyConfig cfg;
  cfg.n_occupations = 12;
  cfg.n_regions = 4;
  cfg.n_firms = 300;
  cfg.n_years = 5;
  cfg.n_feedback_regions = 30;
  cfg.seed = seed;
  return cfg;
}

PlantedGraph planted_two_communities(int half, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> inside(200.0, 400.0);
  std::uniform_real_distribution<double> across(1.0, 5.0);
  std::uniform_real_distribution<double> size(5000.0, 9000.0);
  const int n = 2 * half;
  PlantedGraph g{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd(n), std::vector<int>(n)};
  for (int i = 0; i < n; ++i) {
    g.truth[i] = i < half ? 0 : 1;
    g.labor_force(i) = size(rng);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) g.directed(i, j) = g.truth[i] == g.truth[j] ? inside(rng) : across(rng);
  return g;
}

}  // namespace tightlab::testing
