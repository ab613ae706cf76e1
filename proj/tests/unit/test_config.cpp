#include <doctest.h>

#include "fixtures.hpp"
#include "tightlab/error.hpp"
#include "tightlab/io/config.hpp"
#include "tightlab/io/csv.hpp"

using namespace tightlab;
using namespace tightlab::io;

TEST_SUITE("config") {

TEST_CASE("documented defaults parse back to the built-in defaults") {
  const auto cfg = parse_config(default_config_text());
  const PipelineConfig def;
  CHECK(cfg.seed == def.seed);
  CHECK(cfg.paths.firm_panel == def.paths.firm_panel);
  CHECK(cfg.paths.output_dir == def.paths.output_dir);
  CHECK(cfg.simulation.n_firms == def.simulation.n_firms);
  CHECK(cfg.simulation.true_eta_lw == def.simulation.true_eta_lw);
  CHECK(cfg.simulation.matching.mu == def.simulation.matching.mu);
  CHECK(cfg.estimation.lag == def.estimation.lag);
  CHECK(cfg.estimation.fixed_effects == def.estimation.fixed_effects);
  CHECK(cfg.zones.threshold_hi == def.zones.threshold_hi);
  CHECK(cfg.policy.minwage.workforce == def.policy.minwage.workforce);
  CHECK(cfg.policy.counterfactual.eta_theta.size() == def.policy.counterfactual.eta_theta.size());
  CHECK(cfg.policy.counterfactual.eta_theta[0].second.value == def.policy.counterfactual.eta_theta[0].second.value);
  CHECK(cfg.policy.counterfactual.mode == def.policy.counterfactual.mode);
}

TEST_CASE("values override defaults") {
  const auto cfg = parse_config(
      "[run]\nseed = 42\n"
      "[simulation]\nn_firms = 123\nmu = 0.5\n"
      "[estimation]\nlag = 1\nfixed_effects = year, zone\ncluster = zone\n"
      "[policy]\ncounterfactual_mode = chained_log\neta_theta = a:-0.1:0.01\n");
  CHECK(cfg.seed == 42);
  CHECK(cfg.simulation.seed == 42);
  CHECK(cfg.simulation.n_firms == 123);
  CHECK(cfg.simulation.matching.mu == 0.5);
  CHECK(cfg.estimation.lag == 1);
  CHECK(cfg.estimation.fixed_effects == std::vector<std::string>{"year", "zone"});
  CHECK(cfg.policy.counterfactual.mode == policy::CounterfactualMode::ChainedLog);
  REQUIRE(cfg.policy.counterfactual.eta_theta.size() == 1);
  CHECK(cfg.policy.counterfactual.eta_theta[0].first == "a");
  CHECK(cfg.policy.counterfactual.eta_theta[0].second.se == 0.01);
}

TEST_CASE("unknown keys and bad values name the line") {
  try {
    (void)parse_config("[estimation]\nlag = 2\nlagg = 3\n", "c.ini");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.file() == "c.ini");
    CHECK(e.row() == 3);
  }
  CHECK_THROWS_AS(parse_config("[nosuch]\nx = 1\n"), SchemaError);
  CHECK_THROWS_AS(parse_config("[estimation]\nlag = two\n"), SchemaError);
  CHECK_THROWS_AS(parse_config("[tightness]\nflow_adjustment = maybe\n"), SchemaError);
}

TEST_CASE("validation rejects inconsistent settings") {
  PipelineConfig cfg;
  cfg.estimation.lag = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = PipelineConfig{};
  cfg.zones.contiguity = "sideways";
  CHECK_THROWS(cfg.validate());
  cfg = PipelineConfig{};
  cfg.simulation.national_shock_sd = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("seed override reaches every seeded component") {
  PipelineConfig cfg;
  apply_seed(cfg, 99);
  CHECK(cfg.seed == 99);
  CHECK(cfg.simulation.seed == 99);
}

TEST_CASE("relative paths resolve against the config file") {
  testing::ScratchDir dir("config");
  write_file_atomic(dir.file("run.ini"), "[paths]\nfirm_panel = data/panel.csv\n");
  const auto cfg = load_config(dir.file("run.ini"));
  CHECK(resolve(cfg, cfg.paths.firm_panel) == (dir.path() / "data/panel.csv").string());
  CHECK(resolve(cfg, "/abs/x.csv") == "/abs/x.csv");
  CHECK_THROWS(load_config(dir.file("absent.ini")));
}

}
