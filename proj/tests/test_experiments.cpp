#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "lqtx/csv.hpp"
#include "lqtx/experiments.hpp"

using namespace lqtx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lqtx_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults and explicit fields") {
  const auto cfg = config_from_json(nlohmann::json::parse(R"({
    "sys": {"a": 1.05, "q": 2, "T": 12, "sigma_x2": 0.5},
    "ch": {"theta": 0.8, "p_max": 2},
    "sim": {"n_samples": 10, "seed": 5, "channel_model": "gain_threshold",
            "initial_state": {"kind": "fixed", "x1": 2}},
    "output_dir": "somewhere"
  })"));
  CHECK(cfg.sys.a == 1.05);
  CHECK(cfg.sys.b == -1);
  CHECK(cfg.sys.horizon == 12);
  CHECK(cfg.ch.theta() == doctest::Approx(0.8));
  CHECK(cfg.ch.p_max == 2);
  CHECK(cfg.opt.ex2_1 == 0.5);
  CHECK(cfg.sim.channel_model == ChannelModel::gain_threshold);
  CHECK(cfg.sim.initial_state.kind == InitialState::Kind::fixed);
  CHECK(cfg.sim.initial_state.second_moment() == 4.0);
  CHECK(cfg.output_dir == fs::path("somewhere"));
}

TEST_CASE("config rejects invariant violations by name") {
  auto reject = [](const char* doc, const std::string& needle) {
    try {
      config_from_json(nlohmann::json::parse(doc));
      FAIL("accepted invalid config");
    } catch (const InvalidParameter& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  reject(R"({"sys": {"q": 0}})", "q > 0");
  reject(R"({"sys": {"r": -1}})", "r > 0");
  reject(R"({"sys": {"T": 0}})", "T >= 1");
  reject(R"({"ch": {"p_max": 0}})", "p_max > 0");
  reject(R"({"ch": {"theta": 1, "gamma": 2}})", "theta");
  reject(R"({"preset": "fig9"})", "preset");
  reject(R"({"sim": {"channel_model": "ricean"}})", "channel_model");
  reject(R"({"sys": {"q": "one"}})", "malformed");
}

TEST_CASE("presets are pure overrides") {
  ExperimentConfig explicit_cfg = config_from_json(nlohmann::json::parse(R"({
    "sys": {"a": 1.1, "b": -1, "k": 1.8, "q": 1, "r": 0.5, "sigma_x2": 1, "sigma_d2": 0.05, "T": 30},
    "ch": {"theta": 1, "p_max": 3},
    "sim": {"n_samples": 10000, "initial_state": {"kind": "gaussian", "sigma_x2": 1}},
    "horizons": [1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23,24,25,26,27,28,29,30]
  })"));
  ExperimentConfig preset_cfg =
      config_from_json(nlohmann::json::parse(R"({"sys": {"q": 9, "k": 0.1}, "preset": "fig4"})"));
  preset_cfg.preset.reset();
  CHECK(config_to_json(preset_cfg) == config_to_json(explicit_cfg));
}

TEST_CASE("fig2 preset pins the noiseless nominal scenario") {
  ExperimentConfig cfg;
  apply_preset(cfg, Preset::fig2);
  CHECK(cfg.sys.k == 1);
  CHECK(cfg.sys.sigma_d2 == 0);
  CHECK(cfg.ch.theta() == 1);
  CHECK(cfg.sim.initial_state.kind == InitialState::Kind::fixed);
  const auto variants = fig2_variants(cfg);
  CHECK(variants.size() == 6);
  CHECK(variants[0].name == "nominal");
}

TEST_CASE("property: CSV numbers round-trip exactly") {
  const fs::path dir = scratch("csv");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-10, 10);
  csv::Table table{{"x", "y"}, {}};
  std::vector<double> values;
  for (int i = 0; i < 500; ++i) {
    const double x = std::ldexp(U(rng), static_cast<int>(i % 40) - 20);
    const double y = U(rng) * 1e-300;
    values.push_back(x);
    values.push_back(y);
    table.rows.push_back({csv::format_number(x), csv::format_number(y)});
  }
  csv::write(dir / "t.csv", table);
  const auto back = csv::read(dir / "t.csv");
  REQUIRE(back.rows.size() == 500);
  for (std::size_t i = 0; i < 500; ++i) {
    CHECK(back.number(i, "x") == values[2 * i]);
    CHECK(back.number(i, "y") == values[2 * i + 1]);
  }
  CHECK(slurp(dir / "t.csv").find('\r') == std::string::npos);
}

TEST_CASE("run_optimize writes policy and trace files") {
  ExperimentConfig cfg;
  apply_preset(cfg, Preset::fig2);
  cfg.output_dir = scratch("optimize");
  const auto out = run_optimize(cfg);
  const auto policy = csv::read(out.policy_csv);
  CHECK(policy.header == std::vector<std::string>{"t", "p", "pi"});
  CHECK(policy.rows.size() == 30);
  const auto trace = csv::read(out.trace_csv);
  CHECK(trace.header == std::vector<std::string>{"iteration", "cost"});
  for (std::size_t i = 1; i < trace.rows.size(); ++i)
    CHECK(trace.number(i, "cost") <= trace.number(i - 1, "cost"));
  const auto reread = read_policy(out.policy_csv);
  CHECK(reread == out.result.trace.policy);
}

TEST_CASE("run_simulate summary") {
  ExperimentConfig cfg;
  cfg.sys.horizon = 6;
  cfg.sim.n_samples = 2000;
  cfg.output_dir = scratch("simulate");
  const auto out = run_simulate(cfg);
  const auto summary = csv::read(out.summary_csv);
  CHECK(summary.number(0, "n_samples") == 2000);
  CHECK(std::abs(out.report.mean_cost - out.closed_form) <= 5 * out.report.std_err);
  CHECK(csv::read(out.slots_csv).rows.size() == 6);
  PowerPolicyd wrong = PowerPolicyd::zeros(5);
  CHECK_THROWS_AS(run_simulate(cfg, &wrong), InvalidParameter);
}

TEST_CASE("run_compare at T = 1") {
  ExperimentConfig cfg;
  apply_preset(cfg, Preset::fig2);
  cfg.sim.n_samples = 20000;
  cfg.output_dir = scratch("compare");
  const auto out = run_compare(cfg, {1});
  REQUIRE(out.rows.size() == 1);
  const auto& row = out.rows[0];
  CHECK(row.proposed.mean_cost == doctest::Approx(1.0));
  CHECK(row.open.mean_cost == doctest::Approx(1.0));
  const double full = 1.0 + 0.5 * std::exp(-1.0 / 3.0) + 3.0;
  CHECK(std::abs(row.full.mean_cost - full) <= 4 * row.full.std_err);
  const auto table = csv::read(out.comparison_csv);
  CHECK(table.header == std::vector<std::string>{"T", "cost_proposed", "se_proposed", "cost_full",
                                                 "se_full", "cost_open", "se_open"});
}

TEST_CASE("run_sweep") {
  ExperimentConfig cfg;
  cfg.sys.horizon = 10;
  cfg.output_dir = scratch("sweep");
  SUBCASE("k sweep writes one file per value") {
    const auto out = run_sweep(cfg, "k", {1.0, 1.8});
    CHECK(out.points.size() == 2);
    CHECK(csv::read(out.index_csv).rows.size() == 2);
    CHECK(fs::exists(out.points[1].policy_csv));
  }
  SUBCASE("empty value list still writes an index") {
    const auto out = run_sweep(cfg, "q", {});
    const auto index = csv::read(out.index_csv);
    CHECK(index.rows.empty());
    CHECK(index.header.size() == 7);
  }
  SUBCASE("unknown parameter") { CHECK_THROWS_AS(run_sweep(cfg, "b", {1.0}), InvalidParameter); }
}

TEST_CASE("plot scripts") {
  ExperimentConfig cfg;
  cfg.sys.horizon = 5;
  cfg.sim.n_samples = 50;
  cfg.output_dir = scratch("plot");
  const auto opt = run_optimize(cfg);
  const auto stem_script = cfg.output_dir / "p.gp";
  emit_plot_script({opt.policy_csv}, PlotKind::stem, stem_script);
  const std::string stem = slurp(stem_script);
  CHECK(stem.find("impulses") != std::string::npos);
  CHECK(stem.find("'policy.csv'") != std::string::npos);
  CHECK(stem.find("t (1), p_t (2)") != std::string::npos);
  CHECK(stem.find("logscale") == std::string::npos);

  const auto cmp = run_compare(cfg, {2, 3});
  const auto cmp_script = cfg.output_dir / "c.gp";
  emit_plot_script({cmp.comparison_csv}, PlotKind::comparison, cmp_script, {true, "x"});
  const std::string text = slurp(cmp_script);
  CHECK(text.find("set logscale y") != std::string::npos);
  CHECK(text.find("'proposed'") != std::string::npos);
  CHECK(text.find("'full power'") != std::string::npos);
  CHECK(text.find("'open loop'") != std::string::npos);

  CHECK_THROWS(emit_plot_script({cfg.output_dir / "nope.csv"}, PlotKind::stem, stem_script));
}
