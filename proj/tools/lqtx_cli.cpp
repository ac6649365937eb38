// lqtx: optimize, simulate and compare transmit-power policies for a scalar
// LQ loop closed over a fading packet-erasure channel.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lqtx/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string preset;
  bool plot{false};
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON experiment config");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--seed", flags.seed, "master RNG seed");
  cmd->add_option("--samples", flags.samples, "Monte Carlo replications");
  cmd->add_option("--preset", flags.preset, "fig2 | fig3 | fig4");
  cmd->add_flag("--plot", flags.plot, "also write gnuplot scripts");
}

lqtx::ExperimentConfig build_config(const CommonFlags& flags,
                                    std::optional<lqtx::Preset> forced = std::nullopt) {
  lqtx::ExperimentConfig cfg =
      flags.config.empty() ? lqtx::config_from_json(nlohmann::json::object())
                           : lqtx::load_config(flags.config);
  std::optional<lqtx::Preset> preset = forced;
  if (!preset && !flags.preset.empty()) {
    preset = lqtx::parse_preset(flags.preset);
    if (!preset) throw lqtx::InvalidParameter("preset in {fig2, fig3, fig4}");
  }
  if (preset) lqtx::apply_preset(cfg, *preset);
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  if (flags.seed) cfg.sim.seed = *flags.seed;
  if (flags.samples) cfg.sim.n_samples = *flags.samples;
  cfg.validate();
  return cfg;
}

void report_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware transmit power policies for scalar LQ control over fading links"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* optimize = app.add_subcommand("optimize", "optimize a power policy");
  add_common(optimize, flags);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation of a policy");
  add_common(simulate, flags);
  std::string policy_csv;
  simulate->add_option("--policy", policy_csv, "policy CSV (t,p,pi); default: optimize first");

  auto* compare = app.add_subcommand("compare", "proposed vs full-power vs open-loop");
  add_common(compare, flags);
  std::vector<std::size_t> horizons;
  compare->add_option("--horizons", horizons, "horizons T to compare")->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "optimize over a range of one parameter");
  add_common(sweep, flags);
  std::string parameter;
  std::vector<double> values;
  sweep->add_option("--param", parameter, "a | k | q | r | P_max | sigma_d2")->required();
  sweep->add_option("--values", values, "comma-separated values")->delimiter(',');

  auto* figure = app.add_subcommand("figure", "reproduce a figure preset");
  add_common(figure, flags);
  std::string figure_name;
  figure->add_option("name", figure_name, "fig2 | fig3 | fig4")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (optimize->parsed()) {
      const auto cfg = build_config(flags);
      const auto out = lqtx::run_optimize(cfg);
      report_files({out.policy_csv, out.trace_csv});
      if (flags.plot) {
        const auto script = cfg.output_dir / "policy.gp";
        lqtx::emit_plot_script({out.policy_csv}, lqtx::PlotKind::stem, script);
        report_files({script});
      }
    } else if (simulate->parsed()) {
      const auto cfg = build_config(flags);
      std::optional<lqtx::PowerPolicyd> policy;
      if (!policy_csv.empty()) policy = lqtx::read_policy(policy_csv);
      const auto out = lqtx::run_simulate(cfg, policy ? &*policy : nullptr);
      report_files({out.slots_csv, out.summary_csv});
    } else if (compare->parsed()) {
      const auto cfg = build_config(flags);
      std::vector<std::size_t> hs = horizons;
      if (hs.empty()) hs = cfg.horizons;
      if (hs.empty()) hs = {cfg.sys.horizon};
      const auto out = lqtx::run_compare(cfg, hs);
      report_files({out.comparison_csv});
      if (flags.plot) {
        const auto script = cfg.output_dir / "comparison.gp";
        lqtx::emit_plot_script({out.comparison_csv}, lqtx::PlotKind::comparison, script,
                               {true, ""});
        report_files({script});
      }
    } else if (sweep->parsed()) {
      const auto cfg = build_config(flags);
      const auto out = lqtx::run_sweep(cfg, parameter, values);
      std::vector<std::filesystem::path> files;
      for (const auto& p : out.points) files.push_back(p.policy_csv);
      files.push_back(out.index_csv);
      report_files(files);
      if (flags.plot && !out.points.empty()) {
        const auto script = cfg.output_dir / "sweep.gp";
        files.pop_back();
        lqtx::emit_plot_script(files, lqtx::PlotKind::stem, script);
        report_files({script});
      }
    } else if (figure->parsed()) {
      const auto preset = lqtx::parse_preset(figure_name);
      if (!preset) throw lqtx::InvalidParameter("figure in {fig2, fig3, fig4}");
      const auto cfg = build_config(flags, preset);
      const auto out = lqtx::run_figure(cfg, *preset, flags.plot);
      report_files(out.csvs);
      report_files(out.scripts);
    }
  } catch (const lqtx::InvalidParameter& e) {
    std::cerr << "error: invalid_config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
