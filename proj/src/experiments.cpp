#include "lqtx/experiments.hpp"

#include <algorithm>
#include <stdexcept>

#include "lqtx/channel.hpp"
#include "lqtx/model.hpp"

namespace lqtx {

namespace fs = std::filesystem;
using csv::format_number;

std::size_t OptimizedPolicy::nonzero_slots() const {
  const auto& p = trace.policy.p;
  return static_cast<std::size_t>((p.array() > 0.0).count());
}

std::size_t OptimizedPolicy::last_active_slot() const {
  for (std::size_t t = trace.policy.size(); t > 0; --t)
    if (trace.policy[t - 1] > 0) return t;
  return 0;
}

OptimizedPolicy optimize_for(const ExperimentConfig& cfg) {
  cfg.validate();
  const PowerPolicyd initial = cfg.init == InitialPolicy::zero
                                   ? baseline_policy(BaselineKind::open_loop, cfg.ch, cfg.sys.horizon)
                                   : baseline_policy(BaselineKind::full_power, cfg.ch, cfg.sys.horizon);
  OptimizedPolicy out;
  out.trace = optimize_policy(cfg.sys, cfg.ch, cfg.opt, initial);
  out.success = to_success(out.trace.policy, cfg.ch);
  out.cost = expected_cost_closed_form(cfg.sys, cfg.ch, out.success, cfg.opt.ex2_1);
  return out;
}

csv::Table policy_table(const PowerPolicyd& policy, const ChannelParamsd& ch) {
  csv::Table table{{"t", "p", "pi"}, {}};
  for (std::size_t t = 0; t < policy.size(); ++t) {
    table.rows.push_back({format_number(t + 1), format_number(policy[t]),
                          format_number(power_to_success(policy[t], ch))});
  }
  return table;
}

csv::Table trace_table(const OptimizationTraced& trace) {
  csv::Table table{{"iteration", "cost"}, {}};
  for (std::size_t i = 0; i < trace.cost_history.size(); ++i)
    table.rows.push_back({format_number(i), format_number(trace.cost_history[i])});
  return table;
}

PowerPolicyd read_policy(const fs::path& path) {
  const csv::Table table = csv::read(path);
  Eigen::VectorXd p(static_cast<Eigen::Index>(table.rows.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    p(static_cast<Eigen::Index>(i)) = table.number(i, "p");
  return PowerPolicyd(std::move(p));
}

OptimizeOutputs run_optimize(const ExperimentConfig& cfg) {
  OptimizeOutputs out;
  out.result = optimize_for(cfg);
  out.policy_csv = cfg.output_dir / "policy.csv";
  out.trace_csv = cfg.output_dir / "trace.csv";
  csv::write(out.policy_csv, policy_table(out.result.trace.policy, cfg.ch));
  csv::write(out.trace_csv, trace_table(out.result.trace));
  return out;
}

SimulateOutputs run_simulate(const ExperimentConfig& cfg, const PowerPolicyd* policy) {
  cfg.validate();
  PowerPolicyd chosen = policy ? *policy : optimize_for(cfg).trace.policy;
  if (chosen.size() != cfg.sys.horizon) throw InvalidParameter("policy length == T");
  validate(chosen, cfg.ch);

  SimulateOutputs out;
  out.report = monte_carlo_cost(cfg.sys, cfg.ch, chosen, cfg.sim);
  out.closed_form = expected_cost_closed_form(cfg.sys, cfg.ch, to_success(chosen, cfg.ch),
                                              cfg.sim.initial_state.second_moment());
  out.slots_csv = cfg.output_dir / "simulation.csv";
  out.summary_csv = cfg.output_dir / "summary.csv";

  csv::Table slots{{"t", "state_cost", "input_cost", "power"}, {}};
  for (Eigen::Index t = 0; t < out.report.per_slot.rows(); ++t) {
    slots.rows.push_back({format_number(static_cast<std::size_t>(t + 1)),
                          format_number(out.report.per_slot(t, 0)),
                          format_number(out.report.per_slot(t, 1)),
                          format_number(out.report.per_slot(t, 2))});
  }
  csv::write(out.slots_csv, slots);
  csv::Table summary{{"mean_cost", "std_err", "std_err_defined", "n_samples", "closed_form"}, {}};
  summary.rows.push_back({format_number(out.report.mean_cost), format_number(out.report.std_err),
                          out.report.std_err_defined ? "1" : "0",
                          format_number(out.report.n_samples), format_number(out.closed_form)});
  csv::write(out.summary_csv, summary);
  return out;
}

CompareOutputs run_compare(const ExperimentConfig& cfg, const std::vector<std::size_t>& horizons,
                           const std::string& stem) {
  cfg.validate();
  CompareOutputs out;
  csv::Table table{
      {"T", "cost_proposed", "se_proposed", "cost_full", "se_full", "cost_open", "se_open"}, {}};
  for (std::size_t T : horizons) {
    ExperimentConfig at = cfg;
    at.sys.horizon = T;
    const PowerPolicyd proposed = optimize_for(at).trace.policy;
    // Same seed for every policy: common random numbers for x_1, d and the channel.
    CompareRow row;
    row.horizon = T;
    row.proposed = monte_carlo_cost(at.sys, at.ch, proposed, at.sim);
    row.full = monte_carlo_cost(at.sys, at.ch, baseline_policy(BaselineKind::full_power, at.ch, T),
                                at.sim);
    row.open = monte_carlo_cost(at.sys, at.ch, baseline_policy(BaselineKind::open_loop, at.ch, T),
                                at.sim);
    table.rows.push_back({format_number(T), format_number(row.proposed.mean_cost),
                          format_number(row.proposed.std_err), format_number(row.full.mean_cost),
                          format_number(row.full.std_err), format_number(row.open.mean_cost),
                          format_number(row.open.std_err)});
    out.rows.push_back(std::move(row));
  }
  out.comparison_csv = cfg.output_dir / (stem + ".csv");
  csv::write(out.comparison_csv, table);
  return out;
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"a", "k", "q", "r", "P_max", "sigma_d2"};
  return names;
}

void set_parameter(ExperimentConfig& cfg, const std::string& name, double value) {
  if (name == "a")
    cfg.sys.a = value;
  else if (name == "k")
    cfg.sys.k = value;
  else if (name == "q")
    cfg.sys.q = value;
  else if (name == "r")
    cfg.sys.r = value;
  else if (name == "P_max" || name == "p_max")
    cfg.ch.p_max = value;
  else if (name == "sigma_d2")
    cfg.sys.sigma_d2 = value;
  else
    throw InvalidParameter("parameter in {a, k, q, r, P_max, sigma_d2}");
}

SweepOutputs run_sweep(const ExperimentConfig& cfg, const std::string& parameter,
                       const std::vector<double>& values, const std::string& stem) {
  {
    ExperimentConfig probe = cfg;
    set_parameter(probe, parameter, 0.0);  // rejects unknown names before any work
  }
  SweepOutputs out;
  csv::Table index{
      {"index", "parameter", "value", "file", "nonzero_slots", "total_energy", "cost"}, {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig at = cfg;
    set_parameter(at, parameter, values[i]);
    SweepPoint point;
    point.value = values[i];
    point.result = optimize_for(at);
    const std::string file = stem + "_" + parameter + "_" + std::to_string(i) + ".csv";
    point.policy_csv = cfg.output_dir / file;
    csv::write(point.policy_csv, policy_table(point.result.trace.policy, at.ch));
    index.rows.push_back({format_number(i), parameter, format_number(values[i]), file,
                          format_number(point.result.nonzero_slots()),
                          format_number(point.result.trace.policy.total_energy()),
                          format_number(point.result.cost)});
    out.points.push_back(std::move(point));
  }
  out.index_csv = cfg.output_dir / (stem + "_index.csv");
  csv::write(out.index_csv, index);
  return out;
}

FigureOutputs run_figure(const ExperimentConfig& cfg, Preset figure, bool plot) {
  FigureOutputs out;
  switch (figure) {
    case Preset::fig2: {
      csv::Table index{{"variant", "file", "nonzero_slots", "last_active_slot", "total_energy",
                        "cost"},
                       {}};
      std::vector<fs::path> policies;
      for (const Fig2Variant& v : fig2_variants(cfg)) {
        const OptimizedPolicy result = optimize_for(v.cfg);
        const std::string file = "fig2_" + v.name + ".csv";
        const fs::path path = cfg.output_dir / file;
        csv::write(path, policy_table(result.trace.policy, v.cfg.ch));
        policies.push_back(path);
        index.rows.push_back({v.name, file, format_number(result.nonzero_slots()),
                              format_number(result.last_active_slot()),
                              format_number(result.trace.policy.total_energy()),
                              format_number(result.cost)});
      }
      const fs::path index_path = cfg.output_dir / "fig2_index.csv";
      csv::write(index_path, index);
      out.csvs = policies;
      out.csvs.push_back(index_path);
      if (plot) {
        const fs::path script = cfg.output_dir / "fig2.gp";
        emit_plot_script(policies, PlotKind::stem, script, {false, "Transmit power, sigma_d^2 = 0"});
        out.scripts.push_back(script);
      }
      break;
    }
    case Preset::fig3: {
      const SweepOutputs sweep = run_sweep(cfg, "sigma_d2", fig3_noise_levels(), "fig3");
      std::vector<fs::path> policies;
      for (const SweepPoint& p : sweep.points) policies.push_back(p.policy_csv);
      out.csvs = policies;
      out.csvs.push_back(sweep.index_csv);
      if (plot) {
        const fs::path script = cfg.output_dir / "fig3.gp";
        emit_plot_script(policies, PlotKind::stem, script, {false, "Transmit power vs sigma_d^2"});
        out.scripts.push_back(script);
      }
      break;
    }
    case Preset::fig4: {
      std::vector<std::size_t> horizons = cfg.horizons;
      if (horizons.empty()) horizons = {cfg.sys.horizon};
      const CompareOutputs cmp = run_compare(cfg, horizons, "fig4_comparison");
      out.csvs.push_back(cmp.comparison_csv);
      if (plot) {
        const fs::path script = cfg.output_dir / "fig4.gp";
        emit_plot_script({cmp.comparison_csv}, PlotKind::comparison, script,
                         {true, "Mean combined cost vs horizon"});
        out.scripts.push_back(script);
      }
      break;
    }
  }
  return out;
}

}  // namespace lqtx
