#ifndef LQTX_EXPERIMENTS_HPP_
#define LQTX_EXPERIMENTS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "lqtx/csv.hpp"
#include "lqtx/experiment_config.hpp"

namespace lqtx {

struct OptimizedPolicy {
  OptimizationTraced trace;
  SuccessVectord success;
  double cost{0};  // closed-form expected cost of trace.policy

  std::size_t nonzero_slots() const;
  /// 1-based index of the last slot with p_t > 0, or 0 for a silent policy.
  std::size_t last_active_slot() const;
};

OptimizedPolicy optimize_for(const ExperimentConfig& cfg);

csv::Table policy_table(const PowerPolicyd& policy, const ChannelParamsd& ch);
csv::Table trace_table(const OptimizationTraced& trace);

/// Reads a `t,p,pi` file back into a policy (the p column).
PowerPolicyd read_policy(const std::filesystem::path& path);

struct OptimizeOutputs {
  std::filesystem::path policy_csv;
  std::filesystem::path trace_csv;
  OptimizedPolicy result;
};

/// Writes policy.csv (`t,p,pi`) and trace.csv (`iteration,cost`).
OptimizeOutputs run_optimize(const ExperimentConfig& cfg);

struct SimulateOutputs {
  std::filesystem::path slots_csv;
  std::filesystem::path summary_csv;
  SimReport report;
  double closed_form{0};
};

/// Monte Carlo evaluation of `policy` (or of the optimized policy when empty).
SimulateOutputs run_simulate(const ExperimentConfig& cfg, const PowerPolicyd* policy = nullptr);

struct CompareRow {
  std::size_t horizon{0};
  SimReport proposed, full, open;
};

struct CompareOutputs {
  std::filesystem::path comparison_csv;
  std::vector<CompareRow> rows;
};

/// comparison.csv: `T,cost_proposed,se_proposed,cost_full,se_full,cost_open,se_open`.
CompareOutputs run_compare(const ExperimentConfig& cfg, const std::vector<std::size_t>& horizons,
                           const std::string& stem = "comparison");

struct SweepPoint {
  double value{0};
  std::filesystem::path policy_csv;
  OptimizedPolicy result;
};

struct SweepOutputs {
  std::filesystem::path index_csv;
  std::vector<SweepPoint> points;
};

/// Parameters accepted by run_sweep.
const std::vector<std::string>& sweep_parameters();

/// Sets one named parameter; throws InvalidParameter for an unknown name.
void set_parameter(ExperimentConfig& cfg, const std::string& name, double value);

/*
 * One optimized policy file per value plus an index with columns
 * `index,parameter,value,file,nonzero_slots,total_energy,cost`.
 */
SweepOutputs run_sweep(const ExperimentConfig& cfg, const std::string& parameter,
                       const std::vector<double>& values, const std::string& stem = "sweep");

struct FigureOutputs {
  std::vector<std::filesystem::path> csvs;
  std::vector<std::filesystem::path> scripts;
};

FigureOutputs run_figure(const ExperimentConfig& cfg, Preset figure, bool plot);

enum class PlotKind {
  stem,        // p_t against t, one panel series per CSV
  comparison,  // proposed / full / open cost against T
};

struct PlotOptions {
  bool log_y{false};
  std::string title;
};

/// Writes a gnuplot script for the given CSVs; throws if any CSV is missing.
void emit_plot_script(const std::vector<std::filesystem::path>& csvs, PlotKind kind,
                      const std::filesystem::path& script, const PlotOptions& options = {});

}  // namespace lqtx

#endif  // LQTX_EXPERIMENTS_HPP_
