// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lqtx/experiments.hpp"
#include "lqtx/model.hpp"
#include "lqtx/optimizer.hpp"
#include "lqtx/simulator.hpp"
#include "oracles.hpp"

using namespace lqtx;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass{false};
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

const ChannelParamsd kChannel = ChannelParamsd::from_theta(1.0, 3.0);

ExperimentConfig preset(Preset p) {
  ExperimentConfig cfg;
  apply_preset(cfg, p);
  return cfg;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto d = oracle::random_draw(rng, 1, 10);
    const double closed = expected_cost_closed_form(d.sys, d.ch, d.pi);
    const double brute = brute_force_expected_cost(d.sys, d.ch, d.pi);
    worst = std::max(worst, std::abs(closed - brute) / std::max(1.0, std::abs(brute)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-9 && elapsed < 5.0,
          fmt("max rel err %.3g (<= 1e-9), %.3f s (< 5 s)", worst, elapsed)};
}

Outcome recursion_equivalence() {
  std::mt19937_64 rng(1002);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto d = oracle::random_draw(rng, 1, 20);
    const auto tables = backward_tables(d.sys, d.pi);
    for (std::size_t t = 0; t < d.sys.horizon; ++t) {
      const double fb = oracle::fbar_direct(d.sys, d.pi, t);
      const double fs = oracle::fs_direct(d.sys, d.pi, t);
      worst = std::max(worst, std::abs(tables.fbar(static_cast<Eigen::Index>(t)) - fb) / std::abs(fb));
      worst = std::max(worst, std::abs(tables.fs(static_cast<Eigen::Index>(t)) - fs) / std::abs(fs));
    }
  }
  return {worst <= 1e-12, fmt("max rel err %.3g (<= 1e-12)", worst)};
}

Outcome derivative_check() {
  std::mt19937_64 rng(1003);
  const double h = 1e-6;
  double worst = 0;
  std::size_t points = 0;
  for (int i = 0; i < 50; ++i) {
    auto d = oracle::random_draw(rng, 1, 15);
    // Interior points: keep pi_t +- h inside (0, pi_max).
    std::uniform_real_distribution<double> U(0.02, d.ch.pi_max() - 10 * h);
    for (std::size_t t = 0; t < d.sys.horizon; ++t) d.pi[t] = U(rng);
    const auto tables = recursion_tables(d.sys, d.pi, d.sys.sigma_x2);
    for (std::size_t t = 0; t < d.sys.horizon; ++t) {
      const double analytic = cost_partial_wrt_success(d.sys, d.ch, tables, t, d.pi[t]);
      const double fd = oracle::central_difference(d.sys, d.ch, d.pi, t, d.sys.sigma_x2, h);
      worst = std::max(worst, std::abs(analytic - fd) / std::abs(analytic));
      ++points;
    }
  }
  return {worst <= 1e-5, fmt("max rel err %.3g (<= 1e-5) over %.0f slot points", worst,
                             static_cast<double>(points))};
}

Outcome monte_carlo_consistency() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1004);
  int consistent = 0;
  int channels_agree = 0;
  for (int i = 0; i < 20; ++i) {
    const auto d = oracle::random_draw(rng, 1, 10);
    const PowerPolicyd policy = to_power(d.pi, d.ch);
    const double closed = expected_cost_closed_form(d.sys, d.ch, to_success(policy, d.ch));
    SimConfig sim;
    sim.n_samples = 100000;
    sim.seed = 4000 + static_cast<std::uint64_t>(i);
    sim.initial_state = InitialState::gaussian(d.sys.sigma_x2);
    const SimReport bern = monte_carlo_cost(d.sys, d.ch, policy, sim);
    if (std::abs(bern.mean_cost - closed) <= 4 * bern.std_err) ++consistent;
    sim.channel_model = ChannelModel::gain_threshold;
    sim.seed += 1000;
    const SimReport gain = monte_carlo_cost(d.sys, d.ch, policy, sim);
    const double combined = std::hypot(bern.std_err, gain.std_err);
    if (std::abs(bern.mean_cost - gain.mean_cost) <= 4 * combined) ++channels_agree;
  }
  const double elapsed = seconds_since(start);
  return {consistent >= 19 && channels_agree >= 19 && elapsed < 30.0,
          fmt("closed-form within 4 se: %.0f/20 (>= 19); bernoulli vs gain-threshold within 4 "
              "combined se: %.0f/20 (>= 19); %.2f s (< 30 s)",
              consistent, channels_agree, elapsed)};
}

Outcome descent_and_terminal_rule() {
  std::mt19937_64 rng(1005);
  int ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto d = oracle::random_draw(rng, 1, 30);
    OptimizerConfigd cfg;
    cfg.ex2_1 = d.sys.sigma_x2;
    const auto trace = optimize_policy(d.sys, d.ch, cfg);
    bool good = trace.policy[d.sys.horizon - 1] == 0.0;
    for (std::size_t k = 1; k < trace.cost_history.size(); ++k)
      good = good && trace.cost_history[k] <= trace.cost_history[k - 1];
    ok += good ? 1 : 0;
  }
  return {ok == 100, fmt("%.0f/100 traces non-increasing with p_T = 0", ok)};
}

Outcome fig2_nominal() {
  const auto start = Clock::now();
  const ExperimentConfig cfg = preset(Preset::fig2);
  const OptimizedPolicy result = optimize_for(cfg);
  const double elapsed = seconds_since(start);
  const std::size_t last = result.last_active_slot();
  const bool prefix = result.nonzero_slots() == last;
  const auto T = cfg.sys.horizon;
  const double full = expected_cost_closed_form(
      cfg.sys, cfg.ch, to_success(baseline_policy(BaselineKind::full_power, cfg.ch, T), cfg.ch),
      cfg.opt.ex2_1);
  const double open =
      expected_cost_closed_form(cfg.sys, cfg.ch, SuccessVectord::zeros(T), cfg.opt.ex2_1);
  const bool pass =
      prefix && last >= 7 && last <= 9 && result.cost < full && result.cost < open && elapsed < 1.0;
  return {pass, fmt("active prefix ends at t=%.0f (8 +- 1); cost %.4f vs full %.4f, open %.4f; ",
                    static_cast<double>(last), result.cost, full, open) +
                    fmt("%.3f s (< 1 s)", elapsed)};
}

Outcome fig2_directions() {
  const auto variants = fig2_variants(preset(Preset::fig2));
  std::vector<OptimizedPolicy> results;
  for (const auto& v : variants) results.push_back(optimize_for(v.cfg));
  auto find = [&](const std::string& name) -> const OptimizedPolicy& {
    for (std::size_t i = 0; i < variants.size(); ++i)
      if (variants[i].name == name) return results[i];
    throw std::logic_error("no variant " + name);
  };
  const auto& nominal = find("nominal");
  const double e_nom = nominal.trace.policy.total_energy();
  const double e_k = find("k_1.8").trace.policy.total_energy();
  const double e_r = find("r_high").trace.policy.total_energy();
  const double e_q = find("q_high").trace.policy.total_energy();
  const auto w_nom = static_cast<double>(nominal.last_active_slot());
  const auto w_pmax = static_cast<double>(find("p_max_low").last_active_slot());
  const bool pass = e_k > e_nom && w_pmax > w_nom && e_r < e_nom && e_q > e_nom;
  return {pass, fmt("energy nominal %.4f, k=1.8 %.4f, ", e_nom, e_k) +
                    fmt("r high %.4f, q high %.4f; ", e_r, e_q) +
                    fmt("window nominal %.0f, reduced P_max %.0f", w_nom, w_pmax)};
}

Outcome fig4_reproduction() {
  const auto start = Clock::now();
  ExperimentConfig cfg = preset(Preset::fig4);
  cfg.output_dir = fs::temp_directory_path() / "lqtx_acceptance_fig4";
  bool short_overlap = true;
  std::vector<std::size_t> horizons{1, 2, 3, 4, 5, 6, 30};
  const CompareOutputs cmp = run_compare(cfg, horizons, "fig4_acceptance");
  double worst_z = 0;
  for (const CompareRow& row : cmp.rows) {
    if (row.horizon > 6) continue;
    const double combined = std::hypot(row.proposed.std_err, row.open.std_err);
    const double gap = std::abs(row.proposed.mean_cost - row.open.mean_cost);
    worst_z = std::max(worst_z, combined > 0 ? gap / combined : (gap > 0 ? INFINITY : 0.0));
    short_overlap = short_overlap && gap <= 4 * combined;
  }
  const CompareRow& last = cmp.rows.back();
  const double best_baseline = std::min(last.full.mean_cost, last.open.mean_cost);
  const double ratio = best_baseline / last.proposed.mean_cost;
  const double open_ratio = last.open.mean_cost / last.proposed.mean_cost;
  const double elapsed = seconds_since(start);
  const bool ratio_ok = ratio >= 10.0 && ratio >= 50.0 / 2 && ratio <= 50.0 * 2;
  return {short_overlap && ratio_ok && elapsed < 120.0,
          fmt("T<=6 max |proposed-open|/se %.2f (<= 4); T=30 min(full,open)/proposed %.2f "
              "(>= 10, target 50 within x2) [open/proposed %.2f]; %.1f s (< 120 s)",
              worst_z, ratio, open_ratio, elapsed)};
}

Outcome mapping_round_trip() {
  double worst = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double p = kChannel.p_max * i / 1000.0;
    const double back = success_to_power(power_to_success(p, kChannel), kChannel);
    worst = std::max(worst, std::abs(back - p) / p);
  }
  return {worst <= 1e-12, fmt("max rel err %.3g (<= 1e-12) on 1000 points", worst)};
}

std::vector<std::string> produce_outputs(const fs::path& dir) {
  fs::remove_all(dir);
  ExperimentConfig cfg = preset(Preset::fig4);
  cfg.output_dir = dir;
  cfg.sim.n_samples = 2000;
  cfg.sim.seed = 2024;
  run_optimize(cfg);
  run_simulate(cfg);
  run_compare(cfg, {2, 8, 15});
  run_sweep(cfg, "sigma_d2", {0.0, 0.1});
  ExperimentConfig fig2 = preset(Preset::fig2);
  fig2.output_dir = dir;
  run_figure(fig2, Preset::fig2, true);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const fs::path& root) {
  const auto names_a = produce_outputs(root / "run_a");
  const auto names_b = produce_outputs(root / "run_b");
  bool same = names_a == names_b && !names_a.empty();
  std::size_t compared = 0;
  for (const auto& name : names_a) {
    if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
    same = same && slurp(root / "run_a" / name) == slurp(root / "run_b" / name);
    ++compared;
  }
  return {same && compared > 0,
          fmt("%.0f CSV files byte-identical across two runs", static_cast<double>(compared))};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "lqtx_acceptance";
  fs::create_directories(root);

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 oracle equivalence", oracle_equivalence},
      {"2 recursion equivalence", recursion_equivalence},
      {"3 derivative check", derivative_check},
      {"4 monte carlo consistency", monte_carlo_consistency},
      {"5 descent and terminal rule", descent_and_terminal_rule},
      {"6 fig2 nominal reproduction", fig2_nominal},
      {"7 fig2 directional properties", fig2_directions},
      {"8 fig4 reproduction", fig4_reproduction},
      {"9 mapping round trip", mapping_round_trip},
      {"10 determinism", [&root] { return determinism(root); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", out.pass ? "PASS" : "FAIL", c.name, out.detail.c_str());
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
