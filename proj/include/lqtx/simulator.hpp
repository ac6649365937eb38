#ifndef LQTX_SIMULATOR_HPP_
#define LQTX_SIMULATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

#include <Eigen/Core>

#include "lqtx/types.hpp"

namespace lqtx {

enum class ChannelModel {
  bernoulli,       // z_t ~ Ber(pi(p_t))
  gain_threshold,  // g_t ~ Exp(mean gbar), z_t = [g_t p_t / sigma2 >= gamma]
};

struct InitialState {
  enum class Kind { fixed, gaussian };
  Kind kind{Kind::fixed};
  double value{1};  // x_1 for fixed, Var(x_1) for gaussian

  static InitialState fixed(double x1) { return {Kind::fixed, x1}; }
  static InitialState gaussian(double variance) { return {Kind::gaussian, variance}; }

  /// E[x_1^2] implied by this initial condition.
  double second_moment() const { return kind == Kind::fixed ? value * value : value; }
};

struct SimConfig {
  std::size_t n_samples{10000};
  std::uint64_t seed{1};
  ChannelModel channel_model{ChannelModel::bernoulli};
  InitialState initial_state{};
  unsigned threads{1};

  void validate() const;
};

/*
 * Per-slot transmission plan. Production code derives `success` from `power`
 * through pi(p); tests may decouple them to force a channel outcome.
 */
struct RolloutPlan {
  Eigen::VectorXd power;
  Eigen::VectorXd success;

  std::size_t size() const { return static_cast<std::size_t>(power.size()); }
};

RolloutPlan coupled_plan(const PowerPolicyd& policy, const ChannelParamsd& ch);

/// Independent random stream for `index` under `seed`.
std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t index);

/// Monte Carlo runs draw replications [b*kReplicationBlock, (b+1)*kReplicationBlock)
/// in order from replication_stream(seed, b).
inline constexpr std::size_t kReplicationBlock = 1024;

struct Trajectory {
  Eigen::VectorXd x;  // x_1..x_T
  Eigen::VectorXd u;
  Eigen::VectorXd z;
};

struct Replication {
  double cost{0};
  std::optional<Trajectory> trajectory;
};

/// Rolls out the closed loop once and returns sum_t (q x_t^2 + r u_t^2 + p_t).
Replication simulate_replication(const SystemParamsd& sys, const ChannelParamsd& ch,
                                 const RolloutPlan& plan, const SimConfig& sim,
                                 std::mt19937_64& rng, bool record_trajectory = false);

Replication simulate_replication(const SystemParamsd& sys, const ChannelParamsd& ch,
                                 const PowerPolicyd& policy, const SimConfig& sim,
                                 std::mt19937_64& rng, bool record_trajectory = false);

struct SimReport {
  double mean_cost{0};
  double std_err{0};
  bool std_err_defined{false};  // false when n_samples == 1
  // Columns: mean q x_t^2, mean r u_t^2, mean p_t; one row per slot.
  Eigen::MatrixX3d per_slot;
  std::size_t n_samples{0};
};

SimReport monte_carlo_cost(const SystemParamsd& sys, const ChannelParamsd& ch,
                           const RolloutPlan& plan, const SimConfig& sim);

SimReport monte_carlo_cost(const SystemParamsd& sys, const ChannelParamsd& ch,
                           const PowerPolicyd& policy, const SimConfig& sim);

enum class BaselineKind { full_power, open_loop };

PowerPolicyd baseline_policy(BaselineKind kind, const ChannelParamsd& ch, std::size_t horizon);

}  // namespace lqtx

#endif  // LQTX_SIMULATOR_HPP_
