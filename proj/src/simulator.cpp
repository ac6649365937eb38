#include "lqtx/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "lqtx/channel.hpp"

namespace lqtx {

void SimConfig::validate() const {
  if (n_samples < 1) throw InvalidParameter("n_samples >= 1");
  if (threads < 1) throw InvalidParameter("threads >= 1");
  if (initial_state.kind == InitialState::Kind::gaussian && !(initial_state.value >= 0))
    throw InvalidParameter("sigma_x2 >= 0");
}

RolloutPlan coupled_plan(const PowerPolicyd& policy, const ChannelParamsd& ch) {
  validate(policy, ch);
  return {policy.p, to_success(policy, ch).pi};
}

std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

// Rolls out one replication, adding each slot's (q x^2, r u^2, p) to `per_slot`.
double rollout(const SystemParamsd& sys, const ChannelParamsd& ch, const RolloutPlan& plan,
               const SimConfig& sim, std::mt19937_64& rng, Eigen::MatrixX3d* per_slot,
               Trajectory* trajectory) {
  const std::size_t T = plan.size();
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::exponential_distribution<double> gain(1.0 / ch.gbar);
  const double sigma_d = std::sqrt(sys.sigma_d2);

  double x = sim.initial_state.kind == InitialState::Kind::fixed
                 ? sim.initial_state.value
                 : std::sqrt(sim.initial_state.value) * unit_normal(rng);
  double cost = 0;
  for (std::size_t t = 0; t < T; ++t) {
    const auto i = static_cast<Eigen::Index>(t);
    const double p = plan.power(i);
    // Exactly one channel variate per slot keeps streams aligned across policies.
    bool received = false;
    if (sim.channel_model == ChannelModel::bernoulli) {
      received = uniform(rng) < plan.success(i);
    } else {
      const double g = gain(rng);
      received = p > 0 && g * p / ch.sigma2 >= ch.gamma;
    }
    const double u = received ? sys.k * x : 0.0;
    const double state_cost = sys.q * x * x;
    const double input_cost = sys.r * u * u;
    cost += state_cost + input_cost + p;
    if (per_slot) {
      (*per_slot)(i, 0) += state_cost;
      (*per_slot)(i, 1) += input_cost;
      (*per_slot)(i, 2) += p;
    }
    if (trajectory) {
      trajectory->x(i) = x;
      trajectory->u(i) = u;
      trajectory->z(i) = received ? 1.0 : 0.0;
    }
    const double d = sigma_d > 0 ? sigma_d * unit_normal(rng) : 0.0;
    x = sys.a * x + sys.b * u + d;
  }
  return cost;
}

// Streaming moments of a block of replications (Welford), mergeable pairwise.
struct Moments {
  std::size_t count{0};
  double mean{0};
  double m2{0};
  Eigen::MatrixX3d slot_sums;

  void add(double value) {
    ++count;
    const double delta = value - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (value - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double n = n_a + n_b;
    const double delta = other.mean - mean;
    mean += delta * n_b / n;
    m2 += other.m2 + delta * delta * n_a * n_b / n;
    count += other.count;
    slot_sums += other.slot_sums;
  }
};

}  // namespace

Replication simulate_replication(const SystemParamsd& sys, const ChannelParamsd& ch,
                                 const RolloutPlan& plan, const SimConfig& sim,
                                 std::mt19937_64& rng, bool record_trajectory) {
  Replication out;
  Trajectory traj;
  if (record_trajectory) {
    const auto T = static_cast<Eigen::Index>(plan.size());
    traj.x.resize(T);
    traj.u.resize(T);
    traj.z.resize(T);
  }
  out.cost = rollout(sys, ch, plan, sim, rng, nullptr, record_trajectory ? &traj : nullptr);
  if (record_trajectory) out.trajectory = std::move(traj);
  return out;
}

Replication simulate_replication(const SystemParamsd& sys, const ChannelParamsd& ch,
                                 const PowerPolicyd& policy, const SimConfig& sim,
                                 std::mt19937_64& rng, bool record_trajectory) {
  return simulate_replication(sys, ch, coupled_plan(policy, ch), sim, rng, record_trajectory);
}

SimReport monte_carlo_cost(const SystemParamsd& sys, const ChannelParamsd& ch,
                           const RolloutPlan& plan, const SimConfig& sim) {
  sys.validate();
  ch.validate();
  sim.validate();
  const auto T = static_cast<Eigen::Index>(plan.size());
  if (plan.success.size() != T) throw InvalidParameter("plan power/success length mismatch");

  // Blocks are fixed by replication index, and merged in block order, so the
  // report does not depend on how many threads ran.
  const std::size_t n_chunks = (sim.n_samples + kReplicationBlock - 1) / kReplicationBlock;
  std::vector<Moments> chunks(n_chunks);
  auto run_chunk = [&](std::size_t c) {
    Moments& m = chunks[c];
    m.slot_sums = Eigen::MatrixX3d::Zero(T, 3);
    const std::size_t begin = c * kReplicationBlock;
    const std::size_t end = std::min(sim.n_samples, begin + kReplicationBlock);
    std::mt19937_64 rng = replication_stream(sim.seed, c);
    for (std::size_t rep = begin; rep < end; ++rep) {
      m.add(rollout(sys, ch, plan, sim, rng, &m.slot_sums, nullptr));
    }
  };

  const unsigned workers = std::min<std::size_t>(sim.threads, n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  Moments total;
  total.slot_sums = Eigen::MatrixX3d::Zero(T, 3);
  for (const Moments& m : chunks) total.merge(m);

  SimReport report;
  report.n_samples = total.count;
  report.mean_cost = total.mean;
  report.per_slot = total.slot_sums / static_cast<double>(total.count);
  if (total.count > 1) {
    const double variance = total.m2 / static_cast<double>(total.count - 1);
    report.std_err = std::sqrt(variance / static_cast<double>(total.count));
    report.std_err_defined = true;
  }
  return report;
}

SimReport monte_carlo_cost(const SystemParamsd& sys, const ChannelParamsd& ch,
                           const PowerPolicyd& policy, const SimConfig& sim) {
  return monte_carlo_cost(sys, ch, coupled_plan(policy, ch), sim);
}

PowerPolicyd baseline_policy(BaselineKind kind, const ChannelParamsd& ch, std::size_t horizon) {
  if (horizon < 1) throw InvalidParameter("T >= 1");
  const auto T = static_cast<Eigen::Index>(horizon);
  return PowerPolicyd(kind == BaselineKind::full_power ? Eigen::VectorXd::Constant(T, ch.p_max)
                                                       : Eigen::VectorXd::Zero(T));
}

}  // namespace lqtx
