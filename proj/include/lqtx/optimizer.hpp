#ifndef LQTX_OPTIMIZER_HPP_
#define LQTX_OPTIMIZER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lqtx/channel.hpp"
#include "lqtx/model.hpp"
#include "lqtx/types.hpp"

namespace lqtx {

template <typename Scalar>
struct OptimizerConfig {
  std::size_t k_max{200};
  Scalar eps_cost{1e-10};
  Scalar root_tol{1e-12};
  Scalar ex2_1{1};
  std::size_t max_bisection_steps{200};

  void validate() const {
    if (k_max < 1) throw InvalidParameter("k_max >= 1");
    if (!(eps_cost > Scalar(0))) throw InvalidParameter("eps_cost > 0");
    if (!(root_tol > Scalar(0))) throw InvalidParameter("root_tol > 0");
    if (!(ex2_1 >= Scalar(0))) throw InvalidParameter("ex2_1 >= 0");
  }
};

template <typename Scalar>
struct OptimizationTrace {
  PowerPolicy<Scalar> policy;
  std::vector<Scalar> cost_history;  // entry 0 is the initial policy's cost
  std::size_t iterations{0};
  bool converged{false};

  Scalar final_cost() const { return cost_history.back(); }
};

/// e^{-2}: the minimizer of the power slope theta / (pi ln^2 pi) on (0, 1).
template <typename Scalar>
Scalar slope_minimizer() {
  using std::exp;
  return exp(Scalar(-2));
}

/*
 * Finds pi0 in (e^-2, pi_max) with A + theta / (pi0 ln^2 pi0) = 0 by
 * bisection; the power slope is strictly increasing on that interval.
 * Returns nullopt when the slope is still negative at pi_max (the boundary
 * is the candidate), when it is already non-negative at e^-2, or when the
 * interval is empty.
 */
template <typename Scalar>
std::optional<Scalar> stationary_success_root(Scalar A, const ChannelParams<Scalar>& ch,
                                              Scalar tol,
                                              std::size_t max_steps = 200) {
  if (!(tol > Scalar(0))) throw InvalidParameter("root_tol > 0");
  const Scalar theta = ch.theta();
  const Scalar pm = ch.pi_max();
  Scalar lo = slope_minimizer<Scalar>();
  Scalar hi = pm;
  if (!(lo < hi)) return std::nullopt;
  auto slope = [&](Scalar pi) { return A + power_slope(pi, theta); };
  if (slope(lo) >= Scalar(0)) return std::nullopt;
  if (slope(hi) <= Scalar(0)) return std::nullopt;
  for (std::size_t step = 0; step < max_steps && hi - lo > tol; ++step) {
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (mid <= lo || mid >= hi) break;
    if (slope(mid) < Scalar(0))
      lo = mid;
    else
      hi = mid;
  }
  return lo + (hi - lo) / Scalar(2);
}

/*
 * Candidate success probabilities for one slot with all other slots fixed.
 * If the slope is non-negative at its minimum pi' = min(e^-2, pi_max) the
 * cost cannot decrease by raising pi_t, and the current value is kept.
 * Otherwise the minimizer is either 0 or min(pi0, pi_max).
 */
template <typename Scalar>
std::vector<Scalar> candidate_success_for_slot(const SystemParams<Scalar>& sys,
                                               const ChannelParams<Scalar>& ch,
                                               const RecursionTables<Scalar>& tables,
                                               std::size_t slot, Scalar current_pi,
                                               Scalar root_tol = Scalar(1e-12)) {
  const Scalar A = slope_constant(sys, tables, slot);
  const Scalar pm = ch.pi_max();
  const Scalar pi_low = std::min(slope_minimizer<Scalar>(), pm);
  if (A + power_slope(pi_low, ch.theta()) >= Scalar(0)) return {current_pi};
  const std::optional<Scalar> root = stationary_success_root(A, ch, root_tol);
  return {Scalar(0), root ? std::min(*root, pm) : pm};
}

template <typename Scalar>
struct SweepResult {
  PowerPolicy<Scalar> policy;
  Scalar cost;
  bool changed{false};
  std::size_t slot{0};  // slot that was modified, when changed
};

/*
 * One outer iteration of the coordinate search. Tables are frozen at the
 * incumbent; for every slot the best candidate is found and the single-slot
 * modification with the lowest cost replaces the incumbent, provided it
 * lowers the cost by more than eps_cost (relative). Ties between slots go to
 * the smallest slot index. The final slot is always offered pi_T = 0, which
 * is optimal for it under any policy.
 */
template <typename Scalar>
SweepResult<Scalar> coordinate_sweep(const SystemParams<Scalar>& sys,
                                     const ChannelParams<Scalar>& ch,
                                     const OptimizerConfig<Scalar>& cfg,
                                     const PowerPolicy<Scalar>& policy) {
  const std::size_t T = policy.size();
  const SuccessVector<Scalar> incumbent = to_success(policy, ch);
  const Scalar incumbent_cost = expected_cost_closed_form(sys, ch, incumbent, cfg.ex2_1);
  const RecursionTables<Scalar> tables = recursion_tables(sys, incumbent, cfg.ex2_1);

  Scalar best_cost = incumbent_cost;
  std::optional<std::pair<std::size_t, Scalar>> best;
  SuccessVector<Scalar> trial = incumbent;
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<Scalar> candidates =
        t + 1 == T ? std::vector<Scalar>{Scalar(0)}
                   : candidate_success_for_slot(sys, ch, tables, t, incumbent[t], cfg.root_tol);
    for (const Scalar pi : candidates) {
      if (pi == incumbent[t]) continue;
      trial[t] = pi;
      const Scalar cost = expected_cost_closed_form(sys, ch, trial, cfg.ex2_1);
      const Scalar tie = Scalar(1e-12) * std::max(Scalar(1), std::abs(best_cost));
      if (cost < best_cost - tie) {
        best_cost = cost;
        best = std::make_pair(t, pi);
      }
    }
    trial[t] = incumbent[t];
  }

  const Scalar threshold = cfg.eps_cost * std::max(Scalar(1), std::abs(incumbent_cost));
  if (!best || incumbent_cost - best_cost <= threshold)
    return {policy, incumbent_cost, false, 0};
  PowerPolicy<Scalar> next = policy;
  next[best->first] = success_to_power(best->second, ch);
  // Recompute through the power representation so cost and policy agree.
  const Scalar cost = expected_cost_closed_form(sys, ch, to_success(next, ch), cfg.ex2_1);
  return {std::move(next), cost, true, best->first};
}

/// Iterated coordinate search from the given initial policy.
template <typename Scalar>
OptimizationTrace<Scalar> optimize_policy(const SystemParams<Scalar>& sys,
                                          const ChannelParams<Scalar>& ch,
                                          const OptimizerConfig<Scalar>& cfg,
                                          PowerPolicy<Scalar> initial) {
  sys.validate();
  ch.validate();
  cfg.validate();
  if (initial.size() != sys.horizon) throw InvalidParameter("policy length == T");
  validate(initial, ch);

  OptimizationTrace<Scalar> trace;
  trace.policy = std::move(initial);
  trace.cost_history.push_back(
      expected_cost_closed_form(sys, ch, to_success(trace.policy, ch), cfg.ex2_1));
  while (trace.iterations < cfg.k_max) {
    SweepResult<Scalar> step = coordinate_sweep(sys, ch, cfg, trace.policy);
    if (!step.changed) {
      trace.converged = true;
      break;
    }
    // Guard against rounding in the re-derived cost.
    if (step.cost > trace.cost_history.back()) {
      trace.converged = true;
      break;
    }
    ++trace.iterations;
    trace.policy = std::move(step.policy);
    trace.cost_history.push_back(step.cost);
  }
  return trace;
}

/// Iterated coordinate search from the all-zero (silent) policy.
template <typename Scalar>
OptimizationTrace<Scalar> optimize_policy(const SystemParams<Scalar>& sys,
                                          const ChannelParams<Scalar>& ch,
                                          const OptimizerConfig<Scalar>& cfg) {
  return optimize_policy(sys, ch, cfg, PowerPolicy<Scalar>::zeros(sys.horizon));
}

using OptimizerConfigd = OptimizerConfig<double>;
using OptimizationTraced = OptimizationTrace<double>;

}  // namespace lqtx

#endif  // LQTX_OPTIMIZER_HPP_
