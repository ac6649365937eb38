#ifndef LQTX_MODEL_HPP_
#define LQTX_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "lqtx/channel.hpp"
#include "lqtx/types.hpp"

namespace lqtx {

/// Total transmit energy sum_t p(pi_t), with p(0) = 0.
template <typename Scalar>
Scalar energy_of(const SuccessVector<Scalar>& success, const ChannelParams<Scalar>& ch) {
  Scalar energy(0);
  for (std::size_t t = 0; t < success.size(); ++t)
    energy += success_to_power(success[t], ch);
  return energy;
}

/*
 * Expected combined cost C(pi) in closed form:
 *
 *   ex2_1 (q + r k^2 pi_1)
 *   + ex2_1   sum_{t>=2} (q + r k^2 pi_t) prod_{i<t} m_i
 *   + sigma_d2 sum_{t>=2} (q + r k^2 pi_t) sum_{i<t} prod_{i<j<t} m_j
 *   + sum_t p_t
 *
 * with m_i = a^2 + (b^2 k^2 + 2abk) pi_i and empty products equal to one.
 * The inner product of the perturbation term runs over the later index j.
 */
template <typename Scalar>
Scalar expected_cost_closed_form(const SystemParams<Scalar>& sys,
                                 const ChannelParams<Scalar>& ch,
                                 const SuccessVector<Scalar>& success,
                                 Scalar ex2_1) {
  const std::size_t T = success.size();
  Scalar cost = ex2_1 * sys.stage_weight(success[0]);
  Scalar prefix(1);  // prod_{i<t} m_i
  for (std::size_t t = 1; t < T; ++t) {
    prefix *= sys.moment_gain(success[t - 1]);
    // sum_{i<t} prod_{i<j<t} m_j, accumulated from i = t-1 downwards.
    Scalar noise_gain(0);
    Scalar tail(1);
    for (std::size_t i = t; i-- > 0;) {
      noise_gain += tail;
      tail *= sys.moment_gain(success[i]);
    }
    cost += sys.stage_weight(success[t]) * (ex2_1 * prefix + sys.sigma_d2 * noise_gain);
  }
  return cost + energy_of(success, ch);
}

template <typename Scalar>
Scalar expected_cost_closed_form(const SystemParams<Scalar>& sys,
                                 const ChannelParams<Scalar>& ch,
                                 const SuccessVector<Scalar>& success) {
  return expected_cost_closed_form(sys, ch, success, sys.sigma_x2);
}

/*
 * Backward pass:
 *   fbar[t] = (q + r k^2 pi_t) + m_t fbar[t+1],  fs[t] = fbar[t] + fs[t+1],
 * started from fbar = fs = 0 past the horizon. With pi_T = 0 (the optimal
 * terminal choice) this gives fbar[T] = fs[T] = q.
 */
template <typename Scalar>
RecursionTables<Scalar> backward_tables(const SystemParams<Scalar>& sys,
                                        const SuccessVector<Scalar>& success) {
  const auto T = static_cast<Eigen::Index>(success.size());
  RecursionTables<Scalar> tables;
  tables.fbar.resize(T);
  tables.fs.resize(T);
  Scalar fbar_next(0);
  Scalar fs_next(0);
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const Scalar pi = success.pi(t);
    tables.fbar(t) = sys.stage_weight(pi) + sys.moment_gain(pi) * fbar_next;
    tables.fs(t) = tables.fbar(t) + fs_next;
    fbar_next = tables.fbar(t);
    fs_next = tables.fs(t);
  }
  return tables;
}

/// Forward pass ex2[t+1] = m_t ex2[t] + sigma_d2 from ex2[0] = ex2_1.
template <typename Scalar>
Vector<Scalar> forward_second_moments(const SystemParams<Scalar>& sys,
                                      const SuccessVector<Scalar>& success,
                                      Scalar ex2_1) {
  if (!(ex2_1 >= Scalar(0))) throw std::domain_error("E[x_1^2] must be >= 0");
  const auto T = static_cast<Eigen::Index>(success.size());
  Vector<Scalar> ex2(T);
  if (T == 0) return ex2;
  ex2(0) = ex2_1;
  for (Eigen::Index t = 0; t + 1 < T; ++t)
    ex2(t + 1) = sys.moment_gain(success.pi(t)) * ex2(t) + sys.sigma_d2;
  return ex2;
}

/// Both passes for one success vector.
template <typename Scalar>
RecursionTables<Scalar> recursion_tables(const SystemParams<Scalar>& sys,
                                         const SuccessVector<Scalar>& success,
                                         Scalar ex2_1) {
  RecursionTables<Scalar> tables = backward_tables(sys, success);
  tables.ex2 = forward_second_moments(sys, success, ex2_1);
  return tables;
}

/// C(pi) assembled from the tables: ex2_1 fbar[1] + sigma_d2 fs[2] + sum p.
template <typename Scalar>
Scalar cost_from_tables(const SystemParams<Scalar>& sys, const ChannelParams<Scalar>& ch,
                        const RecursionTables<Scalar>& tables,
                        const SuccessVector<Scalar>& success) {
  return tables.ex2(0) * tables.fbar(0) + sys.sigma_d2 * tables.fs_after(0) +
         energy_of(success, ch);
}

/// Slope of the power term d/dpi(-theta / ln pi) = theta / (pi ln^2 pi).
template <typename Scalar>
Scalar power_slope(Scalar pi, Scalar theta) {
  using std::log;
  const Scalar l = log(pi);
  return theta / (pi * l * l);
}

/*
 * The part of dC/dpi_t that does not depend on pi_t:
 *   A_t = E[x_t^2] (r k^2 + (2abk + b^2 k^2) fbar[t+1]).
 */
template <typename Scalar>
Scalar slope_constant(const SystemParams<Scalar>& sys, const RecursionTables<Scalar>& tables,
                      std::size_t slot) {
  const Scalar rk2 = sys.r * sys.k * sys.k;
  return tables.ex2(static_cast<Eigen::Index>(slot)) *
         (rk2 + sys.coupling() * tables.fbar_after(slot));
}

/*
 * Exact partial derivative dC/dpi_t at pi_t, slot 0-based. The tables must
 * have been computed for the current policy; neither ex2[t] nor fbar[t+1]
 * depends on pi_t, so any pi_t may be probed against the same tables.
 */
template <typename Scalar>
Scalar cost_partial_wrt_success(const SystemParams<Scalar>& sys,
                                const ChannelParams<Scalar>& ch,
                                const RecursionTables<Scalar>& tables, std::size_t slot,
                                Scalar pi_t) {
  if (slot >= tables.size()) throw std::out_of_range("slot outside horizon");
  if (!(pi_t > Scalar(0) && pi_t < Scalar(1)))
    throw std::domain_error("slope undefined at pi_t in {0, 1}");
  return slope_constant(sys, tables, slot) + power_slope(pi_t, ch.theta());
}

inline constexpr std::size_t kBruteForceMaxHorizon = 14;

/*
 * Independent oracle for C(pi): enumerates every erasure pattern z in
 * {0,1}^T and propagates the conditional second moment
 *   E[x_{t+1}^2 | z] = (a + b k z_t)^2 E[x_t^2 | z] + sigma_d2,
 * accumulating sum_t (q + r k^2 z_t) E[x_t^2 | z] weighted by Pr[z].
 */
template <typename Scalar>
Scalar brute_force_expected_cost(const SystemParams<Scalar>& sys,
                                 const ChannelParams<Scalar>& ch,
                                 const SuccessVector<Scalar>& success,
                                 Scalar ex2_1) {
  const std::size_t T = success.size();
  if (T > kBruteForceMaxHorizon)
    throw std::length_error("brute-force enumeration refused for T > 14");
  const Scalar rk2 = sys.r * sys.k * sys.k;
  const Scalar open = sys.a;
  const Scalar closed = sys.a + sys.b * sys.k;
  Scalar expected(0);
  for (std::uint32_t pattern = 0; pattern < (std::uint32_t{1} << T); ++pattern) {
    Scalar weight(1);
    Scalar moment = ex2_1;
    Scalar cost(0);
    for (std::size_t t = 0; t < T; ++t) {
      const bool received = (pattern >> t) & 1u;
      weight *= received ? success[t] : Scalar(1) - success[t];
      cost += (sys.q + (received ? rk2 : Scalar(0))) * moment;
      const Scalar gain = received ? closed : open;
      moment = gain * gain * moment + sys.sigma_d2;
    }
    if (weight != Scalar(0)) expected += weight * cost;
  }
  return expected + energy_of(success, ch);
}

template <typename Scalar>
Scalar brute_force_expected_cost(const SystemParams<Scalar>& sys,
                                 const ChannelParams<Scalar>& ch,
                                 const SuccessVector<Scalar>& success) {
  return brute_force_expected_cost(sys, ch, success, sys.sigma_x2);
}

}  // namespace lqtx

#endif  // LQTX_MODEL_HPP_
