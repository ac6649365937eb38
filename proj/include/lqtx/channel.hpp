#ifndef LQTX_CHANNEL_HPP_
#define LQTX_CHANNEL_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lqtx/types.hpp"

namespace lqtx {

/// A success probability that would require more than p_max to reach.
class ConstraintViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
// Slack for comparing against pi_max, which is itself a rounded exp().
template <typename Scalar>
constexpr Scalar pi_max_slack() {
  return Scalar(8) * std::numeric_limits<Scalar>::epsilon();
}
}  // namespace detail

/*
 * Rayleigh-fading success probability pi(p) = Pr[g p / sigma2 >= gamma]
 * = exp(-theta / p). Zero power maps to zero success (the p -> 0+ limit).
 */
template <typename Scalar>
Scalar power_to_success(Scalar p, const ChannelParams<Scalar>& ch) {
  if (!(p >= Scalar(0))) throw std::domain_error("power must be >= 0");
  if (p > ch.p_max) throw std::domain_error("power must be <= p_max");
  if (p == Scalar(0)) return Scalar(0);
  using std::exp;
  return exp(-ch.theta() / p);
}

/// Inverse of power_to_success: p = -theta / ln(pi), with pi = 0 mapping to 0.
template <typename Scalar>
Scalar success_to_power(Scalar pi, const ChannelParams<Scalar>& ch) {
  if (!(pi >= Scalar(0))) throw std::domain_error("success probability must be >= 0");
  if (pi >= Scalar(1)) throw std::domain_error("success probability must be < 1");
  if (pi == Scalar(0)) return Scalar(0);
  const Scalar pm = ch.pi_max();
  if (pi > pm * (Scalar(1) + detail::pi_max_slack<Scalar>()))
    throw ConstraintViolation("success probability exceeds pi_max");
  using std::log;
  return std::min(-ch.theta() / log(pi), ch.p_max);
}

template <typename Scalar>
SuccessVector<Scalar> to_success(const PowerPolicy<Scalar>& policy,
                                 const ChannelParams<Scalar>& ch) {
  SuccessVector<Scalar> out = SuccessVector<Scalar>::zeros(policy.size());
  for (std::size_t t = 0; t < policy.size(); ++t)
    out[t] = power_to_success(policy[t], ch);
  return out;
}

template <typename Scalar>
PowerPolicy<Scalar> to_power(const SuccessVector<Scalar>& success,
                             const ChannelParams<Scalar>& ch) {
  PowerPolicy<Scalar> out = PowerPolicy<Scalar>::zeros(success.size());
  for (std::size_t t = 0; t < success.size(); ++t)
    out[t] = success_to_power(success[t], ch);
  return out;
}

/// Throws unless every entry lies in [0, pi_max].
template <typename Scalar>
void validate(const SuccessVector<Scalar>& success, const ChannelParams<Scalar>& ch) {
  const Scalar pm = ch.pi_max() * (Scalar(1) + detail::pi_max_slack<Scalar>());
  for (std::size_t t = 0; t < success.size(); ++t) {
    if (!(success[t] >= Scalar(0)) || success[t] > pm)
      throw ConstraintViolation("0 <= pi_t <= pi_max");
  }
}

/// Throws unless every entry lies in [0, p_max].
template <typename Scalar>
void validate(const PowerPolicy<Scalar>& policy, const ChannelParams<Scalar>& ch) {
  for (std::size_t t = 0; t < policy.size(); ++t) {
    if (!(policy[t] >= Scalar(0)) || policy[t] > ch.p_max)
      throw ConstraintViolation("0 <= p_t <= p_max");
  }
}

}  // namespace lqtx

#endif  // LQTX_CHANNEL_HPP_
