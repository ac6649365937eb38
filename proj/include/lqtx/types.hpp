#ifndef LQTX_TYPES_HPP_
#define LQTX_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace lqtx {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Thrown when a parameter set violates one of its invariants. The message
/// names the violated invariant, e.g. "q > 0".
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/*
 * Scalar plant x_{t+1} = a x_t + b u_t + d_t under the static feedback
 * u_t = k x_t z_t, with stage cost q x_t^2 + r u_t^2 over `horizon` slots.
 */
template <typename Scalar>
struct SystemParams {
  Scalar a{1.1};
  Scalar b{-1};
  Scalar k{1};
  Scalar q{1};
  Scalar r{0.5};
  Scalar sigma_x2{1};  // Var(x_1)
  Scalar sigma_d2{0};  // Var(d_t)
  std::size_t horizon{30};

  /// Closed-loop second-moment gain coefficient: E[(a + b k z)^2] = a^2 + coupling() * pi.
  Scalar coupling() const { return b * b * k * k + Scalar(2) * a * b * k; }

  /// Per-slot second-moment multiplier a^2 + (b^2 k^2 + 2abk) pi.
  Scalar moment_gain(Scalar pi) const { return a * a + coupling() * pi; }

  /// Stage weight q + r k^2 pi applied to E[x_t^2].
  Scalar stage_weight(Scalar pi) const { return q + r * k * k * pi; }

  void validate() const {
    if (!(q > Scalar(0))) throw InvalidParameter("q > 0");
    if (!(r > Scalar(0))) throw InvalidParameter("r > 0");
    if (horizon < 1) throw InvalidParameter("T >= 1");
    if (!(sigma_x2 >= Scalar(0))) throw InvalidParameter("sigma_x2 >= 0");
    if (!(sigma_d2 >= Scalar(0))) throw InvalidParameter("sigma_d2 >= 0");
    using std::isfinite;
    if (!isfinite(a) || !isfinite(b) || !isfinite(k))
      throw InvalidParameter("a, b, k finite");
  }
};

/*
 * Packet-erasure channel with Rayleigh fading: a packet sent with power p is
 * decoded when g p / sigma2 >= gamma, g ~ Exponential(mean gbar). Only the
 * ratio theta = gamma sigma2 / gbar enters the cost.
 */
template <typename Scalar>
struct ChannelParams {
  Scalar gamma{1};
  Scalar sigma2{1};
  Scalar gbar{1};
  Scalar p_max{3};

  Scalar theta() const { return gamma * sigma2 / gbar; }

  /// Largest reachable success probability exp(-theta / p_max).
  Scalar pi_max() const {
    using std::exp;
    return exp(-theta() / p_max);
  }

  void validate() const {
    if (!(gamma > Scalar(0))) throw InvalidParameter("gamma > 0");
    if (!(sigma2 > Scalar(0))) throw InvalidParameter("sigma2 > 0");
    if (!(gbar > Scalar(0))) throw InvalidParameter("gbar > 0");
    if (!(p_max > Scalar(0))) throw InvalidParameter("p_max > 0");
    const Scalar pm = pi_max();
    if (!(pm > Scalar(0) && pm < Scalar(1)))
      throw InvalidParameter("0 < pi_max < 1");
  }

  /// Channel with the given theta, realized as gamma = theta, sigma2 = gbar = 1.
  static ChannelParams from_theta(Scalar theta, Scalar p_max) {
    ChannelParams ch;
    ch.gamma = theta;
    ch.sigma2 = Scalar(1);
    ch.gbar = Scalar(1);
    ch.p_max = p_max;
    return ch;
  }
};

/// Per-slot transmit powers p_1..p_T, each in [0, p_max].
template <typename Scalar>
struct PowerPolicy {
  Vector<Scalar> p;

  PowerPolicy() = default;
  explicit PowerPolicy(Vector<Scalar> values) : p(std::move(values)) {}
  static PowerPolicy zeros(std::size_t horizon) {
    return PowerPolicy(Vector<Scalar>::Zero(static_cast<Eigen::Index>(horizon)));
  }

  std::size_t size() const { return static_cast<std::size_t>(p.size()); }
  Scalar operator[](std::size_t t) const { return p(static_cast<Eigen::Index>(t)); }
  Scalar& operator[](std::size_t t) { return p(static_cast<Eigen::Index>(t)); }
  Scalar total_energy() const { return p.sum(); }
  bool operator==(const PowerPolicy& other) const { return p == other.p; }
};

/// Per-slot success probabilities pi_1..pi_T, each in [0, pi_max].
template <typename Scalar>
struct SuccessVector {
  Vector<Scalar> pi;

  SuccessVector() = default;
  explicit SuccessVector(Vector<Scalar> values) : pi(std::move(values)) {}
  static SuccessVector zeros(std::size_t horizon) {
    return SuccessVector(Vector<Scalar>::Zero(static_cast<Eigen::Index>(horizon)));
  }

  std::size_t size() const { return static_cast<std::size_t>(pi.size()); }
  Scalar operator[](std::size_t t) const { return pi(static_cast<Eigen::Index>(t)); }
  Scalar& operator[](std::size_t t) { return pi(static_cast<Eigen::Index>(t)); }
  bool operator==(const SuccessVector& other) const { return pi == other.pi; }
};

/*
 * Backward/forward pass results for one policy, indexed by 0-based slot.
 *   fbar[t] = F(p_{t:T}),  fs[t] = Fs(p_{t:T}) = sum_{j>=t} fbar[j],
 *   ex2[t]  = E[x_t^2].
 * fbar past the final slot is taken to be 0.
 */
template <typename Scalar>
struct RecursionTables {
  Vector<Scalar> fbar;
  Vector<Scalar> fs;
  Vector<Scalar> ex2;

  std::size_t size() const { return static_cast<std::size_t>(fbar.size()); }

  Scalar fbar_after(std::size_t t) const {
    const auto next = static_cast<Eigen::Index>(t + 1);
    return next < fbar.size() ? fbar(next) : Scalar(0);
  }
  Scalar fs_after(std::size_t t) const {
    const auto next = static_cast<Eigen::Index>(t + 1);
    return next < fs.size() ? fs(next) : Scalar(0);
  }
};

using SystemParamsd = SystemParams<double>;
using ChannelParamsd = ChannelParams<double>;
using PowerPolicyd = PowerPolicy<double>;
using SuccessVectord = SuccessVector<double>;
using RecursionTablesd = RecursionTables<double>;

}  // namespace lqtx

#endif  // LQTX_TYPES_HPP_
