#ifndef CAPSTAN_MECHANICS_HPP_
#define CAPSTAN_MECHANICS_HPP_

// Closed-form capstan amplification and its serial/parallel compositions.
// Everything here is a pure function templated on the scalar type.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "capstan/errors.hpp"

namespace capstan {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

using Vec2 = Vector2<double>;

/// Friction coefficient and wrap angle (radians, may exceed 2*pi) of one contact.
template <typename Scalar>
struct Wrap {
  Scalar mu{0};
  Scalar theta{0};
};

/// One tethered agent pulling on a shared payload.
/// `direction` is the unit vector along which the branch pulls the payload.
template <typename Scalar>
struct TensionBranch {
  Scalar holding_force{0};
  Wrap<Scalar> wrap;
  Vector2<Scalar> direction = Vector2<Scalar>::UnitX();
};

/// End tensions of a contact region. Directions point along the tether away from the contact.
template <typename Scalar>
struct ReactionInput {
  Scalar tension_hold{0};
  Scalar tension_load{0};
  Vector2<Scalar> dir_hold = Vector2<Scalar>::UnitX();
  Vector2<Scalar> dir_load = Vector2<Scalar>::UnitX();
};

using Wrapd = Wrap<double>;
using TensionBranchd = TensionBranch<double>;
using ReactionInputd = ReactionInput<double>;

inline constexpr double kUnitNormTolerance = 1e-9;

namespace detail {

template <typename Scalar>
void check_wrap(const Wrap<Scalar>& wrap) {
  if (!(wrap.mu >= Scalar(0)) || !std::isfinite(static_cast<double>(wrap.mu))) {
    throw DomainError("friction coefficient must be finite and >= 0, got " +
                      std::to_string(static_cast<double>(wrap.mu)));
  }
  if (!(wrap.theta >= Scalar(0)) || !std::isfinite(static_cast<double>(wrap.theta))) {
    throw DomainError("wrap angle must be finite and >= 0, got " +
                      std::to_string(static_cast<double>(wrap.theta)));
  }
}

template <typename Scalar>
void check_unit(const Vector2<Scalar>& v, const char* what) {
  using std::abs;
  if (!(abs(v.norm() - Scalar(1)) <= Scalar(kUnitNormTolerance))) {
    throw DomainError(std::string(what) + " must be a unit vector");
  }
}

template <typename Scalar>
void check_tension(Scalar t, const char* what) {
  if (!(t >= Scalar(0)) || !std::isfinite(static_cast<double>(t))) {
    throw DomainError(std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace detail

/// A_F = exp(mu * theta). Exactly 1 when either factor is zero.
template <typename Scalar>
Scalar amplification_factor(const Wrap<Scalar>& wrap) {
  detail::check_wrap(wrap);
  using std::exp;
  return exp(wrap.mu * wrap.theta);
}

/// Sum of mu_i * theta_i over a serial chain.
///
/// The products are summed in ascending order so the result is independent of
/// the order of `wraps`, bit for bit.
template <typename Scalar>
Scalar serial_exponent(std::span<const Wrap<Scalar>> wraps) {
  std::vector<Scalar> terms;
  terms.reserve(wraps.size());
  for (const auto& w : wraps) {
    detail::check_wrap(w);
    terms.push_back(w.mu * w.theta);
  }
  std::sort(terms.begin(), terms.end());
  Scalar sum(0);
  for (const auto& t : terms) sum += t;
  return sum;
}

template <typename Scalar>
Scalar serial_amplification(std::span<const Wrap<Scalar>> wraps) {
  using std::exp;
  return exp(serial_exponent(wraps));
}

template <typename Scalar>
Scalar serial_amplification(const std::vector<Wrap<Scalar>>& wraps) {
  return serial_amplification(std::span<const Wrap<Scalar>>(wraps));
}

/// Holding-side tension T0 needed to resist `load_tension` through a serial chain.
template <typename Scalar>
Scalar holding_requirement(Scalar load_tension, std::span<const Wrap<Scalar>> wraps) {
  detail::check_tension(load_tension, "load tension");
  return load_tension / serial_amplification(wraps);
}

template <typename Scalar>
Scalar holding_requirement(Scalar load_tension, const std::vector<Wrap<Scalar>>& wraps) {
  return holding_requirement(load_tension, std::span<const Wrap<Scalar>>(wraps));
}

/// Net force of agents in parallel: sum of T0_j * exp(mu_j theta_j) * t_j.
template <typename Scalar>
Vector2<Scalar> parallel_net_tension(std::span<const TensionBranch<Scalar>> branches) {
  Vector2<Scalar> net = Vector2<Scalar>::Zero();
  for (const auto& b : branches) {
    detail::check_tension(b.holding_force, "branch holding force");
    detail::check_unit(b.direction, "branch direction");
    net += b.holding_force * amplification_factor(b.wrap) * b.direction;
  }
  return net;
}

template <typename Scalar>
Vector2<Scalar> parallel_net_tension(const std::vector<TensionBranch<Scalar>>& branches) {
  return parallel_net_tension(std::span<const TensionBranch<Scalar>>(branches));
}

template <typename Scalar>
struct Sensitivity {
  Scalar d_mu{0};
  Scalar d_theta{0};
};

/// Partial derivatives of A_F: (theta e^{mu theta}, mu e^{mu theta}).
template <typename Scalar>
Sensitivity<Scalar> sensitivity(const Wrap<Scalar>& wrap) {
  const Scalar af = amplification_factor(wrap);
  return {wrap.theta * af, wrap.mu * af};
}

/// Net force the tether exerts on the capstan object (massless tether free body).
template <typename Scalar>
Vector2<Scalar> capstan_reaction(const ReactionInput<Scalar>& in) {
  detail::check_tension(in.tension_hold, "hold-side tension");
  detail::check_tension(in.tension_load, "load-side tension");
  detail::check_unit(in.dir_hold, "hold-side direction");
  detail::check_unit(in.dir_load, "load-side direction");
  return in.tension_hold * in.dir_hold + in.tension_load * in.dir_load;
}

}  // namespace capstan

#endif  // CAPSTAN_MECHANICS_HPP_
