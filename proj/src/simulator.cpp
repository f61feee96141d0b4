#include "capstan/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "capstan/errors.hpp"

namespace capstan {

namespace {

// Slip below this distance is not resolved: a step that ends within it of
// equilibrium lands on equilibrium instead of creeping toward it forever.
constexpr double kSlipResolution = 1e-9;

std::size_t step_count(double dt, double duration) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("dt must be positive");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw InputError("duration must be >= 0");
  return static_cast<std::size_t>(std::llround(duration / dt));
}

void check_wraps(const std::vector<Wrapd>& wraps) {
  try {
    for (const auto& w : wraps) detail::check_wrap(w);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
}

void check_scenario(const SlipScenario& s) {
  check_wraps(s.wraps);
  if (!(s.t0_base > 0.0)) throw InputError("T0_base must be positive");
  if (s.load_profile.knots().empty()) throw InputError("load profile is empty");
  const auto& sub = s.substrate;
  if (!(sub.stick_slip_fraction >= 0.0 && sub.stick_slip_fraction < 1.0)) {
    throw InputError("stick_slip_fraction must lie in [0, 1)");
  }
  if (!(sub.mounding_gain >= 0.0)) throw InputError("mounding_gain must be >= 0");
  if (!(sub.mounding_saturation_distance > 0.0)) {
    throw InputError("mounding_saturation_distance must be positive");
  }
  if (!(sub.stick_slip_wavelength > 0.0)) throw InputError("stick_slip_wavelength must be positive");
  if (s.snag) {
    if (!(s.snag->at_slip_distance >= 0.0)) throw InputError("snag trigger distance must be >= 0");
    if (!(s.snag->multiplier > 0.0)) throw InputError("snag multiplier must be positive");
  }
  for (const auto& [t, v] : s.load_profile.knots()) {
    if (!(v >= 0.0)) throw InputError("load profile tensions must be >= 0");
  }
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw InputError("piecewise-linear table needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].first) || !std::isfinite(knots_[i].second)) {
      throw InputError("piecewise-linear table has non-finite entries");
    }
    if (i > 0 && !(knots_[i].first > knots_[i - 1].first)) {
      throw InputError("piecewise-linear knot times must be strictly increasing");
    }
  }
}

double PiecewiseLinear::operator()(double t) const {
  if (knots_.empty()) return 0.0;
  if (t <= knots_.front().first) return knots_.front().second;
  if (t >= knots_.back().first) return knots_.back().second;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double v, const auto& k) { return v < k.first; });
  auto lo = hi - 1;
  const double w = (t - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

std::string to_string(SlipEventKind kind) {
  switch (kind) {
    case SlipEventKind::kSlipOnset:
      return "SLIP_ONSET";
    case SlipEventKind::kArrest:
      return "ARREST";
    case SlipEventKind::kSnag:
      return "SNAG";
    case SlipEventKind::kRunaway:
      return "RUNAWAY";
  }
  return "UNKNOWN";
}

double triangle_wave(double distance, double wavelength) {
  const double phase = std::fmod(distance / wavelength, 1.0);
  const double p = phase < 0.0 ? phase + 1.0 : phase;
  if (p < 0.25) return 4.0 * p;
  if (p < 0.75) return 2.0 - 4.0 * p;
  return 4.0 * p - 4.0;
}

double effective_holding_force(double t0_base, const SubstrateModel& substrate, double slip_distance) {
  const double mound =
      1.0 + substrate.mounding_gain * std::min(slip_distance / substrate.mounding_saturation_distance, 1.0);
  const double stick =
      1.0 + substrate.stick_slip_fraction * triangle_wave(slip_distance, substrate.stick_slip_wavelength);
  return t0_base * mound * stick;
}

SlipTrace simulate_pull(const SlipScenario& scenario) {
  check_scenario(scenario);
  const std::size_t steps = step_count(scenario.dt, scenario.duration);
  const double af = serial_amplification(scenario.wraps);

  auto capacity_at = [&](double slip) {
    const double eff = effective_holding_force(scenario.t0_base, scenario.substrate, slip);
    const bool snagged = scenario.snag && slip >= scenario.snag->at_slip_distance;
    return std::pair{eff, snagged ? af * eff * scenario.snag->multiplier : af * eff};
  };

  SlipTrace trace;
  trace.samples.reserve(steps + 1);
  double slip = 0.0;
  bool was_slipping = false;
  bool snag_reported = false;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    const double applied = scenario.load_profile(t);
    const auto [eff, capacity] = capacity_at(slip);
    if (scenario.snag && !snag_reported && slip >= scenario.snag->at_slip_distance) {
      trace.events.push_back({t, SlipEventKind::kSnag});
      snag_reported = true;
    }
    const bool slipping = applied > capacity;
    if (slipping && !was_slipping) trace.events.push_back({t, SlipEventKind::kSlipOnset});
    if (!slipping && was_slipping) trace.events.push_back({t, SlipEventKind::kArrest});
    trace.samples.push_back({t, applied, eff, capacity, slipping, slip});
    if (slipping && k < steps) {
      double next = slip + kSlipCompliance * (applied - capacity) * scenario.dt;
      if (capacity_at(next).second < applied && capacity_at(next + kSlipResolution).second >= applied) {
        next += kSlipResolution;
      }
      slip = next;
    }
    was_slipping = slipping;
  }
  if (was_slipping) trace.events.push_back({trace.samples.back().t, SlipEventKind::kRunaway});
  return trace;
}

SlipTrace simulate_lowering(const LoweringScenario& scenario) {
  check_wraps(scenario.wraps);
  if (!(scenario.payload_weight > 0.0)) throw InputError("payload weight must be positive");
  if (!(scenario.agent_t0_max > 0.0)) throw InputError("agent T0 max must be positive");
  const auto& policy = scenario.payout_policy;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    if (!(policy[i].second >= 0.0)) throw InputError("payout rates must be >= 0");
    if (i > 0 && !(policy[i].first > policy[i - 1].first)) {
      throw InputError("payout policy times must be strictly increasing");
    }
  }
  const std::size_t steps = step_count(scenario.dt, scenario.duration);
  const double af = serial_amplification(scenario.wraps);
  const double requirement = scenario.payload_weight / af;
  const double capacity = af * scenario.agent_t0_max;

  auto rate_at = [&](double t) {
    double rate = 0.0;
    for (const auto& [start, r] : policy) {
      if (t + 1e-12 >= start) rate = r;
    }
    return rate;
  };

  SlipTrace trace;
  double descent = 0.0;
  bool was_moving = true;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    if (requirement > scenario.agent_t0_max) {
      trace.samples.push_back({t, scenario.payload_weight, scenario.agent_t0_max, capacity, true, descent});
      trace.events.push_back({t, SlipEventKind::kRunaway});
      break;
    }
    const double rate = rate_at(t);
    const bool moving = rate > 0.0;
    trace.samples.push_back({t, scenario.payload_weight, requirement, capacity, moving, descent});
    if (!moving && was_moving) trace.events.push_back({t, SlipEventKind::kArrest});
    if (k < steps) descent += rate * scenario.dt;
    was_moving = moving;
  }
  return trace;
}

}  // namespace capstan
