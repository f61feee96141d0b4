#ifndef CAPSTAN_SIMULATOR_HPP_
#define CAPSTAN_SIMULATOR_HPP_

// Quasi-static tether loading: the tether slips whenever the applied tension
// exceeds the capstan-amplified holding capacity. No inertia is modeled.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "capstan/mechanics.hpp"

namespace capstan {

/// Piecewise-linear function of time, held constant outside its knots.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  /// Knots must be nonempty with strictly increasing times.
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);
  double operator()(double t) const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

struct SubstrateModel {
  double stick_slip_fraction = 0.0;
  double mounding_gain = 0.0;
  double mounding_saturation_distance = 1.0;  // m
  double stick_slip_wavelength = 0.05;         // m
};

inline constexpr double kMulchStickSlip = 0.70;
inline constexpr double kPlywoodStickSlip = 0.38;
inline constexpr double kSandMoundingGain = 0.33;
inline constexpr double kDefaultSnagMultiplier = 3.0;

struct SnagModel {
  double at_slip_distance = 0.0;  // m
  double multiplier = kDefaultSnagMultiplier;
};

struct SlipScenario {
  std::vector<Wrapd> wraps;
  double t0_base = 0.0;
  PiecewiseLinear load_profile;
  SubstrateModel substrate;
  std::optional<SnagModel> snag;
  double dt = 0.01;
  double duration = 1.0;
};

enum class SlipEventKind { kSlipOnset, kArrest, kSnag, kRunaway };

std::string to_string(SlipEventKind kind);

struct SlipEvent {
  double time = 0.0;
  SlipEventKind kind = SlipEventKind::kSlipOnset;

  bool operator==(const SlipEvent&) const = default;
};

struct SlipSample {
  double t = 0.0;
  double applied_tension = 0.0;
  double effective_t0 = 0.0;
  double capacity = 0.0;
  bool slipping = false;
  double slip_distance = 0.0;

  bool operator==(const SlipSample&) const = default;
};

struct SlipTrace {
  std::vector<SlipSample> samples;
  std::vector<SlipEvent> events;

  bool operator==(const SlipTrace&) const = default;
};

/// Slip distance advances at this rate per newton of excess tension (m / (N s)).
inline constexpr double kSlipCompliance = 1.0;

/// Zero-mean triangle wave in [-1, 1] with tri(0) = 0, rising first.
double triangle_wave(double distance, double wavelength);

/// Holding force after mounding and stick-slip modulation at a slip distance.
double effective_holding_force(double t0_base, const SubstrateModel& substrate, double slip_distance);

SlipTrace simulate_pull(const SlipScenario& scenario);

struct LoweringScenario {
  double payload_weight = 0.0;
  std::vector<Wrapd> wraps;
  double agent_t0_max = 0.0;
  /// (start time, payout rate m/s); each rate holds until the next entry.
  std::vector<std::pair<double, double>> payout_policy;
  double dt = 0.01;
  double duration = 1.0;
};

/// Payload lowering through a capstan. In the trace, applied_tension is the
/// payload weight, effective_t0 the holding force the agent must supply,
/// capacity the amplified maximum, and slip_distance the payload descent.
/// When the agent cannot hold, a RUNAWAY event ends the trace.
SlipTrace simulate_lowering(const LoweringScenario& scenario);

}  // namespace capstan

#endif  // CAPSTAN_SIMULATOR_HPP_
