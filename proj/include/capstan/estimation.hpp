#ifndef CAPSTAN_ESTIMATION_HPP_
#define CAPSTAN_ESTIMATION_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace capstan {

/// First-slip tension observed at a given wrap angle (radians).
struct SlipMeasurement {
  std::string object_id;
  double wrap_angle = 0.0;
  double slip_tension = 0.0;
};

/// Unwrapped first-slip forces recorded at one object's location.
struct BaselineSet {
  std::string object_id;
  std::vector<double> peak_forces;
};

struct BaselineStats {
  double mean = 0.0;
  double std = 0.0;
};

struct FrictionFit {
  std::string object_id;
  double mu_hat = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  double residual_rms = 0.0;  // log domain
  std::size_t n_points = 0;
};

/// Friction statistics of one surface class.
struct SurfaceClassStats {
  double mu_mean = 0.0;
  double mu_std = 0.0;
  double mu_min = 0.0;
  double mu_max = 0.0;
  std::size_t n_objects = 0;
  std::string provenance;

  bool operator==(const SurfaceClassStats&) const = default;
};

enum class MuPolicy { kMean, kMin, kLower95 };

/// Surface class name -> friction statistics.
class FrictionLibrary {
 public:
  FrictionLibrary() = default;
  explicit FrictionLibrary(std::map<std::string, SurfaceClassStats> classes);

  /// Throws InputError when the statistics are inconsistent.
  void set(const std::string& name, SurfaceClassStats stats);
  bool contains(const std::string& name) const { return classes_.count(name) != 0; }
  /// Throws LookupError for unknown classes.
  const SurfaceClassStats& at(const std::string& name) const;
  const std::map<std::string, SurfaceClassStats>& classes() const { return classes_; }

  /// Design friction coefficient of a class under a policy.
  double design_mu(const std::string& name, MuPolicy policy) const;

  bool operator==(const FrictionLibrary&) const = default;

 private:
  std::map<std::string, SurfaceClassStats> classes_;
};

/// Library of field and laboratory classes shipped with the toolkit.
FrictionLibrary default_friction_library();

/// mean - 1.96 * std / sqrt(n), MIN and MEAN as named.
double design_mu(const SurfaceClassStats& stats, MuPolicy policy);

std::string to_string(MuPolicy policy);
std::optional<MuPolicy> parse_mu_policy(const std::string& text);

/// Mean and sample standard deviation of the baseline peak forces.
BaselineStats baseline_holding(const BaselineSet& set);

/// Through-origin least squares of ln(T_k / T0) against theta_k.
///
/// The 95% interval uses Student's t with n - 1 degrees of freedom on the
/// slope. A negative raw slope is clamped to zero, and the interval is
/// clamped at zero with it.
FrictionFit fit_friction(std::span<const SlipMeasurement> measurements, double t0);

/// Statistics of mu_hat across the fitted objects of one class.
SurfaceClassStats aggregate_class(std::span<const FrictionFit> fits, const std::string& class_name);

/// Pearson correlation coefficient of (x, y) pairs.
double diameter_correlation(std::span<const std::pair<double, double>> points);

}  // namespace capstan

#endif  // CAPSTAN_ESTIMATION_HPP_
