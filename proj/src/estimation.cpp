#include "capstan/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "capstan/errors.hpp"

namespace capstan {

namespace {

void check_stats(const std::string& name, const SurfaceClassStats& s) {
  const bool ok = std::isfinite(s.mu_mean) && std::isfinite(s.mu_std) && s.mu_std >= 0.0 &&
                  s.mu_min >= 0.0 && s.mu_min <= s.mu_mean && s.mu_mean <= s.mu_max &&
                  s.n_objects >= 1;
  if (!ok) {
    throw InputError(fmt::format(
        "surface class '{}': need 0 <= mu_min <= mu_mean <= mu_max, mu_std >= 0, n_objects >= 1",
        name));
  }
}

}  // namespace

FrictionLibrary::FrictionLibrary(std::map<std::string, SurfaceClassStats> classes) {
  for (auto& [name, stats] : classes) set(name, std::move(stats));
}

void FrictionLibrary::set(const std::string& name, SurfaceClassStats stats) {
  check_stats(name, stats);
  classes_[name] = std::move(stats);
}

const SurfaceClassStats& FrictionLibrary::at(const std::string& name) const {
  auto it = classes_.find(name);
  if (it == classes_.end()) {
    throw LookupError(fmt::format("unknown surface class '{}'", name));
  }
  return it->second;
}

double FrictionLibrary::design_mu(const std::string& name, MuPolicy policy) const {
  return capstan::design_mu(at(name), policy);
}

double design_mu(const SurfaceClassStats& stats, MuPolicy policy) {
  switch (policy) {
    case MuPolicy::kMean:
      return stats.mu_mean;
    case MuPolicy::kMin:
      return stats.mu_min;
    case MuPolicy::kLower95:
      return std::max(
          0.0, stats.mu_mean - 1.96 * stats.mu_std / std::sqrt(static_cast<double>(stats.n_objects)));
  }
  return stats.mu_mean;
}

std::string to_string(MuPolicy policy) {
  switch (policy) {
    case MuPolicy::kMean:
      return "mean";
    case MuPolicy::kMin:
      return "min";
    case MuPolicy::kLower95:
      return "lower95";
  }
  return "mean";
}

std::optional<MuPolicy> parse_mu_policy(const std::string& text) {
  if (text == "mean") return MuPolicy::kMean;
  if (text == "min") return MuPolicy::kMin;
  if (text == "lower95") return MuPolicy::kLower95;
  return std::nullopt;
}

FrictionLibrary default_friction_library() {
  FrictionLibrary lib;
  lib.set("redwood", {0.38, 0.04, 0.336, 0.466, 10,
                      "field fits over 10 coast redwoods; dry conditions"});
  lib.set("smooth_bark", {0.26, 0.0, 0.26, 0.26, 1, "point estimate; single tree, dry"});
  lib.set("fire_hydrant", {0.5, 0.0, 0.5, 0.5, 1, "point estimate; single object, dry"});
  lib.set("lab_sandpaper",
          {0.6, 0.1, 0.5, 0.7, 1,
           "180-grit sandpaper on steel rods; reported as 0.6 +/- 0.1, range is mean +/- spread"});
  lib.set("lab_tape", {0.24, 0.0, 0.24, 0.24, 1,
                       "point estimate; gaffer tape on steel rod; damp vs dry: +13.0% (Dyneema), "
                       "+5.6% (PTFE yarn), not modeled"});
  return lib;
}

BaselineStats baseline_holding(const BaselineSet& set) {
  const auto& f = set.peak_forces;
  if (f.empty()) {
    throw InputError(fmt::format("baseline set '{}' is empty", set.object_id));
  }
  for (double v : f) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError(fmt::format("baseline set '{}' has a nonpositive peak force", set.object_id));
    }
  }
  const double n = static_cast<double>(f.size());
  const double mean = std::accumulate(f.begin(), f.end(), 0.0) / n;
  if (f.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : f) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

FrictionFit fit_friction(std::span<const SlipMeasurement> measurements, double t0) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw InputError("T0 must be positive");
  if (measurements.size() < 2) throw InputError("friction fit needs at least two measurements");

  const std::string& id = measurements.front().object_id;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& m : measurements) {
    if (m.object_id != id) {
      throw InputError(fmt::format("friction fit mixes objects '{}' and '{}'", id, m.object_id));
    }
    if (!(m.slip_tension > 0.0) || !std::isfinite(m.slip_tension)) {
      throw InputError(fmt::format("object '{}': slip tension must be positive", id));
    }
    if (!(m.wrap_angle >= 0.0) || !std::isfinite(m.wrap_angle)) {
      throw InputError(fmt::format("object '{}': wrap angle must be >= 0", id));
    }
    const double y = std::log(m.slip_tension / t0);
    sxy += m.wrap_angle * y;
    sxx += m.wrap_angle * m.wrap_angle;
  }
  if (sxx == 0.0) {
    throw InputError(fmt::format("object '{}': degenerate design, every wrap angle is zero", id));
  }

  const double raw = sxy / sxx;
  const std::size_t n = measurements.size();
  double ssr = 0.0;
  for (const auto& m : measurements) {
    const double r = std::log(m.slip_tension / t0) - raw * m.wrap_angle;
    ssr += r * r;
  }
  const double dof = static_cast<double>(n - 1);
  const double se = std::sqrt(ssr / dof / sxx);
  const boost::math::students_t dist(dof);
  const double half = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;

  FrictionFit fit;
  fit.object_id = id;
  fit.mu_hat = std::max(0.0, raw);
  fit.ci95 = {std::max(0.0, raw - half), std::max(fit.mu_hat, raw + half)};
  fit.residual_rms = std::sqrt(ssr / static_cast<double>(n));
  fit.n_points = n;
  return fit;
}

SurfaceClassStats aggregate_class(std::span<const FrictionFit> fits, const std::string& class_name) {
  if (fits.empty()) {
    throw InputError(fmt::format("surface class '{}': no fits to aggregate", class_name));
  }
  const double n = static_cast<double>(fits.size());
  SurfaceClassStats s;
  s.mu_min = fits.front().mu_hat;
  s.mu_max = fits.front().mu_hat;
  double sum = 0.0;
  for (const auto& f : fits) {
    sum += f.mu_hat;
    s.mu_min = std::min(s.mu_min, f.mu_hat);
    s.mu_max = std::max(s.mu_max, f.mu_hat);
  }
  s.mu_mean = std::clamp(sum / n, s.mu_min, s.mu_max);
  if (fits.size() > 1) {
    double ss = 0.0;
    for (const auto& f : fits) ss += (f.mu_hat - s.mu_mean) * (f.mu_hat - s.mu_mean);
    s.mu_std = std::sqrt(ss / (n - 1.0));
  }
  s.n_objects = fits.size();
  s.provenance = fmt::format("fitted from {} object(s) for class '{}'", fits.size(), class_name);
  return s;
}

double diameter_correlation(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw InputError("correlation needs at least three points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw InputError("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace capstan
