#ifndef CAPSTAN_IO_HPP_
#define CAPSTAN_IO_HPP_

// File formats. Angles are degrees in every file and radians in memory.
//
//   scene JSON        {"capstans":[{"id","x_m","y_m","radius_m","surface_class",
//                      "upheaval_limit_N"}], "bounds":{"x_min_m","y_min_m","x_max_m","y_max_m"}}
//   measurement CSV   object_id,wrap_angle_deg,slip_tension_N
//   baseline CSV      object_id,peak_force_N
//   library JSON      {"<class>":{"mu_mean","mu_std","mu_min","mu_max","n_objects","provenance"}}
//   trace CSV         t,applied_N,effective_T0_N,capacity_N,slipping,slip_distance_m

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "capstan/estimation.hpp"
#include "capstan/geometry.hpp"
#include "capstan/planner.hpp"
#include "capstan/simulator.hpp"

namespace capstan::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// upheaval_limit_N may be omitted, null or "inf" for an immovable object.
Scene parse_scene(const std::string& text);
Scene load_scene(const std::filesystem::path& path);
std::string scene_to_json(const Scene& scene);

std::vector<SlipMeasurement> parse_measurements(const std::string& text);
std::vector<SlipMeasurement> load_measurements(const std::filesystem::path& path);
/// Rows grouped per object in order of first appearance.
std::vector<BaselineSet> parse_baselines(const std::string& text);
std::vector<BaselineSet> load_baselines(const std::filesystem::path& path);

FrictionLibrary parse_library(const std::string& text);
FrictionLibrary load_library(const std::filesystem::path& path);
std::string library_to_json(const FrictionLibrary& library);

std::string path_to_json(const TetherPath& path);
std::string plan_to_json(const ManeuverPlan& plan);

using Scenario = std::variant<SlipScenario, LoweringScenario>;
/// {"kind":"pull"|"lowering", ...}; see README for the fields.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

std::string trace_to_csv(const SlipTrace& trace);
std::string events_to_json(const SlipTrace& trace);

/// Fixed numeric format shared by every text output.
std::string format_number(double value);

}  // namespace capstan::io

#endif  // CAPSTAN_IO_HPP_
