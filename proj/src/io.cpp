#include "capstan/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "capstan/errors.hpp"
#include "json.hpp"

namespace capstan::io {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: malformed JSON: {}", what, e.what()));
  }
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ParseError(fmt::format("{}: expected an object", where));
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ParseError(fmt::format("{}: unknown field '{}'", where, key));
  }
}

double number_field(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ParseError(fmt::format("{}.{}: missing field", where, key));
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseError(fmt::format("{}.{}: expected a number", where, key));
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(fmt::format("{}.{}: not finite", where, key));
  return d;
}

std::string string_field(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ParseError(fmt::format("{}.{}: missing field", where, key));
  const json& v = obj.at(key);
  if (!v.is_string()) throw ParseError(fmt::format("{}.{}: expected a string", where, key));
  return v.get<std::string>();
}

std::vector<std::pair<double, double>> pair_table(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_array()) {
    throw ParseError(fmt::format("{}.{}: expected an array of [time, value] pairs", where, key));
  }
  std::vector<std::pair<double, double>> out;
  for (const auto& row : obj.at(key)) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      throw ParseError(fmt::format("{}.{}: expected [time, value] pairs", where, key));
    }
    out.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  return out;
}

std::vector<Wrapd> wraps_field(const json& obj, const std::string& where) {
  if (!obj.contains("wraps") || !obj.at("wraps").is_array()) {
    throw ParseError(fmt::format("{}.wraps: expected an array", where));
  }
  std::vector<Wrapd> wraps;
  for (std::size_t i = 0; i < obj.at("wraps").size(); ++i) {
    const json& w = obj.at("wraps")[i];
    const std::string at = fmt::format("{}.wraps[{}]", where, i);
    reject_unknown(w, at, {"mu", "theta_deg"});
    wraps.push_back({number_field(w, at, "mu"), number_field(w, at, "theta_deg") * kDegToRad});
  }
  return wraps;
}

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

struct CsvRow {
  std::size_t row = 0;   // 1-based data row
  std::size_t line = 0;  // 1-based file line
  std::vector<std::string> cells;
};

std::vector<CsvRow> parse_csv(const std::string& text, const std::string& expected_header) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<CsvRow> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != expected_header) {
        throw ParseError(fmt::format("bad CSV header '{}', expected '{}'", line, expected_header));
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    CsvRow row;
    row.row = rows.size() + 1;
    row.line = line_no;
    std::string cell;
    std::istringstream cells(line);
    while (std::getline(cells, cell, ',')) row.cells.push_back(cell);
    if (!line.empty() && line.back() == ',') row.cells.emplace_back();
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(fmt::format("empty CSV, expected header '{}'", expected_header));
  return rows;
}

double csv_number(const CsvRow& row, std::size_t col, const char* name) {
  const std::string& s = row.cells[col];
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw ParseError(fmt::format("row {} (line {}): {} '{}' is not a number", row.row, row.line, name, s));
  }
  return v;
}

void check_columns(const CsvRow& row, std::size_t n) {
  if (row.cells.size() != n) {
    throw ParseError(fmt::format("row {} (line {}): expected {} columns, got {}", row.row, row.line, n,
                                 row.cells.size()));
  }
  if (row.cells[0].empty()) throw ParseError(fmt::format("row {} (line {}): empty object_id", row.row, row.line));
}

json element_json(const PathElement& e) {
  if (const auto* s = std::get_if<StraightSegment>(&e)) {
    return {{"type", "segment"}, {"p0", vec_json(s->p0)}, {"p1", vec_json(s->p1)}, {"length_m", s->length()}};
  }
  const auto& a = std::get<ContactArc>(e);
  return {{"type", "arc"},
          {"capstan_id", a.capstan_id},
          {"surface_class", a.surface_class},
          {"direction", to_string(a.direction)},
          {"entry_angle_deg", a.entry_angle * kRadToDeg},
          {"exit_angle_deg", a.exit_angle * kRadToDeg},
          {"turns", a.turns},
          {"wrap_angle_deg", a.wrap_angle() * kRadToDeg}};
}

json path_json(const TetherPath& path) {
  json elements = json::array();
  for (const auto& e : path.elements) elements.push_back(element_json(e));
  json wraps = json::object();
  for (const auto& [id, theta] : path.wrap_angles) wraps[id] = theta * kRadToDeg;
  return {{"anchor", vec_json(path.anchor)},
          {"load", vec_json(path.load)},
          {"elements", elements},
          {"wrap_angles_deg", wraps},
          {"total_length_m", path.total_length}};
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << content;
}

std::string format_number(double value) { return fmt::format("{:.10g}", value); }

Scene parse_scene(const std::string& text) {
  const json doc = parse_json(text, "scene");
  reject_unknown(doc, "scene", {"capstans", "bounds"});
  if (!doc.contains("capstans") || !doc.at("capstans").is_array()) {
    throw ParseError("scene.capstans: expected an array");
  }
  Scene scene;
  for (std::size_t i = 0; i < doc.at("capstans").size(); ++i) {
    const json& c = doc.at("capstans")[i];
    const std::string at = fmt::format("capstans[{}]", i);
    reject_unknown(c, at, {"id", "x_m", "y_m", "radius_m", "surface_class", "upheaval_limit_N"});
    CapstanObject obj;
    obj.id = string_field(c, at, "id");
    obj.center = {number_field(c, at, "x_m"), number_field(c, at, "y_m")};
    obj.radius = number_field(c, at, "radius_m");
    obj.surface_class = string_field(c, at, "surface_class");
    if (c.contains("upheaval_limit_N")) {
      const json& lim = c.at("upheaval_limit_N");
      if (lim.is_null() || (lim.is_string() && lim.get<std::string>() == "inf")) {
        obj.upheaval_limit = std::numeric_limits<double>::infinity();
      } else {
        obj.upheaval_limit = number_field(c, at, "upheaval_limit_N");
      }
    }
    scene.capstans.push_back(std::move(obj));
  }
  if (doc.contains("bounds")) {
    const json& b = doc.at("bounds");
    reject_unknown(b, "bounds", {"x_min_m", "y_min_m", "x_max_m", "y_max_m"});
    scene.bounds = Bounds{{number_field(b, "bounds", "x_min_m"), number_field(b, "bounds", "y_min_m")},
                          {number_field(b, "bounds", "x_max_m"), number_field(b, "bounds", "y_max_m")}};
  }
  try {
    validate_scene(scene);
  } catch (const Error& e) {
    throw ParseError(fmt::format("scene: {}", e.what()));
  }
  return scene;
}

Scene load_scene(const std::filesystem::path& path) { return parse_scene(read_file(path)); }

std::string scene_to_json(const Scene& scene) {
  json caps = json::array();
  for (const auto& c : scene.capstans) {
    json j = {{"id", c.id},
              {"x_m", c.center.x()},
              {"y_m", c.center.y()},
              {"radius_m", c.radius},
              {"surface_class", c.surface_class}};
    j["upheaval_limit_N"] = std::isinf(c.upheaval_limit) ? json("inf") : json(c.upheaval_limit);
    caps.push_back(std::move(j));
  }
  json doc = {{"capstans", caps}};
  if (scene.bounds) {
    doc["bounds"] = {{"x_min_m", scene.bounds->min.x()},
                     {"y_min_m", scene.bounds->min.y()},
                     {"x_max_m", scene.bounds->max.x()},
                     {"y_max_m", scene.bounds->max.y()}};
  }
  return doc.dump(2) + "\n";
}

std::vector<SlipMeasurement> parse_measurements(const std::string& text) {
  std::vector<SlipMeasurement> out;
  for (const auto& row : parse_csv(text, "object_id,wrap_angle_deg,slip_tension_N")) {
    check_columns(row, 3);
    const double deg = csv_number(row, 1, "wrap_angle_deg");
    const double tension = csv_number(row, 2, "slip_tension_N");
    if (deg < 0.0) throw ParseError(fmt::format("row {} (line {}): wrap angle must be >= 0", row.row, row.line));
    if (!(tension > 0.0)) {
      throw ParseError(fmt::format("row {} (line {}): slip tension must be positive", row.row, row.line));
    }
    out.push_back({row.cells[0], deg * kDegToRad, tension});
  }
  return out;
}

std::vector<SlipMeasurement> load_measurements(const std::filesystem::path& path) {
  return parse_measurements(read_file(path));
}

std::vector<BaselineSet> parse_baselines(const std::string& text) {
  std::vector<BaselineSet> out;
  std::map<std::string, std::size_t> index;
  for (const auto& row : parse_csv(text, "object_id,peak_force_N")) {
    check_columns(row, 2);
    const double force = csv_number(row, 1, "peak_force_N");
    if (!(force > 0.0)) {
      throw ParseError(fmt::format("row {} (line {}): peak force must be positive", row.row, row.line));
    }
    auto [it, inserted] = index.try_emplace(row.cells[0], out.size());
    if (inserted) out.push_back({row.cells[0], {}});
    out[it->second].peak_forces.push_back(force);
  }
  return out;
}

std::vector<BaselineSet> load_baselines(const std::filesystem::path& path) {
  return parse_baselines(read_file(path));
}

FrictionLibrary parse_library(const std::string& text) {
  const json doc = parse_json(text, "library");
  if (!doc.is_object()) throw ParseError("library: expected an object of surface classes");
  FrictionLibrary lib;
  for (const auto& [name, entry] : doc.items()) {
    reject_unknown(entry, name, {"mu_mean", "mu_std", "mu_min", "mu_max", "n_objects", "provenance"});
    SurfaceClassStats s;
    s.mu_mean = number_field(entry, name, "mu_mean");
    s.mu_std = number_field(entry, name, "mu_std");
    s.mu_min = number_field(entry, name, "mu_min");
    s.mu_max = number_field(entry, name, "mu_max");
    const double n = number_field(entry, name, "n_objects");
    if (n < 1.0 || n != std::floor(n)) throw ParseError(fmt::format("{}.n_objects: expected a positive integer", name));
    s.n_objects = static_cast<std::size_t>(n);
    if (entry.contains("provenance")) s.provenance = string_field(entry, name, "provenance");
    lib.set(name, std::move(s));
  }
  return lib;
}

FrictionLibrary load_library(const std::filesystem::path& path) { return parse_library(read_file(path)); }

std::string library_to_json(const FrictionLibrary& library) {
  json doc = json::object();
  for (const auto& [name, s] : library.classes()) {
    doc[name] = {{"mu_mean", s.mu_mean}, {"mu_std", s.mu_std},       {"mu_min", s.mu_min},
                 {"mu_max", s.mu_max},   {"n_objects", s.n_objects}, {"provenance", s.provenance}};
  }
  return doc.dump(2) + "\n";
}

std::string path_to_json(const TetherPath& path) { return path_json(path).dump(2) + "\n"; }

std::string plan_to_json(const ManeuverPlan& plan) {
  json winding = json::array();
  for (const auto& w : plan.winding) {
    winding.push_back({{"capstan_id", w.capstan_id}, {"direction", to_string(w.direction)}, {"extra_turns", w.extra_turns}});
  }
  json reactions = json::object();
  for (const auto& [id, r] : plan.per_capstan_reaction) reactions[id] = r;
  json doc = {{"winding", winding},
              {"path", path_json(plan.path)},
              {"predicted_AF", plan.predicted_af},
              {"margin", plan.margin},
              {"per_capstan_reaction_N", reactions},
              {"reversible", plan.reversible}};
  return doc.dump(2) + "\n";
}

Scenario parse_scenario(const std::string& text) {
  const json doc = parse_json(text, "scenario");
  if (!doc.is_object()) throw ParseError("scenario: expected an object");
  const std::string kind = string_field(doc, "scenario", "kind");
  if (kind == "pull") {
    reject_unknown(doc, "scenario",
                   {"kind", "wraps", "t0_base_N", "load_profile", "substrate", "snag", "dt_s", "duration_s"});
    SlipScenario s;
    s.wraps = wraps_field(doc, "scenario");
    s.t0_base = number_field(doc, "scenario", "t0_base_N");
    try {
      s.load_profile = PiecewiseLinear(pair_table(doc, "scenario", "load_profile"));
    } catch (const InputError& e) {
      throw ParseError(fmt::format("scenario.load_profile: {}", e.what()));
    }
    if (doc.contains("substrate")) {
      const json& sub = doc.at("substrate");
      reject_unknown(sub, "scenario.substrate",
                     {"stick_slip_fraction", "mounding_gain", "mounding_saturation_distance_m",
                      "stick_slip_wavelength_m"});
      const std::string at = "scenario.substrate";
      if (sub.contains("stick_slip_fraction")) s.substrate.stick_slip_fraction = number_field(sub, at, "stick_slip_fraction");
      if (sub.contains("mounding_gain")) s.substrate.mounding_gain = number_field(sub, at, "mounding_gain");
      if (sub.contains("mounding_saturation_distance_m")) {
        s.substrate.mounding_saturation_distance = number_field(sub, at, "mounding_saturation_distance_m");
      }
      if (sub.contains("stick_slip_wavelength_m")) {
        s.substrate.stick_slip_wavelength = number_field(sub, at, "stick_slip_wavelength_m");
      }
    }
    if (doc.contains("snag") && !doc.at("snag").is_null()) {
      const json& sn = doc.at("snag");
      reject_unknown(sn, "scenario.snag", {"at_slip_distance_m", "multiplier"});
      SnagModel snag;
      snag.at_slip_distance = number_field(sn, "scenario.snag", "at_slip_distance_m");
      if (sn.contains("multiplier")) snag.multiplier = number_field(sn, "scenario.snag", "multiplier");
      s.snag = snag;
    }
    s.dt = number_field(doc, "scenario", "dt_s");
    s.duration = number_field(doc, "scenario", "duration_s");
    return s;
  }
  if (kind == "lowering") {
    reject_unknown(doc, "scenario",
                   {"kind", "payload_weight_N", "wraps", "agent_t0_max_N", "payout_policy", "dt_s", "duration_s"});
    LoweringScenario s;
    s.payload_weight = number_field(doc, "scenario", "payload_weight_N");
    s.wraps = wraps_field(doc, "scenario");
    s.agent_t0_max = number_field(doc, "scenario", "agent_t0_max_N");
    s.payout_policy = pair_table(doc, "scenario", "payout_policy");
    s.dt = number_field(doc, "scenario", "dt_s");
    s.duration = number_field(doc, "scenario", "duration_s");
    return s;
  }
  throw ParseError(fmt::format("scenario.kind: expected 'pull' or 'lowering', got '{}'", kind));
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

std::string trace_to_csv(const SlipTrace& trace) {
  std::string out = "t,applied_N,effective_T0_N,capacity_N,slipping,slip_distance_m\n";
  for (const auto& s : trace.samples) {
    out += fmt::format("{},{},{},{},{},{}\n", format_number(s.t), format_number(s.applied_tension),
                       format_number(s.effective_t0), format_number(s.capacity), s.slipping ? 1 : 0,
                       format_number(s.slip_distance));
  }
  return out;
}

std::string events_to_json(const SlipTrace& trace) {
  json events = json::array();
  for (const auto& e : trace.events) events.push_back({{"time_s", e.time}, {"kind", to_string(e.kind)}});
  return json{{"events", events}}.dump(2) + "\n";
}

}  // namespace capstan::io
