#include "capstan/cli.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <variant>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "capstan/errors.hpp"
#include "capstan/estimation.hpp"
#include "capstan/geometry.hpp"
#include "capstan/io.hpp"
#include "capstan/mechanics.hpp"
#include "capstan/planner.hpp"
#include "capstan/simulator.hpp"

namespace capstan {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

Vec2 parse_point(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("missing comma");
    std::size_t used_x = 0;
    std::size_t used_y = 0;
    const std::string xs = text.substr(0, comma);
    const std::string ys = text.substr(comma + 1);
    const double x = std::stod(xs, &used_x);
    const double y = std::stod(ys, &used_y);
    if (used_x != xs.size() || used_y != ys.size()) throw std::invalid_argument("trailing text");
    return {x, y};
  } catch (const std::exception&) {
    throw ParseError(fmt::format("{}: expected X,Y, got '{}'", what, text));
  }
}

// "360deg", "6.28rad" or a bare number of degrees.
double parse_angle(const std::string& text) {
  std::string body = text;
  double scale = std::numbers::pi / 180.0;
  if (body.ends_with("deg")) {
    body.resize(body.size() - 3);
  } else if (body.ends_with("rad")) {
    body.resize(body.size() - 3);
    scale = 1.0;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument("trailing text");
    return v * scale;
  } catch (const std::exception&) {
    throw ParseError(fmt::format("angle: expected e.g. 360deg, got '{}'", text));
  }
}

WindingSpec parse_winding_spec(const std::string& text) {
  WindingSpec spec;
  if (text.empty()) return spec;
  std::istringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    std::vector<std::string> parts;
    std::istringstream fields(item);
    std::string f;
    while (std::getline(fields, f, ':')) parts.push_back(f);
    if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
      throw ParseError(fmt::format("winding entry '{}': expected id:ccw|cw[:turns]", item));
    }
    const auto dir = parse_winding(parts[1]);
    if (!dir) throw ParseError(fmt::format("winding entry '{}': direction must be ccw or cw", item));
    int turns = 0;
    if (parts.size() == 3) {
      try {
        std::size_t used = 0;
        turns = std::stoi(parts[2], &used);
        if (used != parts[2].size() || turns < 0) throw std::invalid_argument("bad turns");
      } catch (const std::exception&) {
        throw ParseError(fmt::format("winding entry '{}': turns must be a nonnegative integer", item));
      }
    }
    spec.push_back({parts[0], *dir, turns});
  }
  return spec;
}

std::string f6(double v) { return fmt::format("{:.6f}", v); }

int cmd_sense(double mu, const std::string& theta_text, std::ostream& out) {
  const Wrapd wrap{mu, parse_angle(theta_text)};
  const double af = amplification_factor(wrap);
  const auto s = sensitivity(wrap);
  out << "A_F=" << f6(af) << "\n";
  out << "dA_dmu=" << f6(s.d_mu) << "\n";
  out << "dA_dtheta=" << f6(s.d_theta) << "\n";
  return kExitOk;
}

int cmd_route(const std::string& scene_path, const std::string& anchor, const std::string& load,
              const std::string& winding, std::ostream& out) {
  const Scene scene = io::load_scene(scene_path);
  const TetherPath path =
      route_tether(parse_point(anchor, "--anchor"), parse_point(load, "--load"), parse_winding_spec(winding), scene);
  out << io::path_to_json(path);
  out << "capstan_id,wrap_angle_deg\n";
  for (const auto& [id, theta] : path.wrap_angles) out << id << "," << f6(theta * kRadToDeg) << "\n";
  out << "total_length_m," << f6(path.total_length) << "\n";
  return kExitOk;
}

int cmd_fit(const std::string& meas_path, const std::string& base_path, const std::string& out_path,
            const std::string& class_name, std::ostream& out) {
  const auto measurements = io::load_measurements(meas_path);
  const auto baselines = io::load_baselines(base_path);
  std::map<std::string, double> t0;
  for (const auto& b : baselines) t0[b.object_id] = baseline_holding(b).mean;

  std::vector<std::string> order;
  std::map<std::string, std::vector<SlipMeasurement>> grouped;
  for (const auto& m : measurements) {
    if (!grouped.count(m.object_id)) order.push_back(m.object_id);
    grouped[m.object_id].push_back(m);
  }
  if (order.empty()) throw InputError("no measurements");

  std::vector<FrictionFit> fits;
  out << "object_id,n_points,T0_N,mu_hat,ci95_lo,ci95_hi,residual_rms\n";
  for (const auto& id : order) {
    auto it = t0.find(id);
    if (it == t0.end()) throw InputError(fmt::format("no baseline rows for object '{}'", id));
    const FrictionFit fit = fit_friction(grouped[id], it->second);
    out << fmt::format("{},{},{},{},{},{},{}\n", id, fit.n_points, f6(it->second), f6(fit.mu_hat),
                       f6(fit.ci95.first), f6(fit.ci95.second), f6(fit.residual_rms));
    fits.push_back(fit);
  }
  FrictionLibrary lib;
  lib.set(class_name, aggregate_class(fits, class_name));
  const std::string json = io::library_to_json(lib);
  if (out_path.empty()) {
    out << json;
  } else {
    io::write_file(out_path, json);
  }
  return kExitOk;
}

int cmd_plan(const std::string& scene_path, const std::string& library_path, ManeuverRequest request,
             const std::string& policy, const std::string& anchor, const std::string& load,
             std::ostream& out) {
  const Scene scene = io::load_scene(scene_path);
  const FrictionLibrary library = library_path.empty() ? default_friction_library() : io::load_library(library_path);
  const auto p = parse_mu_policy(policy);
  if (!p) throw ParseError(fmt::format("--policy: expected min, mean or lower95, got '{}'", policy));
  request.mu_policy = *p;
  request.anchor_agent.position = parse_point(anchor, "--anchor");
  request.load_point = parse_point(load, "--load");
  out << io::plan_to_json(plan_anchor(scene, library, request));
  return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                 const std::string& events_path, std::ostream& out) {
  const io::Scenario scenario = io::load_scenario(scenario_path);
  const SlipTrace trace = std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SlipScenario>) {
          return simulate_pull(s);
        } else {
          return simulate_lowering(s);
        }
      },
      scenario);
  io::write_file(out_path, io::trace_to_csv(trace));
  const std::string events = io::events_to_json(trace);
  if (!events_path.empty()) io::write_file(events_path, events);
  out << events;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planar tether anchoring toolkit: capstan amplification, routing, planning, simulation"};
  app.require_subcommand(1);

  std::string meas_path, base_path, fit_out, class_name = "fitted";
  auto* fit = app.add_subcommand("fit", "Fit friction coefficients from slip-test CSVs");
  fit->add_option("--measurements", meas_path, "object_id,wrap_angle_deg,slip_tension_N CSV")->required();
  fit->add_option("--baselines", base_path, "object_id,peak_force_N CSV")->required();
  fit->add_option("--out", fit_out, "Write the aggregated library JSON here instead of stdout");
  fit->add_option("--class", class_name, "Surface class name of the aggregated entry");

  std::string scene_path, anchor = "0,0", load = "1,0", winding;
  auto* route = app.add_subcommand("route", "Route a taut tether along a winding");
  route->add_option("--scene", scene_path, "Scene JSON")->required();
  route->add_option("--anchor", anchor, "Anchor point X,Y (m)")->required();
  route->add_option("--load", load, "Load point X,Y (m)")->required();
  route->add_option("--winding", winding, "id:ccw|cw:turns,...");

  std::string library_path, policy = "min";
  ManeuverRequest request;
  auto* plan = app.add_subcommand("plan", "Find the best anchoring winding for a load");
  plan->add_option("--scene", scene_path, "Scene JSON")->required();
  plan->add_option("--library", library_path, "Friction library JSON (default: built-in)");
  plan->add_option("--t0", request.anchor_agent.t0, "Anchor agent holding force (N)")->required();
  plan->add_option("--tension", request.required_tension, "Required load tension (N)")->required();
  plan->add_option("--fos", request.factor_of_safety, "Factor of safety")->capture_default_str();
  plan->add_option("--policy", policy, "min | mean | lower95")->capture_default_str();
  plan->add_flag("--reversible", request.require_reversible, "Only accept reversible paths");
  plan->add_option("--anchor", anchor, "Anchor agent position X,Y (m)")->capture_default_str();
  plan->add_option("--load", load, "Load point X,Y (m)")->capture_default_str();
  plan->add_option("--max-capstans", request.max_capstans)->capture_default_str();
  plan->add_option("--max-turns", request.max_turns_per_capstan)->capture_default_str();

  std::string scenario_path, trace_out, events_out;
  auto* simulate = app.add_subcommand("simulate", "Run a pull or lowering scenario");
  simulate->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_option("--out", trace_out, "Trace CSV output")->required();
  simulate->add_option("--events", events_out, "Also write the events JSON here");

  double mu = 0.0;
  std::string theta;
  auto* sense = app.add_subcommand("sense", "Amplification factor and its partial derivatives");
  sense->add_option("--mu", mu, "Friction coefficient")->required();
  sense->add_option("--theta", theta, "Wrap angle, e.g. 360deg")->required();

  std::vector<std::string> argv_rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sense) return cmd_sense(mu, theta, out);
    if (*route) return cmd_route(scene_path, anchor, load, winding, out);
    if (*fit) return cmd_fit(meas_path, base_path, fit_out, class_name, out);
    if (*plan) return cmd_plan(scene_path, library_path, request, policy, anchor, load, out);
    if (*simulate) return cmd_simulate(scenario_path, trace_out, events_out, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace capstan
