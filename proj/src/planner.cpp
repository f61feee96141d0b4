#include "capstan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "capstan/errors.hpp"

namespace capstan {

namespace {

Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

// Unit travel direction (anchor -> load) at a contact point of the arc.
Vec2 arc_travel_direction(const ContactArc& arc, double angle) {
  return arc.travel_sign() * perp(Vec2(std::cos(angle), std::sin(angle)));
}

void check_request(const ManeuverRequest& r) {
  if (!(r.required_tension > 0.0) || !std::isfinite(r.required_tension)) {
    throw InputError("required tension must be positive");
  }
  if (!(r.anchor_agent.t0 > 0.0) || !std::isfinite(r.anchor_agent.t0)) {
    throw InputError("anchor agent T0 must be positive");
  }
  if (!(r.factor_of_safety >= 1.0) || !std::isfinite(r.factor_of_safety)) {
    throw InputError("factor of safety must be >= 1");
  }
  if (r.max_capstans < 1) throw InputError("max_capstans must be >= 1");
  if (r.max_turns_per_capstan < 0) throw InputError("max_turns_per_capstan must be >= 0");
}

struct Candidate {
  std::size_t n_capstans = 0;
  double length = 0.0;
  double max_reaction = 0.0;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.n_capstans != b.n_capstans) return a.n_capstans < b.n_capstans;
  if (a.length != b.length) return a.length < b.length;
  return a.max_reaction < b.max_reaction;
}

// Calls fn(winding) for every winding with exactly `count` distinct capstans.
template <typename Fn>
void for_each_winding(const Scene& scene, std::size_t count, int max_turns, Fn&& fn) {
  const std::size_t n = scene.capstans.size();
  std::vector<std::size_t> idx(count, 0);
  std::vector<bool> used(n, false);
  WindingSpec spec(count);

  auto assign = [&](auto&& self, std::size_t k) -> void {
    if (k == count) {
      fn(spec);
      return;
    }
    for (Winding dir : {Winding::kCcw, Winding::kCw}) {
      for (int turns = 0; turns <= max_turns; ++turns) {
        spec[k].direction = dir;
        spec[k].extra_turns = turns;
        self(self, k + 1);
      }
    }
  };
  auto choose = [&](auto&& self, std::size_t k) -> void {
    if (k == count) {
      assign(assign, 0);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      spec[k].capstan_id = scene.capstans[i].id;
      self(self, k + 1);
      used[i] = false;
    }
  };
  choose(choose, 0);
}

}  // namespace

double required_wrap(double required_tension, double t0, double mu_design, double fos) {
  if (!(required_tension > 0.0) || !(t0 > 0.0)) {
    throw DomainError("required tension and T0 must be positive");
  }
  if (!(fos >= 1.0)) throw DomainError("factor of safety must be >= 1");
  const double ratio = fos * required_tension / t0;
  if (ratio <= 1.0) return 0.0;
  if (!(mu_design > 0.0)) {
    throw InfeasibleError("zero friction cannot amplify the holding force");
  }
  return std::max(0.0, std::log(ratio) / mu_design);
}

std::map<std::string, Vec2> path_reactions(const TetherPath& path, std::span<const Wrapd> wraps,
                                           double load_tension) {
  const auto arcs = path.arcs();
  if (arcs.size() != wraps.size()) throw InputError("one wrap per path arc is required");
  std::map<std::string, Vec2> out;
  double tension = load_tension;
  for (std::size_t k = arcs.size(); k-- > 0;) {
    const ContactArc& arc = *arcs[k];
    const double hold = tension / amplification_factor(wraps[k]);
    ReactionInputd in;
    in.tension_load = tension;
    in.tension_hold = hold;
    in.dir_load = arc_travel_direction(arc, arc.exit_angle);
    in.dir_hold = -arc_travel_direction(arc, arc.entry_angle);
    auto [it, inserted] = out.try_emplace(arc.capstan_id, Vec2::Zero());
    it->second += capstan_reaction(in);
    tension = hold;
  }
  return out;
}

ManeuverPlan plan_anchor(const Scene& scene, const FrictionLibrary& library,
                         const ManeuverRequest& request) {
  validate_scene(scene);
  check_request(request);
  for (const auto& c : scene.capstans) library.at(c.surface_class);

  const double t0 = request.anchor_agent.t0;
  const double need = request.factor_of_safety * request.required_tension;
  const Vec2& anchor = request.anchor_agent.position;
  const Vec2& load = request.load_point;

  std::optional<ManeuverPlan> best;
  Candidate best_key;
  double best_margin = -std::numeric_limits<double>::infinity();

  auto consider = [&](const WindingSpec& winding) {
    TetherPath path;
    try {
      path = route_tether(anchor, load, winding, scene);
    } catch (const GeometryError&) {
      return;
    }
    const PathReport report = validate_path(path, scene);
    if (!report.collisions.empty() || !wrapped_penetrations(path, scene).empty()) return;
    if (request.require_reversible && !report.reversible) return;

    const auto wraps = path_wraps(path, library, request.mu_policy);
    const double af = serial_amplification(wraps);
    const double margin = af * t0 / need;
    best_margin = std::max(best_margin, margin);
    if (margin < 1.0) return;

    const auto reactions = path_reactions(path, wraps, request.required_tension);
    Candidate key{winding.size(), path.total_length, 0.0};
    std::map<std::string, double> magnitudes;
    for (const auto& [id, force] : reactions) {
      const double mag = force.norm();
      if (mag > scene.find(id)->upheaval_limit) return;
      magnitudes[id] = mag;
      key.max_reaction = std::max(key.max_reaction, mag);
    }
    if (best && !better(key, best_key)) return;
    best_key = key;
    best = ManeuverPlan{winding, std::move(path), af, margin, std::move(magnitudes), report.reversible};
  };

  consider({});
  const auto max_count =
      std::min(static_cast<std::size_t>(request.max_capstans), scene.capstans.size());
  for (std::size_t count = 1; count <= max_count && !best; ++count) {
    for_each_winding(scene, count, request.max_turns_per_capstan, consider);
  }
  if (!best) {
    throw InfeasibleError(
        std::isfinite(best_margin)
            ? fmt::format("no feasible winding; best attained margin {:.6f}", best_margin)
            : std::string("no feasible winding; no candidate could be routed"),
        std::isfinite(best_margin) ? best_margin : std::numeric_limits<double>::quiet_NaN());
  }
  return *best;
}

AllocationResult allocate_parallel(std::span<const TensionBranchd> agents, const Vec2& target) {
  if (agents.empty()) throw InputError("allocation needs at least one agent");
  if (agents.size() > 16) throw InputError("allocation supports at most 16 agents");
  if (!target.allFinite()) throw InputError("target force must be finite");

  const std::size_t m = agents.size();
  Eigen::Matrix<double, 2, Eigen::Dynamic> a(2, m);
  std::vector<double> cap(m);
  for (std::size_t j = 0; j < m; ++j) {
    detail::check_unit(agents[j].direction, "agent direction");
    detail::check_tension(agents[j].holding_force, "agent holding force");
    a.col(j) = agents[j].direction;
    cap[j] = agents[j].holding_force * amplification_factor(agents[j].wrap);
  }

  // Some optimum has at most two free variables (independent columns); all
  // others sit at a bound. Enumerate free sets and bound assignments.
  AllocationResult best;
  best.residual = std::numeric_limits<double>::infinity();
  std::vector<double> x(m);

  auto evaluate = [&](const std::vector<std::size_t>& free) {
    std::vector<std::size_t> fixed;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::find(free.begin(), free.end(), j) == free.end()) fixed.push_back(j);
    }
    const std::size_t combos = std::size_t{1} << fixed.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      Vec2 rhs = target;
      for (std::size_t k = 0; k < fixed.size(); ++k) {
        x[fixed[k]] = (mask >> k) & 1U ? cap[fixed[k]] : 0.0;
        rhs -= x[fixed[k]] * a.col(fixed[k]);
      }
      bool in_box = true;
      if (free.size() == 1) {
        const Vec2 col = a.col(free[0]);
        x[free[0]] = col.dot(rhs);
      } else if (free.size() == 2) {
        Eigen::Matrix2d sub;
        sub << a.col(free[0]), a.col(free[1]);
        const Eigen::Vector2d sol = sub.partialPivLu().solve(rhs);
        x[free[0]] = sol(0);
        x[free[1]] = sol(1);
      }
      for (std::size_t j : free) {
        if (x[j] < 0.0 || x[j] > cap[j]) {
          in_box = false;
          break;
        }
      }
      if (!in_box) continue;
      Vec2 achieved = Vec2::Zero();
      for (std::size_t j = 0; j < m; ++j) achieved += x[j] * a.col(j);
      const double residual = (target - achieved).norm();
      if (residual < best.residual) {
        best.residual = residual;
        best.tensions = x;
        best.achieved = achieved;
      }
    }
  };

  evaluate({});
  for (std::size_t i = 0; i < m; ++i) evaluate({i});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Vec2 ci = a.col(i);
      const Vec2 cj = a.col(j);
      if (std::abs(ci.x() * cj.y() - ci.y() * cj.x()) > 1e-12) evaluate({i, j});
    }
  }
  best.feasible = best.residual <= 1e-9 * std::max(1.0, target.norm());
  return best;
}

}  // namespace capstan
