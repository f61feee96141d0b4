#ifndef CAPSTAN_PLANNER_HPP_
#define CAPSTAN_PLANNER_HPP_

#include <map>
#include <span>
#include <vector>

#include "capstan/estimation.hpp"
#include "capstan/geometry.hpp"
#include "capstan/mechanics.hpp"

namespace capstan {

struct AnchorAgent {
  Vec2 position = Vec2::Zero();
  double t0 = 0.0;  // holding force, N
};

struct ManeuverRequest {
  AnchorAgent anchor_agent;
  Vec2 load_point = Vec2::Zero();
  double required_tension = 0.0;
  double factor_of_safety = 1.0;
  MuPolicy mu_policy = MuPolicy::kMin;
  bool require_reversible = false;
  int max_capstans = 3;
  int max_turns_per_capstan = 2;
};

struct ManeuverPlan {
  WindingSpec winding;
  TetherPath path;
  double predicted_af = 1.0;
  double margin = 0.0;
  std::map<std::string, double> per_capstan_reaction;  // magnitude, N
  bool reversible = true;
};

/// theta_min = max(0, ln(fos * T / T0) / mu).
double required_wrap(double required_tension, double t0, double mu_design, double fos);

/// Per-capstan reaction vectors for a routed path carrying `load_tension` at the load end.
///
/// Tension decays by exp(-mu theta) across each arc walking from the load toward the
/// anchor; each arc's reaction is the sum of its two end tensions along the tether.
/// Capstans visited more than once accumulate their arc reactions.
std::map<std::string, Vec2> path_reactions(const TetherPath& path, std::span<const Wrapd> wraps,
                                           double load_tension);

/// Exhaustive search over winding sequences for the best feasible plan.
///
/// Candidates are ranked by capstan count, then total tether length, then the
/// largest per-capstan reaction; remaining ties keep enumeration order.
/// Throws InfeasibleError carrying the best attained margin when nothing qualifies.
ManeuverPlan plan_anchor(const Scene& scene, const FrictionLibrary& library,
                         const ManeuverRequest& request);

struct AllocationResult {
  std::vector<double> tensions;
  Vec2 achieved = Vec2::Zero();
  double residual = 0.0;
  bool feasible = false;
};

/// Box-constrained least squares split of `target` over parallel branches.
///
/// Each branch j carries 0 <= T_j <= T0_j exp(mu_j theta_j) along its direction.
/// `feasible` is set when the residual vanishes (relative 1e-9); otherwise the
/// result holds the closest attainable force.
AllocationResult allocate_parallel(std::span<const TensionBranchd> agents, const Vec2& target);

}  // namespace capstan

#endif  // CAPSTAN_PLANNER_HPP_
