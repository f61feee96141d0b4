// Acceptance checks. One PASS/FAIL line per criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "capstan/errors.hpp"
#include "capstan/estimation.hpp"
#include "capstan/geometry.hpp"
#include "capstan/io.hpp"
#include "capstan/mechanics.hpp"
#include "capstan/planner.hpp"
#include "capstan/simulator.hpp"
#include "planner_oracle.hpp"

using namespace capstan;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome additivity() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> mu_d(0.01, 1.0), theta_d(0.0, 8 * kPi), u(0.0, 1.0);
  std::uniform_int_distribution<int> parts(1, 5);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double mu = mu_d(rng), theta = theta_d(rng);
    const int k = parts(rng);
    std::vector<double> cuts{0.0, theta};
    for (int j = 1; j < k; ++j) cuts.push_back(theta * u(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Wrapd> wraps;
    for (int j = 0; j < k; ++j) wraps.push_back({mu, cuts[j + 1] - cuts[j]});
    worst = std::max(worst, rel_err(serial_amplification(wraps), amplification_factor(Wrapd{mu, theta})));
  }
  const double t = seconds_since(start);
  char buf[96];
  std::snprintf(buf, sizeof buf, "max rel err %.3g, %.3f s", worst, t);
  return {worst < 1e-12 && t < 1.0, buf};
}

Outcome order_invariance() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> mu_d(0.0, 1.0), theta_d(0.0, 4 * kPi);
  std::uniform_int_distribution<int> len(1, 5);
  long perms = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Wrapd> wraps(len(rng));
    for (auto& w : wraps) w = {mu_d(rng), theta_d(rng)};
    const double ref = serial_amplification(wraps);
    std::vector<int> idx(wraps.size());
    for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = static_cast<int>(j);
    do {
      std::vector<Wrapd> p;
      for (int j : idx) p.push_back(wraps[j]);
      ++perms;
      if (serial_amplification(p) != ref) return {false, "permutation changed A_F"};
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return {true, std::to_string(perms) + " permutations bit-identical"};
}

Outcome sensitivity_fd() {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double mu = 0.05 + (0.8 - 0.05) * i / 19.0;
      const double theta = 0.1 + (8 * kPi - 0.1) * j / 19.0;
      const auto s = sensitivity(Wrapd{mu, theta});
      const double hm = 1e-6 * mu, ht = 1e-6 * theta;
      const double fd_mu =
          (amplification_factor(Wrapd{mu + hm, theta}) - amplification_factor(Wrapd{mu - hm, theta})) / (2 * hm);
      const double fd_theta =
          (amplification_factor(Wrapd{mu, theta + ht}) - amplification_factor(Wrapd{mu, theta - ht})) / (2 * ht);
      worst = std::max({worst, rel_err(fd_mu, s.d_mu), rel_err(fd_theta, s.d_theta)});
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max rel err %.3g over 400 points", worst);
  return {worst < 1e-6, buf};
}

Scene random_scene(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-5.0, 5.0), rad(0.3, 1.5);
  std::uniform_int_distribution<int> count(1, 3);
  Scene s;
  const int n = count(rng);
  while (static_cast<int>(s.capstans.size()) < n) {
    CapstanObject c{"c" + std::to_string(s.capstans.size()), Vec2(pos(rng), pos(rng)), rad(rng), "redwood"};
    bool ok = true;
    for (const auto& o : s.capstans) ok = ok && (o.center - c.center).norm() > o.radius + c.radius + 0.2;
    if (ok) s.capstans.push_back(c);
  }
  return s;
}

Vec2 random_free_point(std::mt19937_64& rng, const Scene& s) {
  std::uniform_real_distribution<double> pos(-8.0, 8.0);
  while (true) {
    const Vec2 p(pos(rng), pos(rng));
    bool ok = true;
    for (const auto& c : s.capstans) ok = ok && (p - c.center).norm() > c.radius + 0.1;
    if (ok) return p;
  }
}

WindingSpec random_winding(std::mt19937_64& rng, const Scene& s) {
  std::uniform_int_distribution<int> len(1, 3), coin(0, 1), turns(0, 1);
  std::uniform_int_distribution<std::size_t> pick(0, s.capstans.size() - 1);
  WindingSpec w;
  const int n = len(rng);
  while (static_cast<int>(w.size()) < n) {
    const auto& c = s.capstans[pick(rng)];
    if (!w.empty() && w.back().capstan_id == c.id) {
      if (s.capstans.size() == 1) break;
      continue;
    }
    w.push_back({c.id, coin(rng) ? Winding::kCcw : Winding::kCw, turns(rng)});
  }
  return w;
}

Outcome geometry() {
  Scene unit;
  unit.capstans.push_back({"disk", Vec2(0, 0), 1.0, "redwood"});
  const auto path = route_tether(Vec2(-2, 0), Vec2(2, 0), {{"disk", Winding::kCcw, 0}}, unit);
  const double wrap_deg = path.wrap_angles.at("disk") * 180.0 / kPi;
  const double want_len = 2 * std::sqrt(3.0) + kPi / 3;
  const auto arc = path.arcs().front();
  const bool over_top = arc->point_at(arc->entry_angle + 0.5 * arc->travel_sign() * arc->sweep).y() > 0;
  if (std::abs(wrap_deg - 60.0) > 1e-9 || std::abs(path.total_length - want_len) > 1e-9 || !over_top) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "analytic case: wrap %.12f deg, length %.12f", wrap_deg, path.total_length);
    return {false, buf};
  }

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(-kPi, kPi), shift(-20.0, 20.0);
  int reversal = 0, rigid = 0;
  while (reversal < 200 || rigid < 200) {
    const Scene s = random_scene(rng);
    const Vec2 a = random_free_point(rng, s), b = random_free_point(rng, s);
    const WindingSpec w = random_winding(rng, s);
    TetherPath fwd;
    try {
      fwd = route_tether(a, b, w, s);
    } catch (const GeometryError&) {
      continue;
    }
    if (reversal < 200) {
      WindingSpec rev(w.rbegin(), w.rend());
      for (auto& e : rev) e.direction = flipped(e.direction);
      const TetherPath bwd = route_tether(b, a, rev, s);
      if (std::abs(fwd.total_length - bwd.total_length) > 1e-9) return {false, "reversal changed length"};
      for (const auto& [id, th] : fwd.wrap_angles)
        if (std::abs(th - bwd.wrap_angles.at(id)) > 1e-9) return {false, "reversal changed wrap angle"};
      ++reversal;
    }
    if (rigid < 200) {
      const Eigen::Rotation2Dd rot(ang(rng));
      const Vec2 t(shift(rng), shift(rng));
      Scene moved = s;
      for (auto& c : moved.capstans) c.center = rot * c.center + t;
      const TetherPath m = route_tether(rot * a + t, rot * b + t, w, moved);
      if (std::abs(fwd.total_length - m.total_length) > 1e-9) return {false, "rigid motion changed length"};
      for (const auto& [id, th] : fwd.wrap_angles)
        if (std::abs(th - m.wrap_angles.at(id)) > 1e-9) return {false, "rigid motion changed wrap angle"};
      ++rigid;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "wrap %.10f deg, length %.10f; 200 reversal + 200 rigid-motion scenes", wrap_deg,
                path.total_length);
  return {true, buf};
}

std::vector<SlipMeasurement> design(double mu, double t0, std::mt19937_64* rng, double sigma) {
  std::lognormal_distribution<double> noise(0.0, sigma);
  std::vector<SlipMeasurement> m;
  for (double deg : {90.0, 180.0, 270.0, 360.0, 450.0}) {
    for (int rep = 0; rep < 5; ++rep) {
      const double theta = deg * kPi / 180.0;
      m.push_back({"obj", theta, t0 * std::exp(mu * theta) * (rng ? noise(*rng) : 1.0)});
    }
  }
  return m;
}

Outcome fit_recovery() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double mu : {0.1, 0.24, 0.38, 0.6}) {
    worst = std::max(worst, rel_err(fit_friction(design(mu, 5.0, nullptr, 0.0), 5.0).mu_hat, mu));
  }
  int within = 0;
  for (int run = 0; run < 1000; ++run) {
    std::mt19937_64 rng(1000 + run);
    if (std::abs(fit_friction(design(0.38, 5.0, &rng, 0.05), 5.0).mu_hat - 0.38) < 0.02) ++within;
  }
  const double t = seconds_since(start);
  char buf[128];
  std::snprintf(buf, sizeof buf, "noiseless rel err %.3g; %d/1000 noisy runs within 0.02; %.3f s", worst, within, t);
  return {worst < 1e-12 && within >= 950 && t < 10.0, buf};
}

Outcome required_wrap_redwood() {
  const auto lib = io::load_library(std::filesystem::path(CAPSTAN_SOURCE_DIR) / "data/friction_library.json");
  const double mu = lib.design_mu("redwood", MuPolicy::kMin);
  const double deg = required_wrap(100.0, 1.0, mu, 1.0) * 180.0 / kPi;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f deg at mu %.3f", deg, mu);
  return {std::abs(deg - 785.3) <= 0.1, buf};
}

Outcome two_rock_peak() {
  const double mu = std::log(774.0) / (4 * kPi);
  const std::vector<Wrapd> wraps{{mu, 2 * kPi}, {mu, 2 * kPi}};
  const double af = serial_amplification(wraps);
  char buf[64];
  std::snprintf(buf, sizeof buf, "A_F %.6f at mu %.7f", af, mu);
  return {std::abs(af - 774.0) <= 0.5, buf};
}

Outcome planner() {
  std::mt19937_64 rng(8);
  const auto lib = default_friction_library();
  int feasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = capstan::testing::random_planning_case(rng);
    const auto oracle = capstan::testing::exhaustive_best(c.scene, lib, c.request);
    try {
      const auto plan = plan_anchor(c.scene, lib, c.request);
      ++feasible;
      const auto check = capstan::testing::recheck_path(plan.path, c.scene, lib, c.request);
      if (check.margin < 1.0 || !check.reactions_ok) return {false, "trial " + std::to_string(trial) + ": recheck failed"};
      if (!oracle) return {false, "trial " + std::to_string(trial) + ": oracle found nothing"};
      const capstan::testing::OracleBest got{plan.winding.size(), plan.path.total_length, check.max_reaction};
      if (capstan::testing::strictly_better(*oracle, got)) {
        return {false, "trial " + std::to_string(trial) + ": oracle found a better plan"};
      }
    } catch (const InfeasibleError&) {
      if (oracle) return {false, "trial " + std::to_string(trial) + ": planner missed a feasible plan"};
    }
  }
  return {true, std::to_string(feasible) + "/100 feasible, all sound and minimal"};
}

Outcome simulator() {
  const std::vector<Wrapd> wraps{{0.38, 2 * kPi}};
  const double af = serial_amplification(wraps);
  const double t0 = 5.0, dt = 0.001;

  SlipScenario ramp;
  ramp.wraps = wraps;
  ramp.t0_base = t0;
  ramp.load_profile = PiecewiseLinear({{0.0, 0.0}, {1.0, 2 * af * t0}});
  ramp.dt = dt;
  ramp.duration = 1.0;
  const auto tr = simulate_pull(ramp);
  if (tr.events.empty() || tr.events.front().kind != SlipEventKind::kSlipOnset) return {false, "no onset"};
  const double onset = tr.events.front().time;
  if (onset < 0.5 - 1e-12 || onset > 0.5 + dt + 1e-12) return {false, "onset off by more than dt"};

  SlipScenario sand = ramp;
  sand.load_profile = PiecewiseLinear({{0.0, 0.0}, {0.1, 1.5 * af * t0}});
  sand.substrate.mounding_gain = kSandMoundingGain;
  sand.duration = 5.0;
  const auto mt = simulate_pull(sand);
  const double eff = mt.samples.back().effective_t0;
  if (std::abs(eff - 1.33 * t0) > 1e-6) return {false, "mounding asymptote " + std::to_string(eff)};

  SlipScenario snag = sand;
  snag.load_profile = PiecewiseLinear({{0.0, 0.0}, {0.1, 2.0 * af * t0}});
  snag.substrate = {kMulchStickSlip, 0.0, 1.0, 0.05};
  snag.snag = SnagModel{0.1, kDefaultSnagMultiplier};
  const auto st = simulate_pull(snag);
  bool snag_seen = false;
  for (const auto& s : st.samples) {
    if (s.slip_distance >= 0.1) {
      snag_seen = true;
      if (s.capacity != af * s.effective_t0 * 3.0) return {false, "snag multiplier not exact"};
    }
  }
  if (!snag_seen) return {false, "snag never triggered"};

  LoweringScenario low;
  low.payload_weight = 20.0;
  low.wraps = {{1.0, std::log(10.0)}};
  low.agent_t0_max = 3.0;
  low.payout_policy = {{0.0, 0.0}};
  const auto arrest = simulate_lowering(low);
  low.wraps.clear();
  const auto runaway = simulate_lowering(low);
  if (arrest.events.empty() || arrest.events.front().kind != SlipEventKind::kArrest) return {false, "no ARREST"};
  if (runaway.events.empty() || runaway.events.front().kind != SlipEventKind::kRunaway) return {false, "no RUNAWAY"};

  if (!(simulate_pull(snag) == st) || !(simulate_pull(sand) == mt)) return {false, "traces not reproducible"};

  char buf[128];
  std::snprintf(buf, sizeof buf, "onset %.3f s (crossing 0.5 s), eff T0 %.9f, snag x3 exact, ARREST/RUNAWAY ok", onset,
                eff);
  return {true, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 exponent additivity", additivity},
      {"2 order invariance", order_invariance},
      {"3 sensitivity vs finite differences", sensitivity_fd},
      {"4 geometry analytic case and invariances", geometry},
      {"5 friction fit recovery", fit_recovery},
      {"6 required wrap for redwood at MIN", required_wrap_redwood},
      {"7 two-rock peak amplification", two_rock_peak},
      {"8 planner soundness and minimality", planner},
      {"9 simulator behaviour", simulator},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  return failures;
}
