#include "capstan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "capstan/errors.hpp"

namespace capstan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSweepTolerance = 1e-9;
constexpr double kContactTolerance = 1e-9;

Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Wraps into [0, 2*pi).
double wrap_angle_positive(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

// Sense of rotation when traced anchor -> load.
double travel_sign(Winding w) { return w == Winding::kCcw ? -1.0 : 1.0; }

double point_segment_distance(const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (q - a).norm();
  const double t = std::clamp((q - a).dot(ab) / len2, 0.0, 1.0);
  return (q - (a + t * ab)).norm();
}

double segment_segment_distance(const StraightSegment& s, const StraightSegment& t) {
  const Vec2 r = s.p1 - s.p0;
  const Vec2 q = t.p1 - t.p0;
  const double d1 = cross(r, t.p0 - s.p0);
  const double d2 = cross(r, t.p1 - s.p0);
  const double d3 = cross(q, s.p0 - t.p0);
  const double d4 = cross(q, s.p1 - t.p0);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return 0.0;
  }
  return std::min({point_segment_distance(t.p0, s.p0, s.p1), point_segment_distance(t.p1, s.p0, s.p1),
                   point_segment_distance(s.p0, t.p0, t.p1), point_segment_distance(s.p1, t.p0, t.p1)});
}

bool angle_on_arc(const ContactArc& arc, double angle, double tol) {
  if (arc.turns > 0) return true;
  const double delta = wrap_angle_positive(arc.travel_sign() * (angle - arc.entry_angle));
  return delta <= arc.sweep + tol || delta >= kTwoPi - tol;
}

// Distance from q to the arc.
double point_arc_distance(const Vec2& q, const ContactArc& arc) {
  const Vec2 v = q - arc.center;
  const double d = v.norm();
  if (d > 0.0 && angle_on_arc(arc, std::atan2(v.y(), v.x()), 0.0)) return std::abs(d - arc.radius);
  const Vec2 e0 = arc.point_at(arc.entry_angle);
  const Vec2 e1 = arc.point_at(arc.exit_angle);
  return std::min((q - e0).norm(), (q - e1).norm());
}

double tol_for(double radius) { return kContactTolerance * std::max(1.0, radius); }

bool segment_hits_arc(const StraightSegment& s, const ContactArc& arc) {
  const double tol = tol_for(arc.radius);
  const double ang_tol = tol / arc.radius;
  const Vec2 dvec = s.p1 - s.p0;
  const Vec2 f = s.p0 - arc.center;
  const double a = dvec.squaredNorm();
  if (a == 0.0) return point_arc_distance(s.p0, arc) <= tol;
  // Grazing contact: closest point of the segment lies on the circle within tolerance.
  const double t_close = std::clamp(-f.dot(dvec) / a, 0.0, 1.0);
  const Vec2 closest = s.p0 + t_close * dvec;
  const Vec2 cv = closest - arc.center;
  if (std::abs(cv.norm() - arc.radius) <= tol && angle_on_arc(arc, std::atan2(cv.y(), cv.x()), ang_tol)) {
    return true;
  }
  const double b = 2.0 * f.dot(dvec);
  const double c = f.squaredNorm() - arc.radius * arc.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  const double tol_t = tol / std::sqrt(a);
  for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
    if (t < -tol_t || t > 1.0 + tol_t) continue;
    const Vec2 p = s.p0 + t * dvec - arc.center;
    if (angle_on_arc(arc, std::atan2(p.y(), p.x()), ang_tol)) return true;
  }
  return false;
}

bool arc_hits_arc(const ContactArc& a, const ContactArc& b) {
  const double tol = tol_for(std::max(a.radius, b.radius));
  const Vec2 dv = b.center - a.center;
  const double d = dv.norm();
  if (d <= tol && std::abs(a.radius - b.radius) <= tol) {
    // Same circle: overlapping angular ranges.
    if (a.turns > 0 || b.turns > 0) return true;
    const double ang_tol = tol / a.radius;
    if (angle_on_arc(a, b.entry_angle, ang_tol) || angle_on_arc(a, b.exit_angle, ang_tol)) return true;
    return angle_on_arc(b, a.entry_angle, ang_tol) || angle_on_arc(b, a.exit_angle, ang_tol);
  }
  if (d > a.radius + b.radius + tol || d < std::abs(a.radius - b.radius) - tol || d == 0.0) return false;
  const double x = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, a.radius * a.radius - x * x));
  const Vec2 u = dv / d;
  const Vec2 base = a.center + x * u;
  for (double sgn : {-1.0, 1.0}) {
    const Vec2 p = base + sgn * h * perp(u);
    const Vec2 pa = p - a.center;
    const Vec2 pb = p - b.center;
    if (angle_on_arc(a, std::atan2(pa.y(), pa.x()), tol / a.radius) &&
        angle_on_arc(b, std::atan2(pb.y(), pb.x()), tol / b.radius)) {
      return true;
    }
  }
  return false;
}

bool elements_intersect(const PathElement& x, const PathElement& y) {
  const auto* sx = std::get_if<StraightSegment>(&x);
  const auto* sy = std::get_if<StraightSegment>(&y);
  const auto* ax = std::get_if<ContactArc>(&x);
  const auto* ay = std::get_if<ContactArc>(&y);
  if (sx && sy) return segment_segment_distance(*sx, *sy) <= kContactTolerance;
  if (sx && ay) return segment_hits_arc(*sx, *ay);
  if (ax && sy) return segment_hits_arc(*sy, *ax);
  return arc_hits_arc(*ax, *ay);
}

double element_distance_to(const PathElement& e, const Vec2& q) {
  if (const auto* s = std::get_if<StraightSegment>(&e)) return point_segment_distance(q, s->p0, s->p1);
  return point_arc_distance(q, std::get<ContactArc>(e));
}

}  // namespace

Winding flipped(Winding w) { return w == Winding::kCcw ? Winding::kCw : Winding::kCcw; }

std::string to_string(Winding w) { return w == Winding::kCcw ? "ccw" : "cw"; }

std::optional<Winding> parse_winding(const std::string& text) {
  if (text == "ccw" || text == "CCW") return Winding::kCcw;
  if (text == "cw" || text == "CW") return Winding::kCw;
  return std::nullopt;
}

const CapstanObject* Scene::find(const std::string& id) const {
  for (const auto& c : capstans) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

void validate_scene(const Scene& scene) {
  std::set<std::string> ids;
  for (const auto& c : scene.capstans) {
    if (c.id.empty()) throw InputError("capstan id must not be empty");
    if (!ids.insert(c.id).second) throw InputError(fmt::format("duplicate capstan id '{}'", c.id));
    if (!(c.radius > 0.0) || !std::isfinite(c.radius)) {
      throw InputError(fmt::format("capstan '{}': radius must be positive", c.id));
    }
    if (!(c.upheaval_limit > 0.0)) {
      throw InputError(fmt::format("capstan '{}': upheaval limit must be positive", c.id));
    }
    if (!c.center.allFinite()) throw InputError(fmt::format("capstan '{}': center not finite", c.id));
  }
  for (std::size_t i = 0; i < scene.capstans.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.capstans.size(); ++j) {
      const auto& a = scene.capstans[i];
      const auto& b = scene.capstans[j];
      if ((a.center - b.center).norm() < a.radius + b.radius) {
        throw GeometryError(fmt::format("capstans '{}' and '{}' overlap", a.id, b.id));
      }
    }
  }
  if (scene.bounds && !(scene.bounds->min.array() < scene.bounds->max.array()).all()) {
    throw InputError("scene bounds must have min < max");
  }
}

Vec2 StraightSegment::direction() const {
  const Vec2 d = p1 - p0;
  const double n = d.norm();
  return n > 0.0 ? Vec2(d / n) : Vec2::UnitX();
}

double ContactArc::wrap_angle() const { return sweep + kTwoPi * turns; }

double ContactArc::travel_sign() const { return capstan::travel_sign(direction); }

Vec2 ContactArc::point_at(double angle) const {
  return center + radius * Vec2(std::cos(angle), std::sin(angle));
}

std::vector<const ContactArc*> TetherPath::arcs() const {
  std::vector<const ContactArc*> out;
  for (const auto& e : elements) {
    if (const auto* a = std::get_if<ContactArc>(&e)) out.push_back(a);
  }
  return out;
}

StraightSegment tangent_segment(const TangentCircle& a, const TangentCircle& b) {
  if (a.radius < 0.0 || b.radius < 0.0) throw DomainError("tangent circle radius must be >= 0");
  const Vec2 dv = b.center - a.center;
  const double d = dv.norm();
  if (a.radius > 0.0 && b.radius > 0.0 && d < a.radius + b.radius) {
    throw GeometryError("tangent requested between overlapping disks");
  }
  if (d == 0.0) throw GeometryError("tangent requested between coincident circles");
  const double rho_a = travel_sign(a.winding) * a.radius;
  const double rho_b = travel_sign(b.winding) * b.radius;
  const double delta = rho_b - rho_a;
  double s = -delta / d;
  if (std::abs(s) > 1.0) {
    if (std::abs(s) - 1.0 > 1e-12) {
      throw InfeasibleError("no common tangent exists for the requested windings");
    }
    s = std::copysign(1.0, s);
  }
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  const Vec2 dhat = dv / d;
  const Vec2 u = c * dhat + s * perp(dhat);
  const Vec2 n = perp(u);
  return {a.center - rho_a * n, b.center - rho_b * n};
}

TetherPath route_tether(const Vec2& anchor, const Vec2& load, const WindingSpec& winding,
                        const Scene& scene) {
  std::vector<const CapstanObject*> objects;
  for (std::size_t i = 0; i < winding.size(); ++i) {
    const auto& w = winding[i];
    const CapstanObject* obj = scene.find(w.capstan_id);
    if (!obj) throw LookupError(fmt::format("winding references unknown capstan '{}'", w.capstan_id));
    if (w.extra_turns < 0) {
      throw InputError(fmt::format("capstan '{}': extra turns must be >= 0", w.capstan_id));
    }
    if (i > 0 && winding[i - 1].capstan_id == w.capstan_id) {
      throw InputError(fmt::format("capstan '{}' appears twice in a row", w.capstan_id));
    }
    objects.push_back(obj);
  }
  for (const auto& c : scene.capstans) {
    for (const Vec2* p : {&anchor, &load}) {
      if ((*p - c.center).norm() <= c.radius) {
        throw GeometryError(fmt::format("endpoint lies inside capstan '{}'", c.id));
      }
    }
  }

  std::vector<TangentCircle> chain;
  chain.push_back({anchor, 0.0, Winding::kCcw});
  for (std::size_t i = 0; i < winding.size(); ++i) {
    chain.push_back({objects[i]->center, objects[i]->radius, winding[i].direction});
  }
  chain.push_back({load, 0.0, Winding::kCcw});

  std::vector<StraightSegment> segments;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    try {
      segments.push_back(tangent_segment(chain[i], chain[i + 1]));
    } catch (const InfeasibleError&) {
      const std::string from = i == 0 ? "anchor" : winding[i - 1].capstan_id;
      const std::string to = i + 1 == chain.size() - 1 ? "load" : winding[i].capstan_id;
      throw GeometryError(fmt::format("no tangent from '{}' to '{}' for the requested windings", from, to));
    }
  }

  TetherPath path;
  path.anchor = anchor;
  path.load = load;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    path.elements.emplace_back(segments[i]);
    path.total_length += segments[i].length();
    if (i == winding.size()) break;
    const CapstanObject& obj = *objects[i];
    ContactArc arc;
    arc.capstan_id = obj.id;
    arc.surface_class = obj.surface_class;
    arc.center = obj.center;
    arc.radius = obj.radius;
    arc.direction = winding[i].direction;
    arc.turns = winding[i].extra_turns;
    const Vec2 in = segments[i].p1 - obj.center;
    const Vec2 out = segments[i + 1].p0 - obj.center;
    arc.entry_angle = std::atan2(in.y(), in.x());
    arc.exit_angle = std::atan2(out.y(), out.x());
    arc.sweep = wrap_angle_positive(arc.travel_sign() * (arc.exit_angle - arc.entry_angle));
    if (arc.sweep < kSweepTolerance || arc.sweep > kTwoPi - kSweepTolerance) {
      throw GeometryError(fmt::format(
          "tether does not touch capstan '{}' under the requested winding (zero sweep)", obj.id));
    }
    path.wrap_angles[obj.id] += arc.wrap_angle();
    path.total_length += obj.radius * arc.wrap_angle();
    path.elements.emplace_back(std::move(arc));
  }
  return path;
}

PathReport validate_path(const TetherPath& path, const Scene& scene) {
  PathReport report;
  const auto& el = path.elements;
  for (const auto& e : el) {
    if (const auto* a = std::get_if<ContactArc>(&e); a && a->turns > 0) report.self_crossing = true;
  }
  for (std::size_t i = 0; i < el.size() && !report.self_crossing; ++i) {
    for (std::size_t j = i + 2; j < el.size(); ++j) {
      if (elements_intersect(el[i], el[j])) {
        report.self_crossing = true;
        break;
      }
    }
  }
  std::set<std::string> wound;
  for (const auto* a : path.arcs()) wound.insert(a->capstan_id);
  for (const auto& c : scene.capstans) {
    if (wound.count(c.id)) continue;
    const double limit = c.radius - tol_for(c.radius);
    for (const auto& e : el) {
      if (element_distance_to(e, c.center) < limit) {
        report.collisions.push_back(c.id);
        break;
      }
    }
  }
  report.reversible = !report.self_crossing && report.collisions.empty();
  return report;
}

std::vector<std::string> wrapped_penetrations(const TetherPath& path, const Scene& scene) {
  std::set<std::string> hit;
  for (const auto* a : path.arcs()) {
    const CapstanObject* c = scene.find(a->capstan_id);
    if (!c) continue;
    const double limit = c->radius - tol_for(c->radius);
    for (const auto& e : path.elements) {
      if (const auto* s = std::get_if<StraightSegment>(&e)) {
        if (point_segment_distance(c->center, s->p0, s->p1) < limit) hit.insert(c->id);
      }
    }
  }
  return {hit.begin(), hit.end()};
}

std::vector<Wrapd> path_wraps(const TetherPath& path, const FrictionLibrary& library,
                              MuPolicy policy) {
  std::vector<Wrapd> wraps;
  for (const auto* a : path.arcs()) {
    wraps.push_back({library.design_mu(a->surface_class, policy), a->wrap_angle()});
  }
  return wraps;
}

double path_amplification(const TetherPath& path, const FrictionLibrary& library, MuPolicy policy) {
  return serial_amplification(path_wraps(path, library, policy));
}

}  // namespace capstan
