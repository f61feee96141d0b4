#ifndef CAPSTAN_GEOMETRY_HPP_
#define CAPSTAN_GEOMETRY_HPP_

// Taut tether routing around disk capstans in the plane.
//
// Winding convention: the direction label of a capstan names the sense of
// rotation about its center when the tether is traced from the load back
// toward the anchor. Tracing the other way (anchor -> load, the order in which
// path elements are stored) the tether turns the opposite way. For an anchor
// at (-2, 0), a load at (2, 0) and a disk at the origin, kCcw passes over the
// top of the disk.

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "capstan/estimation.hpp"
#include "capstan/mechanics.hpp"

namespace capstan {

enum class Winding { kCw, kCcw };

Winding flipped(Winding w);
std::string to_string(Winding w);
std::optional<Winding> parse_winding(const std::string& text);

struct CapstanObject {
  std::string id;
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
  std::string surface_class;
  double upheaval_limit = std::numeric_limits<double>::infinity();

  bool operator==(const CapstanObject&) const = default;
};

struct Bounds {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();

  bool operator==(const Bounds&) const = default;
};

struct Scene {
  std::vector<CapstanObject> capstans;
  std::optional<Bounds> bounds;

  /// nullptr when absent.
  const CapstanObject* find(const std::string& id) const;
  bool operator==(const Scene&) const = default;
};

/// Throws InputError on bad radius/limit or duplicate ids, GeometryError on overlapping disks.
void validate_scene(const Scene& scene);

struct WindingEntry {
  std::string capstan_id;
  Winding direction = Winding::kCcw;
  int extra_turns = 0;

  bool operator==(const WindingEntry&) const = default;
};

using WindingSpec = std::vector<WindingEntry>;

/// A circle used as a tangent endpoint. A point is a circle of radius 0.
struct TangentCircle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  Winding winding = Winding::kCcw;
};

struct StraightSegment {
  Vec2 p0 = Vec2::Zero();
  Vec2 p1 = Vec2::Zero();

  double length() const { return (p1 - p0).norm(); }
  /// Unit direction p0 -> p1 (x axis for degenerate segments).
  Vec2 direction() const;
};

struct ContactArc {
  std::string capstan_id;
  std::string surface_class;
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double entry_angle = 0.0;  // polar angle of the anchor-side contact point
  double exit_angle = 0.0;   // polar angle of the load-side contact point
  Winding direction = Winding::kCcw;
  int turns = 0;
  double sweep = 0.0;  // partial sweep in (0, 2*pi), excluding full turns

  double wrap_angle() const;
  /// +1 when the anchor -> load traversal runs counterclockwise.
  double travel_sign() const;
  Vec2 point_at(double angle) const;
};

using PathElement = std::variant<StraightSegment, ContactArc>;

struct TetherPath {
  Vec2 anchor = Vec2::Zero();
  Vec2 load = Vec2::Zero();
  std::vector<PathElement> elements;
  std::map<std::string, double> wrap_angles;
  double total_length = 0.0;

  std::vector<const ContactArc*> arcs() const;
};

struct PathReport {
  bool self_crossing = false;
  std::vector<std::string> collisions;
  bool reversible = true;
};

/// Common tangent from circle a to circle b consistent with both windings.
StraightSegment tangent_segment(const TangentCircle& a, const TangentCircle& b);

/// Realizes a winding specification as a taut path from anchor to load.
TetherPath route_tether(const Vec2& anchor, const Vec2& load, const WindingSpec& winding,
                        const Scene& scene);

/// Self-crossing and collision report. Arcs with full turns lap over their own
/// contact and count as self-crossing.
PathReport validate_path(const TetherPath& path, const Scene& scene);

/// Ids of wound capstans whose interior is entered by a path element other than their own arc.
std::vector<std::string> wrapped_penetrations(const TetherPath& path, const Scene& scene);

/// Serial A_F over the path's arcs with each arc's class mu under `policy`.
double path_amplification(const TetherPath& path, const FrictionLibrary& library, MuPolicy policy);

/// (mu, theta) per arc in path order (anchor -> load).
std::vector<Wrapd> path_wraps(const TetherPath& path, const FrictionLibrary& library,
                              MuPolicy policy);

}  // namespace capstan

#endif  // CAPSTAN_GEOMETRY_HPP_
