// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Obstacle configurations in the square Q = (-1,1)^2: named placement
// branches, corner-layer parametrizations, validation, dihedral symmetries,
// and polygonal discretization of the domain boundary.

#ifndef PERCELL_GEOMETRY_HPP
#define PERCELL_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace percell {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 p, Point2 q) { return {p.x + q.x, p.y + q.y}; }
  friend Point2 operator-(Point2 p, Point2 q) { return {p.x - q.x, p.y - q.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2 p, Point2 q) { return p.x == q.x && p.y == q.y; }
};

inline double dot(Point2 p, Point2 q) { return p.x * q.x + p.y * q.y; }
inline double cross(Point2 p, Point2 q) { return p.x * q.y - p.y * q.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double dist(Point2 p, Point2 q) { return norm(p - q); }

/// One circular obstacle: closed disk of the given radius about `center`.
struct HoleSpec {
  Point2 center;
  double radius = 0.0;
};

/// Named placement families of the two-obstacle benchmark.
enum class Branch {
  adjacent,        ///< tangent to two adjacent corners of the square
  opposite,        ///< tangent to two opposite corners
  opp_side,        ///< tangent to the midpoints of two opposite sides
  cluster,         ///< same-corner contact pair at theta = pi/4
  side,            ///< one hole tangent to the top side at abscissa xi
  endpoint,        ///< one hole at (1 - a*r, 1 - r), scaled corner offset a
  same_corner,     ///< two holes in the top-right corner layer
  distinct_corner, ///< holes in two different corner layers
  custom,
};

const char* branch_name(Branch b);

/// Corner-layer scaled offsets: hole center (1 - a*r, 1 - b*r), a,b >= 1.
struct CornerParams {
  double a = 1.0;
  double b = 1.0;
};

/// A one- or two-obstacle configuration. `hole2` is absent for the one-hole
/// families (side / endpoint); both holes share the common radius `r`.
struct Configuration {
  HoleSpec hole1;
  std::optional<HoleSpec> hole2;
  double r = 0.0;
  Branch label = Branch::custom;

  // Family parameters, meaningful per label:
  double xi = 0.0;                     ///< side(xi) abscissa
  CornerParams c1{}, c2{};             ///< same_corner scaled offsets
};

/// Report of the admissibility invariants, with measured slack.
struct ValidityReport {
  bool valid = false;
  bool containment_ok = false;
  bool disjoint_ok = false;
  double containment_margin = 0.0;  ///< min over holes of (1 - |coord| - r)
  double separation_margin = 0.0;   ///< |c1 - c2| - 2r (two-hole only)
  std::string detail;
};

/// Polygonal discretization of the domain boundary: the square boundary split
/// into segments and each circle replaced by an inscribed regular m-gon of
/// circumradius (r - inset). Outer polyline is counterclockwise, hole
/// polylines are clockwise.
struct PolygonDomain {
  std::vector<Point2> outer;
  std::vector<std::vector<Point2>> holes;
  double inset = 0.0;
};

/// The eight symmetries of the square.
enum class D4 {
  identity,
  rot90,
  rot180,
  rot270,
  mirror_x,     ///< (x,y) -> (x,-y)
  mirror_y,     ///< (x,y) -> (-x,y)
  mirror_diag,  ///< (x,y) -> (y,x)
  mirror_anti,  ///< (x,y) -> (-y,-x)
};

/// Canonical placements of the named two-hole branches. Requires 0 < r < 1/2.
Configuration make_branch_config(Branch branch, double r);

/// One hole tangent to the top side: center (xi, 1-r). Requires |xi| <= 1-r
/// (equality is the corner-tangent endpoint of the family).
Configuration make_side_config(double xi, double r);

/// One hole at (1 - a*r, 1 - r): the endpoint family. Requires a >= 1.
Configuration make_endpoint_config(double a, double r);

/// Two holes in the top-right corner layer, centers (1 - a_i*r, 1 - b_i*r).
/// Requires entries >= 1, scaled separation |c1 - c2| >= 2, disks inside Q.
Configuration make_same_corner_config(CornerParams c1, CornerParams c2, double r);

/// Cross-axis contact family: c1 = (1 + 2cos(theta), 1), c2 = (1, 1 + 2sin(theta)).
/// Satisfies (a-1)^2 + (b-1)^2 = 4 exactly. Requires theta in [0, pi/2].
std::pair<CornerParams, CornerParams> contact_family(double theta);

/// Check the admissibility invariants (closure containment, disjointness).
/// Report-only: never throws.
ValidityReport validate(const Configuration& config);

/// The empty square's boundary with n_side segments per side and no holes:
/// the obstacle-free reference domain of the convergence and scaling runs.
PolygonDomain empty_square_domain(int n_side = 8);

/// Discretize the boundary. Defaults are the benchmark protocol: 8 segments
/// per side, 32-gon circles, inset 5e-4. Circle m-gon vertices start at angle
/// 0 and proceed counterclockwise; the hole polyline is stored clockwise.
PolygonDomain polygonize(const Configuration& config, int n_side = 8,
                         int m_circle = 32, double inset = 5e-4);

/// Transform a configuration by a dihedral symmetry, optionally composed with
/// the hole interchange. Validity is preserved.
Configuration apply_symmetry(const Configuration& config, D4 g,
                             bool swap_holes = false);

/// Apply the symmetry to a bare point.
Point2 apply_symmetry(Point2 p, D4 g);

/// Signed area of a polygon (positive for counterclockwise orientation).
double polygon_signed_area(const std::vector<Point2>& poly);

/// True if the closed polyline is simple (no self-intersections).
bool polygon_is_simple(const std::vector<Point2>& poly);

/// True if two closed polylines are disjoint (no edge crossings and neither
/// contains a vertex of the other).
bool polygons_disjoint(const std::vector<Point2>& p, const std::vector<Point2>& q);

/// Point-in-polygon test (even-odd rule); boundary points unspecified.
bool point_in_polygon(Point2 pt, const std::vector<Point2>& poly);

}  // namespace percell

#endif  // PERCELL_GEOMETRY_HPP
