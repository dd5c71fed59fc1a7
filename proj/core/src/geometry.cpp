// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0

#include "percell/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace percell {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Configuration two_hole(Branch label, double r, Point2 ca, Point2 cb) {
  Configuration c;
  c.label = label;
  c.r = r;
  c.hole1 = {ca, r};
  c.hole2 = HoleSpec{cb, r};
  return c;
}

}  // namespace

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::adjacent: return "adjacent";
    case Branch::opposite: return "opposite";
    case Branch::opp_side: return "opp_side";
    case Branch::cluster: return "cluster";
    case Branch::side: return "side";
    case Branch::endpoint: return "endpoint";
    case Branch::same_corner: return "same_corner";
    case Branch::distinct_corner: return "distinct_corner";
    case Branch::custom: return "custom";
  }
  return "unknown";
}

Configuration make_branch_config(Branch branch, double r) {
  require(r > 0.0 && r < 0.5, "branch radius must satisfy 0 < r < 1/2");
  switch (branch) {
    case Branch::adjacent:
      return two_hole(branch, r, {-1 + r, 1 - r}, {1 - r, 1 - r});
    case Branch::opposite:
      return two_hole(branch, r, {1 - r, 1 - r}, {-1 + r, -1 + r});
    case Branch::opp_side:
      return two_hole(branch, r, {0, 1 - r}, {0, -1 + r});
    case Branch::cluster: {
      auto [c1, c2] = contact_family(kPi / 4.0);
      Configuration c = make_same_corner_config(c1, c2, r);
      c.label = Branch::cluster;
      return c;
    }
    default:
      throw std::invalid_argument(
          "make_branch_config handles the four canonical two-hole branches; "
          "use the dedicated constructors for side/endpoint/same_corner");
  }
}

Configuration make_side_config(double xi, double r) {
  require(r > 0.0 && r < 0.5, "side radius must satisfy 0 < r < 1/2");
  // |xi| == 1 - r is the corner-tangent endpoint of the family; tangency is
  // admissible because polygonize keeps an inset gap from every wall.
  require(std::abs(xi) <= 1.0 - r, "side abscissa must satisfy |xi| <= 1 - r");
  Configuration c;
  c.label = Branch::side;
  c.r = r;
  c.xi = xi;
  c.hole1 = {{xi, 1 - r}, r};
  c.hole2.reset();
  return c;
}

Configuration make_endpoint_config(double a, double r) {
  require(a >= 1.0, "endpoint scale must satisfy a >= 1");
  Configuration c = make_side_config(1.0 - a * r, r);
  c.label = Branch::endpoint;
  c.c1 = {a, 1.0};
  return c;
}

Configuration make_same_corner_config(CornerParams c1, CornerParams c2, double r) {
  require(r > 0.0 && r < 0.5, "corner-layer radius must satisfy 0 < r < 1/2");
  require(c1.a >= 1.0 && c1.b >= 1.0 && c2.a >= 1.0 && c2.b >= 1.0,
          "corner-layer offsets must satisfy a,b >= 1");
  const double sep = std::hypot(c1.a - c2.a, c1.b - c2.b);
  require(sep >= 2.0 - 1e-12, "scaled corner-layer separation must be >= 2");
  Point2 p1{1 - c1.a * r, 1 - c1.b * r};
  Point2 p2{1 - c2.a * r, 1 - c2.b * r};
  require(std::abs(p1.x) + r <= 1 && std::abs(p1.y) + r <= 1 &&
              std::abs(p2.x) + r <= 1 && std::abs(p2.y) + r <= 1,
          "corner-layer disk escapes the square");
  Configuration c = two_hole(Branch::same_corner, r, p1, p2);
  c.c1 = c1;
  c.c2 = c2;
  return c;
}

std::pair<CornerParams, CornerParams> contact_family(double theta) {
  require(theta >= 0.0 && theta <= kPi / 2.0, "contact angle must lie in [0, pi/2]");
  CornerParams c1{1.0 + 2.0 * std::cos(theta), 1.0};
  CornerParams c2{1.0, 1.0 + 2.0 * std::sin(theta)};
  return {c1, c2};
}

ValidityReport validate(const Configuration& config) {
  ValidityReport rep;
  double margin = 1e300;
  auto contain = [&margin](const HoleSpec& h) {
    margin = std::min(margin, 1.0 - std::abs(h.center.x) - h.radius);
    margin = std::min(margin, 1.0 - std::abs(h.center.y) - h.radius);
  };
  contain(config.hole1);
  if (config.hole2) contain(*config.hole2);
  rep.containment_margin = margin;
  rep.containment_ok = margin >= 0.0;

  if (config.hole2) {
    const double sep = dist(config.hole1.center, config.hole2->center);
    rep.separation_margin = sep - 2.0 * config.r;
    rep.disjoint_ok = rep.separation_margin >= 0.0;
  } else {
    rep.separation_margin = 0.0;
    rep.disjoint_ok = true;
  }

  rep.valid = rep.containment_ok && rep.disjoint_ok;
  rep.detail = rep.valid ? "admissible"
             : !rep.containment_ok ? "closure containment violated"
                                   : "disks overlap";
  return rep;
}

PolygonDomain empty_square_domain(int n_side) {
  require(n_side >= 1, "empty_square_domain requires n_side >= 1");
  PolygonDomain dom;
  // Square boundary, counterclockwise from (-1,-1), n_side segments per side.
  const std::array<Point2, 4> corner{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  for (int s = 0; s < 4; ++s) {
    const Point2 a = corner[s], b = corner[(s + 1) % 4];
    for (int i = 0; i < n_side; ++i) {
      const double t = static_cast<double>(i) / n_side;
      dom.outer.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return dom;
}

PolygonDomain polygonize(const Configuration& config, int n_side, int m_circle,
                         double inset) {
  require(n_side >= 1, "polygonize requires n_side >= 1");
  require(m_circle >= 8, "polygonize requires m_circle >= 8");
  require(inset >= 0.0 && inset < config.r / 2.0,
          "polygonize requires 0 <= inset < r/2");

  PolygonDomain dom = empty_square_domain(n_side);
  dom.inset = inset;

  // Circles as inscribed regular m-gons of circumradius r - inset, vertices
  // from angle 0 counterclockwise; stored clockwise (hole orientation).
  auto add_hole = [&](const HoleSpec& h) {
    const double rho = h.radius - inset;
    std::vector<Point2> poly(m_circle);
    for (int k = 0; k < m_circle; ++k) {
      const double phi = 2.0 * kPi * k / m_circle;
      poly[k] = {h.center.x + rho * std::cos(phi), h.center.y + rho * std::sin(phi)};
    }
    std::reverse(poly.begin() + 1, poly.end());  // clockwise, keep start vertex
    dom.holes.push_back(std::move(poly));
  };
  add_hole(config.hole1);
  if (config.hole2) add_hole(*config.hole2);

  for (const auto& hole : dom.holes) {
    for (const auto& other : dom.holes) {
      if (&hole != &other && !polygons_disjoint(hole, other))
        throw std::invalid_argument("hole polygons intersect after inset");
    }
  }
  return dom;
}

Point2 apply_symmetry(Point2 p, D4 g) {
  switch (g) {
    case D4::identity: return p;
    case D4::rot90: return {-p.y, p.x};
    case D4::rot180: return {-p.x, -p.y};
    case D4::rot270: return {p.y, -p.x};
    case D4::mirror_x: return {p.x, -p.y};
    case D4::mirror_y: return {-p.x, p.y};
    case D4::mirror_diag: return {p.y, p.x};
    case D4::mirror_anti: return {-p.y, -p.x};
  }
  return p;
}

Configuration apply_symmetry(const Configuration& config, D4 g, bool swap_holes) {
  Configuration out = config;
  out.hole1.center = apply_symmetry(config.hole1.center, g);
  if (config.hole2) {
    out.hole2->center = apply_symmetry(config.hole2->center, g);
    if (swap_holes) std::swap(out.hole1, *out.hole2);
  }
  if (g != D4::identity || swap_holes) out.label = Branch::custom;
  return out;
}

double polygon_signed_area(const std::vector<Point2>& poly) {
  double acc = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i], b = poly[(i + 1) % n];
    acc += cross(a, b);
  }
  return 0.5 * acc;
}

namespace {

// Proper or improper intersection of closed segments [a,b] and [c,d],
// excluding the case of a shared endpoint.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) {
    const double v = cross(q - p, r - p);
    return (v > 0) - (v < 0);
  };
  if (a == c || a == d || b == c || b == d) return false;
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  auto on_segment = [](Point2 p, Point2 q, Point2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool polygon_is_simple(const std::vector<Point2>& poly) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i], b = poly[(i + 1) % n];
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      const Point2 c = poly[j], d = poly[(j + 1) % n];
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool polygons_disjoint(const std::vector<Point2>& p, const std::vector<Point2>& q) {
  for (size_t i = 0; i < p.size(); ++i) {
    const Point2 a = p[i], b = p[(i + 1) % p.size()];
    for (size_t j = 0; j < q.size(); ++j) {
      const Point2 c = q[j], d = q[(j + 1) % q.size()];
      if (segments_intersect(a, b, c, d) || a == c) return false;
    }
  }
  if (point_in_polygon(q[0], p) || point_in_polygon(p[0], q)) return false;
  return true;
}

bool point_in_polygon(Point2 pt, const std::vector<Point2>& poly) {
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = poly[i], b = poly[j];
    if ((a.y > pt.y) != (b.y > pt.y)) {
      const double xcross = a.x + (pt.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (pt.x < xcross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace percell
