// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0

#include "percell/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "percell/cdt.hpp"
#include "percell/predicates.hpp"
#include "ruppert.hpp"

namespace percell {

namespace {

std::pair<int, int> ukey(int a, int b) {
  return {std::min(a, b), std::max(a, b)};
}

Point2 vertex_mean(const std::vector<Point2>& poly) {
  Point2 c{0.0, 0.0};
  for (const Point2& p : poly) c = c + p;
  return {c.x / static_cast<double>(poly.size()),
          c.y / static_cast<double>(poly.size())};
}

double shoelace(const std::vector<Point2>& poly) {
  double s = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    s += cross(p, q);
  }
  return 0.5 * s;
}

}  // namespace

TriMesh triangulate(const PolygonDomain& domain) {
  return triangulate(domain, TriangulateOptions{});
}

TriMesh triangulate(const PolygonDomain& domain, const TriangulateOptions& options) {
  if (domain.outer.size() < 3) {
    throw std::invalid_argument("triangulate: outer polygon needs >= 3 vertices");
  }
  std::vector<Point2> pts;
  std::vector<int> marks;
  std::vector<std::pair<int, int>> segs;
  const auto add_poly = [&](const std::vector<Point2>& poly, int marker) {
    if (poly.size() < 3) {
      throw std::invalid_argument("triangulate: polygon needs >= 3 vertices");
    }
    const int base = static_cast<int>(pts.size());
    const int n = static_cast<int>(poly.size());
    for (const Point2& p : poly) {
      pts.push_back(p);
      marks.push_back(marker);
    }
    for (int i = 0; i < n; ++i) segs.emplace_back(base + i, base + (i + 1) % n);
  };
  add_poly(domain.outer, kMarkerOuter);
  for (size_t k = 0; k < domain.holes.size(); ++k) {
    add_poly(domain.holes[k], kMarkerHole0 + static_cast<int>(k));
  }

  Point2 lo = pts.front(), hi = pts.front();
  for (const Point2& p : pts) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  Cdt cdt(lo, hi);
  for (size_t i = 0; i < pts.size(); ++i) {
    const int id = cdt.insert_point(pts[i]);
    if (id != static_cast<int>(i) + 3) {
      throw std::invalid_argument("triangulate: duplicate input vertex");
    }
  }
  for (const auto& [a, b] : segs) cdt.insert_segment(a + 3, b + 3);

  std::vector<Point2> seeds;
  seeds.reserve(domain.holes.size());
  for (const auto& hole : domain.holes) seeds.push_back(vertex_mean(hole));
  cdt.carve(seeds);

  std::vector<int> vmarks(3, -1);
  vmarks.insert(vmarks.end(), marks.begin(), marks.end());
  if (options.quality) detail::ruppert_refine(cdt, options, vmarks);

  TriMesh mesh;
  const int n = cdt.vertex_count();
  mesh.vertices.reserve(static_cast<size_t>(n - 3));
  for (int i = 3; i < n; ++i) mesh.vertices.push_back(cdt.vertex(i));
  mesh.vmarker.assign(vmarks.begin() + 3, vmarks.end());
  for (const auto& t : cdt.live_triangles()) {
    if (t[0] < 3 || t[1] < 3 || t[2] < 3) {
      throw std::logic_error("triangulate: enclosing-triangle vertex leaked into output");
    }
    mesh.triangles.push_back({t[0] - 3, t[1] - 3, t[2] - 3});
  }
  for (const auto& [a, b] : cdt.live_constrained_edges()) {
    mesh.constrained_edges.emplace_back(a - 3, b - 3);
  }
  return mesh;
}

TriMesh refine_red(const TriMesh& in) {
  TriMesh out;
  out.vertices = in.vertices;
  out.vmarker = in.vmarker;

  std::map<std::pair<int, int>, int> adj_count;
  for (const auto& t : in.triangles) {
    adj_count[ukey(t[0], t[1])] += 1;
    adj_count[ukey(t[1], t[2])] += 1;
    adj_count[ukey(t[2], t[0])] += 1;
  }

  std::map<std::pair<int, int>, int> mid;
  const auto midpoint = [&](int a, int b) -> int {
    const auto key = ukey(a, b);
    const auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const Point2& pa = in.vertices[static_cast<size_t>(a)];
    const Point2& pb = in.vertices[static_cast<size_t>(b)];
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    int marker = kMarkerInterior;
    if (adj_count.at(key) == 1) {
      if (in.vmarker[static_cast<size_t>(a)] != in.vmarker[static_cast<size_t>(b)]) {
        throw std::logic_error("refine_red: boundary edge with mixed markers");
      }
      marker = in.vmarker[static_cast<size_t>(a)];
    }
    out.vmarker.push_back(marker);
    mid.emplace(key, idx);
    return idx;
  };

  out.triangles.reserve(in.triangles.size() * 4);
  for (const auto& t : in.triangles) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = midpoint(a, b);
    const int bc = midpoint(b, c);
    const int ca = midpoint(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({b, bc, ab});
    out.triangles.push_back({c, ca, bc});
    out.triangles.push_back({ab, bc, ca});
  }

  out.constrained_edges.reserve(in.constrained_edges.size() * 2);
  for (const auto& [a, b] : in.constrained_edges) {
    const auto it = mid.find(ukey(a, b));
    if (it == mid.end()) {
      throw std::logic_error("refine_red: constrained edge is not a mesh edge");
    }
    out.constrained_edges.emplace_back(a, it->second);
    out.constrained_edges.emplace_back(it->second, b);
  }
  return out;
}

MeshStats stats(const TriMesh& mesh) {
  MeshStats st;
  st.n_vertices = static_cast<int>(mesh.vertices.size());
  st.n_triangles = static_cast<int>(mesh.triangles.size());
  double min_angle = 180.0;
  double max_h = 0.0;
  for (const auto& t : mesh.triangles) {
    const Point2 p[3] = {mesh.vertices[static_cast<size_t>(t[0])],
                         mesh.vertices[static_cast<size_t>(t[1])],
                         mesh.vertices[static_cast<size_t>(t[2])]};
    for (int i = 0; i < 3; ++i) {
      const Point2 u = p[(i + 1) % 3] - p[i];
      const Point2 v = p[(i + 2) % 3] - p[i];
      const double ang = std::atan2(std::fabs(cross(u, v)), dot(u, v));
      min_angle = std::min(min_angle, ang * 180.0 / M_PI);
      max_h = std::max(max_h, norm(u));
    }
  }
  if (!mesh.triangles.empty()) st.min_angle_deg = min_angle;
  st.max_h = max_h;
  return st;
}

double mesh_area(const TriMesh& mesh) {
  double area = 0.0;
  for (const auto& t : mesh.triangles) {
    const Point2& a = mesh.vertices[static_cast<size_t>(t[0])];
    const Point2& b = mesh.vertices[static_cast<size_t>(t[1])];
    const Point2& c = mesh.vertices[static_cast<size_t>(t[2])];
    area += 0.5 * cross(b - a, c - a);
  }
  return area;
}

double domain_area(const PolygonDomain& domain) {
  double area = std::fabs(shoelace(domain.outer));
  for (const auto& hole : domain.holes) area -= std::fabs(shoelace(hole));
  return area;
}

bool check_conforming(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::set<std::pair<double, double>> coords;
  for (const Point2& p : mesh.vertices) {
    if (!coords.insert({p.x, p.y}).second) return false;  // duplicate vertex
  }
  std::set<std::pair<int, int>> directed;
  for (const auto& t : mesh.triangles) {
    if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0]) return false;
    for (int i = 0; i < 3; ++i) {
      if (t[static_cast<size_t>(i)] < 0 || t[static_cast<size_t>(i)] >= n) return false;
    }
    if (orient2d(mesh.vertices[static_cast<size_t>(t[0])],
                 mesh.vertices[static_cast<size_t>(t[1])],
                 mesh.vertices[static_cast<size_t>(t[2])]) <= 0) {
      return false;  // degenerate or clockwise triangle
    }
    for (int i = 0; i < 3; ++i) {
      const std::pair<int, int> e{t[static_cast<size_t>(i)],
                                  t[static_cast<size_t>((i + 1) % 3)]};
      if (!directed.insert(e).second) return false;  // edge used twice same way
    }
  }
  return true;
}

bool check_delaunay(const TriMesh& mesh, double tol) {
  std::set<std::pair<int, int>> constrained;
  for (const auto& [a, b] : mesh.constrained_edges) constrained.insert(ukey(a, b));

  // For each interior edge, the opposite vertex of one side must not lie
  // strictly inside the circumcircle of the other side (relative tolerance).
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_tris;
  for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const auto& t = mesh.triangles[ti];
    for (int i = 0; i < 3; ++i) {
      const int a = t[static_cast<size_t>((i + 1) % 3)];
      const int b = t[static_cast<size_t>((i + 2) % 3)];
      edge_tris[ukey(a, b)].push_back({static_cast<int>(ti), t[static_cast<size_t>(i)]});
    }
  }
  for (const auto& [edge, sides] : edge_tris) {
    if (sides.size() != 2) continue;
    if (constrained.count(edge) != 0) continue;
    const auto& t = mesh.triangles[static_cast<size_t>(sides[0].first)];
    const Point2 a = mesh.vertices[static_cast<size_t>(t[0])];
    const Point2 b = mesh.vertices[static_cast<size_t>(t[1])];
    const Point2 c = mesh.vertices[static_cast<size_t>(t[2])];
    const Point2 d = mesh.vertices[static_cast<size_t>(sides[1].second)];
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad2 = adx * adx + ady * ady;
    const double bd2 = bdx * bdx + bdy * bdy;
    const double cd2 = cdx * cdx + cdy * cdy;
    const double det = adx * (bdy * cd2 - cdy * bd2) -
                       ady * (bdx * cd2 - cdx * bd2) +
                       ad2 * (bdx * cdy - cdx * bdy);
    const double perm = std::fabs(adx) * (std::fabs(bdy) * cd2 + std::fabs(cdy) * bd2) +
                        std::fabs(ady) * (std::fabs(bdx) * cd2 + std::fabs(cdx) * bd2) +
                        ad2 * (std::fabs(bdx) * std::fabs(cdy) + std::fabs(cdx) * std::fabs(bdy));
    if (det > tol * perm) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> boundary_edges(const TriMesh& mesh) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles) {
    count[ukey(t[0], t[1])] += 1;
    count[ukey(t[1], t[2])] += 1;
    count[ukey(t[2], t[0])] += 1;
  }
  std::vector<std::pair<int, int>> out;
  for (const auto& [e, c] : count) {
    if (c == 1) out.push_back(e);
  }
  return out;
}

void export_text(const TriMesh& mesh, std::ostream& os) {
  os << "# percell mesh\n";
  os << "# vertices " << mesh.vertices.size() << "\n";
  os << std::setprecision(17);
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    os << i << " " << mesh.vertices[i].x << " " << mesh.vertices[i].y << " "
       << mesh.vmarker[i] << "\n";
  }
  os << "# triangles " << mesh.triangles.size() << "\n";
  for (const auto& t : mesh.triangles) {
    os << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  os << "# constrained " << mesh.constrained_edges.size() << "\n";
  for (const auto& [a, b] : mesh.constrained_edges) {
    os << a << " " << b << "\n";
  }
}

}  // namespace percell
