// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0

#include "ruppert.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "percell/predicates.hpp"

namespace percell::detail {

namespace {

struct Circumcircle {
  Point2 center{0.0, 0.0};
  double r2 = 0.0;
  bool ok = false;
};

Circumcircle circumcircle(Point2 a, Point2 b, Point2 c) {
  const Point2 u = b - a;
  const Point2 w = c - a;
  const double d = 2.0 * cross(u, w);
  if (d == 0.0) return {};
  const double u2 = dot(u, u);
  const double w2 = dot(w, w);
  const Point2 off{(u2 * w.y - w2 * u.y) / d, (w2 * u.x - u2 * w.x) / d};
  return {a + off, dot(off, off), true};
}

bool in_diametral_circle(Point2 pa, Point2 pb, Point2 v) {
  return dot(pa - v, pb - v) < 0.0;
}

// Approximate (floating-point) test used only to steer the pre-insertion
// cavity scan; borderline errors cost at most one extra segment split.
bool circumcircle_contains(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad2 = adx * adx + ady * ady;
  const double bd2 = bdx * bdx + bdy * bdy;
  const double cd2 = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd2 - cdy * bd2) - ady * (bdx * cd2 - cdx * bd2) +
             ad2 * (bdx * cdy - cdx * bdy) >
         0.0;
}

}  // namespace

void ruppert_refine(Cdt& cdt, const TriangulateOptions& opt,
                    std::vector<int>& vmarkers) {
  if (static_cast<int>(vmarkers.size()) != cdt.vertex_count()) {
    throw std::logic_error("ruppert: marker array out of sync");
  }
  const double ratio_bound = 1.0 / (2.0 * std::sin(opt.min_angle_deg * M_PI / 180.0));
  const double ratio_bound2 = ratio_bound * ratio_bound;
  int budget = opt.max_insertions;

  std::vector<std::pair<int, int>> segq;
  std::vector<int> triq;
  for (int t = 0; t < static_cast<int>(cdt.tris().size()); ++t) {
    if (cdt.tris()[static_cast<size_t>(t)].alive) triq.push_back(t);
  }
  for (const auto& e : cdt.live_constrained_edges()) segq.push_back(e);

  const auto apexes_encroach = [&](int a, int b) -> bool {
    int side = -1;
    const int t = cdt.find_edge_tri(a, b, &side);
    if (t < 0) return false;
    const Point2 pa = cdt.vertex(a);
    const Point2 pb = cdt.vertex(b);
    const auto& T = cdt.tris()[static_cast<size_t>(t)];
    const int apex1 = T.v[static_cast<size_t>(side)];
    if (apex1 >= 3 && in_diametral_circle(pa, pb, cdt.vertex(apex1))) return true;
    const int u = T.nbr[static_cast<size_t>(side)];
    if (u >= 0 && cdt.tris()[static_cast<size_t>(u)].alive) {
      const auto& U = cdt.tris()[static_cast<size_t>(u)];
      for (int i = 0; i < 3; ++i) {
        const int w = U.v[static_cast<size_t>(i)];
        if (w != a && w != b && w >= 3 &&
            in_diametral_circle(pa, pb, cdt.vertex(w))) {
          return true;
        }
      }
    }
    return false;
  };

  const auto split_seg = [&](int a, int b) {
    const Point2 pa = cdt.vertex(a);
    const Point2 pb = cdt.vertex(b);
    const Point2 m{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    const int ip = cdt.split_segment(a, b, m);
    if (ip != cdt.vertex_count() - 1) {
      throw std::logic_error("ruppert: segment midpoint already present");
    }
    if (vmarkers[static_cast<size_t>(a)] != vmarkers[static_cast<size_t>(b)]) {
      throw std::logic_error("ruppert: segment with mixed endpoint markers");
    }
    vmarkers.push_back(vmarkers[static_cast<size_t>(a)]);
    --budget;
    segq.emplace_back(a, ip);
    segq.emplace_back(ip, b);
    for (int t : cdt.star(ip)) triq.push_back(t);
  };

  while (budget > 0 && (!segq.empty() || !triq.empty())) {
    if (!segq.empty()) {
      const auto [a, b] = segq.back();
      segq.pop_back();
      if (!cdt.is_constrained_edge(a, b)) continue;  // already split
      if (apexes_encroach(a, b)) split_seg(a, b);
      continue;
    }

    const int t = triq.back();
    triq.pop_back();
    if (t >= static_cast<int>(cdt.tris().size()) ||
        !cdt.tris()[static_cast<size_t>(t)].alive) {
      continue;
    }
    const auto T = cdt.tris()[static_cast<size_t>(t)];
    if (T.v[0] < 3 || T.v[1] < 3 || T.v[2] < 3) continue;
    const Point2 p0 = cdt.vertex(T.v[0]);
    const Point2 p1 = cdt.vertex(T.v[1]);
    const Point2 p2 = cdt.vertex(T.v[2]);
    const double l01 = dot(p1 - p0, p1 - p0);
    const double l12 = dot(p2 - p1, p2 - p1);
    const double l20 = dot(p0 - p2, p0 - p2);
    const double lmin2 = std::min({l01, l12, l20});
    const double lmax2 = std::max({l01, l12, l20});
    const Circumcircle cc = circumcircle(p0, p1, p2);
    if (!cc.ok) continue;
    const bool skinny = cc.r2 > ratio_bound2 * lmin2;
    bool too_big = false;
    if (opt.size_field) {
      const Point2 ctr{(p0.x + p1.x + p2.x) / 3.0, (p0.y + p1.y + p2.y) / 3.0};
      const double h = opt.size_field(ctr);
      if (h > 0.0 && lmax2 > h * h) too_big = true;
    }
    if (!skinny && !too_big) continue;

    int btri = -1, bside = -1;
    const int tc = cdt.walk_toward(t, cc.center, &btri, &bside);
    if (tc < 0) {
      if (btri >= 0) {
        const auto& B = cdt.tris()[static_cast<size_t>(btri)];
        const int a = B.v[static_cast<size_t>((bside + 1) % 3)];
        const int b = B.v[static_cast<size_t>((bside + 2) % 3)];
        if (cdt.is_constrained_edge(a, b)) {
          split_seg(a, b);
          triq.push_back(t);
        }
      }
      continue;
    }

    // If the circumcenter sits exactly on a constrained edge of its triangle,
    // split that segment instead of inserting a degenerate vertex.
    {
      const auto& C = cdt.tris()[static_cast<size_t>(tc)];
      bool handled = false;
      for (int i = 0; i < 3 && !handled; ++i) {
        if (!C.constrained[static_cast<size_t>(i)]) continue;
        const int a = C.v[static_cast<size_t>((i + 1) % 3)];
        const int b = C.v[static_cast<size_t>((i + 2) % 3)];
        if (orient2d(cdt.vertex(a), cdt.vertex(b), cc.center) == 0) {
          split_seg(a, b);
          triq.push_back(t);
          handled = true;
        }
      }
      if (handled) continue;
    }

    // Ruppert's rule: a circumcenter that encroaches a constrained segment of
    // its insertion cavity is withheld; the segment splits first.
    std::vector<std::pair<int, int>> encroached;
    {
      std::set<int> seen{tc};
      std::vector<int> stack{tc};
      while (!stack.empty()) {
        const int t2 = stack.back();
        stack.pop_back();
        const auto& T2 = cdt.tris()[static_cast<size_t>(t2)];
        for (int i = 0; i < 3; ++i) {
          const int a = T2.v[static_cast<size_t>((i + 1) % 3)];
          const int b = T2.v[static_cast<size_t>((i + 2) % 3)];
          if (T2.constrained[static_cast<size_t>(i)]) {
            if (in_diametral_circle(cdt.vertex(a), cdt.vertex(b), cc.center)) {
              encroached.emplace_back(a, b);
            }
            continue;
          }
          const int u = T2.nbr[static_cast<size_t>(i)];
          if (u < 0 || !cdt.tris()[static_cast<size_t>(u)].alive) continue;
          if (seen.count(u) != 0) continue;
          const auto& U = cdt.tris()[static_cast<size_t>(u)];
          if (circumcircle_contains(cdt.vertex(U.v[0]), cdt.vertex(U.v[1]),
                                    cdt.vertex(U.v[2]), cc.center)) {
            seen.insert(u);
            stack.push_back(u);
          }
        }
      }
    }
    if (!encroached.empty()) {
      for (const auto& [a, b] : encroached) {
        if (cdt.is_constrained_edge(a, b)) {
          split_seg(a, b);
          if (budget <= 0) break;
        }
      }
      triq.push_back(t);
      continue;
    }

    const int before = cdt.vertex_count();
    const int ip = cdt.insert_point(cc.center);
    if (ip != before) continue;  // coincided with an existing vertex
    vmarkers.push_back(kMarkerInterior);
    --budget;
    for (int tt : cdt.star(ip)) triq.push_back(tt);
  }
}

}  // namespace percell::detail
