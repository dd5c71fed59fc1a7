// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0

#include "percell/cdt.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "percell/predicates.hpp"

namespace percell {

namespace {

int index_of(const detail::CdtTri& t, int v) {
  for (int i = 0; i < 3; ++i) {
    if (t.v[static_cast<size_t>(i)] == v) return i;
  }
  return -1;
}

}  // namespace

Cdt::Cdt(Point2 bbox_lo, Point2 bbox_hi) {
  const double span =
      std::max({bbox_hi.x - bbox_lo.x, bbox_hi.y - bbox_lo.y, 1.0});
  const double cx = 0.5 * (bbox_lo.x + bbox_hi.x);
  const double cy = 0.5 * (bbox_lo.y + bbox_hi.y);
  const double big = 64.0 * span;
  points_.push_back({cx - 3.0 * big, cy - 2.0 * big});
  points_.push_back({cx + 3.0 * big, cy - 2.0 * big});
  points_.push_back({cx, cy + 3.0 * big});
  vertex_tri_.assign(3, -1);
  for (int i = 0; i < 3; ++i) {
    point_lookup_[{points_[static_cast<size_t>(i)].x,
                   points_[static_cast<size_t>(i)].y}] = i;
  }
  last_tri_ = new_tri(0, 1, 2);
}

int Cdt::new_tri(int a, int b, int c) {
  int id;
  if (!free_tris_.empty()) {
    id = free_tris_.back();
    free_tris_.pop_back();
    tris_[static_cast<size_t>(id)] = detail::CdtTri{};
  } else {
    id = static_cast<int>(tris_.size());
    tris_.emplace_back();
  }
  detail::CdtTri& t = tris_[static_cast<size_t>(id)];
  t.v = {a, b, c};
  t.alive = true;
  vertex_tri_[static_cast<size_t>(a)] = id;
  vertex_tri_[static_cast<size_t>(b)] = id;
  vertex_tri_[static_cast<size_t>(c)] = id;
  return id;
}

void Cdt::link(int t, int side, int u) {
  tris_[static_cast<size_t>(t)].nbr[static_cast<size_t>(side)] = u;
}

int Cdt::tri_side(int t, int a, int b) const {
  const detail::CdtTri& T = tris_[static_cast<size_t>(t)];
  for (int i = 0; i < 3; ++i) {
    if (T.v[static_cast<size_t>((i + 1) % 3)] == a &&
        T.v[static_cast<size_t>((i + 2) % 3)] == b) {
      return i;
    }
  }
  return -1;
}

int Cdt::find_containing(Point2 p, int hint) const {
  const int n = static_cast<int>(tris_.size());
  int t = (hint >= 0 && hint < n && tris_[static_cast<size_t>(hint)].alive)
              ? hint
              : -1;
  if (t < 0) {
    for (int i = n - 1; i >= 0; --i) {
      if (tris_[static_cast<size_t>(i)].alive) {
        t = i;
        break;
      }
    }
    if (t < 0) throw std::logic_error("cdt: no live triangles");
  }
  int prev = -1;
  const long cap = 4L * n + 64;
  for (long step = 0; step < cap; ++step) {
    const detail::CdtTri& T = tris_[static_cast<size_t>(t)];
    int next = -1;
    bool inside = true;
    for (int i = 0; i < 3; ++i) {
      const int a = T.v[static_cast<size_t>((i + 1) % 3)];
      const int b = T.v[static_cast<size_t>((i + 2) % 3)];
      if (orient2d(points_[static_cast<size_t>(a)],
                   points_[static_cast<size_t>(b)], p) < 0) {
        inside = false;
        const int u = T.nbr[static_cast<size_t>(i)];
        if (u >= 0 && tris_[static_cast<size_t>(u)].alive) {
          if (u != prev) {
            next = u;
            break;
          }
          if (next < 0) next = u;  // go back only if it is the sole way out
        }
      }
    }
    if (inside) {
      last_tri_ = t;
      return t;
    }
    if (next < 0) break;  // blocked by a dead/boundary edge: fall back to scan
    prev = t;
    t = next;
  }
  // Exhaustive exact scan (also covers walks trapped by carved regions).
  for (int i = 0; i < n; ++i) {
    const detail::CdtTri& T = tris_[static_cast<size_t>(i)];
    if (!T.alive) continue;
    bool inside = true;
    for (int k = 0; k < 3 && inside; ++k) {
      const int a = T.v[static_cast<size_t>((k + 1) % 3)];
      const int b = T.v[static_cast<size_t>((k + 2) % 3)];
      if (orient2d(points_[static_cast<size_t>(a)],
                   points_[static_cast<size_t>(b)], p) < 0) {
        inside = false;
      }
    }
    if (inside) {
      last_tri_ = i;
      return i;
    }
  }
  return -1;
}

int Cdt::locate(Point2 p) const { return find_containing(p, last_tri_); }

bool Cdt::in_cavity(int t, Point2 p, int ip) const {
  const detail::CdtTri& T = tris_[static_cast<size_t>(t)];
  if (!T.alive) return false;
  const int a = T.v[0], b = T.v[1], c = T.v[2];
  return incircle_perturbed(points_[static_cast<size_t>(a)], a,
                            points_[static_cast<size_t>(b)], b,
                            points_[static_cast<size_t>(c)], c, p, ip) > 0;
}

int Cdt::insert_point(Point2 p) { return insert_point_impl(p); }

int Cdt::insert_point_impl(Point2 p) {
  const std::pair<double, double> key{p.x, p.y};
  auto it = point_lookup_.find(key);
  if (it != point_lookup_.end()) return it->second;
  const int t0 = find_containing(p, last_tri_);
  if (t0 < 0) throw std::runtime_error("cdt: point outside the triangulation");
  const int ip = static_cast<int>(points_.size());
  points_.push_back(p);
  vertex_tri_.push_back(-1);
  point_lookup_.emplace(key, ip);
  dig_cavity(ip, p, t0);
  return ip;
}

int Cdt::insert_point_on_edge(Point2 p, int t0, int a, int b) {
  const std::pair<double, double> key{p.x, p.y};
  auto it = point_lookup_.find(key);
  if (it != point_lookup_.end()) return it->second;
  const int ip = static_cast<int>(points_.size());
  points_.push_back(p);
  vertex_tri_.push_back(-1);
  point_lookup_.emplace(key, ip);
  dig_cavity(ip, p, t0, a, b);
  return ip;
}

void Cdt::dig_cavity(int ip, Point2 p, int t0, int split_a, int split_b) {
  if (cav_stamp_.size() < tris_.size()) cav_stamp_.resize(tris_.size() + 1024, 0);
  const int epoch = ++cav_epoch_;

  struct BoundaryEdge {
    int a = -1, b = -1;     // directed, cavity on the left
    int outside = -1;       // triangle across, -1 on mesh boundary
    bool constrained = false;
  };
  std::vector<int> cavity;
  std::vector<BoundaryEdge> boundary;
  std::vector<int> stack{t0};
  cav_stamp_[static_cast<size_t>(t0)] = epoch;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    cavity.push_back(t);
    const detail::CdtTri T = tris_[static_cast<size_t>(t)];  // copy: tris_ stable here
    for (int i = 0; i < 3; ++i) {
      const int a = T.v[static_cast<size_t>((i + 1) % 3)];
      const int b = T.v[static_cast<size_t>((i + 2) % 3)];
      const int u = T.nbr[static_cast<size_t>(i)];
      const bool con = T.constrained[static_cast<size_t>(i)];
      if (u < 0 || !tris_[static_cast<size_t>(u)].alive) {
        boundary.push_back({a, b, -1, con});
        continue;
      }
      if (cav_stamp_[static_cast<size_t>(u)] == epoch) continue;
      if (con || !in_cavity(u, p, ip)) {
        boundary.push_back({a, b, u, con});
        continue;
      }
      cav_stamp_[static_cast<size_t>(u)] = epoch;
      stack.push_back(u);
    }
  }

  // A point on a mesh-boundary edge splits it: drop that edge from the fan
  // loop, leaving an open chain whose free sides become boundary edges. An
  // explicit split edge takes precedence — its rounded split point may fall a
  // few ulp off the exact line, so it cannot be recognized by orientation.
  int degenerate = -1;
  if (split_a >= 0) {
    for (size_t k = 0; k < boundary.size(); ++k) {
      const BoundaryEdge& e = boundary[k];
      if ((e.a == split_a && e.b == split_b) ||
          (e.a == split_b && e.b == split_a)) {
        if (e.constrained || e.outside >= 0) {
          throw std::logic_error("cdt: split edge still blocked");
        }
        degenerate = static_cast<int>(k);
        break;
      }
    }
  } else {
    for (size_t k = 0; k < boundary.size(); ++k) {
      const BoundaryEdge& e = boundary[k];
      if (orient2d(points_[static_cast<size_t>(e.a)],
                   points_[static_cast<size_t>(e.b)], p) == 0) {
        if (e.constrained || e.outside >= 0 || degenerate >= 0) {
          throw std::logic_error("cdt: insertion lands on a constrained edge");
        }
        degenerate = static_cast<int>(k);
      }
    }
  }
  if (degenerate >= 0) {
    boundary.erase(boundary.begin() + degenerate);
  }

  for (int t : cavity) {
    tris_[static_cast<size_t>(t)].alive = false;
    free_tris_.push_back(t);
  }

  std::vector<std::pair<int, int>> fan_start;  // boundary start vertex -> fan tri
  fan_start.reserve(boundary.size());
  for (const BoundaryEdge& e : boundary) {
    const int nt = new_tri(e.a, e.b, ip);
    tris_[static_cast<size_t>(nt)].constrained[2] = e.constrained;
    link(nt, 2, e.outside);
    if (e.outside >= 0) {
      const int os = tri_side(e.outside, e.b, e.a);
      if (os < 0) throw std::logic_error("cdt: cavity boundary mismatch");
      link(e.outside, os, nt);
    }
    fan_start.emplace_back(e.a, nt);
  }
  for (size_t k = 0; k < boundary.size(); ++k) {
    const int nt = fan_start[k].second;
    const int b = boundary[k].b;
    for (const auto& [sv, st] : fan_start) {
      if (sv == b) {
        link(nt, 0, st);  // edge (b, ip) in nt
        link(st, 1, nt);  // edge (ip, b) in st
        break;
      }
    }
  }
  if (!boundary.empty()) last_tri_ = fan_start.front().second;
}

std::vector<int> Cdt::star(int v) const {
  std::vector<int> out;
  int t0 = (v >= 0 && v < static_cast<int>(vertex_tri_.size()))
               ? vertex_tri_[static_cast<size_t>(v)]
               : -1;
  if (t0 < 0 || t0 >= static_cast<int>(tris_.size()) ||
      !tris_[static_cast<size_t>(t0)].alive ||
      index_of(tris_[static_cast<size_t>(t0)], v) < 0) {
    t0 = -1;
  }
  if (t0 < 0) {
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      if (tris_[static_cast<size_t>(t)].alive &&
          index_of(tris_[static_cast<size_t>(t)], v) >= 0) {
        out.push_back(t);
      }
    }
    return out;
  }
  const size_t cap = tris_.size() + 4;
  // Counterclockwise sweep, then clockwise from the start if interrupted.
  int t = t0;
  for (size_t n = 0; n < cap; ++n) {
    out.push_back(t);
    const detail::CdtTri& T = tris_[static_cast<size_t>(t)];
    const int i = index_of(T, v);
    const int nx = T.nbr[static_cast<size_t>((i + 1) % 3)];
    if (nx == t0) return out;
    if (nx < 0 || !tris_[static_cast<size_t>(nx)].alive) break;
    t = nx;
  }
  t = t0;
  for (size_t n = 0; n < cap; ++n) {
    const detail::CdtTri& T = tris_[static_cast<size_t>(t)];
    const int i = index_of(T, v);
    const int nx = T.nbr[static_cast<size_t>((i + 2) % 3)];
    if (nx < 0 || !tris_[static_cast<size_t>(nx)].alive || nx == t0) return out;
    out.push_back(nx);
    t = nx;
  }
  throw std::logic_error("cdt: vertex star sweep did not terminate");
}

int Cdt::find_edge_tri(int a, int b, int* side) const {
  for (int t : star(a)) {
    const int s = tri_side(t, a, b);
    if (s >= 0) {
      *side = s;
      return t;
    }
  }
  *side = -1;
  return -1;
}

void Cdt::set_constrained(int t, int side, bool value) {
  detail::CdtTri& T = tris_[static_cast<size_t>(t)];
  T.constrained[static_cast<size_t>(side)] = value;
  const int a = T.v[static_cast<size_t>((side + 1) % 3)];
  const int b = T.v[static_cast<size_t>((side + 2) % 3)];
  const int u = T.nbr[static_cast<size_t>(side)];
  if (u >= 0 && tris_[static_cast<size_t>(u)].alive) {
    const int us = tri_side(u, b, a);
    if (us < 0) throw std::logic_error("cdt: inconsistent adjacency");
    tris_[static_cast<size_t>(u)].constrained[static_cast<size_t>(us)] = value;
  }
}

bool Cdt::is_constrained_edge(int a, int b) const {
  int side = -1;
  const int t = find_edge_tri(a, b, &side);
  return t >= 0 && tris_[static_cast<size_t>(t)].constrained[static_cast<size_t>(side)];
}

void Cdt::collect_pipe(int a, int b, std::vector<int>& pipe,
                       std::vector<int>& upper, std::vector<int>& lower,
                       int* on_vertex) {
  *on_vertex = -1;
  const Point2 pa = points_[static_cast<size_t>(a)];
  const Point2 pb = points_[static_cast<size_t>(b)];

  int t = -1, x = -1, y = -1;
  for (int st : star(a)) {
    const detail::CdtTri& T = tris_[static_cast<size_t>(st)];
    const int i = index_of(T, a);
    const int p1 = T.v[static_cast<size_t>((i + 1) % 3)];
    const int p2 = T.v[static_cast<size_t>((i + 2) % 3)];
    const Point2 q1 = points_[static_cast<size_t>(p1)];
    const Point2 q2 = points_[static_cast<size_t>(p2)];
    const int o1 = orient2d(pa, q1, pb);
    const int o2 = orient2d(pa, q2, pb);
    if (o1 == 0 && dot(q1 - pa, pb - pa) > 0) {
      *on_vertex = p1;
      return;
    }
    if (o2 == 0 && dot(q2 - pa, pb - pa) > 0) {
      *on_vertex = p2;
      return;
    }
    if (o1 > 0 && o2 < 0) {
      t = st;
      x = p1;
      y = p2;
      break;
    }
  }
  if (t < 0) throw std::logic_error("cdt: no crossing sector at segment start");

  pipe.push_back(t);
  upper.push_back(x);
  lower.push_back(y);
  int cur = t;
  const size_t cap = tris_.size() + 4;
  for (size_t n = 0; n < cap; ++n) {
    const int side = tri_side(cur, x, y);
    if (side < 0) throw std::logic_error("cdt: lost the pipe crossing edge");
    const detail::CdtTri& C = tris_[static_cast<size_t>(cur)];
    if (C.constrained[static_cast<size_t>(side)]) {
      throw std::runtime_error("cdt: input segments cross each other");
    }
    const int u = C.nbr[static_cast<size_t>(side)];
    if (u < 0 || !tris_[static_cast<size_t>(u)].alive) {
      throw std::logic_error("cdt: segment leaves the triangulation");
    }
    pipe.push_back(u);
    const int us = tri_side(u, y, x);
    if (us < 0) throw std::logic_error("cdt: inconsistent pipe adjacency");
    const int w = tris_[static_cast<size_t>(u)].v[static_cast<size_t>(us)];
    if (w == b) return;
    const int ow = orient2d(pa, pb, points_[static_cast<size_t>(w)]);
    if (ow == 0) {
      *on_vertex = w;
      pipe.clear();
      upper.clear();
      lower.clear();
      return;
    }
    if (ow > 0) {
      upper.push_back(w);
      x = w;
    } else {
      lower.push_back(w);
      y = w;
    }
    cur = u;
  }
  throw std::logic_error("cdt: pipe walk did not terminate");
}

void Cdt::retriangulate_pseudo(const std::vector<int>& chain, int s, int e,
                               std::vector<int>& out_tris) {
  if (chain.empty()) return;
  const Point2 ps = points_[static_cast<size_t>(s)];
  const Point2 pe = points_[static_cast<size_t>(e)];
  size_t ci = chain.size();
  for (size_t k = 0; k < chain.size(); ++k) {
    const int v = chain[k];
    if (orient2d(ps, pe, points_[static_cast<size_t>(v)]) <= 0) continue;
    if (ci == chain.size()) {
      ci = k;
      continue;
    }
    const int c = chain[ci];
    if (incircle_perturbed(ps, s, pe, e, points_[static_cast<size_t>(c)], c,
                           points_[static_cast<size_t>(v)], v) > 0) {
      ci = k;
    }
  }
  if (ci == chain.size()) {
    throw std::logic_error("cdt: degenerate pseudo-polygon");
  }
  const std::vector<int> left(chain.begin(), chain.begin() + static_cast<long>(ci));
  const std::vector<int> right(chain.begin() + static_cast<long>(ci) + 1, chain.end());
  const int c = chain[ci];
  retriangulate_pseudo(left, s, c, out_tris);
  retriangulate_pseudo(right, c, e, out_tris);
  out_tris.push_back(new_tri(s, e, c));
}

void Cdt::insert_segment(int a, int b) {
  if (a == b) throw std::invalid_argument("cdt: zero-length segment");
  {
    int side = -1;
    const int t = find_edge_tri(a, b, &side);
    if (t >= 0) {
      set_constrained(t, side, true);
      return;
    }
  }
  std::vector<int> pipe, upper, lower;
  int on_vertex = -1;
  collect_pipe(a, b, pipe, upper, lower, &on_vertex);
  if (on_vertex >= 0) {
    insert_segment(a, on_vertex);
    insert_segment(on_vertex, b);
    return;
  }

  if (cav_stamp_.size() < tris_.size()) cav_stamp_.resize(tris_.size() + 1024, 0);
  const int epoch = ++cav_epoch_;
  for (int t : pipe) cav_stamp_[static_cast<size_t>(t)] = epoch;

  struct OutLink {
    int a, b, tri, side;
    bool constrained;
  };
  std::vector<OutLink> links;
  for (int t : pipe) {
    const detail::CdtTri& T = tris_[static_cast<size_t>(t)];
    for (int i = 0; i < 3; ++i) {
      const int u = T.nbr[static_cast<size_t>(i)];
      if (u >= 0 && tris_[static_cast<size_t>(u)].alive &&
          cav_stamp_[static_cast<size_t>(u)] == epoch) {
        continue;  // interior pipe edge
      }
      const int ea = T.v[static_cast<size_t>((i + 1) % 3)];
      const int eb = T.v[static_cast<size_t>((i + 2) % 3)];
      int uside = -1;
      if (u >= 0 && tris_[static_cast<size_t>(u)].alive) {
        uside = tri_side(u, eb, ea);
        if (uside < 0) throw std::logic_error("cdt: inconsistent pipe boundary");
      }
      links.push_back({ea, eb, (uside >= 0) ? u : -1, uside,
                       T.constrained[static_cast<size_t>(i)]});
    }
  }
  for (int t : pipe) {
    tris_[static_cast<size_t>(t)].alive = false;
    free_tris_.push_back(t);
  }

  std::vector<int> fresh;
  retriangulate_pseudo(upper, a, b, fresh);
  const std::vector<int> lower_rev(lower.rbegin(), lower.rend());
  retriangulate_pseudo(lower_rev, b, a, fresh);

  std::map<std::pair<int, int>, std::pair<int, int>> edges;  // (a,b) -> (tri, side)
  for (int nt : fresh) {
    const detail::CdtTri& T = tris_[static_cast<size_t>(nt)];
    for (int i = 0; i < 3; ++i) {
      edges[{T.v[static_cast<size_t>((i + 1) % 3)],
             T.v[static_cast<size_t>((i + 2) % 3)]}] = {nt, i};
    }
  }
  for (const auto& [e, ts] : edges) {
    const auto rev = edges.find({e.second, e.first});
    if (rev != edges.end()) {
      link(ts.first, ts.second, rev->second.first);
    }
  }
  for (const OutLink& L : links) {
    const auto it = edges.find({L.a, L.b});
    if (it == edges.end()) throw std::logic_error("cdt: pipe stitch mismatch");
    const auto [nt, side] = it->second;
    link(nt, side, L.tri);
    tris_[static_cast<size_t>(nt)].constrained[static_cast<size_t>(side)] =
        L.constrained;
    if (L.tri >= 0) link(L.tri, L.side, nt);
  }
  const auto itab = edges.find({a, b});
  const auto itba = edges.find({b, a});
  if (itab == edges.end() || itba == edges.end()) {
    throw std::logic_error("cdt: recovered segment missing after stitch");
  }
  tris_[static_cast<size_t>(itab->second.first)]
      .constrained[static_cast<size_t>(itab->second.second)] = true;
  tris_[static_cast<size_t>(itba->second.first)]
      .constrained[static_cast<size_t>(itba->second.second)] = true;
  last_tri_ = itab->second.first;
}

int Cdt::split_segment(int a, int b, Point2 p) {
  int side = -1;
  const int t = find_edge_tri(a, b, &side);
  if (t < 0 || !tris_[static_cast<size_t>(t)].constrained[static_cast<size_t>(side)]) {
    throw std::invalid_argument("cdt: split target is not a constrained edge");
  }
  set_constrained(t, side, false);
  const int ip = insert_point_on_edge(p, t, a, b);
  insert_segment(a, ip);
  insert_segment(ip, b);
  return ip;
}

void Cdt::flood_kill(int t0) {
  if (t0 < 0 || !tris_[static_cast<size_t>(t0)].alive) return;
  std::vector<int> stack{t0};
  tris_[static_cast<size_t>(t0)].alive = false;
  free_tris_.push_back(t0);
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    detail::CdtTri& T = tris_[static_cast<size_t>(t)];
    for (int i = 0; i < 3; ++i) {
      const int u = T.nbr[static_cast<size_t>(i)];
      if (u < 0) continue;
      detail::CdtTri& U = tris_[static_cast<size_t>(u)];
      if (!U.alive) continue;
      const int ea = T.v[static_cast<size_t>((i + 1) % 3)];
      const int eb = T.v[static_cast<size_t>((i + 2) % 3)];
      const int us = tri_side(u, eb, ea);
      if (us >= 0) link(u, us, -1);
      if (!T.constrained[static_cast<size_t>(i)]) {
        U.alive = false;
        free_tris_.push_back(u);
        stack.push_back(u);
      }
    }
  }
}

void Cdt::carve(const std::vector<Point2>& hole_seeds) {
  int outside = -1;
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    if (tris_[static_cast<size_t>(t)].alive &&
        index_of(tris_[static_cast<size_t>(t)], 0) >= 0) {
      outside = t;
      break;
    }
  }
  if (outside < 0) throw std::logic_error("cdt: super-triangle region missing");
  flood_kill(outside);
  for (const Point2& seed : hole_seeds) {
    const int t = find_containing(seed, -1);
    if (t < 0) throw std::runtime_error("cdt: hole seed is outside the domain");
    flood_kill(t);
  }
  std::fill(vertex_tri_.begin(), vertex_tri_.end(), -1);
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    const detail::CdtTri& T = tris_[static_cast<size_t>(t)];
    if (!T.alive) continue;
    for (int i = 0; i < 3; ++i) vertex_tri_[static_cast<size_t>(T.v[static_cast<size_t>(i)])] = t;
  }
  last_tri_ = -1;
}

std::vector<std::array<int, 3>> Cdt::live_triangles() const {
  std::vector<std::array<int, 3>> out;
  for (const detail::CdtTri& T : tris_) {
    if (T.alive) out.push_back(T.v);
  }
  return out;
}

std::vector<std::pair<int, int>> Cdt::live_constrained_edges() const {
  std::vector<std::pair<int, int>> out;
  for (const detail::CdtTri& T : tris_) {
    if (!T.alive) continue;
    for (int i = 0; i < 3; ++i) {
      if (!T.constrained[static_cast<size_t>(i)]) continue;
      const int a = T.v[static_cast<size_t>((i + 1) % 3)];
      const int b = T.v[static_cast<size_t>((i + 2) % 3)];
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int Cdt::walk_toward(int t_start, Point2 target, int* blocked_tri,
                     int* blocked_side) const {
  *blocked_tri = -1;
  *blocked_side = -1;
  const int n = static_cast<int>(tris_.size());
  if (t_start < 0 || t_start >= n || !tris_[static_cast<size_t>(t_start)].alive) {
    return -1;
  }
  int t = t_start, prev = -1;
  const long cap = 4L * n + 64;
  for (long step = 0; step < cap; ++step) {
    const detail::CdtTri& T = tris_[static_cast<size_t>(t)];
    bool inside = true;
    int exit_side = -1;
    for (int i = 0; i < 3; ++i) {
      const int a = T.v[static_cast<size_t>((i + 1) % 3)];
      const int b = T.v[static_cast<size_t>((i + 2) % 3)];
      if (orient2d(points_[static_cast<size_t>(a)],
                   points_[static_cast<size_t>(b)], target) < 0) {
        inside = false;
        const int u = T.nbr[static_cast<size_t>(i)];
        const bool open = u >= 0 && tris_[static_cast<size_t>(u)].alive &&
                          !T.constrained[static_cast<size_t>(i)];
        if (exit_side < 0) exit_side = i;
        if (open && u != prev) {
          exit_side = i;
          break;
        }
      }
    }
    if (inside) return t;
    const int u = T.nbr[static_cast<size_t>(exit_side)];
    const bool open = u >= 0 && tris_[static_cast<size_t>(u)].alive &&
                      !T.constrained[static_cast<size_t>(exit_side)];
    if (!open) {
      *blocked_tri = t;
      *blocked_side = exit_side;
      return -1;
    }
    prev = t;
    t = u;
  }
  return -1;  // lost: caller treats this conservatively
}

}  // namespace percell
