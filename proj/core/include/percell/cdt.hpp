// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Incremental constrained Delaunay triangulation engine (Bowyer-Watson point
// insertion inside an enclosing super-triangle, segment recovery by
// pseudo-polygon retriangulation, region carving by flood fill). Exact,
// symbolically perturbed predicates make every branch deterministic. This is
// the low-level machinery behind `triangulate`; the quality refinement pass
// drives it directly.

#ifndef PERCELL_CDT_HPP
#define PERCELL_CDT_HPP

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "percell/geometry.hpp"

namespace percell {

namespace detail {

/// Triangle record with adjacency. `v` are vertex indices (counterclockwise),
/// `nbr[i]` is the triangle across the edge opposite `v[i]` (-1 on the hull),
/// `constrained[i]` marks that edge as an input segment, `alive` is cleared
/// by carving and by structural edits.
struct CdtTri {
  std::array<int, 3> v{-1, -1, -1};
  std::array<int, 3> nbr{-1, -1, -1};
  std::array<bool, 3> constrained{false, false, false};
  bool alive = false;
};

}  // namespace detail

class Cdt {
 public:
  /// Initializes the enclosing super-triangle from a bounding box that all
  /// later points must fall into. Super-vertices take indices 0, 1, 2; points
  /// inserted afterwards take consecutive indices from 3.
  Cdt(Point2 bbox_lo, Point2 bbox_hi);

  /// Inserts one point and restores the Delaunay property. Duplicate
  /// coordinates are rejected (returns the existing index). Constrained edges
  /// are never crossed once present, so points must be inserted either before
  /// segments or strictly inside one region.
  int insert_point(Point2 p);

  /// Recovers the segment between two existing vertices as a union of
  /// constrained edges. Vertices lying exactly on the open segment split it;
  /// no new vertices are created.
  void insert_segment(int a, int b);

  /// Splits the constrained edge (a, b) at `p`: inserts the point and marks
  /// both halves constrained. Used by quality refinement.
  int split_segment(int a, int b, Point2 p);

  /// Kills every triangle reachable from the super-triangle region without
  /// crossing a constrained edge (the outside), then every triangle reachable
  /// from each seed (hole interiors).
  void carve(const std::vector<Point2>& hole_seeds);

  int vertex_count() const { return static_cast<int>(points_.size()); }
  const Point2& vertex(int i) const { return points_[static_cast<size_t>(i)]; }

  /// Live triangles as vertex index triples (counterclockwise), including
  /// any that touch super-vertices unless carving removed them.
  std::vector<std::array<int, 3>> live_triangles() const;

  /// Live constrained edges, each as an (a, b) pair with a < b.
  std::vector<std::pair<int, int>> live_constrained_edges() const;

  /// Locates a live triangle whose closure contains `p` (visibility walk with
  /// a scan fallback); -1 if none.
  int locate(Point2 p) const;

  /// True if the directed edge (a, b) currently exists and is constrained.
  bool is_constrained_edge(int a, int b) const;

  /// Live triangles incident to a vertex.
  std::vector<int> star(int v) const;

  /// Live triangle carrying the directed edge (a, b); fills `*side` with the
  /// side index of that edge. Returns -1 if the edge does not exist.
  int find_edge_tri(int a, int b, int* side) const;

  /// Walks from live triangle `t_start` toward `target`. Returns the live
  /// triangle whose closure contains `target`, or -1 if a constrained edge or
  /// the mesh boundary blocks the way, in which case `*blocked_tri` /
  /// `*blocked_side` name the blocking edge. Used by quality refinement to
  /// keep circumcenter insertions inside the domain.
  int walk_toward(int t_start, Point2 target, int* blocked_tri, int* blocked_side) const;

  const std::vector<detail::CdtTri>& tris() const { return tris_; }

 private:
  int new_tri(int a, int b, int c);
  void link(int t, int side, int u);
  int tri_side(int t, int a, int b) const;  ///< side of t whose edge is (a,b)
  int find_containing(Point2 p, int hint) const;
  bool in_cavity(int t, Point2 p, int ip) const;
  int insert_point_impl(Point2 p);
  /// Inserts a point known to lie on the open edge (a, b) of live triangle
  /// `t0` (up to roundoff). Skips point location, so it stays correct even
  /// when the rounded coordinates fall a few ulp outside the live region.
  int insert_point_on_edge(Point2 p, int t0, int a, int b);
  void dig_cavity(int ip, Point2 p, int t0, int split_a = -1, int split_b = -1);
  void set_constrained(int t, int side, bool value);
  void collect_pipe(int a, int b, std::vector<int>& pipe, std::vector<int>& upper,
                    std::vector<int>& lower, int* on_vertex);
  void retriangulate_pseudo(const std::vector<int>& chain, int s, int e,
                            std::vector<int>& out_tris);
  void flood_kill(int t0);

  std::vector<Point2> points_;
  std::vector<detail::CdtTri> tris_;
  std::vector<int> free_tris_;   ///< dead slots available for reuse
  std::vector<int> vertex_tri_;  ///< one live incident triangle per vertex
  std::map<std::pair<double, double>, int> point_lookup_;  ///< exact duplicate check
  mutable int last_tri_ = -1;    ///< walk hint
  std::vector<int> cav_stamp_;   ///< epoch marks for cavity/pipe membership
  int cav_epoch_ = 0;
};

}  // namespace percell

#endif  // PERCELL_CDT_HPP
