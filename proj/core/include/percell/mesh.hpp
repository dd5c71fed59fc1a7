// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Triangle meshes of polygonal domains: constrained Delaunay triangulation,
// optional quality refinement, uniform red refinement, statistics, validity
// checks, and plain-text export.

#ifndef PERCELL_MESH_HPP
#define PERCELL_MESH_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "percell/geometry.hpp"

namespace percell {

/// Vertex boundary markers.
inline constexpr int kMarkerInterior = 0;
inline constexpr int kMarkerOuter = 1;
/// Hole k carries marker kMarkerHole0 + k.
inline constexpr int kMarkerHole0 = 2;

/// A conforming triangulation with per-vertex boundary markers. Triangles are
/// counterclockwise. `constrained_edges` lists the input polyline segments
/// (as vertex index pairs) that the triangulation preserves; red refinement
/// keeps the list in sync by splitting each segment.
struct TriMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> vmarker;
  std::vector<std::pair<int, int>> constrained_edges;
};

struct MeshStats {
  int n_vertices = 0;
  int n_triangles = 0;
  double min_angle_deg = 0.0;  ///< smallest corner angle over all triangles
  double max_h = 0.0;          ///< longest edge length
};

/// Options for `triangulate`. The default is the raw CDT used by the table
/// benchmarks (no vertex beyond the input polyline vertices). The quality
/// pass (Ruppert-style: encroached-segment splitting plus circumcenter
/// insertion) is used by the cell-problem meshes, driven by a minimum-angle
/// threshold and an optional spatially varying size field.
struct TriangulateOptions {
  bool quality = false;
  double min_angle_deg = 25.0;
  /// Target maximum edge length at a location; <=0 disables the size bound.
  std::function<double(Point2)> size_field;
  /// Safety cap on quality-pass vertex insertions.
  int max_insertions = 2'000'000;
};

/// Constrained Delaunay triangulation of the polygonal region (outer minus
/// holes). Without the quality option no vertices are added beyond the
/// polyline vertices, input vertex order is preserved, and markers are
/// assigned from the polyline each vertex came from (outer -> kMarkerOuter,
/// hole k -> kMarkerHole0 + k).
TriMesh triangulate(const PolygonDomain& domain);
TriMesh triangulate(const PolygonDomain& domain, const TriangulateOptions& options);

/// Uniform red refinement: every triangle splits into four congruent children
/// via edge midpoints. Midpoints of boundary edges (edges with exactly one
/// adjacent triangle) inherit the common marker of their endpoints.
TriMesh refine_red(const TriMesh& mesh);

MeshStats stats(const TriMesh& mesh);

/// Sum of triangle areas.
double mesh_area(const TriMesh& mesh);

/// Area of the polygonal region (outer minus holes) by the shoelace formula.
double domain_area(const PolygonDomain& domain);

/// Structural conformity: every triangle has positive area, every directed
/// edge appears at most once, every undirected edge bounds at most two
/// triangles, and shared edges run in opposite directions.
bool check_conforming(const TriMesh& mesh);

/// Local Delaunay property modulo constraints: every interior non-constrained
/// edge passes the (normalized) in-circle test within `tol`.
bool check_delaunay(const TriMesh& mesh, double tol = 1e-12);

/// Undirected edges with exactly one adjacent triangle.
std::vector<std::pair<int, int>> boundary_edges(const TriMesh& mesh);

/// Plain-text export: a vertex section (index, x, y, marker) followed by a
/// triangle section (three vertex indices).
void export_text(const TriMesh& mesh, std::ostream& os);

}  // namespace percell

#endif  // PERCELL_MESH_HPP
