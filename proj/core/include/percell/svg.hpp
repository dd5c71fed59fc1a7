// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Self-contained SVG exporters: wireframe mesh drawings, flat-shaded nodal
// heatmaps, and simple line plots for the benchmark figures. Output is
// deterministic (fixed formatting, no timestamps).

#ifndef PERCELL_SVG_HPP
#define PERCELL_SVG_HPP

#include <string>
#include <vector>

#include "percell/geometry.hpp"
#include "percell/mesh.hpp"

namespace percell {

struct SvgOptions {
  int width = 900;
  int height = 900;
  double margin = 36.0;
  bool draw_vertices = false;
};

/// Wireframe drawing of the triangulation; constrained edges are drawn
/// heavier than interior edges.
std::string svg_mesh(const TriMesh& mesh, const SvgOptions& options = {});

/// Flat-shaded heatmap of a nodal field (one value per vertex; each triangle
/// is filled with the color of its vertex average).
std::string svg_heatmap(const TriMesh& mesh, const std::vector<double>& nodal,
                        const SvgOptions& options = {});

struct PlotSeries {
  std::string label;
  std::vector<Point2> points;
};

struct PlotOptions {
  int width = 860;
  int height = 560;
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Multi-series line plot with axes, tick labels, and a legend.
std::string svg_line_plot(const std::vector<PlotSeries>& series,
                          const PlotOptions& options = {});

}  // namespace percell

#endif  // PERCELL_SVG_HPP
