// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0

#include "percell/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

namespace percell {

namespace {

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

struct Viewport {
  double x0, y0, x1, y1;        // data bounds
  double width, height, margin; // pixels
  double scale, ox, oy;

  Viewport(double dx0, double dy0, double dx1, double dy1, double w, double h,
           double m)
      : x0(dx0), y0(dy0), x1(dx1), y1(dy1), width(w), height(h), margin(m) {
    const double span_x = std::max(x1 - x0, 1e-300);
    const double span_y = std::max(y1 - y0, 1e-300);
    scale = std::min((width - 2 * margin) / span_x, (height - 2 * margin) / span_y);
    ox = 0.5 * (width - scale * (x0 + x1));
    oy = 0.5 * (height + scale * (y0 + y1));
  }

  double px(double x) const { return ox + scale * x; }
  double py(double y) const { return oy - scale * y; }
};

Viewport mesh_viewport(const TriMesh& mesh, const SvgOptions& options) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& p : mesh.vertices) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  if (mesh.vertices.empty()) x0 = y0 = 0, x1 = y1 = 1;
  return Viewport(x0, y0, x1, y1, options.width, options.height, options.margin);
}

std::string svg_open(int width, int height) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                width, height, width, height);
  return std::string(buf) +
         "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

// Five-stop sequential colormap (dark blue -> teal -> green -> yellow).
void colormap(double t, int rgb[3]) {
  static const int stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double f = t - k;
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
  }
}

std::string color_hex(int rgb[3]) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

}  // namespace

std::string svg_mesh(const TriMesh& mesh, const SvgOptions& options) {
  const Viewport vp = mesh_viewport(mesh, options);
  std::string out = svg_open(options.width, options.height);

  std::set<std::pair<int, int>> constrained;
  for (const auto& [a, b] : mesh.constrained_edges) {
    constrained.insert(std::minmax(a, b));
  }

  std::set<std::pair<int, int>> drawn;
  out += "<g stroke=\"#8899aa\" stroke-width=\"0.6\" fill=\"none\">\n";
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const auto key = std::minmax(tri[e], tri[(e + 1) % 3]);
      if (!drawn.insert(key).second || constrained.count(key)) continue;
      const Point2 p = mesh.vertices[key.first], q = mesh.vertices[key.second];
      out += "<line x1=\"" + num(vp.px(p.x)) + "\" y1=\"" + num(vp.py(p.y)) +
             "\" x2=\"" + num(vp.px(q.x)) + "\" y2=\"" + num(vp.py(q.y)) + "\"/>\n";
    }
  }
  out += "</g>\n<g stroke=\"#223344\" stroke-width=\"1.6\" fill=\"none\">\n";
  for (const auto& key : constrained) {
    const Point2 p = mesh.vertices[key.first], q = mesh.vertices[key.second];
    out += "<line x1=\"" + num(vp.px(p.x)) + "\" y1=\"" + num(vp.py(p.y)) +
           "\" x2=\"" + num(vp.px(q.x)) + "\" y2=\"" + num(vp.py(q.y)) + "\"/>\n";
  }
  out += "</g>\n";
  if (options.draw_vertices) {
    out += "<g fill=\"#cc3333\">\n";
    for (const auto& p : mesh.vertices) {
      out += "<circle cx=\"" + num(vp.px(p.x)) + "\" cy=\"" + num(vp.py(p.y)) +
             "\" r=\"1.4\"/>\n";
    }
    out += "</g>\n";
  }
  return out + "</svg>\n";
}

std::string svg_heatmap(const TriMesh& mesh, const std::vector<double>& nodal,
                        const SvgOptions& options) {
  if (nodal.size() != mesh.vertices.size()) {
    throw std::invalid_argument("svg_heatmap: field size mismatch");
  }
  const Viewport vp = mesh_viewport(mesh, options);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : nodal) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;

  std::string out = svg_open(options.width, options.height);
  out += "<g stroke-width=\"0.25\">\n";
  for (const auto& tri : mesh.triangles) {
    const double mean =
        (nodal[tri[0]] + nodal[tri[1]] + nodal[tri[2]]) / 3.0;
    int rgb[3];
    colormap((mean - lo) / span, rgb);
    const std::string fill = color_hex(rgb);
    out += "<path d=\"M";
    for (int k = 0; k < 3; ++k) {
      const Point2 p = mesh.vertices[tri[k]];
      out += (k ? " L" : "") + std::string(" ") + num(vp.px(p.x)) + " " +
             num(vp.py(p.y));
    }
    out += " Z\" fill=\"" + fill + "\" stroke=\"" + fill + "\"/>\n";
  }
  out += "</g>\n";
  return out + "</svg>\n";
}

std::string svg_line_plot(const std::vector<PlotSeries>& series,
                          const PlotOptions& options) {
  static const char* colors[6] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#17becf"};
  const double ml = 72, mr = 24, mt = options.title.empty() ? 18 : 40, mb = 52;
  const double W = options.width, H = options.height;

  auto tx = [&](double x) { return options.log_x ? std::log10(x) : x; };
  auto ty = [&](double y) { return options.log_y ? std::log10(y) : y; };

  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      x0 = std::min(x0, tx(p.x));
      x1 = std::max(x1, tx(p.x));
      y0 = std::min(y0, ty(p.y));
      y1 = std::max(y1, ty(p.y));
    }
  }
  if (!(x0 < x1)) x1 = x0 + 1;
  if (!(y0 < y1)) y1 = y0 + 1;
  const double padx = 0.04 * (x1 - x0), pady = 0.06 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;

  auto px = [&](double x) { return ml + (tx(x) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (ty(y) - y0) / (y1 - y0) * (H - mt - mb); };

  std::string out = svg_open(options.width, options.height);
  out += "<g stroke=\"#444444\" stroke-width=\"1\" fill=\"none\">\n";
  out += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" +
         num(W - ml - mr) + "\" height=\"" + num(H - mt - mb) + "\"/>\n";
  out += "</g>\n";

  // Ticks: 5 uniform positions in transformed coordinates.
  out += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\">\n";
  char buf[64];
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double vx = options.log_x ? std::pow(10.0, fx) : fx;
    const double vy = options.log_y ? std::pow(10.0, fy) : fy;
    const double X = ml + (W - ml - mr) * k / 4.0;
    const double Y = H - mb - (H - mt - mb) * k / 4.0;
    std::snprintf(buf, sizeof buf, "%.4g", vx);
    out += "<text x=\"" + num(X) + "\" y=\"" + num(H - mb + 18) +
           "\" text-anchor=\"middle\">" + buf + "</text>\n";
    std::snprintf(buf, sizeof buf, "%.6g", vy);
    out += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(Y + 4) +
           "\" text-anchor=\"end\">" + buf + "</text>\n";
  }
  if (!options.title.empty()) {
    out += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">" + options.title + "</text>\n";
  }
  if (!options.x_label.empty()) {
    out += "<text x=\"" + num((ml + W - mr) / 2) + "\" y=\"" + num(H - 12) +
           "\" text-anchor=\"middle\">" + options.x_label + "</text>\n";
  }
  if (!options.y_label.empty()) {
    out += "<text x=\"16\" y=\"" + num((mt + H - mb) / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num((mt + H - mb) / 2) + ")\">" + options.y_label + "</text>\n";
  }
  out += "</g>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = colors[si % 6];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.8\" points=\"";
    for (const auto& p : series[si].points) {
      out += num(px(p.x)) + "," + num(py(p.y)) + " ";
    }
    out += "\"/>\n<g fill=\"";
    out += color;
    out += "\">\n";
    for (const auto& p : series[si].points) {
      out += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.y)) +
             "\" r=\"2.6\"/>\n";
    }
    out += "</g>\n";
    if (!series[si].label.empty()) {
      const double ly = mt + 18 + 18 * static_cast<double>(si);
      out += "<line x1=\"" + num(W - mr - 150) + "\" y1=\"" + num(ly - 4) +
             "\" x2=\"" + num(W - mr - 122) + "\" y2=\"" + num(ly - 4) +
             "\" stroke=\"" + color + "\" stroke-width=\"1.8\"/>\n";
      out += "<text x=\"" + num(W - mr - 116) + "\" y=\"" + num(ly) +
             "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\">" +
             series[si].label + "</text>\n";
    }
  }
  return out + "</svg>\n";
}

}  // namespace percell
