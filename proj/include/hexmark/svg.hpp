#pragma once

// SVG renderers. Faces are pointy-top hexagons in axial coordinates
// (center_x = size*sqrt(3)*(i + j/2), center_y = size*1.5*j), so the six
// face_neighbors are exactly the six edge-sharing hexagons. Vertex markers
// sit on the shared corners and are colored by state:
//   E #f2f2f2, C #4477aa, H #ee7733, F #222222.
// Phase diagrams project the energy sphere through the Lambert azimuthal
// equal-area map centered on (1,1,1)/sqrt(3), the all-positive direction;
// the antipode becomes the outer circle. Transition-line markers carry a
// teal stroke (#009988) when the pair admits a Peierls argument and a red
// one (#cc3311) when it does not.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hexmark/configuration.hpp"
#include "hexmark/io.hpp"
#include "hexmark/lattice.hpp"
#include "hexmark/model.hpp"
#include "hexmark/phase.hpp"

namespace hexmark {

inline const char* vertex_state_color(VertexState s) {
  switch (s) {
    case VertexState::E: return "#f2f2f2";
    case VertexState::C: return "#4477aa";
    case VertexState::H: return "#ee7733";
    default: return "#222222";
  }
}

namespace detail {

struct SvgBuilder {
  std::string body;
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;

  void extend(double x, double y, double pad) {
    min_x = std::min(min_x, x - pad);
    min_y = std::min(min_y, y - pad);
    max_x = std::max(max_x, x + pad);
    max_y = std::max(max_y, y + pad);
  }

  std::string finish(double margin) const {
    const double w = max_x - min_x + 2 * margin;
    const double h = max_y - min_y + 2 * margin;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      fmt_double(std::ceil(w)) + "\" height=\"" + fmt_double(std::ceil(h)) +
                      "\" viewBox=\"0 0 " + fmt_double(std::ceil(w)) + " " +
                      fmt_double(std::ceil(h)) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out += "<g transform=\"translate(" + fmt_double(margin - min_x) + "," +
           fmt_double(margin - min_y) + ")\">\n";
    out += body;
    out += "</g>\n</svg>\n";
    return out;
  }
};

inline std::string svg_points(const std::vector<std::array<double, 2>>& pts) {
  std::string out;
  for (const auto& p : pts) {
    if (!out.empty()) out += ' ';
    out += fmt_double(p[0]) + "," + fmt_double(p[1]);
  }
  return out;
}

}  // namespace detail

struct RenderOptions {
  double hex_size = 22;
  bool vertex_overlay = true;
};

inline std::string render_configuration_svg(const Configuration& c,
                                            const RenderOptions& opts = {}) {
  const HexTorus& lat = c.lattice();
  const double s = opts.hex_size;
  const double sq3 = std::sqrt(3.0);
  auto center = [&](double i, double j) -> std::array<double, 2> {
    return {s * sq3 * (i + j / 2), s * 1.5 * j};
  };

  detail::SvgBuilder svg;
  for (int f = 0; f < lat.face_count(); ++f) {
    const auto [i, j] = lat.face_coords(f);
    const auto [cx, cy] = center(i, j);
    std::vector<std::array<double, 2>> corners;
    for (int k = 0; k < 6; ++k) {
      const double rad = M_PI / 180.0 * (60.0 * k - 30.0);
      corners.push_back({cx + s * std::cos(rad), cy + s * std::sin(rad)});
      svg.extend(corners.back()[0], corners.back()[1], 0);
    }
    const bool known = c.domain() == nullptr || c.determined(f);
    std::string fill = "#e8e8e8", stroke = "#888888", extra;
    if (known) {
      fill = c.filled(f) ? "#7f9cc4" : "#ffffff";
      if (c.domain() != nullptr && !c.free_face(f)) {
        extra = " opacity=\"0.55\"";  // fixed ring faces rendered muted
      }
    } else {
      extra = " stroke-dasharray=\"4 3\"";
    }
    svg.body += "<polygon points=\"" + detail::svg_points(corners) + "\" fill=\"" + fill +
                "\" stroke=\"" + stroke + "\" stroke-width=\"1\"" + extra + "/>\n";
  }

  if (opts.vertex_overlay) {
    for (int v = 0; v < lat.vertex_count(); ++v) {
      if (!c.vertex_counted(v)) continue;
      const int f = v / 2;
      const int t = v % 2;
      const auto [i, j] = lat.face_coords(f);
      // Corner shared by the vertex's three faces, from unwrapped coords.
      const double px = s * sq3 * (i + j / 2.0 + (t == 0 ? 0.5 : 1.0));
      const double py = s * (1.5 * j + (t == 0 ? 0.5 : 1.0));
      const VertexState st = c.vertex_state(v);
      svg.body += "<circle cx=\"" + fmt_double(px) + "\" cy=\"" + fmt_double(py) + "\" r=\"" +
                  fmt_double(0.27 * s) + "\" fill=\"" + vertex_state_color(st) +
                  "\" stroke=\"#666666\" stroke-width=\"0.7\"/>\n";
      svg.extend(px, py, 0.3 * s);
    }
  }
  return svg.finish(s);
}

namespace detail {

struct SpherePlane {
  std::array<double, 3> u0, t1, t2;

  SpherePlane() {
    const double n = std::sqrt(3.0);
    u0 = {1 / n, 1 / n, 1 / n};
    const double m = std::sqrt(2.0);
    t1 = {1 / m, -1 / m, 0};
    t2 = {u0[1] * t1[2] - u0[2] * t1[1], u0[2] * t1[0] - u0[0] * t1[2],
          u0[0] * t1[1] - u0[1] * t1[0]};
  }

  // Lambert azimuthal equal-area image; |result| <= 2, antipode on the rim.
  std::array<double, 2> project(const std::array<double, 3>& u) const {
    const double x = u[0] * t1[0] + u[1] * t1[1] + u[2] * t1[2];
    const double y = u[0] * t2[0] + u[1] * t2[1] + u[2] * t2[2];
    const double z = u[0] * u0[0] + u[1] * u0[1] + u[2] * u0[2];
    const double r = std::sqrt(x * x + y * y);
    const double R = std::sqrt(std::max(0.0, 2 * (1 - z)));
    if (r < 1e-12) return {z > 0 ? 0 : 2.0, 0};
    return {R * x / r, R * y / r};
  }
};

inline std::string region_color(const RegionLabel& label) {
  if (label.count() == 1) {
    for (int s = 0; s < 4; ++s) {
      if (label.minimal[s]) return vertex_state_color(static_cast<VertexState>(s));
    }
  }
  return "#bbbbbb";
}

inline std::string predicted_color(const std::string& predicted) {
  if (predicted.size() == 1) {
    switch (predicted[0]) {
      case 'E': return vertex_state_color(VertexState::E);
      case 'C': return vertex_state_color(VertexState::C);
      case 'H': return vertex_state_color(VertexState::H);
      case 'F': return vertex_state_color(VertexState::F);
      default: break;
    }
  }
  if (predicted.find('|') != std::string::npos) return "#009988";
  if (predicted == "none") return "#aa4499";
  return "#cccccc";  // unresolved
}

inline void legend_row(SvgBuilder& svg, double x, double& y, const std::string& color,
                       const std::string& text) {
  svg.body += "<circle cx=\"" + fmt_double(x) + "\" cy=\"" + fmt_double(y) +
              "\" r=\"6\" fill=\"" + color + "\" stroke=\"#555555\" stroke-width=\"0.8\"/>\n";
  svg.body += "<text x=\"" + fmt_double(x + 14) + "\" y=\"" + fmt_double(y + 4) +
              "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#333333\">" + text +
              "</text>\n";
  svg.extend(x + 180, y, 10);
  y += 20;
}

inline void phase_canvas(SvgBuilder& svg, double scale, const std::string& title) {
  svg.extend(-2 * scale, -2 * scale, 8);
  svg.extend(2 * scale, 2 * scale, 8);
  svg.body += "<circle cx=\"0\" cy=\"0\" r=\"" + fmt_double(2 * scale) +
              "\" fill=\"#fcfcfc\" stroke=\"#444444\" stroke-width=\"1.2\"/>\n";
  svg.body += "<text x=\"" + fmt_double(-2 * scale) + "\" y=\"" + fmt_double(-2 * scale - 14) +
              "\" font-family=\"sans-serif\" font-size=\"15\" fill=\"#111111\">" + title +
              "</text>\n";
  svg.extend(-2 * scale, -2 * scale - 20, 10);
}

}  // namespace detail

inline std::string render_phase_diagram_svg(const ZeroTempScan& scan, double scale = 150) {
  detail::SpherePlane plane;
  detail::SvgBuilder svg;
  detail::phase_canvas(svg, scale, "ground-state regions of the energy sphere");

  // Bulk first so line and corner markers stay visible on top.
  for (int pass = 0; pass < 3; ++pass) {
    for (const auto& p : scan.points) {
      if (static_cast<int>(p.kind) != pass) continue;
      const auto [x, y] = plane.project(p.e);
      const double px = x * scale, py = y * scale;
      const std::string fill = detail::region_color(p.label);
      if (p.kind == ScanPointKind::bulk) {
        svg.body += "<circle cx=\"" + fmt_double(px) + "\" cy=\"" + fmt_double(py) +
                    "\" r=\"2.2\" fill=\"" + fill + "\"/>\n";
      } else if (p.kind == ScanPointKind::line) {
        const std::string stroke = p.label.peierls ? "#009988" : "#cc3311";
        svg.body += "<circle cx=\"" + fmt_double(px) + "\" cy=\"" + fmt_double(py) +
                    "\" r=\"3.4\" fill=\"" + fill + "\" stroke=\"" + stroke +
                    "\" stroke-width=\"1.6\"/>\n";
      } else {
        svg.body += "<rect x=\"" + fmt_double(px - 4) + "\" y=\"" + fmt_double(py - 4) +
                    "\" width=\"8\" height=\"8\" transform=\"rotate(45 " + fmt_double(px) +
                    " " + fmt_double(py) + ")\" fill=\"#000000\"/>\n";
      }
    }
  }

  double ly = -2 * scale + 16;
  const double lx = 2 * scale + 30;
  for (int s = 0; s < 4; ++s) {
    const auto st = static_cast<VertexState>(s);
    detail::legend_row(svg, lx, ly, vertex_state_color(st),
                       std::string("region ") + vertex_state_name(st));
  }
  detail::legend_row(svg, lx, ly, "#bbbbbb", "transition set");
  detail::legend_row(svg, lx, ly, "#009988", "line stroke: Peierls pair");
  detail::legend_row(svg, lx, ly, "#cc3311", "line stroke: no Peierls argument");
  return svg.finish(20);
}

inline std::string render_phase_diagram_svg(const LowTempScan& scan, double scale = 150) {
  detail::SpherePlane plane;
  detail::SvgBuilder svg;
  detail::phase_canvas(svg, scale,
                       "predicted phases at beta = " + fmt_double(scan.beta) + " (" +
                           scan_method_name(scan.method) + ")");

  for (int pass = 0; pass < 3; ++pass) {
    for (const auto& p : scan.points) {
      if (static_cast<int>(p.kind) != pass) continue;
      const auto [x, y] = plane.project(p.e);
      const double px = x * scale, py = y * scale;
      const std::string fill = detail::predicted_color(p.predicted);
      if (p.kind == ScanPointKind::bulk) {
        svg.body += "<circle cx=\"" + fmt_double(px) + "\" cy=\"" + fmt_double(py) +
                    "\" r=\"2.2\" fill=\"" + fill + "\"/>\n";
      } else {
        svg.body += "<circle cx=\"" + fmt_double(px) + "\" cy=\"" + fmt_double(py) +
                    "\" r=\"3.4\" fill=\"" + fill +
                    "\" stroke=\"#555555\" stroke-width=\"1.1\"/>\n";
      }
    }
  }

  double ly = -2 * scale + 16;
  const double lx = 2 * scale + 30;
  for (int s = 0; s < 4; ++s) {
    const auto st = static_cast<VertexState>(s);
    detail::legend_row(svg, lx, ly, vertex_state_color(st),
                       std::string("dominated by ") + vertex_state_name(st));
  }
  detail::legend_row(svg, lx, ly, "#009988", "coexistence (offset zero)");
  detail::legend_row(svg, lx, ly, "#aa4499", "no domination");
  detail::legend_row(svg, lx, ly, "#cccccc", "unresolved");
  return svg.finish(20);
}

}  // namespace hexmark
