#include "ccl/render.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ccl {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

struct Canvas {
  const HyperRect& box;
  int w, h;

  double px(double x) const { return (x - box.lo(0)) / box.width(0) * w; }
  double py(double y) const { return (box.hi(1) - y) / box.width(1) * h; }
  double x_at(double col) const { return box.lo(0) + col / w * box.width(0); }
  double y_at(double row) const { return box.hi(1) - row / h * box.width(1); }
};

void contour_path(std::ostringstream& out, const LabelingState& st, const Canvas& c) {
  const int w = c.w, h = c.h;
  std::vector<double> v(static_cast<std::size_t>(w + 1) * (h + 1));
  for (int r = 0; r <= h; ++r) {
    for (int col = 0; col <= w; ++col) {
      const double x[2] = {c.x_at(col), c.y_at(r)};
      v[static_cast<std::size_t>(r) * (w + 1) + col] = evaluate(st.phi, x);
    }
  }
  auto at = [&](int col, int r) { return v[static_cast<std::size_t>(r) * (w + 1) + col]; };
  std::ostringstream d;
  for (int r = 0; r < h; ++r) {
    for (int col = 0; col < w; ++col) {
      // corners: 0 top-left, 1 top-right, 2 bottom-right, 3 bottom-left
      const std::array<double, 4> q = {at(col, r), at(col + 1, r), at(col + 1, r + 1),
                                       at(col, r + 1)};
      const std::array<std::array<double, 2>, 4> corner = {
          {{0.0 + col, 0.0 + r}, {1.0 + col, 0.0 + r}, {1.0 + col, 1.0 + r}, {0.0 + col, 1.0 + r}}};
      std::array<std::array<double, 2>, 4> hit;
      int n = 0;
      for (int e = 0; e < 4; ++e) {
        const double a = q[e], b = q[(e + 1) % 4];
        if ((a < 0) == (b < 0)) continue;
        const double t = a / (a - b);
        hit[n++] = {corner[e][0] + t * (corner[(e + 1) % 4][0] - corner[e][0]),
                    corner[e][1] + t * (corner[(e + 1) % 4][1] - corner[e][1])};
      }
      auto seg = [&](int i, int j) {
        d << 'M' << num(hit[i][0]) << ' ' << num(hit[i][1]) << 'L' << num(hit[j][0]) << ' '
          << num(hit[j][1]);
      };
      if (n == 2) {
        seg(0, 1);
      } else if (n == 4) {
        // saddle: pair crossings so that the center's sign region stays connected
        const double center = 0.25 * (q[0] + q[1] + q[2] + q[3]);
        if ((center < 0) == (q[0] < 0)) {
          seg(0, 1);
          seg(2, 3);
        } else {
          seg(0, 3);
          seg(1, 2);
        }
      }
    }
  }
  const std::string path = d.str();
  if (!path.empty()) {
    out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1\"/>\n";
  }
}

}  // namespace

std::string label_color(std::uint32_t label, std::uint64_t palette_seed) {
  if (label == 0) return "#000000";
  constexpr double golden = 0.6180339887498949;
  const double offset = std::fmod(static_cast<double>(palette_seed % 1000003) * 0.7548776662466927, 1.0);
  const double hue = std::fmod(offset + label * golden, 1.0) * 6.0;
  const double s = 0.55, v = 0.92;
  const int i = static_cast<int>(hue) % 6;
  const double f = hue - std::floor(hue);
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double rgb[3];
  switch (i) {
    case 0: rgb[0] = v; rgb[1] = t; rgb[2] = p; break;
    case 1: rgb[0] = q; rgb[1] = v; rgb[2] = p; break;
    case 2: rgb[0] = p; rgb[1] = v; rgb[2] = t; break;
    case 3: rgb[0] = p; rgb[1] = q; rgb[2] = v; break;
    case 4: rgb[0] = t; rgb[1] = p; rgb[2] = v; break;
    default: rgb[0] = v; rgb[1] = p; rgb[2] = q; break;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(rgb[0] * 255)),
                static_cast<int>(std::lround(rgb[1] * 255)),
                static_cast<int>(std::lround(rgb[2] * 255)));
  return buf;
}

std::string render_svg(LabelingState& st, const RenderSpec& spec) {
  if (st.tree.dim() != 2) throw std::invalid_argument("render: only 2D labelings can be drawn");
  if (spec.res < 64) throw std::invalid_argument("render: resolution must be at least 64");
  const HyperRect& box = st.tree.domain();
  const int w = spec.res;
  const int h = std::max(1, static_cast<int>(std::lround(spec.res * box.width(1) / box.width(0))));
  const Canvas c{box, w, h};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\" shape-rendering=\"crispEdges\">\n";

  for (int r = 0; r < h; ++r) {
    std::uint32_t run_label = 0;
    int run_start = 0;
    for (int col = 0; col <= w; ++col) {
      std::uint32_t label = 0;
      if (col < w) {
        const double x[2] = {c.x_at(col + 0.5), c.y_at(r + 0.5)};
        label = evaluate(st.phi, x) == 0.0 ? 0 : label_of(st, x);
      }
      if (col == w || (col > 0 && label != run_label)) {
        out << "<rect x=\"" << run_start << "\" y=\"" << r << "\" width=\"" << col - run_start
            << "\" height=\"1\" fill=\"" << label_color(run_label, spec.palette_seed) << "\"/>\n";
        run_start = col;
      }
      run_label = label;
    }
  }

  if (spec.shade_uncertain || spec.tree_lines) {
    for (const std::int32_t n : st.tree.leaves()) {
      const TreeNode& node = st.tree.node(n);
      const bool shade = spec.shade_uncertain && node.kind == LeafKind::NotSimplyConnected;
      if (!shade && !spec.tree_lines) continue;
      const double x0 = c.px(node.box.lo(0)), x1 = c.px(node.box.hi(0));
      const double y0 = c.py(node.box.hi(1)), y1 = c.py(node.box.lo(1));
      out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0)
          << "\" height=\"" << num(y1 - y0) << '"';
      out << (shade ? " fill=\"#404040\" fill-opacity=\"0.45\"" : " fill=\"none\"");
      if (spec.tree_lines) out << " stroke=\"#202020\" stroke-width=\"0.5\"";
      out << "/>\n";
    }
  }

  if (spec.contour) contour_path(out, st, c);
  out << "</svg>\n";
  return out.str();
}

}  // namespace ccl
