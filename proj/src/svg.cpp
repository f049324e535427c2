#include "svg.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace civd {

namespace {
std::uint64_t fnv1a(std::span<const std::int32_t> ids) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int32_t v : ids) {
    for (int b = 0; b < 4; ++b) {
      h ^= static_cast<std::uint8_t>(v >> (8 * b));
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string site_color(std::span<const std::int32_t> ids) {
  std::uint64_t h = fnv1a(ids);
  int hue = static_cast<int>(h % 360);
  int sat = 45 + static_cast<int>((h >> 9) % 40);
  int light = 55 + static_cast<int>((h >> 17) % 25);
  std::ostringstream ss;
  ss << "hsl(" << hue << "," << sat << "%," << light << "%)";
  return ss.str();
}

void rect_path(std::ostringstream& out, const AxisBox& b) {
  out << "M" << b.lo(0) << " " << b.lo(1) << "H" << b.hi(0) << "V" << b.hi(1) << "H" << b.lo(0)
      << "Z";
}
}  // namespace

std::string render_svg(const Civd& civd) {
  if (civd.points().dim() != 2) fail(Errc::unsupported_dimension, "SVG rendering needs dim = 2");
  const PointSet& pts = civd.points();
  AxisBox bbox = pts.bounding_box();
  AxisBox view{bbox.center, std::max(bbox.edge, 1e-6) * 1.6};

  std::ostringstream svg;
  double x0 = view.lo(0), y0 = view.lo(1), w = view.edge;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << " " << y0 << " " << w
      << " " << w << "\">\n";
  svg << "<g transform=\"translate(0," << (y0 + view.hi(1)) << ") scale(1,-1)\">\n";
  svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << w << "\" height=\"" << w
      << "\" fill=\"white\"/>\n";

  const Decomposition& dec = civd.decomposition();
  double stroke = view.edge / 1200.0;
  for (std::size_t i = 0; i < dec.cells.size(); ++i) {
    Region r = dec.tree.region_of(dec.cells[i].box_node);
    if (!boxes_intersect(r.outer, view)) continue;
    std::vector<std::int32_t> site = civd.site_points(static_cast<std::int32_t>(i));
    std::ostringstream path;
    rect_path(path, r.outer);
    if (r.inner) rect_path(path, *r.inner);  // even-odd carves the hole
    svg << "<path d=\"" << path.str() << "\" fill-rule=\"evenodd\" fill=\"" << site_color(site)
        << "\" stroke=\"#333\" stroke-width=\"" << stroke << "\"/>\n";
  }
  double pr = view.edge / 200.0;
  for (int i = 0; i < pts.size(); ++i) {
    Point p = pts[i];
    svg << "<circle cx=\"" << p[0] << "\" cy=\"" << p[1] << "\" r=\"" << pr
        << "\" fill=\"black\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void render_svg_file(const Civd& civd, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  out << render_svg(civd);
  if (!out) fail(Errc::io_error, "write failed: " + path);
}

}  // namespace civd
