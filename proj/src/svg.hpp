#pragma once

#include <string>

#include "civd.hpp"

namespace civd {

// Planar rendering of the decomposition: cell boundaries, fill keyed by the
// identity of the assigned site, input points on top. d = 2 only.
std::string render_svg(const Civd& civd);
void render_svg_file(const Civd& civd, const std::string& path);

}  // namespace civd
