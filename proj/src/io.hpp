#pragma once

#include <string>

#include "civd.hpp"

namespace civd {

// CSV: one point per line, d comma- or whitespace-separated columns.
// JSON: {"dim": d, "points": [[...], ...]}.
PointSet load_points(const std::string& path);
PointSet parse_points_csv(const std::string& text);
PointSet parse_points_json(const std::string& text);

void save_artifact(const Civd& civd, const std::string& path);
Civd load_artifact(const std::string& path);

std::string artifact_to_json(const Civd& civd);
Civd artifact_from_json(const std::string& text);

}  // namespace civd
