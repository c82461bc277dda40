#pragma once

#include "types.hpp"

#include <vector>

namespace lgop {

// closed polygon, last vertex connects to first
double shoelace_area(std::vector<Cx> const &poly);
bool point_in_polygon(std::vector<Cx> const &poly, Cx p);
bool segments_intersect(Cx p1, Cx p2, Cx q1, Cx q2);
bool polygon_self_intersects(std::vector<Cx> const &poly);
double point_segment_distance(Cx p, Cx a, Cx b);
double point_polyline_distance(Cx p, std::vector<Cx> const &line);

} // namespace lgop
