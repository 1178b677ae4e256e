#pragma once

#include <span>
#include <vector>

#include "pairedval/annotation.hpp"

namespace pairedval::geometry {

// Signed shoelace area; positive for counter-clockwise vertex order.
double signed_area(std::span<const Point> polygon);
double area(std::span<const Point> polygon);

// Area centroid. Falls back to the vertex mean for zero-area input.
Point centroid(std::span<const Point> polygon);

// True when no two non-adjacent edges touch and no adjacent edges overlap.
bool is_simple(std::span<const Point> polygon);

// Sutherland–Hodgman clip of an arbitrary simple polygon against the box.
// The result may contain zero-width bridges for concave input; its area is exact.
std::vector<Point> clip_to_box(std::span<const Point> polygon, const BoundingBox& box);

double overlap_area(std::span<const Point> polygon, const BoundingBox& box);

}  // namespace pairedval::geometry
