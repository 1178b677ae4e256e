#include "pairedval/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace pairedval::geometry {

double signed_area(std::span<const Point> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = polygon[i];
        const Point& q = polygon[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

double area(std::span<const Point> polygon) { return std::abs(signed_area(polygon)); }

Point centroid(std::span<const Point> polygon) {
    const std::size_t n = polygon.size();
    if (n == 0) return {};
    const double a = signed_area(polygon);
    if (std::abs(a) < 1e-12) {
        Point mean;
        for (const Point& p : polygon) {
            mean.x += p.x;
            mean.y += p.y;
        }
        mean.x /= static_cast<double>(n);
        mean.y /= static_cast<double>(n);
        return mean;
    }
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = polygon[i];
        const Point& q = polygon[(i + 1) % n];
        const double cross = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * cross;
        cy += (p.y + q.y) * cross;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

namespace {

double orient(const Point& a, const Point& b, const Point& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(const Point& a, const Point& b, const Point& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const int d1 = sign(orient(q1, q2, p1));
    const int d2 = sign(orient(q1, q2, p2));
    const int d3 = sign(orient(p1, p2, q1));
    const int d4 = sign(orient(p1, p2, q2));
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

}  // namespace

bool is_simple(std::span<const Point> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a1 = polygon[i];
        const Point& a2 = polygon[(i + 1) % n];
        if (a1.x == a2.x && a1.y == a2.y) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point& b1 = polygon[j];
            const Point& b2 = polygon[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Adjacent edges share one vertex; they must not fold back onto each other.
                const Point& shared = (j == i + 1) ? a2 : a1;
                const Point& other_a = (j == i + 1) ? a1 : a2;
                const Point& other_b = (j == i + 1) ? b2 : b1;
                if (orient(shared, other_a, other_b) == 0.0) {
                    const double dot = (other_a.x - shared.x) * (other_b.x - shared.x) +
                                       (other_a.y - shared.y) * (other_b.y - shared.y);
                    if (dot > 0.0) return false;
                }
                continue;
            }
            if (segments_intersect(a1, a2, b1, b2)) return false;
        }
    }
    return true;
}

std::vector<Point> clip_to_box(std::span<const Point> polygon, const BoundingBox& box) {
    std::vector<Point> current(polygon.begin(), polygon.end());
    const double x0 = static_cast<double>(box.x_min);
    const double x1 = static_cast<double>(box.x_max);
    const double y0 = static_cast<double>(box.y_min);
    const double y1 = static_cast<double>(box.y_max);

    // Each edge of the box is a half-plane: inside(p) and the crossing with segment (a, b).
    auto clip = [&current](auto inside, auto cross) {
        if (current.empty()) return;
        std::vector<Point> out;
        out.reserve(current.size() + 4);
        const std::size_t n = current.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = current[i];
            const Point& b = current[(i + 1) % n];
            const bool ina = inside(a);
            const bool inb = inside(b);
            if (ina && inb) {
                out.push_back(b);
            } else if (ina && !inb) {
                out.push_back(cross(a, b));
            } else if (!ina && inb) {
                out.push_back(cross(a, b));
                out.push_back(b);
            }
        }
        current = std::move(out);
    };
    auto at_x = [](double x) {
        return [x](const Point& a, const Point& b) {
            const double t = (x - a.x) / (b.x - a.x);
            return Point{x, a.y + t * (b.y - a.y)};
        };
    };
    auto at_y = [](double y) {
        return [y](const Point& a, const Point& b) {
            const double t = (y - a.y) / (b.y - a.y);
            return Point{a.x + t * (b.x - a.x), y};
        };
    };
    clip([x0](const Point& p) { return p.x >= x0; }, at_x(x0));
    clip([x1](const Point& p) { return p.x <= x1; }, at_x(x1));
    clip([y0](const Point& p) { return p.y >= y0; }, at_y(y0));
    clip([y1](const Point& p) { return p.y <= y1; }, at_y(y1));
    return current;
}

double overlap_area(std::span<const Point> polygon, const BoundingBox& box) {
    if (box.is_degenerate()) return 0.0;
    const auto clipped = clip_to_box(polygon, box);
    return area(clipped);
}

}  // namespace pairedval::geometry
