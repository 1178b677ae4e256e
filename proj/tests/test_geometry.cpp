#include <doctest.h>

#include "pairedval/geometry.hpp"
#include "test_support.hpp"

using namespace pairedval;
namespace geo = pairedval::geometry;

TEST_CASE("polygon area and centroid") {
    const std::vector<Point> sq = {{0, 0}, {4, 0}, {4, 2}, {0, 2}};
    CHECK(geo::signed_area(sq) == doctest::Approx(8.0));
    std::vector<Point> cw(sq.rbegin(), sq.rend());
    CHECK(geo::signed_area(cw) == doctest::Approx(-8.0));
    CHECK(geo::area(cw) == doctest::Approx(8.0));
    const Point c = geo::centroid(sq);
    CHECK(c.x == doctest::Approx(2.0));
    CHECK(c.y == doctest::Approx(1.0));

    // L shape: unit squares at (0,0), (1,0), (0,1).
    const std::vector<Point> ell = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    CHECK(geo::area(ell) == doctest::Approx(3.0));
    CHECK(geo::centroid(ell).x == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("simple polygons") {
    CHECK(geo::is_simple(std::vector<Point>{{0, 0}, {4, 0}, {4, 2}, {0, 2}}));
    CHECK_FALSE(geo::is_simple(std::vector<Point>{{0, 0}, {4, 4}, {4, 0}, {0, 4}}));
    CHECK(geo::is_simple(std::vector<Point>{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}));
    // Spike folding back over its own edge.
    CHECK_FALSE(geo::is_simple(std::vector<Point>{{0, 0}, {4, 0}, {2, 0}, {2, 3}}));
}

TEST_CASE("box clipping area") {
    const std::vector<Point> sq = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    CHECK(geo::overlap_area(sq, {5, 5, 20, 20}) == doctest::Approx(25.0));
    CHECK(geo::overlap_area(sq, {2, 2, 4, 4}) == doctest::Approx(4.0));
    CHECK(geo::overlap_area(sq, {10, 0, 20, 10}) == doctest::Approx(0.0));
    CHECK(geo::overlap_area(sq, {20, 20, 30, 30}) == 0.0);

    // Concave polygon against a box that covers the notch.
    const std::vector<Point> ell = {{0, 0}, {20, 0}, {20, 10}, {10, 10}, {10, 20}, {0, 20}};
    CHECK(geo::overlap_area(ell, {5, 5, 15, 15}) == doctest::Approx(75.0));
}

TEST_CASE("clipping rectangles agrees with integer intersection area") {
    testing::Gen g(5);
    for (int i = 0; i < 300; ++i) {
        const BoundingBox t = g.box(40, 40);
        const BoundingBox b = g.box(40, 40);
        const std::vector<Point> poly = {{double(t.x_min), double(t.y_min)},
                                         {double(t.x_max), double(t.y_min)},
                                         {double(t.x_max), double(t.y_max)},
                                         {double(t.x_min), double(t.y_max)}};
        CHECK(geo::overlap_area(poly, b) == doctest::Approx(double(intersection_area(t, b))));
    }
}
