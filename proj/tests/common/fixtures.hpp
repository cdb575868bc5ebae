#pragma once

#include "pathset/scene.hpp"

namespace pathset::fixtures {

// A barrier across x in [15, 35] with a width-1 gap on the straight line between start and
// goal and a width-5 gap higher up. The detour is about 1.5x the straight route.
inline Scene two_corridor_scene() {
    Scene s;
    s.width = 50;
    s.height = 30;
    s.walls_as_obstacles = false;
    s.obstacles = {ConvexPolygon::rectangle(15, 0, 35, 14.5, 0), ConvexPolygon::rectangle(15, 15.5, 35, 24, 1),
                   ConvexPolygon::rectangle(15, 29, 35, 30, 2)};
    return s;
}
inline constexpr Point kCorridorStart{12, 15};
inline constexpr Point kCorridorGoal{38, 15};
inline constexpr double kNarrowWidth = 1.0;
inline constexpr double kWideWidth = 5.0;

// The only route from left to right is a straight gap of width 4.
inline Scene width4_corridor_scene() {
    Scene s;
    s.width = 50;
    s.height = 30;
    s.walls_as_obstacles = false;
    s.obstacles = {ConvexPolygon::rectangle(20, 0, 30, 13, 0), ConvexPolygon::rectangle(20, 17, 30, 30, 1)};
    return s;
}
inline constexpr Point kWidth4Start{5, 15};
inline constexpr Point kWidth4Goal{45, 15};

// Three boxes in a row with heights 3, 1, 2.
inline Scene staircase_scene(double h0 = 3, double h1 = 1, double h2 = 2) {
    Scene s;
    s.width = 14;
    s.height = 6;
    s.walls_as_obstacles = false;
    s.dimension = Dimension::Volumetric;
    s.obstacles = {ConvexPolygon::rectangle(2, 2, 4, 4, 0, h0), ConvexPolygon::rectangle(6, 2, 8, 4, 1, h1),
                   ConvexPolygon::rectangle(10, 2, 12, 4, 2, h2)};
    return s;
}

}  // namespace pathset::fixtures
