#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathset/geometry.hpp"

namespace pathset {

enum class Dimension { Planar, Volumetric };

/// Ids of the four boundary walls; obstacle ids must be non-negative.
inline constexpr int kWallBottom = -1;
inline constexpr int kWallRight = -2;
inline constexpr int kWallTop = -3;
inline constexpr int kWallLeft = -4;
inline constexpr double kWallThickness = 1.0;

inline bool is_wall(int id) { return id < 0; }

struct Scene {
    double width = 50.0;
    double height = 30.0;
    std::vector<ConvexPolygon> obstacles;
    bool walls_as_obstacles = true;
    Dimension dimension = Dimension::Planar;

    /// Throws InvalidScene (bounds, ids, heights) or OverlappingObstacles.
    void validate() const;

    /// Four rectangles hugging the workspace from outside.
    std::vector<ConvexPolygon> walls() const;
    const ConvexPolygon& obstacle_by_id(int id) const;
    Box bounds() const { return {0.0, 0.0, width, height}; }
    double diagonal() const { return std::hypot(width, height); }
    double free_area() const;

    bool in_bounds(const Point& p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
    /// Inside the workspace and not touching any obstacle.
    bool point_free(const Point& p) const;
    bool segment_free(const Segment& s) const;

    bool operator==(const Scene& o) const = default;
};

enum class Shape { Square, Triangle, Rectangle };

std::string to_string(Shape s);
Shape shape_from_string(const std::string& s);

struct GeneratorSpec {
    int obstacle_count = 20;
    double side_length = 1.0;
    std::vector<Shape> shapes{Shape::Square, Shape::Triangle, Shape::Rectangle};
    std::uint64_t seed = 1;
    double width = 50.0;
    double height = 30.0;
    bool walls_as_obstacles = false;
    /// Obstacles keep at least keep_clear_radius away from these points.
    std::vector<Point> keep_clear;
    double keep_clear_radius = 0.0;
    /// When > 0 the scene is volumetric with heights uniform in [1, max_height].
    double max_height = 0.0;
};

/// Footprint of one obstacle of the given shape ("rectangle" is side x 2*side).
double shape_area(Shape shape, double side);
ConvexPolygon make_shape(Shape shape, double side, const Point& center, double angle, int id = 0);

/// Uniform rejection sampling. Throws InvalidArgument when count x mean footprint reaches
/// 60% of the map, PlacementFailure after 10^4 rejected draws for one obstacle.
Scene generate_scene(const GeneratorSpec& spec);

}  // namespace pathset
