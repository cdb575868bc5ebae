#include "pathset/scene.hpp"

#include <algorithm>
#include <set>

#include "pathset/errors.hpp"
#include "pathset/rng.hpp"

namespace pathset {

void Scene::validate() const {
    if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height))
        throw InvalidScene("workspace size must be positive");
    std::set<int> ids;
    for (const auto& o : obstacles) {
        if (o.id() < 0) throw InvalidScene("obstacle ids must be non-negative, got " + std::to_string(o.id()));
        if (!ids.insert(o.id()).second) throw InvalidScene("duplicate obstacle id " + std::to_string(o.id()));
        const Box& b = o.bounds();
        if (b.min_x < -kEps || b.min_y < -kEps || b.max_x > width + kEps || b.max_y > height + kEps)
            throw InvalidScene("obstacle " + std::to_string(o.id()) + " leaves the workspace");
        if (dimension == Dimension::Volumetric && !(o.height() > 0.0))
            throw InvalidScene("obstacle " + std::to_string(o.id()) + " needs a positive height in 3D mode");
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i)
        for (std::size_t j = i + 1; j < obstacles.size(); ++j)
            if (polygons_overlap(obstacles[i], obstacles[j]))
                throw OverlappingObstacles(obstacles[i].id(), obstacles[j].id());
}

std::vector<ConvexPolygon> Scene::walls() const {
    const double t = kWallThickness;
    return {
        ConvexPolygon::rectangle(-t, -t, width + t, 0.0, kWallBottom),
        ConvexPolygon::rectangle(width, 0.0, width + t, height, kWallRight),
        ConvexPolygon::rectangle(-t, height, width + t, height + t, kWallTop),
        ConvexPolygon::rectangle(-t, 0.0, 0.0, height, kWallLeft),
    };
}

const ConvexPolygon& Scene::obstacle_by_id(int id) const {
    for (const auto& o : obstacles)
        if (o.id() == id) return o;
    throw InvalidArgument("no obstacle with id " + std::to_string(id));
}

double Scene::free_area() const {
    double a = width * height;
    for (const auto& o : obstacles) a -= o.area();
    return std::max(a, 0.0);
}

bool Scene::point_free(const Point& p) const {
    if (!in_bounds(p)) return false;
    for (const auto& o : obstacles)
        if (o.contains(p)) return false;
    return true;
}

bool Scene::segment_free(const Segment& s) const {
    if (!in_bounds(s.a) || !in_bounds(s.b)) return false;
    for (const auto& o : obstacles)
        if (segment_intersects_polygon(s, o)) return false;
    return true;
}

std::string to_string(Shape s) {
    switch (s) {
        case Shape::Square: return "square";
        case Shape::Triangle: return "triangle";
        case Shape::Rectangle: return "rectangle";
    }
    return "square";
}

Shape shape_from_string(const std::string& s) {
    if (s == "square") return Shape::Square;
    if (s == "triangle") return Shape::Triangle;
    if (s == "rectangle") return Shape::Rectangle;
    throw InvalidArgument("unknown shape '" + s + "'");
}

double shape_area(Shape shape, double side) {
    switch (shape) {
        case Shape::Square: return side * side;
        case Shape::Triangle: return std::sqrt(3.0) / 4.0 * side * side;
        case Shape::Rectangle: return 2.0 * side * side;
    }
    return 0.0;
}

ConvexPolygon make_shape(Shape shape, double side, const Point& center, double angle, int id) {
    std::vector<Point> local;
    switch (shape) {
        case Shape::Square: {
            const double h = side / 2.0;
            local = {{-h, -h}, {h, -h}, {h, h}, {-h, h}};
            break;
        }
        case Shape::Rectangle: {
            const double hx = side, hy = side / 2.0;
            local = {{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}};
            break;
        }
        case Shape::Triangle: {
            const double r = side / std::sqrt(3.0);
            for (int k = 0; k < 3; ++k) {
                const double a = M_PI / 2.0 + 2.0 * M_PI * k / 3.0;
                local.push_back({r * std::cos(a), r * std::sin(a)});
            }
            break;
        }
    }
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<Point> out;
    out.reserve(local.size());
    for (const auto& v : local) out.push_back({center.x + c * v.x - s * v.y, center.y + s * v.x + c * v.y});
    return ConvexPolygon(std::move(out), id);
}

Scene generate_scene(const GeneratorSpec& spec) {
    if (spec.obstacle_count < 0) throw InvalidArgument("obstacle count must be non-negative");
    if (!(spec.side_length > 0.0)) throw InvalidArgument("side length must be positive");
    if (spec.shapes.empty()) throw InvalidArgument("at least one shape must be enabled");

    Scene scene;
    scene.width = spec.width;
    scene.height = spec.height;
    scene.walls_as_obstacles = spec.walls_as_obstacles;
    scene.dimension = spec.max_height > 0.0 ? Dimension::Volumetric : Dimension::Planar;

    double footprint = 0.0;
    for (const Shape s : spec.shapes) footprint += shape_area(s, spec.side_length);
    footprint /= static_cast<double>(spec.shapes.size());
    if (spec.obstacle_count * footprint >= 0.6 * spec.width * spec.height)
        throw InvalidArgument("requested obstacle density exceeds 60% of the workspace");

    constexpr int kMaxRejections = 10000;
    constexpr double kMargin = 4.0 * kEps;
    Rng rng(spec.seed);
    for (int id = 0; id < spec.obstacle_count; ++id) {
        int rejections = 0;
        while (true) {
            const Shape shape = spec.shapes[rng.below(spec.shapes.size())];
            const double angle = rng.uniform(0.0, 2.0 * M_PI);
            const Point center{rng.uniform(0.0, spec.width), rng.uniform(0.0, spec.height)};
            ConvexPolygon candidate = make_shape(shape, spec.side_length, center, angle, id);
            const Box& b = candidate.bounds();
            bool ok = b.min_x >= 0.0 && b.min_y >= 0.0 && b.max_x <= spec.width && b.max_y <= spec.height;
            for (std::size_t k = 0; ok && k < spec.keep_clear.size(); ++k)
                ok = point_polygon_distance(spec.keep_clear[k], candidate) > spec.keep_clear_radius;
            for (std::size_t k = 0; ok && k < scene.obstacles.size(); ++k)
                ok = !polygons_overlap(candidate, scene.obstacles[k], kMargin);
            if (ok) {
                if (spec.max_height > 0.0) candidate.set_height(rng.uniform(1.0, std::max(1.0, spec.max_height)));
                scene.obstacles.push_back(std::move(candidate));
                break;
            }
            if (++rejections >= kMaxRejections)
                throw PlacementFailure("could not place obstacle " + std::to_string(id) + " after " +
                                       std::to_string(kMaxRejections) + " attempts");
        }
    }
    return scene;
}

}  // namespace pathset
