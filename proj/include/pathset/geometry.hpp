#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pathset {

/// Incidence tolerance in map units. Every "touching" decision is made inside this band.
inline constexpr double kEps = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Point() = default;
    constexpr Point(double x_, double y_, double z_ = 0.0) : x(x_), y(y_), z(z_) {}

    constexpr Point operator+(const Point& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Point operator-(const Point& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Point operator-() const { return {-x, -y, -z}; }
    constexpr Point operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Point operator/(double s) const { return {x / s, y / s, z / s}; }
    Point& operator+=(const Point& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Point& operator-=(const Point& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr bool operator==(const Point&) const = default;
};

constexpr Point operator*(double s, const Point& p) { return p * s; }

// Planar helpers ignore z.
constexpr double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point& a) { return std::hypot(a.x, a.y); }
constexpr double norm2(const Point& a) { return a.x * a.x + a.y * a.y; }
inline double distance(const Point& a, const Point& b) { return norm(b - a); }
constexpr Point lerp(const Point& a, const Point& b, double t) { return a + (b - a) * t; }
/// Left-hand normal (counter-clockwise rotation by 90 degrees).
constexpr Point perp(const Point& a) { return {-a.y, a.x, 0.0}; }
inline Point normalized(const Point& a) {
    const double n = norm(a);
    return n > 0.0 ? Point{a.x / n, a.y / n, 0.0} : Point{};
}
bool lex_less(const Point& a, const Point& b);

struct Segment {
    Point a;
    Point b;

    double length() const { return distance(a, b); }
    Point midpoint() const { return lerp(a, b, 0.5); }
    Point direction() const { return normalized(b - a); }
    Point at(double t) const { return lerp(a, b, t); }
    bool operator==(const Segment&) const = default;
};

struct Box {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    static Box of(const Segment& s);
    Box expanded(double margin) const { return {min_x - margin, min_y - margin, max_x + margin, max_y + margin}; }
    bool overlaps(const Box& o) const {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }
    bool contains(const Point& p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
    bool operator==(const Box&) const = default;
};

/// Strictly convex polygon stored counter-clockwise. Clockwise input is reversed;
/// anything non-convex or degenerate throws InvalidScene.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Point> vertices, int id = 0, double height = 0.0);

    static ConvexPolygon rectangle(double min_x, double min_y, double max_x, double max_y, int id = 0,
                                   double height = 0.0);

    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Point& vertex(std::size_t i) const { return vertices_[i]; }
    Segment edge(std::size_t i) const { return {vertices_[i], vertices_[(i + 1) % vertices_.size()]}; }
    int id() const { return id_; }
    void set_id(int id) { id_ = id; }
    double height() const { return height_; }
    void set_height(double h) { height_ = h; }
    const Box& bounds() const { return bounds_; }
    double area() const;
    Point centroid() const;

    /// Boundary points (within eps) count as contained.
    bool contains(const Point& p, double eps = kEps) const;
    /// Strict interior test: at least eps inside every edge.
    bool contains_strictly(const Point& p, double eps = kEps) const;

    bool operator==(const ConvexPolygon& o) const {
        return id_ == o.id_ && height_ == o.height_ && vertices_ == o.vertices_;
    }

private:
    std::vector<Point> vertices_;
    int id_ = 0;
    double height_ = 0.0;
    Box bounds_;
};

struct ClosestPair {
    Point p;  ///< on the first polygon
    Point q;  ///< on the second polygon
    double distance = 0.0;
};

/// Minimum distance pair between two disjoint convex polygons. Ties resolve to the
/// lexicographically smallest (p, q). Throws OverlappingObstacles when they touch or overlap.
ClosestPair closest_points(const ConvexPolygon& first, const ConvexPolygon& second);

bool polygons_overlap(const ConvexPolygon& first, const ConvexPolygon& second, double eps = kEps);

Point closest_point_on_segment(const Point& p, const Segment& s);
/// Closest point of the (filled) polygon to p; p itself when inside.
Point closest_point_on_polygon(const Point& p, const ConvexPolygon& poly);
double point_polygon_distance(const Point& p, const ConvexPolygon& poly);
double segment_segment_distance(const Segment& s1, const Segment& s2);
double segment_polygon_distance(const Segment& s, const ConvexPolygon& poly);

/// True iff s and the filled polygon share a point; boundary contact counts.
bool segment_intersects_polygon(const Segment& s, const ConvexPolygon& poly);
/// True iff the closed disc reaches the polygon (distance <= r within eps).
bool disc_intersects_polygon(const Point& center, double r, const ConvexPolygon& poly);

/// Tolerant segment/segment predicate shared by the scalar and SIMD crossing kernels.
/// tol_first / tol_second are eps scaled by the respective segment lengths.
inline bool segments_touch(double ax, double ay, double bx, double by, double cx, double cy, double dx,
                           double dy, double tol_first, double tol_second, double eps) {
    const double e = bx - ax;
    const double f = by - ay;
    const double o1 = e * (cy - ay) - f * (cx - ax);
    const double o2 = e * (dy - ay) - f * (dx - ax);
    const double g = dx - cx;
    const double h = dy - cy;
    const double o3 = g * (ay - cy) - h * (ax - cx);
    const double o4 = g * (by - cy) - h * (bx - cx);
    const bool sep_first = (o1 > tol_first && o2 > tol_first) || (o1 < -tol_first && o2 < -tol_first);
    const bool sep_second = (o3 > tol_second && o4 > tol_second) || (o3 < -tol_second && o4 < -tol_second);
    const bool boxes = std::fmin(ax, bx) <= std::fmax(cx, dx) + eps && std::fmin(cx, dx) <= std::fmax(ax, bx) + eps &&
                       std::fmin(ay, by) <= std::fmax(cy, dy) + eps && std::fmin(cy, dy) <= std::fmax(ay, by) + eps;
    return !sep_first && !sep_second && boxes;
}

struct SegmentIntersection {
    Point point;
    double t_first = 0.0;   ///< parameter along the first segment
    double t_second = 0.0;  ///< parameter along the second segment
    bool overlap = false;   ///< collinear overlap; point is the overlap midpoint
};

std::optional<SegmentIntersection> segments_intersection(const Segment& s1, const Segment& s2);

/// Smallest t >= 0 at which origin + t*dir enters the filled polygon.
std::optional<double> ray_polygon_entry(const Point& origin, const Point& dir, const ConvexPolygon& poly);

/// Piecewise-linear path. Parameters default to normalized arc length; an explicit,
/// strictly increasing knot vector from 0 to 1 may be supplied instead so that several
/// paths can share one parameterization.
class Polyline {
public:
    Polyline() = default;
    explicit Polyline(std::vector<Point> waypoints);
    Polyline(std::vector<Point> waypoints, std::vector<double> params);

    const std::vector<Point>& waypoints() const { return waypoints_; }
    const std::vector<double>& cumulative_lengths() const { return cumulative_; }
    const std::vector<double>& params() const { return params_; }
    std::size_t size() const { return waypoints_.size(); }
    bool empty() const { return waypoints_.empty(); }
    double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
    bool arc_length_parameterized() const { return arc_length_; }
    const Point& front() const { return waypoints_.front(); }
    const Point& back() const { return waypoints_.back(); }
    Segment segment(std::size_t i) const { return {waypoints_[i], waypoints_[i + 1]}; }

    /// Throws DegeneratePath for a zero-length arc-length polyline.
    Point eval(double tau) const;
    /// Index k of the segment [params[k], params[k+1]] containing tau.
    std::size_t segment_index(double tau) const;
    /// Parameter of the point on the path closest to p.
    double param_of_point(const Point& p) const;
    Point tangent_at(double tau) const;
    /// Left unit normal; averaged adjacent tangents at interior waypoints.
    Point normal_at(double tau) const;

    /// Same shape, arc-length parameters.
    Polyline reparameterized() const { return Polyline(waypoints_); }

    bool operator==(const Polyline& o) const { return waypoints_ == o.waypoints_ && params_ == o.params_; }

private:
    void build_lengths();

    std::vector<Point> waypoints_;
    std::vector<double> cumulative_;
    std::vector<double> params_;
    bool arc_length_ = true;
};

struct LineHit {
    double param = 0.0;  ///< path parameter of the hit
    Point point;
};

/// All crossings of the path with the infinite line through origin along dir, sorted by parameter.
std::vector<LineHit> line_intersections(const Polyline& path, const Point& origin, const Point& dir);

double polyline_polygon_distance(const Polyline& path, const ConvexPolygon& poly, double* param_out = nullptr);

}  // namespace pathset
