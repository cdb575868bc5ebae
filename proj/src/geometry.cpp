#include "pathset/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "pathset/errors.hpp"

namespace pathset {

namespace {

constexpr double kTieTolerance = 1e-12;

bool lex_less_pair(const ClosestPair& a, const ClosestPair& b) {
    if (a.p != b.p) return lex_less(a.p, b.p);
    return lex_less(a.q, b.q);
}

struct SegmentPolygonClosest {
    double distance = 0.0;
    double t = 0.0;  // along the segment
};

SegmentPolygonClosest segment_polygon_closest(const Segment& s, const ConvexPolygon& poly) {
    if (poly.contains(s.a)) return {0.0, 0.0};
    // Earliest boundary crossing, if any.
    double first_t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (auto hit = segments_intersection(s, poly.edge(i))) first_t = std::min(first_t, hit->t_first);
    }
    if (first_t <= 1.0) return {0.0, std::clamp(first_t, 0.0, 1.0)};

    SegmentPolygonClosest best{std::numeric_limits<double>::infinity(), 0.0};
    const auto consider = [&](double d, double t) {
        if (d < best.distance) best = {d, t};
    };
    consider(point_polygon_distance(s.a, poly), 0.0);
    consider(point_polygon_distance(s.b, poly), 1.0);
    const Point d = s.b - s.a;
    const double len2 = norm2(d);
    for (const Point& v : poly.vertices()) {
        const double t = len2 > 0.0 ? std::clamp(dot(v - s.a, d) / len2, 0.0, 1.0) : 0.0;
        consider(distance(v, s.at(t)), t);
    }
    return best;
}

}  // namespace

bool lex_less(const Point& a, const Point& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

Box Box::of(const Segment& s) {
    return {std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y), std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)};
}

ConvexPolygon::ConvexPolygon(std::vector<Point> vertices, int id, double height)
    : vertices_(std::move(vertices)), id_(id), height_(height) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw InvalidScene("polygon " + std::to_string(id) + " has fewer than 3 vertices");
    for (auto& v : vertices_) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw InvalidScene("polygon " + std::to_string(id) + " has a non-finite vertex");
        v.z = 0.0;
    }
    if (!(height >= 0.0)) throw InvalidScene("polygon " + std::to_string(id) + " has a negative height");

    double signed_area = 0.0;
    for (std::size_t i = 0; i < n; ++i) signed_area += cross(vertices_[i], vertices_[(i + 1) % n]);
    if (signed_area < 0.0) std::reverse(vertices_.begin(), vertices_.end());

    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % n];
        const Point& c = vertices_[(i + 2) % n];
        if (a == b) throw InvalidScene("polygon " + std::to_string(id) + " repeats a vertex");
        if (cross(b - a, c - b) <= 0.0)
            throw InvalidScene("polygon " + std::to_string(id) + " is not strictly convex");
    }
    // Total turning of a strictly convex simple polygon is exactly one revolution.
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point e1 = vertices_[(i + 1) % n] - vertices_[i];
        const Point e2 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
        turning += std::atan2(cross(e1, e2), dot(e1, e2));
    }
    if (std::abs(turning - 2.0 * M_PI) > 1e-6)
        throw InvalidScene("polygon " + std::to_string(id) + " is self-intersecting");

    bounds_ = {vertices_[0].x, vertices_[0].y, vertices_[0].x, vertices_[0].y};
    for (const auto& v : vertices_) {
        bounds_.min_x = std::min(bounds_.min_x, v.x);
        bounds_.min_y = std::min(bounds_.min_y, v.y);
        bounds_.max_x = std::max(bounds_.max_x, v.x);
        bounds_.max_y = std::max(bounds_.max_y, v.y);
    }
}

ConvexPolygon ConvexPolygon::rectangle(double min_x, double min_y, double max_x, double max_y, int id,
                                       double height) {
    return ConvexPolygon({{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}}, id, height);
}

double ConvexPolygon::area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) a += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    return 0.5 * a;
}

Point ConvexPolygon::centroid() const {
    Point c;
    for (const auto& v : vertices_) c += v;
    return c / static_cast<double>(vertices_.size());
}

bool ConvexPolygon::contains(const Point& p, double eps) const {
    if (p.x < bounds_.min_x - eps || p.x > bounds_.max_x + eps || p.y < bounds_.min_y - eps ||
        p.y > bounds_.max_y + eps)
        return false;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Segment e = edge(i);
        const Point d = e.b - e.a;
        if (cross(d, p - e.a) < -eps * norm(d)) return false;
    }
    return true;
}

bool ConvexPolygon::contains_strictly(const Point& p, double eps) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Segment e = edge(i);
        const Point d = e.b - e.a;
        if (cross(d, p - e.a) <= eps * norm(d)) return false;
    }
    return true;
}

bool polygons_overlap(const ConvexPolygon& first, const ConvexPolygon& second, double eps) {
    if (!first.bounds().expanded(eps).overlaps(second.bounds())) return false;
    for (const auto& v : first.vertices())
        if (second.contains(v, eps)) return true;
    for (const auto& v : second.vertices())
        if (first.contains(v, eps)) return true;
    for (std::size_t i = 0; i < first.size(); ++i) {
        const Segment a = first.edge(i);
        for (std::size_t j = 0; j < second.size(); ++j) {
            const Segment b = second.edge(j);
            if (segments_touch(a.a.x, a.a.y, a.b.x, a.b.y, b.a.x, b.a.y, b.b.x, b.b.y, eps * a.length(),
                               eps * b.length(), eps))
                return true;
        }
    }
    return false;
}

ClosestPair closest_points(const ConvexPolygon& first, const ConvexPolygon& second) {
    if (polygons_overlap(first, second)) throw OverlappingObstacles(first.id(), second.id());

    std::vector<ClosestPair> candidates;
    candidates.reserve(2 * first.size() * second.size());
    for (const auto& v : first.vertices()) {
        for (std::size_t j = 0; j < second.size(); ++j) {
            const Point q = closest_point_on_segment(v, second.edge(j));
            candidates.push_back({v, q, distance(v, q)});
        }
    }
    for (const auto& v : second.vertices()) {
        for (std::size_t i = 0; i < first.size(); ++i) {
            const Point p = closest_point_on_segment(v, first.edge(i));
            candidates.push_back({p, v, distance(p, v)});
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) best = std::min(best, c.distance);

    const ClosestPair* chosen = nullptr;
    for (const auto& c : candidates) {
        if (c.distance > best + kTieTolerance) continue;
        if (chosen == nullptr || lex_less_pair(c, *chosen)) chosen = &c;
    }
    ClosestPair out = *chosen;
    out.distance = distance(out.p, out.q);
    return out;
}

Point closest_point_on_segment(const Point& p, const Segment& s) {
    const Point d = s.b - s.a;
    const double len2 = norm2(d);
    if (len2 == 0.0) return s.a;
    const double t = dot(p - s.a, d) / len2;
    if (t <= 0.0) return s.a;
    if (t >= 1.0) return s.b;
    return s.a + d * t;
}

Point closest_point_on_polygon(const Point& p, const ConvexPolygon& poly) {
    if (poly.contains(p, 0.0)) return p;
    Point best = poly.vertex(0);
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point c = closest_point_on_segment(p, poly.edge(i));
        const double d2 = norm2(c - p);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

double point_polygon_distance(const Point& p, const ConvexPolygon& poly) {
    return distance(p, closest_point_on_polygon(p, poly));
}

double segment_segment_distance(const Segment& s1, const Segment& s2) {
    if (segments_intersection(s1, s2)) return 0.0;
    return std::min({distance(s1.a, closest_point_on_segment(s1.a, s2)),
                     distance(s1.b, closest_point_on_segment(s1.b, s2)),
                     distance(s2.a, closest_point_on_segment(s2.a, s1)),
                     distance(s2.b, closest_point_on_segment(s2.b, s1))});
}

double segment_polygon_distance(const Segment& s, const ConvexPolygon& poly) {
    return segment_polygon_closest(s, poly).distance;
}

bool segment_intersects_polygon(const Segment& s, const ConvexPolygon& poly) {
    if (!Box::of(s).expanded(kEps).overlaps(poly.bounds())) return false;
    if (poly.contains(s.a) || poly.contains(s.b)) return true;
    const double tol = kEps * s.length();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Segment e = poly.edge(i);
        if (segments_touch(s.a.x, s.a.y, s.b.x, s.b.y, e.a.x, e.a.y, e.b.x, e.b.y, tol, kEps * e.length(), kEps))
            return true;
    }
    return false;
}

bool disc_intersects_polygon(const Point& center, double r, const ConvexPolygon& poly) {
    if (!poly.bounds().expanded(r + kEps).contains(center)) return false;
    return point_polygon_distance(center, poly) <= r + kEps;
}

std::optional<SegmentIntersection> segments_intersection(const Segment& s1, const Segment& s2) {
    const double len1 = s1.length();
    const double len2 = s2.length();
    if (!segments_touch(s1.a.x, s1.a.y, s1.b.x, s1.b.y, s2.a.x, s2.a.y, s2.b.x, s2.b.y, kEps * len1, kEps * len2,
                        kEps))
        return std::nullopt;

    const Point d1 = s1.b - s1.a;
    const Point d2 = s2.b - s2.a;
    const double denom = cross(d1, d2);
    SegmentIntersection out;
    if (std::abs(denom) <= 1e-12 * len1 * len2) {
        // Parallel within tolerance: report the middle of the projected overlap.
        if (len1 == 0.0) {
            out.point = s1.a;
            out.t_second = len2 > 0.0 ? std::clamp(dot(s1.a - s2.a, d2) / (len2 * len2), 0.0, 1.0) : 0.0;
            out.overlap = true;
            return out;
        }
        const double inv = 1.0 / (len1 * len1);
        double lo = dot(s2.a - s1.a, d1) * inv;
        double hi = dot(s2.b - s1.a, d1) * inv;
        if (lo > hi) std::swap(lo, hi);
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
        const double t = lo <= hi ? 0.5 * (lo + hi) : std::clamp(0.5 * (lo + hi), 0.0, 1.0);
        out.t_first = t;
        out.point = s1.at(t);
        out.t_second = len2 > 0.0 ? std::clamp(dot(out.point - s2.a, d2) / (len2 * len2), 0.0, 1.0) : 0.0;
        out.overlap = true;
        return out;
    }
    const Point ac = s2.a - s1.a;
    out.t_first = std::clamp(cross(ac, d2) / denom, 0.0, 1.0);
    out.t_second = std::clamp(cross(ac, d1) / denom, 0.0, 1.0);
    out.point = s1.at(out.t_first);
    return out;
}

std::optional<double> ray_polygon_entry(const Point& origin, const Point& dir, const ConvexPolygon& poly) {
    double t_enter = 0.0;
    double t_exit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Segment e = poly.edge(i);
        const Point edge_dir = e.b - e.a;
        const Point outward{edge_dir.y, -edge_dir.x};
        const double num = dot(outward, origin - e.a);
        const double den = dot(outward, dir);
        if (den == 0.0) {
            if (num > 0.0) return std::nullopt;
            continue;
        }
        const double t = -num / den;
        if (den < 0.0)
            t_enter = std::max(t_enter, t);
        else
            t_exit = std::min(t_exit, t);
        if (t_enter > t_exit) return std::nullopt;
    }
    return t_enter;
}

Polyline::Polyline(std::vector<Point> waypoints) : waypoints_(std::move(waypoints)) {
    build_lengths();
    params_.resize(waypoints_.size());
    const double total = length();
    for (std::size_t i = 0; i < waypoints_.size(); ++i) params_[i] = total > 0.0 ? cumulative_[i] / total : 0.0;
    if (!params_.empty() && total > 0.0) params_.back() = 1.0;
}

Polyline::Polyline(std::vector<Point> waypoints, std::vector<double> params)
    : waypoints_(std::move(waypoints)), params_(std::move(params)), arc_length_(false) {
    if (waypoints_.size() != params_.size()) throw InvalidArgument("polyline knot count mismatch");
    if (waypoints_.size() < 2) throw InvalidArgument("polyline with explicit knots needs two waypoints");
    if (params_.front() != 0.0 || params_.back() != 1.0) throw InvalidArgument("polyline knots must span [0, 1]");
    for (std::size_t i = 1; i < params_.size(); ++i)
        if (!(params_[i] > params_[i - 1])) throw InvalidArgument("polyline knots must increase strictly");
    build_lengths();
}

void Polyline::build_lengths() {
    cumulative_.assign(waypoints_.size(), 0.0);
    for (std::size_t i = 1; i < waypoints_.size(); ++i)
        cumulative_[i] = cumulative_[i - 1] + distance(waypoints_[i - 1], waypoints_[i]);
}

std::size_t Polyline::segment_index(double tau) const {
    if (waypoints_.size() < 2) return 0;
    const auto it = std::upper_bound(params_.begin(), params_.end(), tau);
    std::size_t k = it == params_.begin() ? 0 : static_cast<std::size_t>(it - params_.begin()) - 1;
    return std::min(k, waypoints_.size() - 2);
}

Point Polyline::eval(double tau) const {
    if (waypoints_.empty() || (arc_length_ && length() == 0.0)) throw DegeneratePath();
    tau = std::clamp(tau, 0.0, 1.0);
    const std::size_t k = segment_index(tau);
    const double span = params_[k + 1] - params_[k];
    if (span <= 0.0) return waypoints_[k];
    const double local = (tau - params_[k]) / span;
    if (local <= 0.0) return waypoints_[k];
    if (local >= 1.0) return waypoints_[k + 1];
    return lerp(waypoints_[k], waypoints_[k + 1], local);
}

double Polyline::param_of_point(const Point& p) const {
    if (waypoints_.size() < 2) return 0.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    double best_param = 0.0;
    for (std::size_t k = 0; k + 1 < waypoints_.size(); ++k) {
        const Segment s = segment(k);
        const Point d = s.b - s.a;
        const double len2 = norm2(d);
        const double t = len2 > 0.0 ? std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0) : 0.0;
        const double d2 = norm2(p - s.at(t));
        if (d2 < best_d2) {
            best_d2 = d2;
            best_param = params_[k] + t * (params_[k + 1] - params_[k]);
        }
    }
    return best_param;
}

Point Polyline::tangent_at(double tau) const {
    if (waypoints_.size() < 2 || length() == 0.0) throw DegeneratePath();
    tau = std::clamp(tau, 0.0, 1.0);
    const std::size_t n = waypoints_.size();
    const auto unit = [&](std::size_t k) { return normalized(waypoints_[k + 1] - waypoints_[k]); };
    const auto forward = [&](std::size_t k) -> std::optional<Point> {
        for (; k + 1 < n; ++k)
            if (waypoints_[k + 1] != waypoints_[k]) return unit(k);
        return std::nullopt;
    };
    const auto backward = [&](std::size_t k) -> std::optional<Point> {  // segments ending at or before knot k
        for (; k > 0; --k)
            if (waypoints_[k] != waypoints_[k - 1]) return unit(k - 1);
        return std::nullopt;
    };

    std::size_t k = segment_index(tau);
    std::optional<std::size_t> knot;
    if (k > 0 && std::abs(tau - params_[k]) <= kTieTolerance) knot = k;
    else if (k + 2 < n && std::abs(tau - params_[k + 1]) <= kTieTolerance) knot = k + 1;

    if (knot) {
        const auto before = backward(*knot);
        const auto after = forward(*knot);
        if (before && after) {
            const Point sum = *before + *after;
            if (norm(sum) > 1e-12) return normalized(sum);
            return *after;
        }
        if (before) return *before;
        if (after) return *after;
    }
    if (waypoints_[k + 1] != waypoints_[k]) return unit(k);
    if (const auto f = forward(k)) return *f;
    if (const auto b = backward(k)) return *b;
    throw DegeneratePath();
}

Point Polyline::normal_at(double tau) const { return perp(tangent_at(tau)); }

std::vector<LineHit> line_intersections(const Polyline& path, const Point& origin, const Point& dir) {
    std::vector<LineHit> hits;
    const auto& w = path.waypoints();
    const auto& params = path.params();
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        const double sa = cross(dir, w[k] - origin);
        const double sb = cross(dir, w[k + 1] - origin);
        double t;
        if (sa == 0.0 && sb == 0.0) {
            t = 0.5;
        } else if ((sa <= 0.0 && sb >= 0.0) || (sa >= 0.0 && sb <= 0.0)) {
            t = sa / (sa - sb);
        } else {
            continue;
        }
        const double param = params[k] + t * (params[k + 1] - params[k]);
        if (!hits.empty() && std::abs(hits.back().param - param) <= kTieTolerance) continue;
        hits.push_back({param, lerp(w[k], w[k + 1], t)});
    }
    return hits;
}

double polyline_polygon_distance(const Polyline& path, const ConvexPolygon& poly, double* param_out) {
    double best = std::numeric_limits<double>::infinity();
    double best_param = 0.0;
    const auto& params = path.params();
    if (path.size() == 1) {
        best = point_polygon_distance(path.front(), poly);
    }
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto c = segment_polygon_closest(path.segment(k), poly);
        if (c.distance < best) {
            best = c.distance;
            best_param = params[k] + c.t * (params[k + 1] - params[k]);
        }
    }
    if (param_out != nullptr) *param_out = best_param;
    return best;
}

}  // namespace pathset
