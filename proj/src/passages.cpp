#include "pathset/passages.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "pathset/errors.hpp"

namespace pathset {

namespace {

// Offset used by the free-space test at a translated segment's origin vertex.
constexpr double kTranslateProbe = 10.0 * kEps;

std::vector<const ConvexPolygon*> sorted_obstacles(const Scene& scene, const std::vector<ConvexPolygon>& walls) {
    std::vector<const ConvexPolygon*> out;
    out.reserve(scene.obstacles.size() + walls.size());
    for (const auto& w : walls) out.push_back(&w);
    for (const auto& o : scene.obstacles) out.push_back(&o);
    std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->id() < b->id(); });
    return out;
}

bool occluded(const Passage& p, const std::vector<const ConvexPolygon*>& all) {
    const Box sb = Box::of(p.segment).expanded(kEps);
    for (const auto* k : all) {
        if (k->id() == p.first || k->id() == p.second) continue;
        if (!sb.overlaps(k->bounds())) continue;
        if (segment_intersects_polygon(p.segment, *k)) return true;
    }
    return false;
}

bool disc_blocked(const Passage& p, const std::vector<const ConvexPolygon*>& all) {
    for (const auto* k : all) {
        if (k->id() == p.first || k->id() == p.second) continue;
        if (disc_intersects_polygon(p.center, p.radius, *k)) return true;
    }
    return false;
}

std::optional<Passage> passage_for(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (is_wall(a.id()) && is_wall(b.id())) return std::nullopt;
    try {
        return make_passage(a, b);
    } catch (const OverlappingObstacles&) {
        // An obstacle flush against the boundary leaves no gap to pass through.
        if (is_wall(a.id()) || is_wall(b.id())) return std::nullopt;
        throw;
    }
}

}  // namespace

std::string to_string(CheckMode m) { return m == CheckMode::Pure ? "pure" : "ext"; }

CheckMode check_mode_from_string(const std::string& s) {
    if (s == "pure") return CheckMode::Pure;
    if (s == "ext" || s == "extended") return CheckMode::Extended;
    throw InvalidArgument("unknown check mode '" + s + "' (expected pure|ext)");
}

Passage make_passage(const ConvexPolygon& a, const ConvexPolygon& b) {
    const ConvexPolygon& lo = a.id() <= b.id() ? a : b;
    const ConvexPolygon& hi = a.id() <= b.id() ? b : a;
    const ClosestPair cp = closest_points(lo, hi);
    Passage p;
    p.first = lo.id();
    p.second = hi.id();
    p.segment = {cp.p, cp.q};
    p.width = cp.distance;
    p.center = p.segment.midpoint();
    p.radius = p.width / 2.0;
    return p;
}

std::optional<std::size_t> PassageMap::find(int first, int second) const {
    if (first > second) std::swap(first, second);
    for (std::size_t i = 0; i < passages.size(); ++i)
        if (passages[i].first == first && passages[i].second == second) return i;
    return std::nullopt;
}

kernels::SegmentSoA PassageMap::soa() const {
    kernels::SegmentSoA s;
    for (const auto& p : passages) s.push(p.segment);
    return s;
}

std::vector<std::pair<int, int>> enumerate_generic(const Scene& scene) {
    std::vector<int> ids;
    for (const auto& o : scene.obstacles) ids.push_back(o.id());
    std::sort(ids.begin(), ids.end());
    std::vector<std::pair<int, int>> out;
    out.reserve(ids.size() * (ids.size() > 0 ? ids.size() - 1 : 0) / 2);
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) out.emplace_back(ids[i], ids[j]);
    return out;
}

bool pure_visibility_valid(int i, int j, const Scene& scene) {
    const auto walls = scene.walls_as_obstacles ? scene.walls() : std::vector<ConvexPolygon>{};
    const auto all = sorted_obstacles(scene, walls);
    const auto lookup = [&](int id) -> const ConvexPolygon& {
        for (const auto* o : all)
            if (o->id() == id) return *o;
        throw InvalidArgument("no obstacle with id " + std::to_string(id));
    };
    const auto p = passage_for(lookup(i), lookup(j));
    return p && !occluded(*p, all);
}

bool extended_visibility_valid(int i, int j, const Scene& scene) {
    const auto walls = scene.walls_as_obstacles ? scene.walls() : std::vector<ConvexPolygon>{};
    const auto all = sorted_obstacles(scene, walls);
    const auto lookup = [&](int id) -> const ConvexPolygon& {
        for (const auto* o : all)
            if (o->id() == id) return *o;
        throw InvalidArgument("no obstacle with id " + std::to_string(id));
    };
    const auto p = passage_for(lookup(i), lookup(j));
    return p && !occluded(*p, all) && !disc_blocked(*p, all);
}

PassageMap detect_passages(const Scene& scene, CheckMode mode, const DetectOptions& options) {
    const bool with_walls = options.include_walls.value_or(scene.walls_as_obstacles);
    const auto walls = with_walls ? scene.walls() : std::vector<ConvexPolygon>{};
    const auto all = sorted_obstacles(scene, walls);

    PassageMap map;
    map.mode = mode;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            auto p = passage_for(*all[i], *all[j]);
            if (!p || occluded(*p, all)) continue;
            if (mode == CheckMode::Extended && disc_blocked(*p, all)) {
                const bool encloses = std::any_of(options.preserve_points.begin(), options.preserve_points.end(),
                                                  [&](const Point& q) { return distance(q, p->center) <= p->radius; });
                if (!encloses) continue;
                p->preserved = true;
            }
            map.passages.push_back(*p);
        }
    }
    return map;
}

PassageMap detect_passages_3d(const Scene& scene, CheckMode mode) {
    std::vector<double> heights;
    for (const auto& o : scene.obstacles) heights.push_back(o.height());
    std::sort(heights.begin(), heights.end());
    heights.erase(std::unique(heights.begin(), heights.end()), heights.end());

    PassageMap out;
    out.mode = mode;
    std::map<std::pair<int, int>, Passage> merged;
    std::vector<std::vector<std::pair<int, int>>> per_interval;
    for (std::size_t m = 0; m < heights.size(); ++m) {
        const double z_low = m == 0 ? 0.0 : heights[m - 1];
        Scene slice = scene;
        slice.dimension = Dimension::Planar;
        slice.obstacles.clear();
        for (const auto& o : scene.obstacles)
            if (o.height() > z_low) slice.obstacles.push_back(o);
        const PassageMap layer = detect_passages(slice, mode);
        std::vector<std::pair<int, int>> keys;
        for (const auto& p : layer.passages) {
            merged.emplace(p.key(), p);
            keys.push_back(p.key());
        }
        per_interval.push_back(std::move(keys));
        out.height_intervals.push_back({z_low, heights[m], {}});
    }
    std::map<std::pair<int, int>, std::size_t> index;
    for (const auto& [key, p] : merged) {
        index[key] = out.passages.size();
        out.passages.push_back(p);
    }
    for (std::size_t m = 0; m < per_interval.size(); ++m)
        for (const auto& key : per_interval[m]) out.height_intervals[m].passages.push_back(index.at(key));
    return out;
}

std::vector<TranslatedSegment> translated_segments(const Passage& passage, std::size_t parent_index,
                                                   const Scene& scene, double d_min, Side side) {
    if (!(d_min > 0.0)) throw InvalidArgument("d_min must be positive");
    if (!(passage.width > 0.0)) throw InvalidArgument("passage has zero width");
    const Point u = normalized(passage.segment.b - passage.segment.a);
    const Point n_perp = perp(u);

    std::vector<const ConvexPolygon*> blockers;
    for (const auto& o : scene.obstacles) blockers.push_back(&o);

    std::vector<TranslatedSegment> out;
    for (int which = 0; which < 2; ++which) {
        if ((which == 0 && side == Side::Second) || (which == 1 && side == Side::First)) continue;
        const int id = which == 0 ? passage.first : passage.second;
        if (is_wall(id)) continue;
        const ConvexPolygon& obstacle = scene.obstacle_by_id(id);
        const Point dir = which == 0 ? u : -u;
        const Point end = which == 0 ? passage.segment.a : passage.segment.b;

        std::vector<Point> candidates = obstacle.vertices();
        std::sort(candidates.begin(), candidates.end(), [&](const Point& a, const Point& b) {
            const double da = std::abs(dot(a - end, n_perp));
            const double db = std::abs(dot(b - end, n_perp));
            if (da != db) return da < db;
            return lex_less(a, b);
        });

        std::vector<Point> kept{end};
        for (const Point& v : candidates) {
            const Point probe = v + dir * kTranslateProbe;
            if (!scene.point_free(probe)) continue;
            const bool crowded = std::any_of(kept.begin(), kept.end(), [&](const Point& k) {
                return std::abs(dot(v - k, n_perp)) < d_min;
            });
            if (crowded) continue;

            // March the ray to the first obstacle or the workspace boundary.
            double t_far = std::numeric_limits<double>::infinity();
            if (dir.x > 0.0) t_far = std::min(t_far, (scene.width - v.x) / dir.x);
            if (dir.x < 0.0) t_far = std::min(t_far, -v.x / dir.x);
            if (dir.y > 0.0) t_far = std::min(t_far, (scene.height - v.y) / dir.y);
            if (dir.y < 0.0) t_far = std::min(t_far, -v.y / dir.y);
            for (const auto* b : blockers) {
                if (b->id() == id) continue;
                if (auto t = ray_polygon_entry(v, dir, *b)) t_far = std::min(t_far, *t);
            }
            if (!(t_far > 0.0) || !std::isfinite(t_far)) continue;
            kept.push_back(v);
            out.push_back({v, {v, v + dir * t_far}, parent_index, id});
        }
    }
    return out;
}

}  // namespace pathset
