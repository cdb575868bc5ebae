#include "pathset/transfer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "pathset/errors.hpp"
#include "pathset/kernels.hpp"
#include "pathset/rng.hpp"

namespace pathset {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

constexpr double kAnchorSpacing = 1e-9;

// Obstacles plus walls (when the scene counts them), addressable by id.
class ObstacleIndex {
public:
    explicit ObstacleIndex(const Scene& scene) {
        if (scene.walls_as_obstacles) walls_ = scene.walls();
        for (const auto& w : walls_) all_.push_back(&w);
        for (const auto& o : scene.obstacles) all_.push_back(&o);
    }
    ObstacleIndex(const ObstacleIndex&) = delete;

    const std::vector<const ConvexPolygon*>& all() const { return all_; }
    const ConvexPolygon* find(int id) const {
        for (const auto* o : all_)
            if (o->id() == id) return o;
        return nullptr;
    }

private:
    std::vector<ConvexPolygon> walls_;
    std::vector<const ConvexPolygon*> all_;
};

const LineHit* nearest_hit(const std::vector<LineHit>& hits, double eta, double window) {
    const LineHit* best = nullptr;
    for (const auto& h : hits) {
        const double gap = std::abs(h.param - eta);
        if (gap > window) continue;
        if (best == nullptr || gap < std::abs(best->param - eta)) best = &h;
    }
    return best;
}

void finish_chord(Chord& c) {
    const Point u = normalized(c.reference.b - c.reference.a);
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t k = 0; k < c.intersections.size(); ++k) {
        auto& ip = c.intersections[k];
        ip.coord = dot(ip.point - c.reference.a, u);
        if (ip.coord < c.intersections[lo].coord) lo = k;
        if (ip.coord > c.intersections[hi].coord) hi = k;
    }
    c.coord_min = c.intersections[lo].coord;
    c.coord_max = c.intersections[hi].coord;
    c.endpoints = {c.intersections[lo].point, c.intersections[hi].point};
    c.length = c.coord_max - c.coord_min;
}

Chord make_chord(const std::vector<Polyline>& paths, std::size_t pivot, const Segment& reference, double eta,
                 const TransferConfig& config, std::size_t index) {
    if (config.chord == ChordMethod::ViaNormal) {
        try {
            return chord_via_normal(paths, pivot, reference, eta, config.window, index);
        } catch (const MissingIntersection&) {
        }
    }
    try {
        return chord_on_passage(paths, pivot, reference, eta, config.window, index);
    } catch (const MissingIntersection& e) {
        throw InfeasiblePassage(e.what());
    }
}

// Near the path ends a member may never reach the reference line; such entries are left to verification.
std::optional<Chord> try_chord(const std::vector<Polyline>& paths, std::size_t pivot, const Segment& reference,
                               double eta, const TransferConfig& config, std::size_t index) {
    try {
        return make_chord(paths, pivot, reference, eta, config, index);
    } catch (const InfeasiblePassage&) {
        return std::nullopt;
    }
}

double default_delta(const std::vector<TraversalEntry>& traversal, double lambda) {
    double narrowest = kNoPassage;
    for (const auto& t : traversal) narrowest = std::min(narrowest, t.width);
    if (narrowest == kNoPassage) return std::max(0.1 * lambda, kEps);
    return std::clamp(0.1 * narrowest, kEps, std::max(kEps, narrowest / 2.0 - kEps));
}

// Crossings closer than `radius` to the first of their run act as one constraint: the narrowest.
std::vector<TraversalEntry> reference_entries(const std::vector<TraversalEntry>& traversal, double radius) {
    std::vector<TraversalEntry> out;
    std::size_t k = 0;
    while (k < traversal.size()) {
        std::size_t best = k;
        std::size_t m = k + 1;
        for (; m < traversal.size() && distance(traversal[m].point, traversal[k].point) <= radius; ++m)
            if (traversal[m].width < traversal[best].width) best = m;
        out.push_back(traversal[best]);
        k = m;
    }
    return out;
}

std::vector<int> colliding_obstacles(const Polyline& path, const Scene& scene) {
    std::vector<int> out;
    for (const auto& o : scene.obstacles) {
        const Box ob = o.bounds();
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            const Segment s = path.segment(k);
            if (!Box::of(s).expanded(kEps).overlaps(ob)) continue;
            if (segment_intersects_polygon(s, o)) {
                out.push_back(o.id());
                break;
            }
        }
    }
    return out;
}

}  // namespace

void Team::validate(const Scene& scene) const {
    if (starts.empty()) throw InvalidArgument("team is empty");
    if (starts.size() != goals.size()) throw InvalidArgument("team start and goal counts differ");
    for (const auto* list : {&starts, &goals})
        for (const auto& p : *list)
            if (!scene.point_free(p))
                throw InvalidEndpoint("team point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                      ") is not free");
}

std::size_t select_pivot(const std::vector<Point>& starts, const std::vector<Point>& goals) {
    if (starts.size() != goals.size()) throw InvalidArgument("team start and goal counts differ");
    std::size_t best = 0;
    double best_spread = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < starts.size(); ++i) {
        double spread = 0.0;
        for (std::size_t j = 0; j < starts.size(); ++j)
            spread = std::max({spread, distance(starts[i], starts[j]), distance(goals[i], goals[j])});
        if (spread < best_spread) {
            best_spread = spread;
            best = i;
        }
    }
    return best;
}

std::vector<TransferVectors> transfer_vectors(const Team& team, std::size_t pivot) {
    std::vector<TransferVectors> out;
    for (std::size_t i = 0; i < team.size(); ++i)
        out.push_back({team.starts[i] - team.starts[pivot], team.goals[i] - team.goals[pivot]});
    return out;
}

double transfer_radius(const Team& team, std::size_t pivot) {
    double lambda = 0.0;
    for (const auto& v : transfer_vectors(team, pivot)) lambda = std::max({lambda, norm(v.v0), norm(v.vd)});
    return lambda;
}

Polyline transfer_path(const Polyline& pivot, const Point& v0, const Point& vd) {
    const auto& w = pivot.waypoints();
    const auto& params = pivot.params();
    std::vector<Point> out(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double tau = params[k];
        out[k] = w[k] + v0 * (1.0 - tau) + vd * tau;
    }
    out.front() = w.front() + v0;
    out.back() = w.back() + vd;
    return Polyline(std::move(out), params);
}

NearbyObstacles nearby_obstacles(const Scene& scene, const Polyline& pivot, const std::vector<TraversalEntry>& traversal,
                                 double lambda) {
    const ObstacleIndex index(scene);
    std::set<int> members;
    for (const auto& t : traversal) {
        members.insert(t.first);
        members.insert(t.second);
    }
    NearbyObstacles out;
    out.lambda = lambda;
    std::set<int> near;
    for (const auto* o : index.all()) {
        if (polyline_polygon_distance(pivot, *o) > lambda) continue;
        near.insert(o->id());
        (members.count(o->id()) ? out.passage_obstacles : out.isolated_obstacles).push_back(o->id());
    }
    for (const auto& t : traversal)
        if (near.count(t.first) || near.count(t.second)) out.traversal.push_back(t);
    return out;
}

const ChordPoint& Chord::at(std::size_t path) const {
    for (const auto& ip : intersections)
        if (ip.path == path) return ip;
    throw InvalidArgument("chord has no point for path " + std::to_string(path));
}

Chord chord_on_passage(const std::vector<Polyline>& paths, std::size_t pivot, const Segment& reference, double eta_p,
                       double window, std::size_t passage_index) {
    Chord c;
    c.passage_index = passage_index;
    c.pivot = pivot;
    c.reference = reference;
    const Point dir = reference.b - reference.a;
    for (std::size_t j = 0; j < paths.size(); ++j) {
        const auto hits = line_intersections(paths[j], reference.a, dir);
        const LineHit* h = nearest_hit(hits, eta_p, window);
        if (h == nullptr)
            throw MissingIntersection("path " + std::to_string(j) + " does not cross the passage line near " +
                                      std::to_string(eta_p));
        c.intersections.push_back({j, h->param, h->point, 0.0});
    }
    finish_chord(c);
    return c;
}

Chord chord_via_normal(const std::vector<Polyline>& paths, std::size_t pivot, const Segment& reference, double eta_p,
                       double window, std::size_t passage_index) {
    Chord c;
    c.passage_index = passage_index;
    c.pivot = pivot;
    c.reference = reference;
    const Point center = paths[pivot].eval(eta_p);
    const Point n = paths[pivot].normal_at(eta_p);
    Point u = normalized(reference.b - reference.a);
    if (dot(u, n) < 0.0) u = -u;
    for (std::size_t j = 0; j < paths.size(); ++j) {
        if (j == pivot) {
            c.intersections.push_back({j, eta_p, center, 0.0});
            continue;
        }
        const auto hits = line_intersections(paths[j], center, n);
        const LineHit* h = nearest_hit(hits, eta_p, window);
        if (h == nullptr)
            throw MissingIntersection("path " + std::to_string(j) + " does not cross the normal line near " +
                                      std::to_string(eta_p));
        c.intersections.push_back({j, h->param, center + u * dot(h->point - center, n), 0.0});
    }
    finish_chord(c);
    return c;
}

Placement place_reference_point(const Chord& chord, double delta) {
    if (!(delta >= 0.0)) throw InvalidArgument("clearance must be non-negative");
    const double width = chord.reference.length();
    const Point u = normalized(chord.reference.b - chord.reference.a);
    const ChordPoint& p = chord.at(chord.pivot);
    Placement out;
    if (chord.coord_min >= delta && chord.coord_max <= width - delta) {
        out.anchor = p.point;
        return out;
    }
    if (chord.length <= width - 2.0 * delta) {
        const double shift = chord.coord_min < delta ? delta - chord.coord_min : (width - delta) - chord.coord_max;
        out.kind = PlacementCase::Translated;
        out.anchor = p.point + u * shift;
        return out;
    }
    if (width <= 2.0 * delta)
        throw PassageTooNarrow("passage of width " + std::to_string(width) + " cannot keep clearance " +
                               std::to_string(delta));
    out.kind = PlacementCase::Scaled;
    out.ratio = (width - 2.0 * delta) / chord.length;
    const double outside_low = delta - chord.coord_min;
    const double outside_high = chord.coord_max - (width - delta);
    const double coord = outside_low >= outside_high ? delta + out.ratio * (p.coord - chord.coord_min)
                                                     : (width - delta) + out.ratio * (p.coord - chord.coord_max);
    out.anchor = chord.reference.a + u * coord;
    return out;
}

double compression_ratio(const Chord& chord, double delta) {
    const double width = chord.reference.length();
    const double c = chord.at(chord.pivot).coord;
    double r = 1.0;
    if (chord.coord_min < delta && c > chord.coord_min) r = std::min(r, std::max(0.0, c - delta) / (c - chord.coord_min));
    if (chord.coord_max > width - delta && chord.coord_max > c)
        r = std::min(r, std::max(0.0, width - delta - c) / (chord.coord_max - c));
    return r;
}

Polyline reposition_path(const Polyline& path, std::vector<Anchor> anchors) {
    if (path.size() < 2) return path;
    std::stable_sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) { return a.eta < b.eta; });
    // Knots carrying a displacement: start, anchors, end.
    std::vector<double> etas{0.0};
    std::vector<Point> shifts{Point{}};
    std::vector<Point> targets{path.front()};
    for (const auto& a : anchors) {
        if (a.eta - etas.back() < kAnchorSpacing || 1.0 - a.eta < kAnchorSpacing) continue;
        etas.push_back(a.eta);
        shifts.push_back(a.point - path.eval(a.eta));
        targets.push_back(a.point);
    }
    etas.push_back(1.0);
    shifts.push_back(Point{});
    targets.push_back(path.back());
    if (etas.size() == 2) return path;

    const auto shift_at = [&](double tau) {
        const auto it = std::upper_bound(etas.begin(), etas.end(), tau);
        const std::size_t k = std::min<std::size_t>(it == etas.begin() ? 0 : it - etas.begin() - 1, etas.size() - 2);
        const double t = (tau - etas[k]) / (etas[k + 1] - etas[k]);
        return shifts[k] * (1.0 - t) + shifts[k + 1] * t;
    };

    std::vector<Point> points;
    std::vector<double> params;
    const auto& w = path.waypoints();
    const auto& knots = path.params();
    std::size_t a = 0;
    const auto push = [&](double tau, const Point& p) {
        if (!params.empty() && tau - params.back() < kAnchorSpacing) {
            points.back() = p;
            return;
        }
        params.push_back(tau);
        points.push_back(p);
    };
    for (std::size_t k = 0; k < w.size(); ++k) {
        while (a < etas.size() && etas[a] < knots[k]) {
            push(etas[a], targets[a]);
            ++a;
        }
        if (a < etas.size() && std::abs(etas[a] - knots[k]) < kAnchorSpacing) {
            push(etas[a], targets[a]);
            ++a;
            continue;
        }
        push(knots[k], w[k] + shift_at(knots[k]));
    }
    params.front() = 0.0;
    points.front() = path.front();
    if (params.back() != 1.0) {
        params.back() = 1.0;
    }
    points.back() = path.back();
    return Polyline(std::move(points), std::move(params));
}

std::optional<Anchor> isolated_push(const Polyline& pivot, const std::vector<Polyline>& transferred,
                                    const ConvexPolygon& obstacle, double delta) {
    double tau = 0.0;
    const double d = polyline_polygon_distance(pivot, obstacle, &tau);
    if (tau < kAnchorSpacing || tau > 1.0 - kAnchorSpacing) return std::nullopt;
    const Point q = pivot.eval(tau);
    const Point away = q - closest_point_on_polygon(q, obstacle);
    if (norm(away) < 1e-12) return std::nullopt;
    const Point n = normalized(away);

    bool involved = false;
    double reach = 0.0;
    for (const auto& path : transferred) {
        const Point at = path.eval(tau);
        reach = std::min(reach, dot(at - q, n));
        if (segment_intersects_polygon({q, at}, obstacle)) involved = true;
        if (!involved && polyline_polygon_distance(path, obstacle) < delta) involved = true;
    }
    if (!involved) return std::nullopt;
    const double push = delta - (d + reach);
    if (push <= 0.0) return std::nullopt;
    return Anchor{tau, q + n * push};
}

bool path_collision_free(const Polyline& path, const Scene& scene) {
    for (const auto& p : path.waypoints())
        if (!scene.in_bounds(p)) return false;
    return colliding_obstacles(path, scene).empty();
}

bool strong_homotopic_like(const Polyline& a, const Polyline& b, const Scene& scene, std::size_t resolution) {
    std::vector<double> taus;
    taus.reserve(resolution + 1 + a.size() + b.size());
    for (std::size_t k = 0; k <= resolution; ++k) taus.push_back(static_cast<double>(k) / std::max<std::size_t>(resolution, 1));
    taus.insert(taus.end(), a.params().begin(), a.params().end());
    taus.insert(taus.end(), b.params().begin(), b.params().end());
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

    kernels::BoxSoA boxes;
    for (const auto& o : scene.obstacles) boxes.push(o.bounds());
    kernels::IndexList hits;
    for (const double tau : taus) {
        const Segment s{a.eval(tau), b.eval(tau)};
        hits.clear();
        kernels::boxes_overlapping(boxes, Box::of(s).expanded(kEps), hits);
        for (const auto i : hits)
            if (segment_intersects_polygon(s, scene.obstacles[i])) return false;
    }
    return true;
}

bool verify_path_set(const PathSet& set, const Scene& scene, std::size_t resolution) {
    for (const auto& p : set.paths)
        if (!path_collision_free(p, scene)) return false;
    for (std::size_t i = 0; i < set.paths.size(); ++i)
        for (std::size_t j = i + 1; j < set.paths.size(); ++j)
            if (!strong_homotopic_like(set.paths[i], set.paths[j], scene, resolution)) return false;
    return true;
}

PathSet coordinated_deform(const Scene& scene, const Polyline& pivot, std::size_t pivot_index, const Team& team,
                           const PassageMap& passages, const std::vector<TraversalEntry>& traversal, double delta,
                           const TransferConfig& config) {
    const std::size_t K = team.size();
    std::vector<Polyline> transferred(K);
    const auto vectors = transfer_vectors(team, pivot_index);
    for (std::size_t j = 0; j < K; ++j)
        transferred[j] = j == pivot_index ? pivot : transfer_path(pivot, vectors[j].v0, vectors[j].vd);

    PathSet set;
    set.pivot = pivot_index;
    set.traversal = traversal;
    set.delta = delta;

    std::vector<std::vector<Anchor>> anchors(K);
    for (const auto& entry : reference_entries(traversal, transfer_radius(team, pivot_index))) {
        const Passage& passage = passages.passages[entry.passage];
        const auto built = try_chord(transferred, pivot_index, passage.segment, entry.param, config, entry.passage);
        if (!built) continue;
        const Chord& chord = *built;
        if (chord.length > passage.width - 2.0 * delta && passage.width <= 2.0 * delta)
            throw InfeasiblePassage("passage " + std::to_string(passage.first) + "-" + std::to_string(passage.second) +
                                    " is narrower than twice the clearance");
        const double r = compression_ratio(chord, delta);
        if (r >= 1.0) continue;
        const Point c = chord.at(pivot_index).point;
        for (const auto& ip : chord.intersections)
            if (ip.path != pivot_index) anchors[ip.path].push_back({ip.eta, c + (ip.point - c) * r});
        set.chords.push_back({c + (chord.endpoints.a - c) * r, c + (chord.endpoints.b - c) * r});
    }

    const auto deform = [&] {
        set.paths.assign(K, Polyline{});
        for (std::size_t j = 0; j < K; ++j)
            set.paths[j] = j == pivot_index ? pivot : reposition_path(transferred[j], anchors[j]);
    };
    deform();
    if (verify_path_set(set, scene, config.homotopy_resolution)) return set;
    if (!config.densify) throw InfeasiblePassage("deformed paths collide and densification is disabled");

    // One extra tier of reference points on translated passage segments at the obstacles hit.
    std::map<std::size_t, Side> requests;
    for (std::size_t j = 0; j < K; ++j) {
        for (const int id : colliding_obstacles(set.paths[j], scene)) {
            for (std::size_t e = 0; e < traversal.size(); ++e) {
                const Passage& p = passages.passages[traversal[e].passage];
                const Side side = id == p.first ? Side::First : id == p.second ? Side::Second : Side::Both;
                if (id != p.first && id != p.second) continue;
                auto [it, fresh] = requests.emplace(e, side);
                if (!fresh && it->second != side) it->second = Side::Both;
            }
        }
    }
    const double d_min = std::max(delta, kEps);
    for (const auto& [e, side] : requests) {
        const TraversalEntry& entry = traversal[e];
        const Passage& passage = passages.passages[entry.passage];
        for (const auto& ts : translated_segments(passage, entry.passage, scene, d_min, side)) {
            const auto hits = line_intersections(pivot, ts.segment.a, ts.segment.b - ts.segment.a);
            const LineHit* h = nearest_hit(hits, entry.param, config.window);
            if (h == nullptr) continue;
            Chord chord;
            try {
                chord = make_chord(transferred, pivot_index, ts.segment, h->param, config, entry.passage);
            } catch (const InfeasiblePassage&) {
                continue;
            }
            const ChordPoint& pc = chord.at(pivot_index);
            if (pc.coord <= delta || chord.coord_min >= delta) continue;
            const double r = (pc.coord - delta) / (pc.coord - chord.coord_min);
            for (const auto& ip : chord.intersections)
                if (ip.path != pivot_index && ip.coord < pc.coord)
                    anchors[ip.path].push_back({ip.eta, pc.point + (ip.point - pc.point) * r});
        }
    }
    deform();
    set.densified = true;
    if (!verify_path_set(set, scene, config.homotopy_resolution))
        throw InfeasiblePassage("deformed paths still collide after densification");
    return set;
}

PathSet generate_path_set(const Scene& scene, const Team& team, const PathSetConfig& config) {
    const auto t0 = Clock::now();
    team.validate(scene);
    const std::size_t p = select_pivot(team.starts, team.goals);

    std::optional<PassageMap> owned;
    if (config.planner.passages == nullptr) {
        DetectOptions opts;
        if (config.planner.check == CheckMode::Extended && config.planner.preserve_terminal_passages)
            opts.preserve_points = {team.starts[p], team.goals[p]};
        owned = detect_passages(scene, config.planner.check, opts);
    }
    const PassageMap& map = config.planner.passages != nullptr ? *config.planner.passages : *owned;
    PlannerConfig pc = config.planner;
    pc.passages = &map;
    const PlanResult plan = paopp_plan(scene, team.starts[p], team.goals[p], pc);
    const double planning_ms = elapsed_ms(t0);

    const double lambda = transfer_radius(team, p);
    const NearbyObstacles near = nearby_obstacles(scene, plan.path, plan.traversal, lambda);
    const double delta = config.transfer.delta > 0.0 ? config.transfer.delta : default_delta(near.traversal, lambda);

    std::vector<Polyline> transferred(team.size());
    const auto vectors = transfer_vectors(team, p);
    for (std::size_t j = 0; j < team.size(); ++j)
        transferred[j] = j == p ? plan.path : transfer_path(plan.path, vectors[j].v0, vectors[j].vd);

    std::vector<Anchor> anchors;
    for (const auto& entry : reference_entries(near.traversal, lambda)) {
        const Passage& passage = map.passages[entry.passage];
        const auto chord = try_chord(transferred, p, passage.segment, entry.param, config.transfer, entry.passage);
        if (!chord) continue;
        try {
            anchors.push_back({entry.param, place_reference_point(*chord, delta).anchor});
        } catch (const PassageTooNarrow& e) {
            throw InfeasiblePassage(e.what());
        }
    }
    const ObstacleIndex index(scene);
    for (const int id : near.isolated_obstacles)
        if (auto a = isolated_push(plan.path, transferred, *index.find(id), delta)) anchors.push_back(*a);

    Polyline pivot = reposition_path(plan.path, anchors);
    // Pin the pivot where it collides and push it where a member hits an obstacle.
    for (int round = 0; round < 8; ++round) {
        std::vector<Anchor> extra;
        for (const int id : colliding_obstacles(pivot, scene)) {
            double tau = 0.0;
            polyline_polygon_distance(plan.path, *index.find(id), &tau);
            extra.push_back({tau, plan.path.eval(tau)});
        }
        for (std::size_t j = 0; j < team.size(); ++j)
            transferred[j] = j == p ? pivot : transfer_path(pivot, vectors[j].v0, vectors[j].vd);
        for (const auto* o : index.all())
            if (auto a = isolated_push(pivot, transferred, *o, delta)) extra.push_back(*a);
        if (extra.empty()) break;
        for (const auto& a : extra) {
            auto same = std::find_if(anchors.begin(), anchors.end(),
                                     [&](const Anchor& b) { return std::abs(a.eta - b.eta) < kAnchorSpacing; });
            if (same != anchors.end()) *same = a;
            else anchors.push_back(a);
        }
        pivot = reposition_path(plan.path, anchors);
    }
    PathSet set = coordinated_deform(scene, pivot, p, team, map, near.traversal, delta, config.transfer);
    set.planning_time_ms = planning_ms;
    set.wall_time_ms = elapsed_ms(t0);
    return set;
}

PathSet separately_plan(const Scene& scene, const Team& team, const PlannerConfig& config) {
    const auto t0 = Clock::now();
    team.validate(scene);
    const std::size_t p = select_pivot(team.starts, team.goals);

    std::optional<PassageMap> owned;
    if (config.passages == nullptr) {
        DetectOptions opts;
        if (config.check == CheckMode::Extended && config.preserve_terminal_passages)
            opts.preserve_points = {team.starts[p], team.goals[p]};
        owned = detect_passages(scene, config.check, opts);
    }
    const PassageMap& map = config.passages != nullptr ? *config.passages : *owned;
    PlannerConfig pc = config;
    pc.passages = &map;
    const PlanResult pivot = paopp_plan(scene, team.starts[p], team.goals[p], pc);

    PathSet set;
    set.pivot = p;
    set.traversal = pivot.traversal;
    set.paths.resize(team.size());
    set.paths[p] = pivot.path;
    set.planning_time_ms = elapsed_ms(t0);

    const double lambda = transfer_radius(team, p);
    const Polyline& guide = pivot.path;
    kernels::BoxSoA boxes;
    for (const auto& o : scene.obstacles) boxes.push(o.bounds());
    kernels::IndexList hits;
    pc.sample_filter = [&](const Point& s) {
        const Point foot = guide.eval(guide.param_of_point(s));
        if (distance(s, foot) > lambda) return false;
        const Segment link{s, foot};
        hits.clear();
        kernels::boxes_overlapping(boxes, Box::of(link).expanded(kEps), hits);
        for (const auto i : hits)
            if (segment_intersects_polygon(link, scene.obstacles[i])) return false;
        return true;
    };
    for (std::size_t j = 0; j < team.size(); ++j) {
        if (j == p) continue;
        pc.seed = derive_seed(config.seed, {j});
        set.paths[j] = paopp_plan(scene, team.starts[j], team.goals[j], pc).path;
    }
    set.wall_time_ms = elapsed_ms(t0);
    return set;
}

}  // namespace pathset
