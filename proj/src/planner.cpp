#include "pathset/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "pathset/errors.hpp"
#include "pathset/rng.hpp"

namespace pathset {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Collision queries against the obstacles (walls never block: every sample lies inside
// the workspace, which is convex).
class CollisionChecker {
public:
    CollisionChecker(const Scene& scene, double clearance) : scene_(scene), clearance_(clearance) {
        for (const auto& o : scene.obstacles) boxes_.push(o.bounds());
    }

    bool point_ok(const Point& p) {
        if (!scene_.in_bounds(p)) return false;
        const Box q = Box{p.x, p.y, p.x, p.y}.expanded(clearance_ + kEps);
        hits_.clear();
        kernels::boxes_overlapping(boxes_, q, hits_);
        for (const auto i : hits_) {
            const ConvexPolygon& o = scene_.obstacles[i];
            if (o.contains(p)) return false;
            if (clearance_ > 0.0 && point_polygon_distance(p, o) < clearance_ - kEps) return false;
        }
        return true;
    }

    bool edge_ok(const Point& a, const Point& b) {
        const Segment s{a, b};
        hits_.clear();
        kernels::boxes_overlapping(boxes_, Box::of(s).expanded(clearance_ + kEps), hits_);
        for (const auto i : hits_) {
            const ConvexPolygon& o = scene_.obstacles[i];
            if (clearance_ > 0.0) {
                if (segment_polygon_distance(s, o) < clearance_ - kEps) return false;
            } else if (segment_intersects_polygon(s, o)) {
                return false;
            }
        }
        return true;
    }

private:
    const Scene& scene_;
    double clearance_;
    kernels::BoxSoA boxes_;
    kernels::IndexList hits_;
};

std::vector<TraversalEntry> traversal_along(const Polyline& path, const PassageMap& map,
                                            const kernels::SegmentSoA& soa, kernels::IndexList& scratch) {
    std::vector<TraversalEntry> out;
    const auto& params = path.params();
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const Segment e = path.segment(k);
        if (e.a == e.b) continue;
        for (const auto& c : edge_crossings(e, map, soa, scratch)) {
            const Passage& p = map.passages[c.passage];
            out.push_back({c.passage, p.first, p.second, p.width, params[k] + c.t * (params[k + 1] - params[k]),
                           c.point});
        }
    }
    return out;
}

}  // namespace

std::string to_string(CostKind k) { return k == CostKind::Ratio ? "ratio" : "weighted"; }

void CostConfig::validate() const {
    if (kind == CostKind::Weighted && !(k_p > 0.0)) throw InvalidArgument("k_P must be positive for weighted cost");
    if (!(open_width >= 0.0)) throw InvalidArgument("open width must be non-negative");
}

double CostConfig::evaluate(double length, double min_width) const {
    if (kind == CostKind::Ratio) return min_width == kNoPassage ? length : length / min_width;
    return length - k_p * (min_width == kNoPassage ? open_width : min_width);
}

std::vector<EdgeCrossing> edge_crossings(const Segment& edge, const PassageMap& map) {
    kernels::IndexList scratch;
    return edge_crossings(edge, map, map.soa(), scratch);
}

std::vector<EdgeCrossing> edge_crossings(const Segment& edge, const PassageMap& map, const kernels::SegmentSoA& soa,
                                         kernels::IndexList& scratch) {
    scratch.clear();
    kernels::segments_crossing(soa, edge, scratch);
    std::vector<EdgeCrossing> out;
    out.reserve(scratch.size());
    for (const auto i : scratch) {
        const auto x = segments_intersection(edge, map.passages[i].segment);
        if (x)
            out.push_back({i, x->t_first, x->point});
        else
            out.push_back({i, 0.0, edge.a});
    }
    std::sort(out.begin(), out.end(), [](const EdgeCrossing& a, const EdgeCrossing& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.passage < b.passage;
    });
    return out;
}

Tree::Tree(const PassageMap& passages, CostConfig cost) : passages_(passages), cost_(cost), soa_(passages.soa()) {}

int Tree::add_root(const Point& p) {
    const int id = add_node(p);
    PlannerNode& n = nodes_.back();
    n.length = 0.0;
    n.f_p = kNoPassage;
    n.f_cur = kNoPassage;
    n.f = cost_.evaluate(0.0, kNoPassage);
    return id;
}

int Tree::add_node(const Point& p) {
    PlannerNode n;
    n.position = p;
    nodes_.push_back(n);
    children_.emplace_back();
    positions_.push(p);
    return static_cast<int>(nodes_.size() - 1);
}

double Tree::edge_width(const Point& a, const Point& b) {
    if (a == b) return kNoPassage;
    scratch_.clear();
    kernels::segments_crossing(soa_, Segment{a, b}, scratch_);
    double w = kNoPassage;
    for (const auto i : scratch_) w = std::min(w, passages_.passages[i].width);
    return w;
}

bool Tree::is_ancestor(int candidate, int node) const {
    for (int cur = node; cur >= 0; cur = nodes_[static_cast<std::size_t>(cur)].parent)
        if (cur == candidate) return true;
    return false;
}

bool Tree::update_node_cost(int near, int node) {
    if (near == node) return false;
    const PlannerNode& from = nodes_[static_cast<std::size_t>(near)];
    if (!std::isfinite(from.f)) return false;
    PlannerNode& to = nodes_[static_cast<std::size_t>(node)];

    const double f_cur = edge_width(from.position, to.position);
    const double length = from.length + distance(from.position, to.position);
    const double f_p = std::min(from.f_p, f_cur);
    const double f = cost_.evaluate(length, f_p);
    if (!(f < to.f)) return false;
    if (is_ancestor(node, near)) return false;

    if (to.parent >= 0) {
        auto& siblings = children_[static_cast<std::size_t>(to.parent)];
        siblings.erase(std::find(siblings.begin(), siblings.end(), node));
    }
    to.parent = near;
    to.length = length;
    to.f_p = f_p;
    to.f_cur = f_cur;
    to.f = f;
    children_[static_cast<std::size_t>(near)].push_back(node);
    refresh_subtree(node);
    return true;
}

void Tree::refresh_subtree(int node) {
    std::vector<int> stack(children_[static_cast<std::size_t>(node)].begin(),
                           children_[static_cast<std::size_t>(node)].end());
    while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        PlannerNode& n = nodes_[static_cast<std::size_t>(c)];
        const PlannerNode& p = nodes_[static_cast<std::size_t>(n.parent)];
        n.length = p.length + distance(p.position, n.position);
        n.f_p = std::min(p.f_p, n.f_cur);
        n.f = cost_.evaluate(n.length, n.f_p);
        for (const int g : children_[static_cast<std::size_t>(c)]) stack.push_back(g);
    }
}

std::vector<int> Tree::chain(int node) const {
    std::vector<int> out;
    for (int cur = node; cur >= 0; cur = nodes_[static_cast<std::size_t>(cur)].parent) out.push_back(cur);
    std::reverse(out.begin(), out.end());
    return out;
}

double Tree::recomputed_cost(int node) const {
    const auto ids = chain(node);
    double length = 0.0;
    double f_p = kNoPassage;
    for (std::size_t k = 1; k < ids.size(); ++k) {
        const Segment e{nodes_[static_cast<std::size_t>(ids[k - 1])].position,
                        nodes_[static_cast<std::size_t>(ids[k])].position};
        length += e.length();
        for (const auto& p : passages_.passages)
            if (segments_intersection(e, p.segment)) f_p = std::min(f_p, p.width);
    }
    return cost_.evaluate(length, f_p);
}

double default_step(const Scene& scene) { return 2.0 * scene.diagonal() / std::hypot(50.0, 30.0); }

PlanResult paopp_plan(const Scene& scene, const Point& start, const Point& goal, const PlannerConfig& config) {
    const auto t0 = Clock::now();
    config.cost.validate();
    if (config.samples < 1) throw InvalidArgument("sample count must be at least 1");
    if (!(config.clearance >= 0.0)) throw InvalidArgument("clearance must be non-negative");
    if (!(config.goal_bias >= 0.0 && config.goal_bias <= 1.0)) throw InvalidArgument("goal bias must be in [0, 1]");
    for (const Point* p : {&start, &goal}) {
        if (!scene.in_bounds(*p)) throw InvalidEndpoint("endpoint outside the workspace");
        for (const auto& o : scene.obstacles)
            if (o.contains(*p)) throw InvalidEndpoint("endpoint inside obstacle " + std::to_string(o.id()));
    }
    if (distance(start, goal) <= kEps) throw InvalidEndpoint("start and goal coincide");

    std::optional<PassageMap> owned;
    if (config.passages == nullptr) {
        DetectOptions opts;
        if (config.check == CheckMode::Extended && config.preserve_terminal_passages)
            opts.preserve_points = {start, goal};
        owned = detect_passages(scene, config.check, opts);
    }
    const PassageMap& map = config.passages != nullptr ? *config.passages : *owned;
    const double detection_ms = elapsed_ms(t0);

    CostConfig cost = config.cost;
    if (cost.open_width == 0.0) cost.open_width = scene.diagonal();
    const double step = config.step > 0.0 ? config.step : default_step(scene);
    const double gamma = 2.0 * std::sqrt(1.5) * std::sqrt(scene.free_area() / M_PI);

    Tree tree(map, cost);
    tree.add_root(start);
    CollisionChecker checker(scene, config.clearance);
    Rng rng(config.seed);

    struct GoalCandidate {
        int node;
        double dist;
        double width;
    };
    std::vector<GoalCandidate> candidates;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<Point> best_path;

    kernels::IndexList near;
    std::vector<char> near_free;
    const std::size_t max_draws = 50 * config.samples + 1000;
    std::size_t samples = 0;
    std::size_t draws = 0;
    while (samples < config.samples) {
        if (config.time_budget_ms > 0.0 && elapsed_ms(t0) > config.time_budget_ms) break;
        if (++draws > max_draws) break;
        Point s;
        if (rng.uniform() < config.goal_bias) {
            s = goal;
        } else {
            const double x = rng.uniform(0.0, scene.width);
            s = Point{x, rng.uniform(0.0, scene.height)};
        }
        if (!checker.point_ok(s)) continue;
        if (config.sample_filter && !config.sample_filter(s)) continue;
        ++samples;

        const int nearest = static_cast<int>(kernels::nearest(tree.positions(), s));
        const Point from = tree.node(nearest).position;
        const double d = distance(from, s);
        if (d == 0.0) continue;
        const Point s_new = d <= step ? s : from + (s - from) * (step / d);
        if (s_new == from || !checker.edge_ok(from, s_new)) continue;

        const double n = static_cast<double>(tree.size());
        const double radius = std::min(gamma * std::sqrt(std::log(n) / n), 2.0 * step);
        near.clear();
        if (config.rewire) kernels::within_radius(tree.positions(), s_new, radius, near);
        const auto nearest_u = static_cast<std::uint32_t>(nearest);
        if (!std::binary_search(near.begin(), near.end(), nearest_u))
            near.insert(std::lower_bound(near.begin(), near.end(), nearest_u), nearest_u);

        const int id = tree.add_node(s_new);
        near_free.assign(near.size(), 0);
        for (std::size_t k = 0; k < near.size(); ++k) {
            const int x = static_cast<int>(near[k]);
            near_free[k] = x == nearest || checker.edge_ok(tree.node(x).position, s_new);
            if (near_free[k]) tree.update_node_cost(x, id);
        }
        for (std::size_t k = 0; k < near.size(); ++k) {
            const int x = static_cast<int>(near[k]);
            if (near_free[k] && x != tree.node(id).parent) tree.update_node_cost(id, x);
        }

        const double to_goal = distance(s_new, goal);
        if (to_goal <= step && (to_goal == 0.0 || checker.edge_ok(s_new, goal)))
            candidates.push_back({id, to_goal, tree.edge_width(s_new, goal)});
        for (const auto& c : candidates) {
            const PlannerNode& cn = tree.node(c.node);
            const double f = cost.evaluate(cn.length + c.dist, std::min(cn.f_p, c.width));
            if (f < best_cost) {
                best_cost = f;
                best_path.clear();
                for (const int i : tree.chain(c.node)) best_path.push_back(tree.node(i).position);
                if (c.dist > 0.0) best_path.push_back(goal);
            }
        }
        if (config.on_iteration) config.on_iteration(tree);
        if (config.stop_at_first_solution && !best_path.empty()) break;
    }
    if (best_path.empty()) throw NoPathFound("goal not connected after " + std::to_string(samples) + " samples");

    PlanResult r;
    r.path = Polyline(std::move(best_path));
    kernels::IndexList scratch;
    r.traversal = traversal_along(r.path, map, map.soa(), scratch);
    r.length = r.path.length();
    r.min_width = traversal_min_width(r.traversal);
    r.cost = cost.evaluate(r.length, r.min_width);
    r.samples_used = samples;
    r.tree_size = tree.size();
    r.passage_count = map.size();
    r.detection_time_ms = detection_ms;
    r.wall_time_ms = elapsed_ms(t0);
    return r;
}

McppResult mcpp_plan(const Scene& scene, const Point& start, const Point& goal, const McppConfig& config) {
    const auto t0 = Clock::now();
    if (!(config.mc_err > 0.0)) throw InvalidArgument("MC error must be positive");

    DetectOptions opts;
    opts.include_walls = false;
    const PassageMap pure = detect_passages(scene, CheckMode::Pure, opts);
    McppResult out;
    if (!pure.passages.empty()) {
        out.mc_lower_bound = std::numeric_limits<double>::infinity();
        for (const auto& p : pure.passages) {
            out.mc_lower_bound = std::min(out.mc_lower_bound, p.width / 2.0);
            out.mc_upper_bound = std::max(out.mc_upper_bound, p.width / 2.0);
        }
    }

    const PassageMap none;
    const auto attempt = [&](double clearance, std::size_t round) -> std::optional<PlanResult> {
        PlannerConfig pc;
        pc.cost = CostConfig::weighted(1.0);
        pc.passages = &none;
        pc.clearance = clearance;
        pc.seed = derive_seed(config.seed, {round});
        pc.stop_at_first_solution = true;
        pc.rewire = config.rewire_rounds;
        if (config.mode == McFailureMode::SampleBudget) {
            pc.samples = config.sample_budget;
        } else {
            pc.samples = std::numeric_limits<std::size_t>::max() / 64;
            pc.time_budget_ms = config.time_budget_ms;
        }
        try {
            return paopp_plan(scene, start, goal, pc);
        } catch (const NoPathFound&) {
            return std::nullopt;
        }
    };

    double lower = out.mc_lower_bound;
    double upper = out.mc_upper_bound;
    std::optional<PlanResult> best;
    std::size_t round = 0;
    while (upper - lower > config.mc_err) {
        const double mc = lower + (upper - lower) / 2.0;
        auto plan = attempt(mc, round++);
        if (plan) {
            lower = mc;
            best = std::move(plan);
        } else {
            upper = mc;
        }
    }
    if (!best) {
        best = attempt(lower, round++);
        // At exactly half the narrowest width only the midline is free.
        if (!best && lower > 0.0) {
            const double relaxed = std::max(0.0, lower - config.mc_err / 2.0);
            best = attempt(relaxed, round++);
            if (best) lower = relaxed;
        }
        if (!best) throw NoPathFound("no path even at the minimum clearance " + std::to_string(lower));
    }
    if (config.refine_samples > 0) {
        PlannerConfig pc;
        pc.cost = CostConfig::weighted(1.0);
        pc.passages = &none;
        pc.clearance = lower;
        pc.samples = config.refine_samples;
        pc.seed = derive_seed(config.seed, {round++});
        try {
            best = paopp_plan(scene, start, goal, pc);
        } catch (const NoPathFound&) {
        }
    }

    out.plan = std::move(*best);
    out.plan.cost = out.plan.length;
    out.mc = lower;
    out.rounds = round;
    out.wall_time_ms = elapsed_ms(t0);
    return out;
}

std::vector<TraversalEntry> recompute_traversal(const Polyline& path, const PassageMap& map) {
    std::vector<TraversalEntry> out;
    const auto& params = path.params();
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const Segment e = path.segment(k);
        if (e.a == e.b) continue;
        std::vector<TraversalEntry> local;
        for (std::size_t i = 0; i < map.passages.size(); ++i) {
            const Passage& p = map.passages[i];
            if (const auto x = segments_intersection(e, p.segment))
                local.push_back({i, p.first, p.second, p.width, x->t_first, x->point});
        }
        std::sort(local.begin(), local.end(), [](const TraversalEntry& a, const TraversalEntry& b) {
            if (a.param != b.param) return a.param < b.param;
            return a.passage < b.passage;
        });
        for (auto& entry : local) {
            entry.param = params[k] + entry.param * (params[k + 1] - params[k]);
            out.push_back(entry);
        }
    }
    return out;
}

double traversal_min_width(const std::vector<TraversalEntry>& traversal) {
    double w = kNoPassage;
    for (const auto& t : traversal) w = std::min(w, t.width);
    return w;
}

}  // namespace pathset
