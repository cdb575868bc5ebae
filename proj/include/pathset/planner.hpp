#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pathset/geometry.hpp"
#include "pathset/kernels.hpp"
#include "pathset/passages.hpp"
#include "pathset/scene.hpp"

namespace pathset {

/// Minimum traversed width of a path that has not crossed any passage yet.
inline constexpr double kNoPassage = std::numeric_limits<double>::infinity();

enum class CostKind { Ratio, Weighted };

std::string to_string(CostKind k);

struct CostConfig {
    CostKind kind = CostKind::Weighted;
    double k_p = 10.0;
    /// Width credited to a path that crossed no passage under the weighted form.
    /// Zero means "use the workspace diagonal" (filled in by the planner).
    double open_width = 0.0;

    static CostConfig ratio() { return {CostKind::Ratio, 0.0, 0.0}; }
    static CostConfig weighted(double k_p) { return {CostKind::Weighted, k_p, 0.0}; }

    /// Throws InvalidArgument for a non-positive weight in weighted mode.
    void validate() const;
    /// Ratio: length / min_width (plain length while no passage is crossed).
    /// Weighted: length - k_p * min_width, with open_width standing in for "none".
    double evaluate(double length, double min_width) const;

    bool operator==(const CostConfig&) const = default;
};

struct PlannerNode {
    Point position;
    int parent = -1;
    double f = std::numeric_limits<double>::infinity();
    double length = 0.0;
    double f_p = kNoPassage;
    double f_cur = kNoPassage;
};

struct EdgeCrossing {
    std::size_t passage = 0;
    double t = 0.0;  ///< parameter along the edge
    Point point;
};

/// Passages touched by the edge (endpoint contact included), ordered by t then passage index.
std::vector<EdgeCrossing> edge_crossings(const Segment& edge, const PassageMap& map);
std::vector<EdgeCrossing> edge_crossings(const Segment& edge, const PassageMap& map,
                                         const kernels::SegmentSoA& soa, kernels::IndexList& scratch);

/// Search tree with passage-aware costs. Every node's f, length and f_p always equal
/// the values recomputed along its parent chain.
class Tree {
public:
    Tree(const PassageMap& passages, CostConfig cost);

    int add_root(const Point& p);
    /// Appends an unconnected node (infinite cost).
    int add_node(const Point& p);

    /// Candidate parent `near` for `node`: adopts it when the resulting cost is strictly
    /// lower, re-links the edge and refreshes the subtree below `node`. Refuses
    /// candidates that would close a cycle. Returns whether the tree changed.
    bool update_node_cost(int near, int node);

    const std::vector<PlannerNode>& nodes() const { return nodes_; }
    const PlannerNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const kernels::PointSoA& positions() const { return positions_; }
    const std::vector<int>& children(int i) const { return children_[static_cast<std::size_t>(i)]; }
    std::size_t size() const { return nodes_.size(); }
    const CostConfig& cost() const { return cost_; }

    /// Root-to-node index chain.
    std::vector<int> chain(int node) const;
    bool is_ancestor(int candidate, int node) const;
    /// Cost of the parent chain recomputed from scratch.
    double recomputed_cost(int node) const;
    /// Min width crossed by the edge (kNoPassage when none).
    double edge_width(const Point& a, const Point& b);

private:
    void refresh_subtree(int node);

    const PassageMap& passages_;
    CostConfig cost_;
    kernels::SegmentSoA soa_;
    kernels::IndexList scratch_;
    std::vector<PlannerNode> nodes_;
    std::vector<std::vector<int>> children_;
    kernels::PointSoA positions_;
};

struct TraversalEntry {
    std::size_t passage = 0;
    int first = 0;
    int second = 0;
    double width = 0.0;
    double param = 0.0;  ///< path parameter of the crossing
    Point point;

    bool same_passage(const TraversalEntry& o) const { return first == o.first && second == o.second; }
    bool operator==(const TraversalEntry&) const = default;
};

struct PlannerConfig {
    CostConfig cost;
    CheckMode check = CheckMode::Extended;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    /// Steering step; 0 scales 2.0 by the workspace diagonal relative to a 50 x 30 map.
    double step = 0.0;
    double goal_bias = 0.05;
    /// Extended mode re-adds rejected passages whose disc encloses start or goal.
    bool preserve_terminal_passages = true;
    /// Required distance from obstacles (walls excluded); 0 means plain collision checks.
    double clearance = 0.0;
    bool stop_at_first_solution = false;
    /// false grows a plain RRT (parent = nearest, no rewiring).
    bool rewire = true;
    /// Stops the sampling loop once exceeded (0 = no limit).
    double time_budget_ms = 0.0;
    /// Additional sampler rejection rule.
    std::function<bool(const Point&)> sample_filter;
    /// Precomputed passages; detected from the scene when null.
    const PassageMap* passages = nullptr;
    /// Debug hook called after every accepted sample.
    std::function<void(const Tree&)> on_iteration;
};

struct PlanResult {
    Polyline path;
    std::vector<TraversalEntry> traversal;
    double length = 0.0;
    double min_width = kNoPassage;
    double cost = 0.0;
    std::size_t samples_used = 0;
    std::size_t tree_size = 0;
    std::size_t passage_count = 0;
    double wall_time_ms = 0.0;
    double detection_time_ms = 0.0;

    bool operator==(const PlanResult&) const = default;
};

double default_step(const Scene& scene);

/// Throws InvalidEndpoint, NoPathFound, InvalidArgument.
PlanResult paopp_plan(const Scene& scene, const Point& start, const Point& goal, const PlannerConfig& config);

enum class McFailureMode { TimeBudget, SampleBudget };

struct McppConfig {
    double mc_err = 0.5;
    McFailureMode mode = McFailureMode::SampleBudget;
    std::size_t sample_budget = 20000;
    double time_budget_ms = 1000.0;
    std::uint64_t seed = 1;
    /// When > 0, the final path is re-planned with this many samples at the found clearance.
    std::size_t refine_samples = 0;
    /// Clearance rounds grow a plain RRT when false.
    bool rewire_rounds = false;
};

struct McppResult {
    PlanResult plan;
    double mc = 0.0;
    double mc_lower_bound = 0.0;
    double mc_upper_bound = 0.0;
    std::size_t rounds = 0;
    double wall_time_ms = 0.0;
};

/// Bisection on the clearance between half the narrowest and widest pure passages.
McppResult mcpp_plan(const Scene& scene, const Point& start, const Point& goal, const McppConfig& config);

/// Traversal rebuilt from scratch by brute-force segment intersection.
std::vector<TraversalEntry> recompute_traversal(const Polyline& path, const PassageMap& map);
double traversal_min_width(const std::vector<TraversalEntry>& traversal);

}  // namespace pathset
