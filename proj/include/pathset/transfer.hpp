#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pathset/geometry.hpp"
#include "pathset/passages.hpp"
#include "pathset/planner.hpp"
#include "pathset/scene.hpp"

namespace pathset {

struct Team {
    std::vector<Point> starts;
    std::vector<Point> goals;

    std::size_t size() const { return starts.size(); }
    /// Throws InvalidArgument (size mismatch, empty) or InvalidEndpoint (point not free).
    void validate(const Scene& scene) const;

    bool operator==(const Team&) const = default;
};

/// Minimax index over max(|S0i - S0j|, |Sdi - Sdj|), lowest index on ties.
std::size_t select_pivot(const std::vector<Point>& starts, const std::vector<Point>& goals);

struct TransferVectors {
    Point v0;
    Point vd;
};

std::vector<TransferVectors> transfer_vectors(const Team& team, std::size_t pivot);
/// Largest distance of a team member from the pivot at either end.
double transfer_radius(const Team& team, std::size_t pivot);

/// Offsets the pivot by (1 - tau) v0 + tau vd at the pivot knots. The result keeps the
/// pivot's parameters, and its ends are placed exactly on pivot ends + offsets.
Polyline transfer_path(const Polyline& pivot, const Point& v0, const Point& vd);

struct NearbyObstacles {
    double lambda = 0.0;
    std::vector<int> passage_obstacles;
    std::vector<int> isolated_obstacles;
    /// Pivot traversal without passages whose obstacles are both far away.
    std::vector<TraversalEntry> traversal;
};

/// Walls take part as obstacles when the scene flags them.
NearbyObstacles nearby_obstacles(const Scene& scene, const Polyline& pivot, const std::vector<TraversalEntry>& traversal,
                                 double lambda);

enum class ChordMethod { ViaNormal, OnPassage };

struct ChordPoint {
    std::size_t path = 0;
    double eta = 0.0;  ///< parameter on that path
    Point point;       ///< location on the reference line
    double coord = 0.0;  ///< signed position along the reference segment from its first end
};

struct Chord {
    std::size_t passage_index = 0;
    std::size_t pivot = 0;
    Segment reference;  ///< passage (or translated) segment the chord lives on
    std::vector<ChordPoint> intersections;
    Segment endpoints;
    double length = 0.0;
    double coord_min = 0.0;
    double coord_max = 0.0;

    const ChordPoint& at(std::size_t path) const;
};

/// Crossings with the full line through `reference`, taking per path the one nearest to
/// eta_p within +-window. Throws MissingIntersection.
Chord chord_on_passage(const std::vector<Polyline>& paths, std::size_t pivot, const Segment& reference, double eta_p,
                       double window = 0.2, std::size_t passage_index = 0);
/// Crossings with the pivot's normal line at eta_p, rotated about the pivot point onto the
/// reference line through the acute angle (left stays left). Throws MissingIntersection.
Chord chord_via_normal(const std::vector<Polyline>& paths, std::size_t pivot, const Segment& reference, double eta_p,
                       double window = 0.2, std::size_t passage_index = 0);

enum class PlacementCase { Unchanged, Translated, Scaled };

struct Placement {
    Point anchor;
    PlacementCase kind = PlacementCase::Unchanged;
    double ratio = 1.0;
};

/// New pivot point on the reference segment. Chords inside [delta, width - delta] stay,
/// chords that fit are translated, longer chords are scaled about the delta-offset end
/// lying farther outside. Throws PassageTooNarrow when width <= 2 delta and scaling is needed.
Placement place_reference_point(const Chord& chord, double delta);

/// Largest r <= 1 that maps every chord point c + r (x - c) into [delta, length - delta]
/// around the pivot coordinate c.
double compression_ratio(const Chord& chord, double delta);

struct Anchor {
    double eta = 0.0;
    Point point;

    bool operator==(const Anchor&) const = default;
};

/// Displacement blended linearly in the path parameter between consecutive anchors, zero
/// at both ends. Anchors closer than 1e-9 in eta to an earlier one (or to an end) are dropped.
Polyline reposition_path(const Polyline& path, std::vector<Anchor> anchors);

/// Anchor pushing the pivot away from an isolated obstacle far enough that every transferred
/// path keeps `delta` from it; nullopt when no push is needed.
std::optional<Anchor> isolated_push(const Polyline& pivot, const std::vector<Polyline>& transferred,
                                    const ConvexPolygon& obstacle, double delta);

bool path_collision_free(const Polyline& path, const Scene& scene);
/// Segments between the two paths at `resolution` uniform parameters plus every knot of
/// either path, each tested exactly against the obstacles.
bool strong_homotopic_like(const Polyline& a, const Polyline& b, const Scene& scene, std::size_t resolution = 256);

struct TransferConfig {
    /// 0 picks a tenth of the narrowest traversed passage.
    double delta = 0.0;
    ChordMethod chord = ChordMethod::ViaNormal;
    double window = 0.2;
    std::size_t homotopy_resolution = 256;
    bool densify = true;
};

struct PathSetConfig {
    PlannerConfig planner;
    TransferConfig transfer;
};

struct PathSet {
    std::vector<Polyline> paths;
    std::size_t pivot = 0;
    std::vector<TraversalEntry> traversal;
    /// Compressed chords, kept for rendering.
    std::vector<Segment> chords;
    double delta = 0.0;
    bool densified = false;
    double planning_time_ms = 0.0;
    double wall_time_ms = 0.0;

    bool operator==(const PathSet&) const = default;
};

/// Per-path reference points for the re-transferred set and the resulting deformed set.
/// Throws InfeasiblePassage when a passage cannot host the chord.
PathSet coordinated_deform(const Scene& scene, const Polyline& pivot, std::size_t pivot_index, const Team& team,
                           const PassageMap& passages, const std::vector<TraversalEntry>& traversal, double delta,
                           const TransferConfig& config = {});

/// Throws NoPathFound, InfeasiblePassage, InvalidEndpoint.
PathSet generate_path_set(const Scene& scene, const Team& team, const PathSetConfig& config = {});

/// Pivot planned directly, every other member planned on its own with samples kept near the pivot path.
PathSet separately_plan(const Scene& scene, const Team& team, const PlannerConfig& config = {});

/// Every path collision-free and every pair strong homotopic-like.
bool verify_path_set(const PathSet& set, const Scene& scene, std::size_t resolution = 256);

}  // namespace pathset
