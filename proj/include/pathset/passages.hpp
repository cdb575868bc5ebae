#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathset/geometry.hpp"
#include "pathset/kernels.hpp"
#include "pathset/scene.hpp"

namespace pathset {

enum class CheckMode { Pure, Extended };

std::string to_string(CheckMode m);
CheckMode check_mode_from_string(const std::string& s);

/// Shortest segment between two obstacles. segment.a lies on `first`, segment.b on `second`, first < second.
struct Passage {
    int first = 0;
    int second = 0;
    Segment segment;
    double width = 0.0;
    Point center;
    double radius = 0.0;
    /// Re-added in extended mode because its disc encloses the start or goal.
    bool preserved = false;

    std::pair<int, int> key() const { return {first, second}; }
    bool operator==(const Passage& o) const = default;
};

/// Builds the passage for an obstacle pair (ordered by id). Throws OverlappingObstacles.
Passage make_passage(const ConvexPolygon& a, const ConvexPolygon& b);

struct HeightInterval {
    double z_low = 0.0;
    double z_high = 0.0;
    std::vector<std::size_t> passages;  // indices into PassageMap::passages

    bool operator==(const HeightInterval& o) const = default;
};

struct PassageMap {
    std::vector<Passage> passages;
    CheckMode mode = CheckMode::Extended;
    std::vector<HeightInterval> height_intervals;

    std::size_t size() const { return passages.size(); }
    std::optional<std::size_t> find(int first, int second) const;
    /// Passage segments packed for the crossing kernel.
    kernels::SegmentSoA soa() const;

    bool operator==(const PassageMap& o) const = default;
};

/// All obstacle-id pairs (i < j), walls excluded.
std::vector<std::pair<int, int>> enumerate_generic(const Scene& scene);

/// Occlusion checks against the scene's obstacles (and walls when the scene flags them).
bool pure_visibility_valid(int i, int j, const Scene& scene);
bool extended_visibility_valid(int i, int j, const Scene& scene);

struct DetectOptions {
    /// Defaults to the scene flag.
    std::optional<bool> include_walls;
    /// Extended mode keeps pure-valid passages whose disc contains one of these points.
    std::vector<Point> preserve_points;
};

PassageMap detect_passages(const Scene& scene, CheckMode mode, const DetectOptions& options = {});

/// Height-interval detection; the passage list is the union over intervals.
PassageMap detect_passages_3d(const Scene& scene, CheckMode mode = CheckMode::Extended);

enum class Side { Both, First, Second };

struct TranslatedSegment {
    Point origin_vertex;
    Segment segment;
    std::size_t parent_passage = 0;
    int obstacle = 0;
};

/// Copies of the passage segment anchored at obstacle vertices of the pair, restricted
/// to the requested side. Vertices closer than d_min (across the passage direction) to
/// the passage end or an already kept vertex are skipped.
std::vector<TranslatedSegment> translated_segments(const Passage& passage, std::size_t parent_index,
                                                   const Scene& scene, double d_min, Side side = Side::Both);

}  // namespace pathset
