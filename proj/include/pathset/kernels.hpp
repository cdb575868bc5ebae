#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pathset/geometry.hpp"

// Batched scans used by the planner hot loops. Every kernel has a scalar reference
// and vectorized variants that must return bit-identical results; the active variant
// is chosen once at startup (PATHSET_SIMD=scalar|avx2|neon|auto) and can be forced
// from tests with set_isa().
namespace pathset::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string to_string(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Throws InvalidArgument when the ISA is not available on this machine.
void set_isa(Isa isa);

struct PointSoA {
    std::vector<double> xs;
    std::vector<double> ys;

    void push(const Point& p) { xs.push_back(p.x); ys.push_back(p.y); }
    std::size_t size() const { return xs.size(); }
    void clear() { xs.clear(); ys.clear(); }
    void reserve(std::size_t n) { xs.reserve(n); ys.reserve(n); }
};

struct SegmentSoA {
    std::vector<double> ax, ay, bx, by;
    std::vector<double> tol;  // kEps * length

    void push(const Segment& s) {
        ax.push_back(s.a.x); ay.push_back(s.a.y);
        bx.push_back(s.b.x); by.push_back(s.b.y);
        tol.push_back(kEps * s.length());
    }
    std::size_t size() const { return ax.size(); }
};

struct BoxSoA {
    std::vector<double> min_x, min_y, max_x, max_y;

    void push(const Box& b) {
        min_x.push_back(b.min_x); min_y.push_back(b.min_y);
        max_x.push_back(b.max_x); max_y.push_back(b.max_y);
    }
    std::size_t size() const { return min_x.size(); }
};

using IndexList = std::vector<std::uint32_t>;

struct Table {
    // Index of the point closest to q; lowest index wins ties. n must be > 0.
    std::size_t (*nearest)(const double* xs, const double* ys, std::size_t n, double qx, double qy);
    // Appends indices with squared distance <= r2, ascending.
    void (*within_radius)(const double* xs, const double* ys, std::size_t n, double qx, double qy, double r2,
                          IndexList& out);
    // Appends indices of stored segments touching the query segment (segments_touch), ascending.
    void (*segments_crossing)(const SegmentSoA& segs, double cx, double cy, double dx, double dy, double tol_query,
                              IndexList& out);
    // Appends indices of stored boxes overlapping the closed query box, ascending.
    void (*boxes_overlapping)(const BoxSoA& boxes, const Box& query, IndexList& out);
};

const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in
const Table* neon_table();
const Table& table_for(Isa isa);
const Table& active();

inline std::size_t nearest(const PointSoA& pts, const Point& q) {
    return active().nearest(pts.xs.data(), pts.ys.data(), pts.size(), q.x, q.y);
}

inline void within_radius(const PointSoA& pts, const Point& q, double r, IndexList& out) {
    active().within_radius(pts.xs.data(), pts.ys.data(), pts.size(), q.x, q.y, r * r, out);
}

inline void segments_crossing(const SegmentSoA& segs, const Segment& query, IndexList& out) {
    active().segments_crossing(segs, query.a.x, query.a.y, query.b.x, query.b.y, kEps * query.length(), out);
}

inline void boxes_overlapping(const BoxSoA& boxes, const Box& query, IndexList& out) {
    active().boxes_overlapping(boxes, query, out);
}

}  // namespace pathset::kernels
