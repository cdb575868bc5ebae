#include "pathset/kernels.hpp"

namespace pathset::kernels {

namespace {

std::size_t nearest_scalar(const double* xs, const double* ys, std::size_t n, double qx, double qy) {
    std::size_t best = 0;
    double best_d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        const double d2 = dx * dx + dy * dy;
        if (i == 0 || d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

void within_radius_scalar(const double* xs, const double* ys, std::size_t n, double qx, double qy, double r2,
                          IndexList& out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        if (dx * dx + dy * dy <= r2) out.push_back(static_cast<std::uint32_t>(i));
    }
}

void segments_crossing_scalar(const SegmentSoA& s, double cx, double cy, double dx, double dy, double tol_query,
                              IndexList& out) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (segments_touch(s.ax[i], s.ay[i], s.bx[i], s.by[i], cx, cy, dx, dy, s.tol[i], tol_query, kEps))
            out.push_back(static_cast<std::uint32_t>(i));
    }
}

void boxes_overlapping_scalar(const BoxSoA& b, const Box& q, IndexList& out) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b.min_x[i] <= q.max_x && q.min_x <= b.max_x[i] && b.min_y[i] <= q.max_y && q.min_y <= b.max_y[i])
            out.push_back(static_cast<std::uint32_t>(i));
    }
}

}  // namespace

const Table& scalar_table() {
    static const Table t{nearest_scalar, within_radius_scalar, segments_crossing_scalar, boxes_overlapping_scalar};
    return t;
}

}  // namespace pathset::kernels
