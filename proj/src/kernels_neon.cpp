#include "pathset/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <limits>

namespace pathset::kernels {

namespace {

inline void push_mask(uint64x2_t m, std::size_t base, IndexList& out) {
    if (vgetq_lane_u64(m, 0) != 0) out.push_back(static_cast<std::uint32_t>(base));
    if (vgetq_lane_u64(m, 1) != 0) out.push_back(static_cast<std::uint32_t>(base + 1));
}

std::size_t nearest_neon(const double* xs, const double* ys, std::size_t n, double qx, double qy) {
    const float64x2_t vqx = vdupq_n_f64(qx);
    const float64x2_t vqy = vdupq_n_f64(qy);
    float64x2_t best_d = vdupq_n_f64(std::numeric_limits<double>::infinity());
    float64x2_t best_i = vdupq_n_f64(0.0);
    const double init[2] = {0.0, 1.0};
    float64x2_t idx = vld1q_f64(init);
    const float64x2_t two = vdupq_n_f64(2.0);

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vqx);
        const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vqy);
        const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
        const uint64x2_t lt = vcltq_f64(d2, best_d);
        best_d = vbslq_f64(lt, d2, best_d);
        best_i = vbslq_f64(lt, idx, best_i);
        idx = vaddq_f64(idx, two);
    }

    double bd = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    bool have = false;
    if (i > 0) {
        const double d0 = vgetq_lane_f64(best_d, 0), d1 = vgetq_lane_f64(best_d, 1);
        const auto i0 = static_cast<std::size_t>(vgetq_lane_f64(best_i, 0));
        const auto i1 = static_cast<std::size_t>(vgetq_lane_f64(best_i, 1));
        bd = d0;
        best = i0;
        have = true;
        if (d1 < d0 || (d1 == d0 && i1 < i0)) {
            bd = d1;
            best = i1;
        }
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        const double d2 = dx * dx + dy * dy;
        if (!have || d2 < bd) {
            bd = d2;
            best = i;
            have = true;
        }
    }
    return best;
}

void within_radius_neon(const double* xs, const double* ys, std::size_t n, double qx, double qy, double r2,
                        IndexList& out) {
    const float64x2_t vqx = vdupq_n_f64(qx);
    const float64x2_t vqy = vdupq_n_f64(qy);
    const float64x2_t vr2 = vdupq_n_f64(r2);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vqx);
        const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vqy);
        const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
        push_mask(vcleq_f64(d2, vr2), i, out);
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        if (dx * dx + dy * dy <= r2) out.push_back(static_cast<std::uint32_t>(i));
    }
}

void segments_crossing_neon(const SegmentSoA& s, double cx, double cy, double dx, double dy, double tol_query,
                            IndexList& out) {
    const std::size_t n = s.size();
    const float64x2_t vcx = vdupq_n_f64(cx), vcy = vdupq_n_f64(cy);
    const float64x2_t vdx = vdupq_n_f64(dx), vdy = vdupq_n_f64(dy);
    const float64x2_t g = vdupq_n_f64(dx - cx), h = vdupq_n_f64(dy - cy);
    const float64x2_t tq = vdupq_n_f64(tol_query), ntq = vdupq_n_f64(-tol_query);
    const float64x2_t q_max_x = vdupq_n_f64(std::fmax(cx, dx) + kEps);
    const float64x2_t q_max_y = vdupq_n_f64(std::fmax(cy, dy) + kEps);
    const float64x2_t q_min_x = vdupq_n_f64(std::fmin(cx, dx));
    const float64x2_t q_min_y = vdupq_n_f64(std::fmin(cy, dy));
    const float64x2_t veps = vdupq_n_f64(kEps);

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t ax = vld1q_f64(s.ax.data() + i), ay = vld1q_f64(s.ay.data() + i);
        const float64x2_t bx = vld1q_f64(s.bx.data() + i), by = vld1q_f64(s.by.data() + i);
        const float64x2_t t1 = vld1q_f64(s.tol.data() + i);
        const float64x2_t nt1 = vnegq_f64(t1);

        const float64x2_t e = vsubq_f64(bx, ax), f = vsubq_f64(by, ay);
        const float64x2_t o1 = vsubq_f64(vmulq_f64(e, vsubq_f64(vcy, ay)), vmulq_f64(f, vsubq_f64(vcx, ax)));
        const float64x2_t o2 = vsubq_f64(vmulq_f64(e, vsubq_f64(vdy, ay)), vmulq_f64(f, vsubq_f64(vdx, ax)));
        const float64x2_t o3 = vsubq_f64(vmulq_f64(g, vsubq_f64(ay, vcy)), vmulq_f64(h, vsubq_f64(ax, vcx)));
        const float64x2_t o4 = vsubq_f64(vmulq_f64(g, vsubq_f64(by, vcy)), vmulq_f64(h, vsubq_f64(bx, vcx)));

        const uint64x2_t sep1 = vorrq_u64(vandq_u64(vcgtq_f64(o1, t1), vcgtq_f64(o2, t1)),
                                          vandq_u64(vcltq_f64(o1, nt1), vcltq_f64(o2, nt1)));
        const uint64x2_t sep2 = vorrq_u64(vandq_u64(vcgtq_f64(o3, tq), vcgtq_f64(o4, tq)),
                                          vandq_u64(vcltq_f64(o3, ntq), vcltq_f64(o4, ntq)));
        const uint64x2_t boxes =
            vandq_u64(vandq_u64(vcleq_f64(vminq_f64(ax, bx), q_max_x),
                                vcleq_f64(q_min_x, vaddq_f64(vmaxq_f64(ax, bx), veps))),
                      vandq_u64(vcleq_f64(vminq_f64(ay, by), q_max_y),
                                vcleq_f64(q_min_y, vaddq_f64(vmaxq_f64(ay, by), veps))));
        push_mask(vbicq_u64(boxes, vorrq_u64(sep1, sep2)), i, out);
    }
    for (; i < n; ++i) {
        if (segments_touch(s.ax[i], s.ay[i], s.bx[i], s.by[i], cx, cy, dx, dy, s.tol[i], tol_query, kEps))
            out.push_back(static_cast<std::uint32_t>(i));
    }
}

void boxes_overlapping_neon(const BoxSoA& b, const Box& q, IndexList& out) {
    const std::size_t n = b.size();
    const float64x2_t qminx = vdupq_n_f64(q.min_x), qminy = vdupq_n_f64(q.min_y);
    const float64x2_t qmaxx = vdupq_n_f64(q.max_x), qmaxy = vdupq_n_f64(q.max_y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t m = vandq_u64(vandq_u64(vcleq_f64(vld1q_f64(b.min_x.data() + i), qmaxx),
                                                 vcleq_f64(qminx, vld1q_f64(b.max_x.data() + i))),
                                       vandq_u64(vcleq_f64(vld1q_f64(b.min_y.data() + i), qmaxy),
                                                 vcleq_f64(qminy, vld1q_f64(b.max_y.data() + i))));
        push_mask(m, i, out);
    }
    for (; i < n; ++i) {
        if (b.min_x[i] <= q.max_x && q.min_x <= b.max_x[i] && b.min_y[i] <= q.max_y && q.min_y <= b.max_y[i])
            out.push_back(static_cast<std::uint32_t>(i));
    }
}

}  // namespace

const Table* neon_table() {
    static const Table t{nearest_neon, within_radius_neon, segments_crossing_neon, boxes_overlapping_neon};
    return &t;
}

}  // namespace pathset::kernels

#else

namespace pathset::kernels {
const Table* neon_table() { return nullptr; }
}  // namespace pathset::kernels

#endif
