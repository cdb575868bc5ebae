// Compiled with -mavx2 only; callers reach it through the dispatch table after a cpuid check.
#include "pathset/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include <limits>

namespace pathset::kernels {

namespace {

inline void push_mask(int mask, std::size_t base, IndexList& out) {
    while (mask != 0) {
        const int bit = __builtin_ctz(static_cast<unsigned>(mask));
        out.push_back(static_cast<std::uint32_t>(base + bit));
        mask &= mask - 1;
    }
}

std::size_t nearest_avx2(const double* xs, const double* ys, std::size_t n, double qx, double qy) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    __m256d best_d = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d best_i = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d four = _mm256_set1_pd(4.0);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vqx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vqy);
        const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        const __m256d lt = _mm256_cmp_pd(d2, best_d, _CMP_LT_OQ);
        best_d = _mm256_blendv_pd(best_d, d2, lt);
        best_i = _mm256_blendv_pd(best_i, idx, lt);
        idx = _mm256_add_pd(idx, four);
    }

    alignas(32) double lane_d[4];
    alignas(32) double lane_i[4];
    _mm256_store_pd(lane_d, best_d);
    _mm256_store_pd(lane_i, best_i);
    double bd = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    bool have = false;
    for (int l = 0; l < 4 && i > 0; ++l) {
        const auto li = static_cast<std::size_t>(lane_i[l]);
        if (!have || lane_d[l] < bd || (lane_d[l] == bd && li < best)) {
            bd = lane_d[l];
            best = li;
            have = true;
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

void within_radius_avx2(const double* xs, const double* ys, std::size_t n, double qx, double qy, double r2,
                        IndexList& out) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    const __m256d vr2 = _mm256_set1_pd(r2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vqx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vqy);
        const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        push_mask(_mm256_movemask_pd(_mm256_cmp_pd(d2, vr2, _CMP_LE_OQ)), i, out);
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        if (dx * dx + dy * dy <= r2) out.push_back(static_cast<std::uint32_t>(i));
    }
}

void segments_crossing_avx2(const SegmentSoA& s, double cx, double cy, double dx, double dy, double tol_query,
                            IndexList& out) {
    const std::size_t n = s.size();
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    const __m256d vdx = _mm256_set1_pd(dx);
    const __m256d vdy = _mm256_set1_pd(dy);
    const __m256d g = _mm256_set1_pd(dx - cx);
    const __m256d h = _mm256_set1_pd(dy - cy);
    const __m256d tq = _mm256_set1_pd(tol_query);
    const __m256d ntq = _mm256_set1_pd(-tol_query);
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d q_max_x = _mm256_set1_pd(std::fmax(cx, dx) + kEps);
    const __m256d q_max_y = _mm256_set1_pd(std::fmax(cy, dy) + kEps);
    const double q_min_x = std::fmin(cx, dx);
    const double q_min_y = std::fmin(cy, dy);
    const __m256d veps = _mm256_set1_pd(kEps);
    const __m256d vq_min_x = _mm256_set1_pd(q_min_x);
    const __m256d vq_min_y = _mm256_set1_pd(q_min_y);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ax = _mm256_loadu_pd(s.ax.data() + i);
        const __m256d ay = _mm256_loadu_pd(s.ay.data() + i);
        const __m256d bx = _mm256_loadu_pd(s.bx.data() + i);
        const __m256d by = _mm256_loadu_pd(s.by.data() + i);
        const __m256d t1 = _mm256_loadu_pd(s.tol.data() + i);
        const __m256d nt1 = _mm256_xor_pd(t1, sign);

        const __m256d e = _mm256_sub_pd(bx, ax);
        const __m256d f = _mm256_sub_pd(by, ay);
        const __m256d o1 = _mm256_sub_pd(_mm256_mul_pd(e, _mm256_sub_pd(vcy, ay)),
                                         _mm256_mul_pd(f, _mm256_sub_pd(vcx, ax)));
        const __m256d o2 = _mm256_sub_pd(_mm256_mul_pd(e, _mm256_sub_pd(vdy, ay)),
                                         _mm256_mul_pd(f, _mm256_sub_pd(vdx, ax)));
        const __m256d o3 = _mm256_sub_pd(_mm256_mul_pd(g, _mm256_sub_pd(ay, vcy)),
                                         _mm256_mul_pd(h, _mm256_sub_pd(ax, vcx)));
        const __m256d o4 = _mm256_sub_pd(_mm256_mul_pd(g, _mm256_sub_pd(by, vcy)),
                                         _mm256_mul_pd(h, _mm256_sub_pd(bx, vcx)));

        const __m256d sep1 = _mm256_or_pd(
            _mm256_and_pd(_mm256_cmp_pd(o1, t1, _CMP_GT_OQ), _mm256_cmp_pd(o2, t1, _CMP_GT_OQ)),
            _mm256_and_pd(_mm256_cmp_pd(o1, nt1, _CMP_LT_OQ), _mm256_cmp_pd(o2, nt1, _CMP_LT_OQ)));
        const __m256d sep2 = _mm256_or_pd(
            _mm256_and_pd(_mm256_cmp_pd(o3, tq, _CMP_GT_OQ), _mm256_cmp_pd(o4, tq, _CMP_GT_OQ)),
            _mm256_and_pd(_mm256_cmp_pd(o3, ntq, _CMP_LT_OQ), _mm256_cmp_pd(o4, ntq, _CMP_LT_OQ)));

        const __m256d s_min_x = _mm256_min_pd(ax, bx);
        const __m256d s_min_y = _mm256_min_pd(ay, by);
        const __m256d s_max_x = _mm256_add_pd(_mm256_max_pd(ax, bx), veps);
        const __m256d s_max_y = _mm256_add_pd(_mm256_max_pd(ay, by), veps);
        const __m256d boxes = _mm256_and_pd(
            _mm256_and_pd(_mm256_cmp_pd(s_min_x, q_max_x, _CMP_LE_OQ), _mm256_cmp_pd(vq_min_x, s_max_x, _CMP_LE_OQ)),
            _mm256_and_pd(_mm256_cmp_pd(s_min_y, q_max_y, _CMP_LE_OQ), _mm256_cmp_pd(vq_min_y, s_max_y, _CMP_LE_OQ)));

        const __m256d hit = _mm256_andnot_pd(_mm256_or_pd(sep1, sep2), boxes);
        push_mask(_mm256_movemask_pd(hit), i, out);
    }
    for (; i < n; ++i) {
        if (segments_touch(s.ax[i], s.ay[i], s.bx[i], s.by[i], cx, cy, dx, dy, s.tol[i], tol_query, kEps))
            out.push_back(static_cast<std::uint32_t>(i));
    }
}

void boxes_overlapping_avx2(const BoxSoA& b, const Box& q, IndexList& out) {
    const std::size_t n = b.size();
    const __m256d qminx = _mm256_set1_pd(q.min_x);
    const __m256d qminy = _mm256_set1_pd(q.min_y);
    const __m256d qmaxx = _mm256_set1_pd(q.max_x);
    const __m256d qmaxy = _mm256_set1_pd(q.max_y);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d c1 = _mm256_cmp_pd(_mm256_loadu_pd(b.min_x.data() + i), qmaxx, _CMP_LE_OQ);
        const __m256d c2 = _mm256_cmp_pd(qminx, _mm256_loadu_pd(b.max_x.data() + i), _CMP_LE_OQ);
        const __m256d c3 = _mm256_cmp_pd(_mm256_loadu_pd(b.min_y.data() + i), qmaxy, _CMP_LE_OQ);
        const __m256d c4 = _mm256_cmp_pd(qminy, _mm256_loadu_pd(b.max_y.data() + i), _CMP_LE_OQ);
        push_mask(_mm256_movemask_pd(_mm256_and_pd(_mm256_and_pd(c1, c2), _mm256_and_pd(c3, c4))), i, out);
    }
    for (; i < n; ++i) {
        if (b.min_x[i] <= q.max_x && q.min_x <= b.max_x[i] && b.min_y[i] <= q.max_y && q.min_y <= b.max_y[i])
            out.push_back(static_cast<std::uint32_t>(i));
    }
}

}  // namespace

const Table* avx2_table() {
    static const Table t{nearest_avx2, within_radius_avx2, segments_crossing_avx2, boxes_overlapping_avx2};
    return &t;
}

}  // namespace pathset::kernels

#else

namespace pathset::kernels {
const Table* avx2_table() { return nullptr; }
}  // namespace pathset::kernels

#endif
