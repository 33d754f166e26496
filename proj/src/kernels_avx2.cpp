#include <immintrin.h>

#include "aitstar/kernels.hpp"

// AVX2 variants. Accumulation order matches the scalar reference exactly:
// lane j of the vector accumulator holds the same partial sum as acc_j in
// the scalar kernel, and the horizontal reduction is (s0+s1)+(s2+s3).
// Compiled with -mavx2 -ffp-contract=off.

namespace aitstar::kernels {
namespace {

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    if (n < 4) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    }
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d vd = _mm256_sub_pd(va, vb);
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(vd, vd));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vacc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void squared_distances_avx2(const double* query, const double* points, std::size_t m,
                            std::size_t n, double* out) {
    for (std::size_t p = 0; p < m; ++p) {
        out[p] = squared_distance_avx2(query, points + p * n, n);
    }
}

std::size_t first_blocked_point_avx2(const double* a, const double* dir, const double* ts,
                                     std::size_t count, std::size_t n, const double* box_lo,
                                     const double* box_hi, std::size_t num_boxes,
                                     const double* open_lo, const double* open_hi,
                                     std::size_t num_openings) {
    __m256d coords[64];
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        const __m256d vt = _mm256_loadu_pd(ts + k);
        for (std::size_t d = 0; d < n; ++d) {
            coords[d] = _mm256_add_pd(_mm256_set1_pd(a[d]),
                                      _mm256_mul_pd(vt, _mm256_set1_pd(dir[d])));
        }
        __m256d obstacle = _mm256_setzero_pd();
        for (std::size_t b = 0; b < num_boxes; ++b) {
            const double* lo = box_lo + b * n;
            const double* hi = box_hi + b * n;
            __m256d inside = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
            for (std::size_t d = 0; d < n; ++d) {
                inside = _mm256_and_pd(inside,
                                       _mm256_cmp_pd(coords[d], _mm256_set1_pd(lo[d]), _CMP_GE_OQ));
                inside = _mm256_and_pd(inside,
                                       _mm256_cmp_pd(coords[d], _mm256_set1_pd(hi[d]), _CMP_LE_OQ));
                if (_mm256_movemask_pd(inside) == 0) {
                    break;
                }
            }
            obstacle = _mm256_or_pd(obstacle, inside);
        }
        int blocked_mask = _mm256_movemask_pd(obstacle);
        if (blocked_mask == 0) {
            continue;
        }
        for (std::size_t o = 0; o < num_openings; ++o) {
            const double* lo = open_lo + o * n;
            const double* hi = open_hi + o * n;
            __m256d inside = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
            for (std::size_t d = 0; d < n; ++d) {
                inside = _mm256_and_pd(inside,
                                       _mm256_cmp_pd(coords[d], _mm256_set1_pd(lo[d]), _CMP_GE_OQ));
                inside = _mm256_and_pd(inside,
                                       _mm256_cmp_pd(coords[d], _mm256_set1_pd(hi[d]), _CMP_LE_OQ));
                if (_mm256_movemask_pd(inside) == 0) {
                    break;
                }
            }
            blocked_mask &= ~_mm256_movemask_pd(inside);
            if (blocked_mask == 0) {
                break;
            }
        }
        if (blocked_mask != 0) {
            return k + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(blocked_mask)));
        }
    }
    if (k < count) {
        const std::size_t rest =
            scalar_ops().first_blocked_point(a, dir, ts + k, count - k, n, box_lo, box_hi,
                                             num_boxes, open_lo, open_hi, num_openings);
        return k + rest;
    }
    return count;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops table{squared_distance_avx2, squared_distances_avx2,
                           first_blocked_point_avx2};
    return table;
}

}  // namespace aitstar::kernels
