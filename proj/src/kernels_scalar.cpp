#include "aitstar/kernels.hpp"

// Reference kernels. The accumulation pattern mirrors the AVX2 variants
// lane for lane (4 partial sums combined as (s0+s1)+(s2+s3), then the tail)
// so both paths round identically. Compiled with -ffp-contract=off.

namespace aitstar::kernels {
namespace {

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    if (n < 4) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    }
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double d0 = a[i] - b[i];
        const double d1 = a[i + 1] - b[i + 1];
        const double d2 = a[i + 2] - b[i + 2];
        const double d3 = a[i + 3] - b[i + 3];
        acc0 += d0 * d0;
        acc1 += d1 * d1;
        acc2 += d2 * d2;
        acc3 += d3 * d3;
    }
    double s = (acc0 + acc1) + (acc2 + acc3);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void squared_distances_scalar(const double* query, const double* points, std::size_t m,
                              std::size_t n, double* out) {
    for (std::size_t p = 0; p < m; ++p) {
        out[p] = squared_distance_scalar(query, points + p * n, n);
    }
}

bool point_blocked(const double* pt, std::size_t n, const double* box_lo, const double* box_hi,
                   std::size_t num_boxes, const double* open_lo, const double* open_hi,
                   std::size_t num_openings) {
    bool in_obstacle = false;
    for (std::size_t b = 0; b < num_boxes && !in_obstacle; ++b) {
        const double* lo = box_lo + b * n;
        const double* hi = box_hi + b * n;
        bool inside = true;
        for (std::size_t d = 0; d < n; ++d) {
            if (pt[d] < lo[d] || pt[d] > hi[d]) {
                inside = false;
                break;
            }
        }
        in_obstacle = inside;
    }
    if (!in_obstacle) {
        return false;
    }
    for (std::size_t o = 0; o < num_openings; ++o) {
        const double* lo = open_lo + o * n;
        const double* hi = open_hi + o * n;
        bool inside = true;
        for (std::size_t d = 0; d < n; ++d) {
            if (pt[d] < lo[d] || pt[d] > hi[d]) {
                inside = false;
                break;
            }
        }
        if (inside) {
            return false;
        }
    }
    return true;
}

std::size_t first_blocked_point_scalar(const double* a, const double* dir, const double* ts,
                                       std::size_t count, std::size_t n, const double* box_lo,
                                       const double* box_hi, std::size_t num_boxes,
                                       const double* open_lo, const double* open_hi,
                                       std::size_t num_openings) {
    double pt[64];
    for (std::size_t k = 0; k < count; ++k) {
        const double t = ts[k];
        for (std::size_t d = 0; d < n; ++d) {
            pt[d] = a[d] + t * dir[d];
        }
        if (point_blocked(pt, n, box_lo, box_hi, num_boxes, open_lo, open_hi, num_openings)) {
            return k;
        }
    }
    return count;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table{squared_distance_scalar, squared_distances_scalar,
                           first_blocked_point_scalar};
    return table;
}

}  // namespace aitstar::kernels
