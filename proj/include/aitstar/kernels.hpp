#pragma once

#include <cstddef>
#include <string>

namespace aitstar::kernels {

// Arithmetic inner loops of the library. Each kernel exists as a scalar
// reference implementation and an AVX2 variant; both compute bit-identical
// results (fixed accumulation order, contraction disabled) so the dispatch
// choice never changes planner behavior.
//
// Geometry buffers are flat row-major doubles: a set of m points in R^n is
// m*n doubles, box b occupies [b*n, b*n + n) in its lo/hi arrays.

enum class SimdLevel { kScalar, kAvx2 };

struct Ops {
    // ||a - b||^2 for two n-vectors.
    double (*squared_distance)(const double* a, const double* b, std::size_t n);

    // Squared distances from query to each of m points, written to out[0..m).
    void (*squared_distances)(const double* query, const double* points, std::size_t m,
                              std::size_t n, double* out);

    // Probes the points a + ts[k]*dir for k = 0..count-1 against a set of
    // closed obstacle boxes with carve-out openings. A point is blocked when
    // it lies inside some obstacle box and inside no opening. Returns the
    // smallest blocked k, or count if every probe is clear.
    std::size_t (*first_blocked_point)(const double* a, const double* dir, const double* ts,
                                       std::size_t count, std::size_t n, const double* box_lo,
                                       const double* box_hi, std::size_t num_boxes,
                                       const double* open_lo, const double* open_hi,
                                       std::size_t num_openings);
};

// Active table, chosen once per process: AVX2 when the CPU supports it,
// overridable with AITSTAR_SIMD=scalar|avx2.
const Ops& ops();
SimdLevel active_level();
std::string level_name(SimdLevel level);

// Individual tables, used by the equivalence tests.
const Ops& scalar_ops();
const Ops& avx2_ops();
bool cpu_has_avx2();

}  // namespace aitstar::kernels
