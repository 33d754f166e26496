#include <cstdlib>
#include <cstring>

#include "aitstar/kernels.hpp"

namespace aitstar::kernels {
namespace {

SimdLevel detect_level() {
    const char* env = std::getenv("AITSTAR_SIMD");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) {
            return SimdLevel::kScalar;
        }
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) {
            return SimdLevel::kAvx2;
        }
        return SimdLevel::kScalar;
    }
    return cpu_has_avx2() ? SimdLevel::kAvx2 : SimdLevel::kScalar;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

SimdLevel active_level() {
    static const SimdLevel level = detect_level();
    return level;
}

std::string level_name(SimdLevel level) {
    switch (level) {
        case SimdLevel::kScalar:
            return "scalar";
        case SimdLevel::kAvx2:
            return "avx2";
    }
    return "unknown";
}

const Ops& ops() {
    return active_level() == SimdLevel::kAvx2 ? avx2_ops() : scalar_ops();
}

}  // namespace aitstar::kernels
