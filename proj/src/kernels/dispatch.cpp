#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace vseg::kernels {

const KernelTable& scalar() {
  static const KernelTable table{"scalar", &convolve_axis_scalar, &max_update_scalar};
  return table;
}

const KernelTable* avx2() {
#if defined(VSEG_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{"avx2", &convolve_axis_avx2, &max_update_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("VSEG_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar();
    if (const KernelTable* t = avx2()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace vseg::kernels
