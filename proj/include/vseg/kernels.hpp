#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "vseg/volume.hpp"

namespace vseg::kernels {

/// out = in convolved along `axis` with an odd-length kernel centred at kernel.size()/2,
/// replicate boundary. Every output is accumulated as sum_t (w[t] * x[t]) in ascending t,
/// so all implementations round identically.
using ConvolveAxisFn = void (*)(const double* in, double* out, const Dims& dims, int axis,
                                std::span<const double> kernel);

/// Running slab maximum over one slice of n pixels: where slice[p] > best[p] (strict, so the
/// earliest slice wins ties), best[p] = slice[p] and arg[p] = slice_index.
using MaxUpdateFn = void (*)(const float* slice, float* best, std::int32_t* arg, std::size_t n,
                             std::int32_t slice_index);

struct KernelTable {
  std::string_view name;
  ConvolveAxisFn convolve_axis;
  MaxUpdateFn max_update;
};

const KernelTable& scalar();
/// nullptr when the CPU (or the build) lacks AVX2.
const KernelTable* avx2();

/// The table used by the library: AVX2 when available unless VSEG_SIMD=scalar is set.
const KernelTable& active();

}  // namespace vseg::kernels
