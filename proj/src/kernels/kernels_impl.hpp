#pragma once

#include "vseg/kernels.hpp"

namespace vseg::kernels {

inline long clamp_index(long s, long n) { return s < 0 ? 0 : s >= n ? n - 1 : s; }

void convolve_axis_scalar(const double* in, double* out, const Dims& d, int axis, std::span<const double> w);
void max_update_scalar(const float* slice, float* best, std::int32_t* arg, std::size_t n, std::int32_t slice_index);

#if defined(VSEG_HAVE_AVX2)
void convolve_axis_avx2(const double* in, double* out, const Dims& d, int axis, std::span<const double> w);
void max_update_avx2(const float* slice, float* best, std::int32_t* arg, std::size_t n, std::int32_t slice_index);
#endif

}  // namespace vseg::kernels
