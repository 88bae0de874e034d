#include <immintrin.h>

#include <vector>

#include "kernels_impl.hpp"

namespace vseg::kernels {

namespace {

inline double conv_point(const double* line, long pos, long n, std::size_t stride, std::span<const double> w) {
  const long r = static_cast<long>(w.size() / 2);
  double acc = 0.0;
  for (long t = 0; t < static_cast<long>(w.size()); ++t)
    acc = acc + w[t] * line[static_cast<std::size_t>(clamp_index(pos + t - r, n)) * stride];
  return acc;
}

void convolve_x(const double* in, double* out, const Dims& d, std::span<const double> w) {
  const long r = static_cast<long>(w.size() / 2);
  const long nx = static_cast<long>(d.nx);
  const long taps = static_cast<long>(w.size());
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j) {
      const double* src = in + lin(0, j, k, d);
      double* dst = out + lin(0, j, k, d);
      long i = 0;
      for (; i < std::min(r, nx); ++i) dst[i] = conv_point(src, i, nx, 1, w);
      for (; i + 4 + r <= nx; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (long t = 0; t < taps; ++t)
          acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(w[t]), _mm256_loadu_pd(src + i + t - r)));
        _mm256_storeu_pd(dst + i, acc);
      }
      for (; i < nx; ++i) dst[i] = conv_point(src, i, nx, 1, w);
    }
}

// Convolution along y or z: vectorise across x, where samples are contiguous.
void convolve_yz(const double* in, double* out, const Dims& d, int axis, std::span<const double> w) {
  const long r = static_cast<long>(w.size() / 2);
  const long taps = static_cast<long>(w.size());
  const long n_axis = static_cast<long>(d[axis]);
  const std::size_t nx = d.nx;
  std::vector<const double*> rows(w.size());
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j) {
      const long pos = axis == 1 ? static_cast<long>(j) : static_cast<long>(k);
      for (long t = 0; t < taps; ++t) {
        const auto s = static_cast<std::size_t>(clamp_index(pos + t - r, n_axis));
        rows[t] = in + (axis == 1 ? lin(0, s, k, d) : lin(0, j, s, d));
      }
      double* dst = out + lin(0, j, k, d);
      std::size_t i = 0;
      for (; i + 4 <= nx; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (long t = 0; t < taps; ++t)
          acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(w[t]), _mm256_loadu_pd(rows[t] + i)));
        _mm256_storeu_pd(dst + i, acc);
      }
      for (; i < nx; ++i) {
        double acc = 0.0;
        for (long t = 0; t < taps; ++t) acc = acc + w[t] * rows[t][i];
        dst[i] = acc;
      }
    }
}

}  // namespace

void convolve_axis_avx2(const double* in, double* out, const Dims& d, int axis, std::span<const double> w) {
  if (axis == 0)
    convolve_x(in, out, d, w);
  else
    convolve_yz(in, out, d, axis, w);
}

void max_update_avx2(const float* slice, float* best, std::int32_t* arg, std::size_t n, std::int32_t slice_index) {
  const __m256i idx = _mm256_set1_epi32(slice_index);
  std::size_t p = 0;
  for (; p + 8 <= n; p += 8) {
    const __m256 s = _mm256_loadu_ps(slice + p);
    const __m256 b = _mm256_loadu_ps(best + p);
    const __m256 gt = _mm256_cmp_ps(s, b, _CMP_GT_OQ);
    _mm256_storeu_ps(best + p, _mm256_blendv_ps(b, s, gt));
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(arg + p));
    const __m256i na = _mm256_blendv_epi8(a, idx, _mm256_castps_si256(gt));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(arg + p), na);
  }
  for (; p < n; ++p) {
    if (slice[p] > best[p]) {
      best[p] = slice[p];
      arg[p] = slice_index;
    }
  }
}

}  // namespace vseg::kernels
