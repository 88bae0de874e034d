#include "kernels_impl.hpp"

namespace vseg::kernels {

void convolve_axis_scalar(const double* in, double* out, const Dims& d, int axis, std::span<const double> w) {
  const long r = static_cast<long>(w.size() / 2);
  const long taps = static_cast<long>(w.size());
  const long n_axis = static_cast<long>(d[axis]);
  const std::size_t stride = axis == 0 ? 1 : axis == 1 ? d.nx : d.nx * d.ny;

  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j)
      for (std::size_t i = 0; i < d.nx; ++i) {
        const long pos = axis == 0 ? static_cast<long>(i) : axis == 1 ? static_cast<long>(j) : static_cast<long>(k);
        const std::size_t base = lin(i, j, k, d) - static_cast<std::size_t>(pos) * stride;
        double acc = 0.0;
        for (long t = 0; t < taps; ++t) {
          const long s = clamp_index(pos + t - r, n_axis);
          acc = acc + w[t] * in[base + static_cast<std::size_t>(s) * stride];
        }
        out[lin(i, j, k, d)] = acc;
      }
}

void max_update_scalar(const float* slice, float* best, std::int32_t* arg, std::size_t n, std::int32_t slice_index) {
  for (std::size_t p = 0; p < n; ++p) {
    if (slice[p] > best[p]) {
      best[p] = slice[p];
      arg[p] = slice_index;
    }
  }
}

}  // namespace vseg::kernels
