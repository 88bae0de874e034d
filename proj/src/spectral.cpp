#include "vseg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>

#include "vseg/components.hpp"
#include "vseg/parallel.hpp"

namespace vseg {

Volume3 inpaint_outside_mask(const Volume3& volume, const BinaryMask3& mask, const InpaintConfig& cfg) {
  require_same_grid(volume.geometry(), mask.geometry(), "inpainting");
  if (mask.empty()) throw InputError("inpainting needs a nonempty mask");
  const Dims& d = volume.dims();
  const auto& offs = neighbor_offsets(Connectivity::k6);
  const std::size_t n = volume.size();

  std::vector<double> cur(n);
  std::vector<std::uint8_t> known(n, 0);
  std::deque<std::size_t> front;
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (!mask[idx]) continue;
    cur[idx] = volume[idx];
    known[idx] = 1;
    front.push_back(idx);
  }
  // Nearest-inside initialisation by breadth-first propagation.
  while (!front.empty()) {
    const std::size_t idx = front.front();
    front.pop_front();
    const Coord c = coord_of(idx, d);
    for_each_neighbor(d, c.i, c.j, c.k, offs, [&](std::size_t nb) {
      if (known[nb]) return;
      known[nb] = 1;
      cur[nb] = cur[idx];
      front.push_back(nb);
    });
  }

  std::vector<std::size_t> outside;
  for (std::size_t idx = 0; idx < n; ++idx)
    if (!mask[idx]) outside.push_back(idx);

  std::vector<double> next = cur;
  double scale = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) scale = std::max(scale, std::abs(cur[idx]));
  scale = std::max(scale, 1e-30);

  const std::size_t sx = 1, sy = d.nx, sz = d.nx * d.ny;
  for (int it = 0; it < cfg.max_iters && !outside.empty(); ++it) {
    const unsigned workers = std::max(1u, thread_count());
    std::vector<double> chunk_max(workers + 1, 0.0);
    const std::size_t chunk = (outside.size() + workers - 1) / workers;
    parallel_for(outside.size(), [&](std::size_t b, std::size_t e) {
      double local = 0.0;
      for (std::size_t t = b; t < e; ++t) {
        const std::size_t idx = outside[t];
        const Coord c = coord_of(idx, d);
        double sum = 0.0;
        int cnt = 0;
        if (c.i > 0) { sum += cur[idx - sx]; ++cnt; }
        if (c.i + 1 < d.nx) { sum += cur[idx + sx]; ++cnt; }
        if (c.j > 0) { sum += cur[idx - sy]; ++cnt; }
        if (c.j + 1 < d.ny) { sum += cur[idx + sy]; ++cnt; }
        if (c.k > 0) { sum += cur[idx - sz]; ++cnt; }
        if (c.k + 1 < d.nz) { sum += cur[idx + sz]; ++cnt; }
        const double v = cnt > 0 ? sum / cnt : cur[idx];
        local = std::max(local, std::abs(v - cur[idx]));
        next[idx] = v;
      }
      chunk_max[std::min<std::size_t>(b / std::max<std::size_t>(chunk, 1), workers)] = local;
    });
    std::swap(cur, next);
    const double change = *std::max_element(chunk_max.begin(), chunk_max.end());
    if (change < cfg.tol * scale) break;
  }

  Volume3 out(d, volume.spacing());
  out.header() = volume.header();
  for (std::size_t idx = 0; idx < n; ++idx) out[idx] = mask[idx] ? volume[idx] : static_cast<float>(cur[idx]);
  return out;
}

void InverseHammingSpec::validate() const {
  if (!(hx > 0.0) || !(hy > 0.0) || !(hz > 0.0)) throw ConfigError("inverse Hamming filter sizes must be positive");
}

double inverse_hamming_weight(double kx, double ky, double kz, const InverseHammingSpec& s) {
  const double r2 = kx * kx / (s.hx * s.hx) + ky * ky / (s.hy * s.hy) + kz * kz / (s.hz * s.hz);
  if (r2 <= 1.0) return 0.6 * (1.0 - std::cos(std::numbers::pi * std::sqrt(r2)));
  return 1.0;
}

long centered_frequency(std::size_t m, std::size_t n) {
  const auto h = static_cast<long>(n / 2);
  return static_cast<long>((m + n / 2) % n) - h;
}

namespace {
std::mutex g_fftw_plan_mutex;  // planner is not thread-safe
}

Volume3 highpass_inverse_hamming(const Volume3& volume, const InverseHammingSpec& spec) {
  spec.validate();
  const Dims& d = volume.dims();
  const std::size_t n = d.count();
  const std::size_t nxh = d.nx / 2 + 1;
  const std::size_t nspec = nxh * d.ny * d.nz;

  double* real = fftw_alloc_real(n);
  fftw_complex* freq = fftw_alloc_complex(nspec);
  if (real == nullptr || freq == nullptr) {
    fftw_free(real);
    fftw_free(freq);
    throw std::bad_alloc();
  }
  fftw_plan fwd, inv;
  {
    std::lock_guard lock(g_fftw_plan_mutex);
    // FFTW is row-major with the last index fastest, so the axes are passed as (z, y, x).
    fwd = fftw_plan_dft_r2c_3d(static_cast<int>(d.nz), static_cast<int>(d.ny), static_cast<int>(d.nx), real, freq,
                               FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_3d(static_cast<int>(d.nz), static_cast<int>(d.ny), static_cast<int>(d.nx), freq, real,
                               FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) real[i] = volume[i];
  fftw_execute(fwd);

  std::vector<double> wx(nxh);
  for (std::size_t m = 0; m < nxh; ++m) wx[m] = static_cast<double>(centered_frequency(m, d.nx));
  const double norm = 1.0 / static_cast<double>(n);
  for (std::size_t kz = 0; kz < d.nz; ++kz) {
    const double fz = static_cast<double>(centered_frequency(kz, d.nz));
    for (std::size_t ky = 0; ky < d.ny; ++ky) {
      const double fy = static_cast<double>(centered_frequency(ky, d.ny));
      fftw_complex* row = freq + nxh * (ky + d.ny * kz);
      for (std::size_t kx = 0; kx < nxh; ++kx) {
        const double w = inverse_hamming_weight(wx[kx], fy, fz, spec) * norm;
        row[kx][0] *= w;
        row[kx][1] *= w;
      }
    }
  }
  fftw_execute(inv);

  Volume3 out(d, volume.spacing());
  out.header() = volume.header();
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(real[i]);
  {
    std::lock_guard lock(g_fftw_plan_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(real);
  fftw_free(freq);
  return out;
}

}  // namespace vseg
