#include "vseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace vseg {

namespace {

const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::log(2.0));

double seg_distance(const Point3& p, const Point3& a, const Point3& b) {
  double ab[3], ap[3], len2 = 0.0, dot = 0.0;
  for (int c = 0; c < 3; ++c) {
    ab[c] = b[c] - a[c];
    ap[c] = p[c] - a[c];
    len2 += ab[c] * ab[c];
    dot += ab[c] * ap[c];
  }
  const double t = len2 > 0.0 ? std::clamp(dot / len2, 0.0, 1.0) : 0.0;
  double d2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double e = ap[c] - t * ab[c];
    d2 += e * e;
  }
  return std::sqrt(d2);
}

bool inside_grid(const Point3& p, const Dims& d, const Spacing& s) {
  for (int c = 0; c < 3; ++c)
    if (!(p[c] >= 0.0 && p[c] <= static_cast<double>(d[c] - 1) * s[c])) return false;
  return true;
}

struct Box {
  std::size_t lo[3], hi[3];
};

// Voxel index box covering [lo_mm, hi_mm] on every axis, clipped to the grid.
Box voxel_box(const Point3& lo_mm, const Point3& hi_mm, const Dims& d, const Spacing& s) {
  Box b;
  for (int c = 0; c < 3; ++c) {
    const double lo = std::floor(lo_mm[c] / s[c]);
    const double hi = std::ceil(hi_mm[c] / s[c]);
    b.lo[c] = static_cast<std::size_t>(std::clamp(lo, 0.0, static_cast<double>(d[c] - 1)));
    b.hi[c] = static_cast<std::size_t>(std::clamp(hi, 0.0, static_cast<double>(d[c] - 1)));
  }
  return b;
}

}  // namespace

void generate_tube(const std::vector<Point3>& path, double radius_mm, double intensity, Volume3& into,
                   BinaryMask3& mask) {
  require_same_grid(into.geometry(), mask.geometry(), "tube rasterization");
  if (!(radius_mm > 0.0)) throw ConfigError("tube radius must be positive");
  const Dims& d = into.dims();
  const Spacing& s = into.spacing();
  for (const auto& p : path)
    if (!inside_grid(p, d, s)) throw ConfigError("tube path point lies outside the volume");

  std::vector<std::pair<Point3, Point3>> segs;
  for (std::size_t n = 1; n < path.size(); ++n)
    if (path[n] != path[n - 1]) segs.emplace_back(path[n - 1], path[n]);
  if (segs.empty()) return;

  const double w = radius_mm / 2.0 / kFwhmPerSigma;
  const double reach = radius_mm + 3.0 * w;
  for (const auto& [a, b] : segs) {
    Point3 lo, hi;
    for (int c = 0; c < 3; ++c) {
      lo[c] = std::min(a[c], b[c]) - reach;
      hi[c] = std::max(a[c], b[c]) + reach;
    }
    const Box box = voxel_box(lo, hi, d, s);
    for (std::size_t k = box.lo[2]; k <= box.hi[2]; ++k)
      for (std::size_t j = box.lo[1]; j <= box.hi[1]; ++j)
        for (std::size_t i = box.lo[0]; i <= box.hi[0]; ++i) {
          const Point3 p{static_cast<double>(i) * s.dx, static_cast<double>(j) * s.dy, static_cast<double>(k) * s.dz};
          const double dist = seg_distance(p, a, b);
          if (dist > reach) continue;
          const std::size_t idx = lin(i, j, k, d);
          double val;
          if (dist <= radius_mm) {
            val = intensity;
            mask.set(idx);
          } else {
            const double e = dist - radius_mm;
            val = intensity * std::exp(-0.5 * e * e / (w * w));
          }
          if (val > into[idx]) into[idx] = static_cast<float>(val);
        }
  }
}

void generate_blob(const Point3& center, double radius_mm, double intensity, Volume3& into, BinaryMask3& mask) {
  require_same_grid(into.geometry(), mask.geometry(), "blob rasterization");
  if (!(radius_mm > 0.0)) throw ConfigError("blob radius must be positive");
  const Dims& d = into.dims();
  const Spacing& s = into.spacing();
  if (!inside_grid(center, d, s)) throw ConfigError("blob centre lies outside the volume");
  const double w = radius_mm / 2.0;
  const double reach = 3.0 * w;
  Point3 lo, hi;
  for (int c = 0; c < 3; ++c) {
    lo[c] = center[c] - reach;
    hi[c] = center[c] + reach;
  }
  const Box box = voxel_box(lo, hi, d, s);
  for (std::size_t k = box.lo[2]; k <= box.hi[2]; ++k)
    for (std::size_t j = box.lo[1]; j <= box.hi[1]; ++j)
      for (std::size_t i = box.lo[0]; i <= box.hi[0]; ++i) {
        const double dx = static_cast<double>(i) * s.dx - center[0];
        const double dy = static_cast<double>(j) * s.dy - center[1];
        const double dz = static_cast<double>(k) * s.dz - center[2];
        const double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 > reach * reach) continue;
        const std::size_t idx = lin(i, j, k, d);
        if (d2 <= radius_mm * radius_mm) mask.set(idx);
        into[idx] = static_cast<float>(into[idx] + intensity * std::exp(-0.5 * d2 / (w * w)));
      }
}

void SceneSpec::validate() const {
  validate_geometry(dims, spacing);
  if (!(noise_fraction >= 0.0)) throw ConfigError("noise_fraction must be >= 0");
  for (int c = 0; c < 3; ++c)
    if (brain_semi_axes[c] < 0.0) throw ConfigError("brain semi-axes must be >= 0");
  for (const auto& t : tubes) {
    if (!(t.radius_mm > 0.0)) throw ConfigError("tube radius must be positive");
    for (const auto& p : t.path)
      if (!inside_grid(p, dims, spacing)) throw ConfigError("tube path point lies outside the volume");
  }
  for (const auto& b : blobs) {
    if (!(b.radius_mm > 0.0)) throw ConfigError("blob radius must be positive");
    if (!inside_grid(b.center, dims, spacing)) throw ConfigError("blob centre lies outside the volume");
  }
}

PhantomScene generate_scene(const SceneSpec& spec, std::uint64_t rng_seed) {
  spec.validate();
  const Dims& d = spec.dims;
  const Spacing& s = spec.spacing;
  PhantomScene sc;
  sc.spec = spec;
  sc.rng_seed = rng_seed;
  sc.brain = BinaryMask3(d, s);
  sc.gt_vessels = BinaryMask3(d, s);
  sc.gt_blobs = BinaryMask3(d, s);

  Point3 centre = spec.brain_center, semi = spec.brain_semi_axes;
  for (int c = 0; c < 3; ++c) {
    const double extent = static_cast<double>(d[c] - 1) * s[c];
    if (semi[c] == 0.0) {
      centre[c] = extent / 2.0;
      semi[c] = std::max(0.46 * static_cast<double>(d[c]) * s[c], s[c]);
    }
  }
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j)
      for (std::size_t i = 0; i < d.nx; ++i) {
        const double u = (static_cast<double>(i) * s.dx - centre[0]) / semi[0];
        const double v = (static_cast<double>(j) * s.dy - centre[1]) / semi[1];
        const double w = (static_cast<double>(k) * s.dz - centre[2]) / semi[2];
        if (u * u + v * v + w * w <= 1.0) sc.brain.set(i, j, k);
      }

  Volume3 r2(d, s), para(d, s), dia(d, s);
  Volume3 scratch(d, s);
  BinaryMask3 unused(d, s);
  ContrastLevels peak{0, 0, 0};
  for (const auto& t : spec.tubes) {
    // Rasterize once into a scratch volume and copy scaled profiles into each map.
    std::fill(scratch.data().begin(), scratch.data().end(), 0.0f);
    generate_tube(t.path, t.radius_mm, 1.0, scratch, sc.gt_vessels);
    for (std::size_t n = 0; n < scratch.size(); ++n) {
      const double f = scratch[n];
      if (f == 0.0) continue;
      r2[n] = std::max(r2[n], static_cast<float>(f * t.intensity.r2star));
      para[n] = std::max(para[n], static_cast<float>(f * t.intensity.chi_para));
      dia[n] = std::max(dia[n], static_cast<float>(f * t.intensity.chi_dia));
    }
    peak.r2star = std::max(peak.r2star, std::abs(t.intensity.r2star));
    peak.chi_para = std::max(peak.chi_para, std::abs(t.intensity.chi_para));
    peak.chi_dia = std::max(peak.chi_dia, std::abs(t.intensity.chi_dia));
  }
  for (const auto& b : spec.blobs) {
    generate_blob(b.center, b.radius_mm, b.intensity.r2star, r2, sc.gt_blobs);
    generate_blob(b.center, b.radius_mm, b.intensity.chi_para, para, unused);
  }

  for (std::size_t n = 0; n < sc.brain.size(); ++n) {
    if ((sc.gt_vessels[n] || sc.gt_blobs[n]) && !sc.brain[n])
      throw ConfigError("scene primitive extends outside the brain ellipsoid");
    if (sc.gt_vessels[n] && sc.gt_blobs[n]) throw ConfigError("tube and blob ground truths overlap");
  }

  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sig[3] = {spec.noise_fraction * peak.r2star, spec.noise_fraction * peak.chi_para,
                         spec.noise_fraction * peak.chi_dia};
  const double bg[3] = {spec.background.r2star, spec.background.chi_para, spec.background.chi_dia};
  Volume3* maps[3] = {&r2, &para, &dia};
  for (int m = 0; m < 3; ++m) {
    Volume3& vol = *maps[m];
    for (std::size_t n = 0; n < vol.size(); ++n) {
      const double noise = normal(rng) * sig[m];  // drawn for every voxel so the stream is grid-aligned
      vol[n] = sc.brain[n] ? static_cast<float>(vol[n] + bg[m] + noise) : 0.0f;
    }
  }
  sc.r2star_like = std::move(r2);
  sc.chi_para_like = std::move(para);
  sc.chi_dia_like = std::move(dia);
  return sc;
}

SceneSpec default_acceptance_scene() { return scaled_acceptance_scene({128, 128, 128}); }

SceneSpec scaled_acceptance_scene(const Dims& dims) {
  SceneSpec spec;
  spec.dims = dims;
  spec.spacing = {1.0, 1.0, 1.0};
  spec.background = {0.3, 0.2, 0.2};
  spec.noise_fraction = 0.02;
  const double ex = static_cast<double>(dims.nx - 1), ey = static_cast<double>(dims.ny - 1),
               ez = static_cast<double>(dims.nz - 1);
  spec.brain_center = {ex / 2, ey / 2, ez / 2};
  spec.brain_semi_axes = {0.47 * ex, 0.47 * ey, 0.44 * ez};
  // Layout in fractions of the 128-voxel reference grid.
  auto at = [&](double fx, double fy, double fz) { return Point3{fx * ex, fy * ey, fz * ez}; };
  auto tube = [&](std::vector<Point3> path, double r) {
    TubeSpec t;
    t.path = std::move(path);
    t.radius_mm = r;
    t.intensity = {1.0, 1.0, 1.0};
    spec.tubes.push_back(std::move(t));
  };
  tube({at(20 / 127., 30 / 127., 64 / 127.), at(64 / 127., 64 / 127., 40 / 127.), at(108 / 127., 90 / 127., 50 / 127.)},
       3.0);
  tube({at(64 / 127., 20 / 127., 30 / 127.), at(64 / 127., 100 / 127., 90 / 127.)}, 2.0);
  tube({at(30 / 127., 60 / 127., 100 / 127.), at(100 / 127., 60 / 127., 95 / 127.)}, 1.0);
  auto blob = [&](Point3 c, double r) {
    BlobSpec b;
    b.center = c;
    b.radius_mm = r;
    b.intensity = {0.8, 0.8, 0.0};
    spec.blobs.push_back(b);
  };
  blob(at(40 / 127., 85 / 127., 70 / 127.), 10.0);
  blob(at(90 / 127., 40 / 127., 75 / 127.), 6.0);
  return spec;
}

}  // namespace vseg
