#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vseg/volume.hpp"

namespace vseg {

using Point3 = std::array<double, 3>;  // millimetres, voxel centre (i, j, k) at (i*dx, j*dy, k*dz)

struct ContrastLevels {
  double r2star = 0.0;
  double chi_para = 0.0;
  double chi_dia = 0.0;
};

struct TubeSpec {
  std::vector<Point3> path;
  double radius_mm = 1.0;
  ContrastLevels intensity{1.0, 1.0, 1.0};
};

struct BlobSpec {
  Point3 center{};
  double radius_mm = 5.0;
  ContrastLevels intensity{1.0, 1.0, 0.0};  // chi_dia is ignored: blobs are para-only confounds
};

struct SceneSpec {
  Dims dims{64, 64, 64};
  Spacing spacing{};
  ContrastLevels background{0.0, 0.0, 0.0};  // inside the brain
  double noise_fraction = 0.02;              // noise sigma relative to the brightest tube, per map
  Point3 brain_center{};                     // ellipsoid; zero semi-axes -> centred, 46% of extent
  Point3 brain_semi_axes{};
  std::vector<TubeSpec> tubes;
  std::vector<BlobSpec> blobs;

  void validate() const;
};

struct PhantomScene {
  Volume3 r2star_like, chi_para_like, chi_dia_like;
  BinaryMask3 brain, gt_vessels, gt_blobs;
  std::uint64_t rng_seed = 0;
  SceneSpec spec;
};

/// Rasterizes a tube: voxels within radius of the polyline get `intensity` (max-composited);
/// beyond the rim the profile falls off as a Gaussian with FWHM radius/2. Voxels within the
/// radius are added to `mask`. Paths with fewer than two distinct points have no effect.
void generate_tube(const std::vector<Point3>& path, double radius_mm, double intensity, Volume3& into,
                   BinaryMask3& mask);

/// Adds intensity * exp(-d^2 / (2 (r/2)^2)) around the centre; voxels with d <= r join `mask`.
void generate_blob(const Point3& center, double radius_mm, double intensity, Volume3& into, BinaryMask3& mask);

PhantomScene generate_scene(const SceneSpec& spec, std::uint64_t rng_seed);

/// 128^3 scene with three tubes (radii 1, 2, 3 vox) and two blobs (radii 6, 10 vox), 2% noise.
SceneSpec default_acceptance_scene();

/// Tube/blob layout of the acceptance scene rescaled onto an arbitrary grid (1 mm voxels).
SceneSpec scaled_acceptance_scene(const Dims& dims);

}  // namespace vseg
