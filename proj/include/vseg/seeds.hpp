#pragma once

#include <functional>
#include <string>

#include "vseg/mfat.hpp"
#include "vseg/mip.hpp"
#include "vseg/spectral.hpp"
#include "vseg/volume.hpp"

namespace vseg {

struct SeedConfig {
  double k_large = 2.0;  // large-vessel threshold: mean + k_large * std of v_MFAT
  double k_small = 1.0;  // small-vessel threshold, per MIP slab
  double slab_mm = 16.0;
  int mip_axis = 2;
  bool stats_over_brain = true;  // false: threshold statistics over the full volume/slab
  InverseHammingSpec hamming;
  InpaintConfig inpaint;
  MfatConfig mfat;

  void validate() const;
};

/// Receives named intermediate volumes (high-passed R2*, v_MFAT, product MIP) when set.
using IntermediateSink = std::function<void(const std::string& name, const Volume3& volume)>;

/// Inpaint outside the brain, inverse-Hamming high-pass, MFAT, threshold, intersect with the brain.
BinaryMask3 large_vessel_seeds(const Volume3& r2star, const BinaryMask3& brain, const SeedConfig& cfg,
                               const IntermediateSink& sink = {});

/// MIP of chi_para * |chi_dia| in slabs; pixels whose MIP voxel is already a large seed are zeroed;
/// per-slab 2D MFAT and threshold over the slab's brain footprint; back-projection to 3D.
BinaryMask3 small_vessel_seeds(const Volume3& chi_para, const Volume3& chi_dia, const BinaryMask3& large_seeds,
                               const BinaryMask3& brain, const SeedConfig& cfg, const IntermediateSink& sink = {});

BinaryMask3 combine_seeds(const BinaryMask3& large, const BinaryMask3& small);

}  // namespace vseg
