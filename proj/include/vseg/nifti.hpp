#pragma once

#include <filesystem>

#include "vseg/volume.hpp"

namespace vseg::nifti {

/// Reads a 3D NIfTI-1 file (.nii or .nii.gz). Integer and float datatypes are accepted and
/// scl_slope/scl_inter applied. The raw header is kept so that affine and units pass through.
Volume3 read_volume(const std::filesystem::path& path);

/// Reads a volume and binarizes it (nonzero -> 1).
BinaryMask3 read_mask(const std::filesystem::path& path);

/// Writes float32. The file appears atomically (temp name + rename).
void write_volume(const std::filesystem::path& path, const Volume3& volume);

/// Writes uint8 {0, 1}. The file appears atomically.
void write_mask(const std::filesystem::path& path, const BinaryMask3& mask);

}  // namespace vseg::nifti
