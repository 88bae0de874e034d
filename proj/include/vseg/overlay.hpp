#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "vseg/volume.hpp"

namespace vseg {

struct RgbImage {
  std::size_t width = 0, height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

/// Grey-level slice of `volume` (window: 1st..99th percentile inside `window_region`, or the whole
/// volume when it is empty) with the in-plane boundary of `mask` drawn in red. Rows run from
/// high to low index along the second in-plane axis so the image is not upside down.
RgbImage overlay_slice(const Volume3& volume, const BinaryMask3& mask, const BinaryMask3& window_region, int axis,
                       std::size_t index);

void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace vseg
