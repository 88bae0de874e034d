#pragma once

#include <cstdint>
#include <vector>

#include "vseg/volume.hpp"

namespace vseg {

struct SlabExtent {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

/// Slab-wise maximum intensity projection along one axis. In-plane images use the two
/// remaining axes in ascending order (first remaining axis fastest).
struct MipStack {
  int axis = 2;
  std::size_t thickness = 0;  // slices per full slab
  std::size_t stride = 0;
  std::vector<Image2> slabs;
  std::vector<std::vector<std::int32_t>> argmax;  // absolute slice index along `axis`
  std::vector<SlabExtent> extents;

  std::size_t width() const { return slabs.empty() ? 0 : slabs.front().nx; }
  std::size_t height() const { return slabs.empty() ? 0 : slabs.front().ny; }
};

/// Thickness = round(slab_mm / spacing[axis]) slices, stride = max(1, thickness / 2).
/// Slabs start at 0, stride, 2*stride, ... until one reaches the last slice.
MipStack mip_slabs(const Volume3& volume, double slab_mm, int axis = 2);

/// 3D voxel addressed by in-plane pixel (u, v) at slice s along `axis`.
std::size_t voxel_from_plane(const Dims& dims, int axis, std::size_t u, std::size_t v, std::size_t s);

/// Union over slabs of {(u, v, argmax(u, v)) : seeds2d[slab](u, v) != 0}.
BinaryMask3 backproject(const std::vector<std::vector<std::uint8_t>>& seeds2d, const MipStack& stack,
                        const Geometry& geom);

/// Per-slab in-plane footprint of a mask: pixel set where any slab voxel is in the mask.
std::vector<std::uint8_t> slab_footprint(const BinaryMask3& mask, const MipStack& stack, std::size_t slab);

}  // namespace vseg
