#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vseg/volume.hpp"

namespace vseg {

enum class Connectivity : int { k6 = 6, k18 = 18, k26 = 26 };

Connectivity connectivity_from_int(int n);

struct Offset {
  int di, dj, dk;
};

/// Neighbour offsets for the given adjacency, in a fixed order.
const std::vector<Offset>& neighbor_offsets(Connectivity c);

/// Labels are 1..count in order of each component's smallest linear index; 0 is background.
struct Components {
  std::vector<std::uint32_t> labels;
  std::vector<std::size_t> sizes;      // sizes[c - 1]
  std::vector<std::size_t> min_index;  // smallest linear index of component c, at [c - 1]

  std::size_t count() const { return sizes.size(); }
};

Components connected_components(const BinaryMask3& mask, Connectivity connectivity = Connectivity::k26);

/// Calls fn(neighbor_linear_index) for every in-grid neighbour of (i, j, k).
template <typename Fn>
inline void for_each_neighbor(const Dims& d, std::size_t i, std::size_t j, std::size_t k,
                              const std::vector<Offset>& offs, Fn&& fn) {
  for (const auto& o : offs) {
    const long ii = static_cast<long>(i) + o.di;
    const long jj = static_cast<long>(j) + o.dj;
    const long kk = static_cast<long>(k) + o.dk;
    if (ii < 0 || jj < 0 || kk < 0 || ii >= static_cast<long>(d.nx) || jj >= static_cast<long>(d.ny) ||
        kk >= static_cast<long>(d.nz))
      continue;
    fn(lin(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj), static_cast<std::size_t>(kk), d));
  }
}

}  // namespace vseg
