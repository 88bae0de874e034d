#pragma once

#include <vector>

#include "vseg/components.hpp"
#include "vseg/volume.hpp"

namespace vseg {

struct RefineConfig {
  double aniso_thresh = 1.2e-3;
  Connectivity connectivity = Connectivity::k26;

  void validate() const;
};

struct ComponentAnisotropy {
  std::size_t size = 0;
  std::size_t min_index = 0;
  double mean_ani = 0.0;
};

/// Mean of `ani` over each connected component of `mask`, in label order.
std::vector<ComponentAnisotropy> cc_mean_anisotropy(const BinaryMask3& mask, const Volume3& ani,
                                                    Connectivity connectivity = Connectivity::k26);

/// Drops every component whose mean anisotropy is strictly below the threshold.
BinaryMask3 remove_low_anisotropy(const BinaryMask3& mask, const Volume3& ani, const RefineConfig& cfg);

}  // namespace vseg
