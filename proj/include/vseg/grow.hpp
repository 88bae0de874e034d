#pragma once

#include <cstdint>
#include <vector>

#include "vseg/components.hpp"
#include "vseg/mfat.hpp"
#include "vseg/volume.hpp"

namespace vseg {

struct GrowConfig {
  double gamma1 = 0.5;  // upper = mean + gamma1 * std
  double gamma2 = 0.5;  // lower = mean - gamma2 * std
  Connectivity connectivity = Connectivity::k26;
  bool restrict_to_brain = true;
  /// true: the anisotropy factor divides the threshold, 0.5 (1 - Omega) / (R (1 - e^{-10 Ani}));
  /// false: it multiplies it, 0.5 (1 - Omega) / R * (1 - e^{-10 Ani}).
  bool anisotropy_in_denominator = false;

  void validate() const;
};

struct GrowLimits {
  double upper = 0.0;
  double lower = 0.0;
};

/// Limits from the population mean/std of chi over seed voxels. Empty seeds throw.
GrowLimits intensity_limits(const Volume3& chi, const BinaryMask3& seeds, const GrowConfig& cfg);

inline constexpr double kIntensityEpsilon = 1e-12;

/// Mid-band threshold on v_MFAT(q) for growing from p into q.
double grow_threshold(double omega, double intensity_ratio, double ani_q, bool anisotropy_in_denominator);

/// Inclusion predicate for candidate q reached from mask voxel p (linear indices).
bool grow_condition(std::size_t p, std::size_t q, const Volume3& chi, const VesselnessResult& ves,
                    const GrowLimits& limits, const GrowConfig& cfg);

/// Seed voxels ordered by descending cluster size, then by cluster's smallest index, then by
/// ascending linear index within the cluster.
std::vector<std::size_t> seed_queue_order(const BinaryMask3& seeds, Connectivity connectivity);

/// FIFO region growing from the seeds. Seeds outside the brain are rejected when
/// restrict_to_brain is set. Empty seeds give an empty mask.
BinaryMask3 region_grow(const Volume3& chi, const BinaryMask3& seeds, const VesselnessResult& ves,
                        const BinaryMask3& brain, const GrowConfig& cfg);

/// Same, with an explicit initial queue (any permutation of the seed voxels).
BinaryMask3 region_grow_from(const Volume3& chi, const BinaryMask3& seeds, std::vector<std::size_t> queue,
                             const VesselnessResult& ves, const BinaryMask3& brain, const GrowConfig& cfg);

}  // namespace vseg
