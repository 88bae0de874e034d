#pragma once

#include <array>

#include "vseg/volume.hpp"

namespace vseg {

struct InpaintConfig {
  int max_iters = 400;
  double tol = 1e-4;
};

/// Replaces voxels outside `mask` by a smooth extension of the inside values: outside voxels
/// start at the value of their nearest inside voxel (6-connected distance), then are
/// repeatedly set to the mean of their in-grid 6-neighbours until the largest update falls
/// below tol * max|value| or max_iters is reached. Inside voxels are untouched.
Volume3 inpaint_outside_mask(const Volume3& volume, const BinaryMask3& mask, const InpaintConfig& cfg = {});

/// Ellipsoid semi-axes, in k-space samples, of the inverse Hamming high-pass.
struct InverseHammingSpec {
  double hx = 80.0, hy = 80.0, hz = 80.0;

  void validate() const;
};

/// 0.6 * (1 - cos(pi * sqrt(r2))) when r2 = kx^2/Hx^2 + ky^2/Hy^2 + kz^2/Hz^2 <= 1, else 1.
/// k is the signed offset from DC in samples.
double inverse_hamming_weight(double kx, double ky, double kz, const InverseHammingSpec& spec);

/// Signed DC-centred frequency of DFT bin m for an axis of length n (DC at floor(n/2) after shift).
long centered_frequency(std::size_t m, std::size_t n);

/// Forward 3D DFT, per-bin multiplication by the inverse Hamming weight, inverse DFT; the
/// result is real because the weight is even in every component.
Volume3 highpass_inverse_hamming(const Volume3& volume, const InverseHammingSpec& spec);

}  // namespace vseg
