#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vseg/volume.hpp"

namespace vseg {

/// Multi-scale fractional anisotropy tensor vesselness parameters. Scales are in voxels.
struct MfatConfig {
  std::vector<double> sigmas{0.25, 0.5, 0.75, 1.0};
  double tau_rho = 0.02;
  double tau_nu = 0.35;
  double delta = 0.3;

  void validate() const;
};

/// Regularized eigenvalue: lambda3 if lambda3 < tau*min_lambda3; tau*min_lambda3 if
/// tau*min_lambda3 <= lambda3 < 0; otherwise 0.
double regularize_eigen(double lambda3, double min_lambda3, double tau);

/// Fractional anisotropy of (lambda2, lambda_rho, lambda_nu) about the mean of the raw
/// eigenvalues (lambda1 + lambda2 + lambda3) / 3. Zero denominator gives 0.
double fat_vesselness(double lambda1, double lambda2, double lambda3, double lambda_rho, double lambda_nu);

/// Unclamped R_lambda: 0 if lambda_rho > lambda_rho - lambda2, lambda_rho >= 0 or lambda2 >= 0;
/// 1 if lambda_rho - lambda2 equals max_gap (relative tolerance 1e-12); else 1 - v_fat.
/// Branches are tested in that order.
double r_lambda(double lambda2, double lambda_rho, double v_fat, double max_gap);

/// Per-scale invariant record filled by mfat() when requested.
struct MfatScaleCheck {
  double sigma = 0;
  double min_r_unclamped = 0;  // may be negative: v_fat exceeds 1 when regularization is active
  double max_r_unclamped = 0;
  double min_v_minus_r = 0;    // min over voxels of v_mfat - R_lambda after the scale step
  double min_v = 0;
  double max_v = 0;
};

struct VesselnessResult {
  Volume3 v_mfat;
  std::vector<std::array<float, 3>> v1;  // unit eigenvector of lambda1 at the winning scale
  std::vector<float> lambda2;
  std::vector<float> lambda3;
  Volume3 ani;                           // |lambda2 * lambda3|
  std::vector<std::uint8_t> winning_scale;
};

struct MfatOptions {
  /// Voxels over which min(lambda3) and max(lambda_rho - lambda2) are taken; nullptr = whole volume.
  const BinaryMask3* reduction_domain = nullptr;
  /// When set, receives one record per scale.
  std::vector<MfatScaleCheck>* checks = nullptr;
};

VesselnessResult mfat(const Volume3& volume, const MfatConfig& cfg, const MfatOptions& opts = {});

struct Vesselness2D {
  Image2 v_mfat;
  std::vector<std::array<float, 2>> v1;
  std::vector<float> lambda2;
  std::vector<float> lambda3;
};

/// 2D instance: the Hessian eigenpair (mu1, mu2), |mu1| <= |mu2|, enters the 3D formulas as
/// (lambda1, lambda2, lambda3) = (mu1, mu2, mu2). `domain` (same size as the image, may be
/// empty) restricts the per-image reductions.
Vesselness2D mfat_2d(const Image2& image, const MfatConfig& cfg, std::span<const std::uint8_t> domain = {},
                     std::vector<MfatScaleCheck>* checks = nullptr);

}  // namespace vseg
