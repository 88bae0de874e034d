#pragma once

#include <array>
#include <vector>

#include "vseg/volume.hpp"

namespace vseg {

/// Sampled Gaussian, radius ceil(3 sigma), normalized to unit sum.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian smoothing (sigma in voxels, replicate boundary) into a double buffer.
std::vector<double> smooth_to_double(std::span<const float> data, const Dims& dims, double sigma);
Volume3 gaussian_smooth(const Volume3& volume, double sigma);

struct Sym3 {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  double frobenius() const;
};

/// Scale-normalized Hessian of a smoothed grid at one voxel: central differences with
/// clamped indices, multiplied by sigma2.
Sym3 hessian_at(const double* smoothed, const Dims& d, std::size_t i, std::size_t j, std::size_t k, double sigma2);

/// Six second-derivative volumes of the sigma-smoothed input, each times sigma^2.
struct HessianVolumes {
  Dims dims;
  std::vector<double> xx, yy, zz, xy, xz, yz;

  Sym3 at(std::size_t idx) const { return {xx[idx], yy[idx], zz[idx], xy[idx], xz[idx], yz[idx]}; }
};
HessianVolumes hessian_at_scale(const Volume3& volume, double sigma);

/// Eigenvalues ordered by magnitude, |lambda1| <= |lambda2| <= |lambda3|; vectors[n] is the
/// unit eigenvector of the n-th eigenvalue (v1 == vectors[0]).
struct EigenSystem {
  double lambda1 = 0, lambda2 = 0, lambda3 = 0;
  std::array<std::array<double, 3>, 3> vectors{};

  const std::array<double, 3>& v1() const { return vectors[0]; }
};

EigenSystem eig_sym3(const Sym3& h);

/// 2D counterpart: |mu1| <= |mu2|, v1 the unit eigenvector of mu1.
struct EigenSystem2 {
  double mu1 = 0, mu2 = 0;
  std::array<double, 2> v1{};
};
EigenSystem2 eig_sym2(double xx, double yy, double xy);

}  // namespace vseg
