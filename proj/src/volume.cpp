#include "vseg/volume.hpp"

#include <cmath>
#include <sstream>

namespace vseg {

std::size_t linear_index(std::size_t i, std::size_t j, std::size_t k, const Dims& dims) {
  if (i >= dims.nx || j >= dims.ny || k >= dims.nz) {
    std::ostringstream os;
    os << "voxel (" << i << ", " << j << ", " << k << ") outside grid " << dims.nx << "x" << dims.ny << "x"
       << dims.nz;
    throw std::out_of_range(os.str());
  }
  return lin(i, j, k, dims);
}

Coord coord_of(std::size_t index, const Dims& dims) {
  if (index >= dims.count()) throw std::out_of_range("linear index outside grid");
  Coord c;
  c.i = index % dims.nx;
  index /= dims.nx;
  c.j = index % dims.ny;
  c.k = index / dims.ny;
  return c;
}

void validate_geometry(const Dims& dims, const Spacing& spacing) {
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) throw InputError("volume dimensions must be >= 1");
  if (!(spacing.dx > 0.0) || !(spacing.dy > 0.0) || !(spacing.dz > 0.0))
    throw InputError("voxel spacing must be positive");
}

Volume3::Volume3(Dims dims, Spacing spacing, float fill) : data_(dims.count(), fill) {
  validate_geometry(dims, spacing);
  geom_.dims = dims;
  geom_.spacing = spacing;
}

Volume3::Volume3(Dims dims, Spacing spacing, std::vector<float> data) : data_(std::move(data)) {
  validate_geometry(dims, spacing);
  if (data_.size() != dims.count()) throw InputError("volume data length does not match dimensions");
  geom_.dims = dims;
  geom_.spacing = spacing;
}

void Volume3::require_finite(const std::string& what) const {
  for (float v : data_)
    if (!std::isfinite(v)) throw InputError(what + ": volume contains NaN or infinite samples");
}

BinaryMask3::BinaryMask3(Dims dims, Spacing spacing) : data_(dims.count(), 0) {
  validate_geometry(dims, spacing);
  geom_.dims = dims;
  geom_.spacing = spacing;
}

BinaryMask3::BinaryMask3(const Geometry& geom) : geom_(geom), data_(geom.dims.count(), 0) {
  validate_geometry(geom.dims, geom.spacing);
}

BinaryMask3::BinaryMask3(Dims dims, Spacing spacing, std::vector<std::uint8_t> data) : data_(std::move(data)) {
  validate_geometry(dims, spacing);
  if (data_.size() != dims.count()) throw InputError("mask data length does not match dimensions");
  for (auto& v : data_) v = v != 0 ? 1 : 0;
  geom_.dims = dims;
  geom_.spacing = spacing;
}

std::size_t BinaryMask3::count() const {
  std::size_t n = 0;
  for (auto v : data_) n += v;
  return n;
}

void require_same_grid(const Geometry& a, const Geometry& b, const char* what) {
  if (!a.same_grid(b)) {
    std::ostringstream os;
    os << what << ": grid mismatch (" << a.dims.nx << "x" << a.dims.ny << "x" << a.dims.nz << " vs "
       << b.dims.nx << "x" << b.dims.ny << "x" << b.dims.nz << ")";
    throw GeometryError(os.str());
  }
}

BinaryMask3 mask_union(const BinaryMask3& a, const BinaryMask3& b) {
  require_same_grid(a.geometry(), b.geometry(), "mask union");
  BinaryMask3 out(a.geometry());
  for (std::size_t n = 0; n < a.size(); ++n) out.set(n, a[n] || b[n]);
  return out;
}

BinaryMask3 mask_intersection(const BinaryMask3& a, const BinaryMask3& b) {
  require_same_grid(a.geometry(), b.geometry(), "mask intersection");
  BinaryMask3 out(a.geometry());
  for (std::size_t n = 0; n < a.size(); ++n) out.set(n, a[n] && b[n]);
  return out;
}

BinaryMask3 threshold_above(const Volume3& v, double threshold) {
  BinaryMask3 out(v.geometry());
  for (std::size_t n = 0; n < v.size(); ++n) out.set(n, static_cast<double>(v[n]) > threshold);
  return out;
}

MeanStd masked_mean_std(const Volume3& volume, const BinaryMask3& mask) {
  require_same_grid(volume.geometry(), mask.geometry(), "masked statistics");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t idx = 0; idx < volume.size(); ++idx) {
    if (!mask[idx]) continue;
    sum += volume[idx];
    ++n;
  }
  if (n == 0) throw InputError("masked statistics over an empty mask");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t idx = 0; idx < volume.size(); ++idx) {
    if (!mask[idx]) continue;
    const double d = volume[idx] - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(n))};
}

}  // namespace vseg
