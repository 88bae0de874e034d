#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vseg/error.hpp"

namespace vseg {

struct Dims {
  std::size_t nx = 1, ny = 1, nz = 1;

  std::size_t count() const { return nx * ny * nz; }
  std::size_t operator[](int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

struct Spacing {
  double dx = 1.0, dy = 1.0, dz = 1.0;

  double operator[](int axis) const { return axis == 0 ? dx : axis == 1 ? dy : dz; }
  friend bool operator==(const Spacing&, const Spacing&) = default;
};

struct Coord {
  std::size_t i = 0, j = 0, k = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Source-file metadata carried through unchanged (raw NIfTI-1 header bytes).
struct Header {
  std::vector<std::uint8_t> raw;
};

/// Column-major linearization i + nx*(j + ny*k). Throws on out-of-bounds input.
std::size_t linear_index(std::size_t i, std::size_t j, std::size_t k, const Dims& dims);
Coord coord_of(std::size_t index, const Dims& dims);

/// Unchecked variant for inner loops.
inline std::size_t lin(std::size_t i, std::size_t j, std::size_t k, const Dims& d) {
  return i + d.nx * (j + d.ny * k);
}

struct Geometry {
  Dims dims;
  Spacing spacing;
  Header header;

  bool same_grid(const Geometry& o) const { return dims == o.dims && spacing == o.spacing; }
};

void validate_geometry(const Dims& dims, const Spacing& spacing);

/// Scalar 3D grid. Samples are stored as float32; arithmetic on them is done in double.
class Volume3 {
 public:
  Volume3() = default;
  Volume3(Dims dims, Spacing spacing = {}, float fill = 0.0f);
  Volume3(Dims dims, Spacing spacing, std::vector<float> data);

  const Dims& dims() const { return geom_.dims; }
  const Spacing& spacing() const { return geom_.spacing; }
  const Geometry& geometry() const { return geom_; }
  Header& header() { return geom_.header; }
  const Header& header() const { return geom_.header; }
  std::size_t size() const { return data_.size(); }

  float& operator[](std::size_t idx) { return data_[idx]; }
  float operator[](std::size_t idx) const { return data_[idx]; }
  float& at(std::size_t i, std::size_t j, std::size_t k) { return data_[lin(i, j, k, geom_.dims)]; }
  float at(std::size_t i, std::size_t j, std::size_t k) const { return data_[lin(i, j, k, geom_.dims)]; }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  /// Throws InputError if any sample is NaN or infinite.
  void require_finite(const std::string& what) const;

 private:
  Geometry geom_;
  std::vector<float> data_;
};

/// Binary mask with values exactly 0 or 1.
class BinaryMask3 {
 public:
  BinaryMask3() = default;
  explicit BinaryMask3(Dims dims, Spacing spacing = {});
  /// Takes geometry (including header) from a volume; all voxels 0.
  explicit BinaryMask3(const Geometry& geom);
  BinaryMask3(Dims dims, Spacing spacing, std::vector<std::uint8_t> data);

  const Dims& dims() const { return geom_.dims; }
  const Spacing& spacing() const { return geom_.spacing; }
  const Geometry& geometry() const { return geom_; }
  Header& header() { return geom_.header; }
  const Header& header() const { return geom_.header; }
  std::size_t size() const { return data_.size(); }

  bool operator[](std::size_t idx) const { return data_[idx] != 0; }
  bool at(std::size_t i, std::size_t j, std::size_t k) const { return data_[lin(i, j, k, geom_.dims)] != 0; }
  void set(std::size_t idx, bool v = true) { data_[idx] = v ? 1 : 0; }
  void set(std::size_t i, std::size_t j, std::size_t k, bool v = true) { set(lin(i, j, k, geom_.dims), v); }

  std::span<const std::uint8_t> data() const { return data_; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }

  friend bool operator==(const BinaryMask3& a, const BinaryMask3& b) {
    return a.geom_.same_grid(b.geom_) && a.data_ == b.data_;
  }

 private:
  Geometry geom_;
  std::vector<std::uint8_t> data_;
};

/// Throws GeometryError when the grids differ.
void require_same_grid(const Geometry& a, const Geometry& b, const char* what);

BinaryMask3 mask_union(const BinaryMask3& a, const BinaryMask3& b);
BinaryMask3 mask_intersection(const BinaryMask3& a, const BinaryMask3& b);
/// Voxels where v > threshold.
BinaryMask3 threshold_above(const Volume3& v, double threshold);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Population mean/std (divide by N) over mask voxels. Empty mask throws.
MeanStd masked_mean_std(const Volume3& volume, const BinaryMask3& mask);

/// 2D scalar image, first axis fastest.
struct Image2 {
  std::size_t nx = 0, ny = 0;
  std::vector<float> data;

  Image2() = default;
  Image2(std::size_t w, std::size_t h, float fill = 0.0f) : nx(w), ny(h), data(w * h, fill) {}
  float& at(std::size_t x, std::size_t y) { return data[x + nx * y]; }
  float at(std::size_t x, std::size_t y) const { return data[x + nx * y]; }
  std::size_t size() const { return data.size(); }
};

}  // namespace vseg
