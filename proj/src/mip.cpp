#include "vseg/mip.hpp"

#include <cmath>
#include <limits>

#include "vseg/kernels.hpp"

namespace vseg {

namespace {

struct PlaneAxes {
  int u, v;
};

PlaneAxes plane_axes(int axis) {
  switch (axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    case 2: return {0, 1};
    default: throw ConfigError("MIP axis must be 0, 1 or 2");
  }
}

// Copies slice s along `axis` into a contiguous (u fastest) plane buffer.
void extract_plane(const Volume3& vol, int axis, std::size_t s, std::vector<float>& plane) {
  const Dims& d = vol.dims();
  const auto [ua, va] = plane_axes(axis);
  const std::size_t nu = d[ua], nv = d[va];
  plane.resize(nu * nv);
  if (axis == 2) {
    const auto src = vol.data().subspan(lin(0, 0, s, d), nu * nv);
    std::copy(src.begin(), src.end(), plane.begin());
    return;
  }
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t u = 0; u < nu; ++u) plane[u + nu * v] = vol[voxel_from_plane(d, axis, u, v, s)];
}

}  // namespace

std::size_t voxel_from_plane(const Dims& d, int axis, std::size_t u, std::size_t v, std::size_t s) {
  switch (axis) {
    case 0: return lin(s, u, v, d);
    case 1: return lin(u, s, v, d);
    default: return lin(u, v, s, d);
  }
}

MipStack mip_slabs(const Volume3& volume, double slab_mm, int axis) {
  const auto [ua, va] = plane_axes(axis);
  const Dims& d = volume.dims();
  if (!(slab_mm > 0.0)) throw ConfigError("MIP slab thickness must be positive");
  const double slices = std::round(slab_mm / volume.spacing()[axis]);
  if (slices < 1.0) throw ConfigError("MIP slab is thinner than one slice");

  MipStack st;
  st.axis = axis;
  st.thickness = static_cast<std::size_t>(slices);
  st.stride = std::max<std::size_t>(1, st.thickness / 2);
  const std::size_t n_axis = d[axis];
  for (std::size_t first = 0;; first += st.stride) {
    const std::size_t last = std::min(first + st.thickness - 1, n_axis - 1);
    st.extents.push_back({first, last});
    if (last >= n_axis - 1) break;
  }

  const std::size_t nu = d[ua], nv = d[va];
  const auto& kern = kernels::active();
  std::vector<float> plane;
  for (const auto& ext : st.extents) {
    Image2 img(nu, nv, -std::numeric_limits<float>::infinity());
    std::vector<std::int32_t> arg(nu * nv, static_cast<std::int32_t>(ext.first));
    for (std::size_t s = ext.first; s <= ext.last; ++s) {
      extract_plane(volume, axis, s, plane);
      kern.max_update(plane.data(), img.data.data(), arg.data(), plane.size(), static_cast<std::int32_t>(s));
    }
    st.slabs.push_back(std::move(img));
    st.argmax.push_back(std::move(arg));
  }
  return st;
}

BinaryMask3 backproject(const std::vector<std::vector<std::uint8_t>>& seeds2d, const MipStack& stack,
                        const Geometry& geom) {
  if (seeds2d.size() != stack.slabs.size()) throw GeometryError("back-projection: slab count mismatch");
  const auto [ua, va] = plane_axes(stack.axis);
  const Dims& d = geom.dims;
  if (d[ua] != stack.width() || d[va] != stack.height())
    throw GeometryError("back-projection: MIP plane does not match the target grid");
  BinaryMask3 out(geom);
  const std::size_t nu = stack.width();
  for (std::size_t s = 0; s < seeds2d.size(); ++s) {
    if (seeds2d[s].size() != stack.slabs[s].size()) throw GeometryError("back-projection: seed image size mismatch");
    for (std::size_t p = 0; p < seeds2d[s].size(); ++p) {
      if (!seeds2d[s][p]) continue;
      const auto slice = static_cast<std::size_t>(stack.argmax[s][p]);
      out.set(voxel_from_plane(d, stack.axis, p % nu, p / nu, slice));
    }
  }
  return out;
}

std::vector<std::uint8_t> slab_footprint(const BinaryMask3& mask, const MipStack& stack, std::size_t slab) {
  const std::size_t nu = stack.width(), nv = stack.height();
  std::vector<std::uint8_t> fp(nu * nv, 0);
  const auto& ext = stack.extents.at(slab);
  for (std::size_t s = ext.first; s <= ext.last; ++s)
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t u = 0; u < nu; ++u)
        if (mask[voxel_from_plane(mask.dims(), stack.axis, u, v, s)]) fp[u + nu * v] = 1;
  return fp;
}

}  // namespace vseg
