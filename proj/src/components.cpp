#include "vseg/components.hpp"

#include <cstdlib>
#include <string>

namespace vseg {

Connectivity connectivity_from_int(int n) {
  switch (n) {
    case 6: return Connectivity::k6;
    case 18: return Connectivity::k18;
    case 26: return Connectivity::k26;
    default: throw ConfigError("connectivity must be 6, 18 or 26 (got " + std::to_string(n) + ")");
  }
}

namespace {

std::vector<Offset> build_offsets(int max_manhattan) {
  std::vector<Offset> offs;
  for (int dk = -1; dk <= 1; ++dk)
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int m = std::abs(di) + std::abs(dj) + std::abs(dk);
        if (m == 0 || m > max_manhattan) continue;
        offs.push_back({di, dj, dk});
      }
  return offs;
}

}  // namespace

const std::vector<Offset>& neighbor_offsets(Connectivity c) {
  static const std::vector<Offset> k6 = build_offsets(1);
  static const std::vector<Offset> k18 = build_offsets(2);
  static const std::vector<Offset> k26 = build_offsets(3);
  switch (c) {
    case Connectivity::k6: return k6;
    case Connectivity::k18: return k18;
    default: return k26;
  }
}

Components connected_components(const BinaryMask3& mask, Connectivity connectivity) {
  const Dims& d = mask.dims();
  const auto& offs = neighbor_offsets(connectivity);
  Components out;
  out.labels.assign(mask.size(), 0);
  std::vector<std::size_t> stack;

  for (std::size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || out.labels[start] != 0) continue;
    const auto label = static_cast<std::uint32_t>(out.sizes.size() + 1);
    std::size_t size = 0;
    out.labels[start] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      ++size;
      const Coord c = coord_of(idx, d);
      for_each_neighbor(d, c.i, c.j, c.k, offs, [&](std::size_t n) {
        if (mask[n] && out.labels[n] == 0) {
          out.labels[n] = label;
          stack.push_back(n);
        }
      });
    }
    out.sizes.push_back(size);
    out.min_index.push_back(start);
  }
  return out;
}

}  // namespace vseg
