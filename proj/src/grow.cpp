#include "vseg/grow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <limits>
#include <numeric>

namespace vseg {

void GrowConfig::validate() const {
  if (!std::isfinite(gamma1) || !std::isfinite(gamma2)) throw ConfigError("gamma1/gamma2 must be finite");
  if (gamma1 + gamma2 < 0.0) throw ConfigError("gamma1 + gamma2 must be >= 0 so that upper >= lower");
}

GrowLimits intensity_limits(const Volume3& chi, const BinaryMask3& seeds, const GrowConfig& cfg) {
  cfg.validate();
  if (seeds.empty()) throw InputError("intensity limits need at least one seed voxel");
  const MeanStd st = masked_mean_std(chi, seeds);
  return {st.mean + cfg.gamma1 * st.std, st.mean - cfg.gamma2 * st.std};
}

double grow_threshold(double omega, double intensity_ratio, double ani_q, bool anisotropy_in_denominator) {
  const double num = 1.0 - omega;
  if (num <= 0.0) return 0.0;
  const double aniso = 1.0 - std::exp(-10.0 * ani_q);
  if (anisotropy_in_denominator) {
    const double den = intensity_ratio * aniso;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * num / den;
  }
  return 0.5 * num / intensity_ratio * aniso;
}

bool grow_condition(std::size_t p, std::size_t q, const Volume3& chi, const VesselnessResult& ves,
                    const GrowLimits& limits, const GrowConfig& cfg) {
  const double iq = chi[q];
  if (iq > limits.upper) return true;
  if (iq < limits.lower) return false;
  const auto& a = ves.v1[p];
  const auto& b = ves.v1[q];
  const double dot = static_cast<double>(a[0]) * b[0] + static_cast<double>(a[1]) * b[1] +
                     static_cast<double>(a[2]) * b[2];
  const double na = std::sqrt(static_cast<double>(a[0]) * a[0] + static_cast<double>(a[1]) * a[1] +
                              static_cast<double>(a[2]) * a[2]);
  const double nb = std::sqrt(static_cast<double>(b[0]) * b[0] + static_cast<double>(b[1]) * b[1] +
                              static_cast<double>(b[2]) * b[2]);
  const double omega = (na > 0.0 && nb > 0.0) ? std::min(1.0, std::abs(dot) / (na * nb)) : 0.0;
  const double ip = std::max(static_cast<double>(chi[p]), kIntensityEpsilon);
  const double iqc = std::max(iq, kIntensityEpsilon);
  const double ratio = std::min(ip, iqc) / std::max(ip, iqc);
  const double thr = grow_threshold(omega, ratio, ves.ani[q], cfg.anisotropy_in_denominator);
  return static_cast<double>(ves.v_mfat[q]) >= thr;
}

std::vector<std::size_t> seed_queue_order(const BinaryMask3& seeds, Connectivity connectivity) {
  const Components cc = connected_components(seeds, connectivity);
  std::vector<std::size_t> order(cc.count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cc.sizes[a] != cc.sizes[b]) return cc.sizes[a] > cc.sizes[b];
    return cc.min_index[a] < cc.min_index[b];
  });
  std::vector<std::size_t> rank(cc.count());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  // Offsets of each cluster's block in the queue; a linear scan then fills each block in
  // ascending index order.
  std::vector<std::size_t> start(cc.count() + 1, 0);
  for (std::size_t r = 0; r < order.size(); ++r) start[r + 1] = start[r] + cc.sizes[order[r]];
  std::vector<std::size_t> queue(start.back());
  for (std::size_t idx = 0; idx < seeds.size(); ++idx) {
    if (!seeds[idx]) continue;
    const std::size_t r = rank[cc.labels[idx] - 1];
    queue[start[r]++] = idx;
  }
  return queue;
}

BinaryMask3 region_grow(const Volume3& chi, const BinaryMask3& seeds, const VesselnessResult& ves,
                        const BinaryMask3& brain, const GrowConfig& cfg) {
  return region_grow_from(chi, seeds, seed_queue_order(seeds, cfg.connectivity), ves, brain, cfg);
}

BinaryMask3 region_grow_from(const Volume3& chi, const BinaryMask3& seeds, std::vector<std::size_t> queue,
                             const VesselnessResult& ves, const BinaryMask3& brain, const GrowConfig& cfg) {
  cfg.validate();
  require_same_grid(chi.geometry(), seeds.geometry(), "region growing (seeds)");
  require_same_grid(chi.geometry(), brain.geometry(), "region growing (brain)");
  if (ves.v_mfat.size() != chi.size() || ves.v1.size() != chi.size() || ves.ani.size() != chi.size())
    throw GeometryError("region growing: vesselness fields do not match the susceptibility grid");

  BinaryMask3 mask(seeds.geometry());
  if (seeds.empty()) {
    std::cerr << "warning: region growing called with an empty seed map; returning an empty mask\n";
    return mask;
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!seeds[i]) continue;
    if (cfg.restrict_to_brain && !brain[i]) throw InputError("region growing: seed voxel outside the brain mask");
    mask.set(i);
  }
  const GrowLimits limits = intensity_limits(chi, seeds, cfg);
  const Dims& d = chi.dims();
  const auto& offs = neighbor_offsets(cfg.connectivity);

  std::deque<std::size_t> fifo(queue.begin(), queue.end());
  queue.clear();
  queue.shrink_to_fit();
  while (!fifo.empty()) {
    const std::size_t p = fifo.front();
    fifo.pop_front();
    const Coord c = coord_of(p, d);
    for_each_neighbor(d, c.i, c.j, c.k, offs, [&](std::size_t q) {
      if (mask[q]) return;
      if (cfg.restrict_to_brain && !brain[q]) return;
      if (!grow_condition(p, q, chi, ves, limits, cfg)) return;
      mask.set(q);
      fifo.push_back(q);
    });
  }
  return mask;
}

}  // namespace vseg
