#include "vseg/refine.hpp"

#include <cmath>

namespace vseg {

void RefineConfig::validate() const {
  if (!(aniso_thresh >= 0.0) || !std::isfinite(aniso_thresh)) throw ConfigError("aniso_thresh must be >= 0");
}

namespace {

std::vector<ComponentAnisotropy> component_means(const Components& cc, const Volume3& ani) {
  std::vector<double> sums(cc.count(), 0.0);
  for (std::size_t i = 0; i < cc.labels.size(); ++i)
    if (cc.labels[i] != 0) sums[cc.labels[i] - 1] += ani[i];
  std::vector<ComponentAnisotropy> out(cc.count());
  for (std::size_t c = 0; c < cc.count(); ++c)
    out[c] = {cc.sizes[c], cc.min_index[c], sums[c] / static_cast<double>(cc.sizes[c])};
  return out;
}

}  // namespace

std::vector<ComponentAnisotropy> cc_mean_anisotropy(const BinaryMask3& mask, const Volume3& ani,
                                                    Connectivity connectivity) {
  require_same_grid(mask.geometry(), ani.geometry(), "component anisotropy");
  return component_means(connected_components(mask, connectivity), ani);
}

BinaryMask3 remove_low_anisotropy(const BinaryMask3& mask, const Volume3& ani, const RefineConfig& cfg) {
  cfg.validate();
  require_same_grid(mask.geometry(), ani.geometry(), "anisotropy refinement");
  const Components cc = connected_components(mask, cfg.connectivity);
  const auto means = component_means(cc, ani);
  BinaryMask3 out(mask.geometry());
  for (std::size_t i = 0; i < cc.labels.size(); ++i) {
    const auto l = cc.labels[i];
    if (l != 0 && !(means[l - 1].mean_ani < cfg.aniso_thresh)) out.set(i);
  }
  return out;
}

}  // namespace vseg
