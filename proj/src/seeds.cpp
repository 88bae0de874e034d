#include "vseg/seeds.hpp"

#include <cmath>

#include "vseg/parallel.hpp"

namespace vseg {

void SeedConfig::validate() const {
  if (!(k_small > 0.0)) throw ConfigError("k_small must be positive");
  if (!(k_large > k_small)) throw ConfigError("k_large must exceed k_small");
  if (!(slab_mm > 0.0)) throw ConfigError("slab_mm must be positive");
  if (mip_axis < 0 || mip_axis > 2) throw ConfigError("mip_axis must be 0, 1 or 2");
  if (inpaint.max_iters < 0 || !(inpaint.tol > 0.0)) throw ConfigError("invalid inpainting settings");
  hamming.validate();
  mfat.validate();
}

BinaryMask3 large_vessel_seeds(const Volume3& r2star, const BinaryMask3& brain, const SeedConfig& cfg,
                               const IntermediateSink& sink) {
  cfg.validate();
  require_same_grid(r2star.geometry(), brain.geometry(), "large-vessel seeds");
  if (brain.empty()) return BinaryMask3(r2star.geometry());

  Volume3 hp = highpass_inverse_hamming(inpaint_outside_mask(r2star, brain, cfg.inpaint), cfg.hamming);
  if (sink) sink("r2star_highpass", hp);
  const VesselnessResult ves = mfat(hp, cfg.mfat);
  hp = Volume3();
  if (sink) sink("r2star_vmfat", ves.v_mfat);

  MeanStd st;
  if (cfg.stats_over_brain) {
    st = masked_mean_std(ves.v_mfat, brain);
  } else {
    std::vector<std::uint8_t> all(brain.size(), 1);
    st = masked_mean_std(ves.v_mfat, BinaryMask3(brain.dims(), brain.spacing(), std::move(all)));
  }
  const double thr = st.mean + cfg.k_large * st.std;
  BinaryMask3 out(brain.geometry());
  for (std::size_t i = 0; i < out.size(); ++i) out.set(i, brain[i] && static_cast<double>(ves.v_mfat[i]) > thr);
  return out;
}

BinaryMask3 small_vessel_seeds(const Volume3& chi_para, const Volume3& chi_dia, const BinaryMask3& large_seeds,
                               const BinaryMask3& brain, const SeedConfig& cfg, const IntermediateSink& sink) {
  cfg.validate();
  require_same_grid(chi_para.geometry(), chi_dia.geometry(), "small-vessel seeds (chi_dia)");
  require_same_grid(chi_para.geometry(), large_seeds.geometry(), "small-vessel seeds (large seeds)");
  require_same_grid(chi_para.geometry(), brain.geometry(), "small-vessel seeds (brain)");

  Volume3 product(chi_para.dims(), chi_para.spacing());
  product.header() = chi_para.header();
  for (std::size_t i = 0; i < product.size(); ++i)
    product[i] = static_cast<float>(static_cast<double>(chi_para[i]) * std::abs(static_cast<double>(chi_dia[i])));

  MipStack stack = mip_slabs(product, cfg.slab_mm, cfg.mip_axis);
  const std::size_t nu = stack.width();
  const std::size_t n_slabs = stack.slabs.size();

  if (sink) {
    // Product MIP written into the volume at the stored argmax positions (max over slabs).
    Volume3 mip_vol(product.dims(), product.spacing());
    mip_vol.header() = product.header();
    for (std::size_t s = 0; s < n_slabs; ++s)
      for (std::size_t p = 0; p < stack.slabs[s].size(); ++p) {
        const std::size_t vox = voxel_from_plane(product.dims(), stack.axis, p % nu, p / nu,
                                                 static_cast<std::size_t>(stack.argmax[s][p]));
        mip_vol[vox] = stack.slabs[s].data[p];
      }
    sink("product_mip", mip_vol);
  }
  product = Volume3();

  std::vector<std::vector<std::uint8_t>> seeds2d(n_slabs);
  parallel_for(n_slabs, [&](std::size_t sb, std::size_t se) {
    for (std::size_t s = sb; s < se; ++s) {
      Image2 img = stack.slabs[s];
      for (std::size_t p = 0; p < img.size(); ++p) {
        const std::size_t vox = voxel_from_plane(brain.dims(), stack.axis, p % nu, p / nu,
                                                 static_cast<std::size_t>(stack.argmax[s][p]));
        if (large_seeds[vox]) img.data[p] = 0.0f;  // (1 - MIP_seed) factor
      }
      const auto footprint = slab_footprint(brain, stack, s);
      std::span<const std::uint8_t> domain;
      if (cfg.stats_over_brain) domain = footprint;
      const Vesselness2D ves = mfat_2d(img, cfg.mfat, domain);

      double sum = 0.0;
      std::size_t cnt = 0;
      for (std::size_t p = 0; p < img.size(); ++p) {
        if (!domain.empty() && !domain[p]) continue;
        sum += ves.v_mfat.data[p];
        ++cnt;
      }
      auto& out = seeds2d[s];
      out.assign(img.size(), 0);
      if (cnt == 0) continue;
      const double mean = sum / static_cast<double>(cnt);
      double ss = 0.0;
      for (std::size_t p = 0; p < img.size(); ++p) {
        if (!domain.empty() && !domain[p]) continue;
        const double dv = ves.v_mfat.data[p] - mean;
        ss += dv * dv;
      }
      const double thr = mean + cfg.k_small * std::sqrt(ss / static_cast<double>(cnt));
      for (std::size_t p = 0; p < img.size(); ++p)
        out[p] = (footprint[p] && static_cast<double>(ves.v_mfat.data[p]) > thr) ? 1 : 0;
    }
  });

  return mask_intersection(backproject(seeds2d, stack, brain.geometry()), brain);
}

BinaryMask3 combine_seeds(const BinaryMask3& large, const BinaryMask3& small) { return mask_union(large, small); }

}  // namespace vseg
