#include "vseg/pipeline.hpp"

#include <cmath>

namespace vseg {

void PipelineConfig::validate() const {
  seed.validate();
  grow.validate();
  refine_para.validate();
  refine_dia.validate();
  if (threads == 0) throw ConfigError("threads must be >= 1");
}

void PipelineInputs::validate() const {
  require_same_grid(chi_para.geometry(), brain.geometry(), "chi_para vs brain mask");
  require_same_grid(chi_dia.geometry(), brain.geometry(), "chi_dia vs brain mask");
  require_same_grid(r2star.geometry(), brain.geometry(), "r2star vs brain mask");
  r2star.require_finite("r2star");
  chi_para.require_finite("chi_para");
  chi_dia.require_finite("chi_dia");
}

MapResult grow_and_refine(const Volume3& chi, const BinaryMask3& seeds, const BinaryMask3& brain,
                          const PipelineConfig& cfg, const RefineConfig& refine, const IntermediateSink& sink,
                          const std::string& tag) {
  MapResult out;
  if (seeds.empty()) {
    out.initial = BinaryMask3(seeds.geometry());
    out.final = out.initial;
    return out;
  }
  MfatOptions opts;
  if (cfg.mfat_domain_brain) opts.reduction_domain = &brain;
  const VesselnessResult ves = mfat(chi, cfg.seed.mfat, opts);
  if (sink) {
    sink("vmfat_" + tag, ves.v_mfat);
    sink("ani_" + tag, ves.ani);
  }
  out.limits = intensity_limits(chi, seeds, cfg.grow);
  out.initial = region_grow(chi, seeds, ves, brain, cfg.grow);
  out.components = cc_mean_anisotropy(out.initial, ves.ani, refine.connectivity);
  out.final = remove_low_anisotropy(out.initial, ves.ani, refine);
  return out;
}

PipelineResult segment(const PipelineInputs& in, const PipelineConfig& cfg, const IntermediateSink& sink) {
  cfg.validate();
  in.validate();
  PipelineResult res;
  res.large_seeds = large_vessel_seeds(in.r2star, in.brain, cfg.seed, sink);
  res.small_seeds = small_vessel_seeds(in.chi_para, in.chi_dia, res.large_seeds, in.brain, cfg.seed, sink);
  res.seeds = combine_seeds(res.large_seeds, res.small_seeds);
  res.para = grow_and_refine(in.chi_para, res.seeds, in.brain, cfg, cfg.refine_para, sink, "para");
  Volume3 abs_dia = in.chi_dia;
  for (float& x : abs_dia.data()) x = std::abs(x);
  res.dia = grow_and_refine(abs_dia, res.seeds, in.brain, cfg, cfg.refine_dia, sink, "dia");
  return res;
}

}  // namespace vseg
