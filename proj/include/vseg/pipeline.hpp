#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vseg/grow.hpp"
#include "vseg/metrics.hpp"
#include "vseg/refine.hpp"
#include "vseg/seeds.hpp"

namespace vseg {

struct PipelineConfig {
  std::filesystem::path r2star, chi_para, chi_dia, brain_mask;
  std::filesystem::path out_dir;
  SeedConfig seed;
  GrowConfig grow;
  RefineConfig refine_para;
  RefineConfig refine_dia;
  /// Restrict the per-scale MFAT reductions of the susceptibility maps to the brain.
  bool mfat_domain_brain = false;
  bool dump_intermediates = false;
  bool emit_overlays = false;
  bool write_union = true;
  unsigned threads = 1;

  void validate() const;
};

struct PipelineInputs {
  Volume3 r2star, chi_para, chi_dia;
  BinaryMask3 brain;

  /// Throws GeometryError unless all four share one grid; InputError on non-finite samples.
  void validate() const;
};

struct MapResult {
  GrowLimits limits;
  BinaryMask3 initial;  // after region growing
  BinaryMask3 final;    // after anisotropy refinement
  std::vector<ComponentAnisotropy> components;  // of the initial mask
};

struct PipelineResult {
  BinaryMask3 large_seeds, small_seeds, seeds;
  MapResult para, dia;
};

/// Seeds -> per-map region growing -> per-map refinement, all in memory. The diamagnetic path
/// grows on |chi_dia|.
PipelineResult segment(const PipelineInputs& in, const PipelineConfig& cfg, const IntermediateSink& sink = {});

/// Per-map growing and refinement from an existing seed map. The sink, when set, receives
/// "vmfat_<tag>" and "ani_<tag>".
MapResult grow_and_refine(const Volume3& chi, const BinaryMask3& seeds, const BinaryMask3& brain,
                          const PipelineConfig& cfg, const RefineConfig& refine, const IntermediateSink& sink = {},
                          const std::string& tag = "map");

}  // namespace vseg
