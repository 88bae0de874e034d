#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "vseg/metrics.hpp"
#include "vseg/phantom.hpp"
#include "vseg/pipeline.hpp"

namespace vseg {

/// Reads the four inputs named in cfg, runs the pipeline and writes into cfg.out_dir:
/// vessel_mask_para/dia(/union).nii.gz, report.json, components_para/dia.tsv, manifest.txt,
/// and intermediates/ and overlays/ when enabled. Nothing appears in out_dir unless every
/// file was produced.
struct SegmentRun {
  PipelineResult result;
  MetricsReport report;
};
SegmentRun run_segment(const PipelineConfig& cfg);

struct EvalArgs {
  std::filesystem::path pred;       // required
  std::filesystem::path gt;         // dsc when set
  std::size_t central_slices = 0;   // restricted dsc over this many central slices per axis
  std::filesystem::path roi;        // vessel proportion and mask-condition regions
  std::filesystem::path chi;        // mean susceptibility per condition
  std::filesystem::path reference;  // rmse / psnr of chi against it per condition
  std::filesystem::path out_dir;    // report.json + manifest.txt; empty: nothing written
};
MetricsReport run_eval(const EvalArgs& args);

/// Writes r2star, chi_para, chi_dia, brain_mask, gt_vessels, gt_blobs (.nii.gz), scene.yaml,
/// segment.yaml (inputs preset for the pipeline) and manifest.txt.
PhantomScene run_phantom(const SceneSpec& spec, std::uint64_t seed, const std::filesystem::path& out_dir);

/// v_MFAT of one volume; writes v_mfat.nii.gz and manifest.txt.
Volume3 run_vesselness(const std::filesystem::path& input, const PipelineConfig& cfg,
                       const std::filesystem::path& out_dir);

}  // namespace vseg
