#include "vseg/run.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "vseg/config.hpp"
#include "vseg/nifti.hpp"
#include "vseg/output.hpp"
#include "vseg/overlay.hpp"
#include "vseg/parallel.hpp"

namespace fs = std::filesystem;

namespace vseg {

namespace {

std::string components_tsv(const std::vector<ComponentAnisotropy>& comps, double thresh) {
  std::ostringstream o;
  o << "label\tsize\tmin_index\tmean_ani\tkept\n";
  char buf[64];
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::snprintf(buf, sizeof buf, "%.9g", comps[c].mean_ani);
    o << c + 1 << "\t" << comps[c].size << "\t" << comps[c].min_index << "\t" << buf << "\t"
      << (comps[c].mean_ani >= thresh ? 1 : 0) << "\n";
  }
  return o.str();
}

void add_overlays(OutputStage& stage, const std::string& tag, const Volume3& chi, const BinaryMask3& mask,
                  const BinaryMask3& brain) {
  static const char* names[3] = {"sagittal", "coronal", "axial"};
  for (int axis = 0; axis < 3; ++axis) {
    const RgbImage img = overlay_slice(chi, mask, brain, axis, chi.dims()[axis] / 2);
    write_png(stage.path("overlays/" + tag + "_" + names[axis] + ".png"), img);
  }
}

std::string abs_path(const fs::path& p) { return fs::absolute(p).lexically_normal().string(); }

}  // namespace

SegmentRun run_segment(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.out_dir.empty()) throw ConfigError("no output directory: set out_dir or pass --out");
  for (const auto* p : {&cfg.r2star, &cfg.chi_para, &cfg.chi_dia, &cfg.brain_mask})
    if (p->empty()) throw ConfigError("config must name r2star, chi_para, chi_dia and brain_mask");
  set_thread_count(cfg.threads);

  PipelineInputs in{nifti::read_volume(cfg.r2star), nifti::read_volume(cfg.chi_para),
                    nifti::read_volume(cfg.chi_dia), nifti::read_mask(cfg.brain_mask)};
  in.validate();

  OutputStage stage(cfg.out_dir);
  IntermediateSink sink;
  if (cfg.dump_intermediates)
    sink = [&stage](const std::string& name, const Volume3& v) {
      nifti::write_volume(stage.path("intermediates/" + name + ".nii.gz"), v);
    };

  SegmentRun run;
  run.result = segment(in, cfg, sink);
  const PipelineResult& r = run.result;

  nifti::write_mask(stage.path("vessel_mask_para.nii.gz"), r.para.final);
  nifti::write_mask(stage.path("vessel_mask_dia.nii.gz"), r.dia.final);
  if (cfg.write_union) nifti::write_mask(stage.path("vessel_mask_union.nii.gz"), mask_union(r.para.final, r.dia.final));
  stage.write_text("components_para.tsv", components_tsv(r.para.components, cfg.refine_para.aniso_thresh));
  stage.write_text("components_dia.tsv", components_tsv(r.dia.components, cfg.refine_dia.aniso_thresh));
  if (cfg.dump_intermediates) {
    nifti::write_mask(stage.path("intermediates/seeds_large.nii.gz"), r.large_seeds);
    nifti::write_mask(stage.path("intermediates/seeds_small.nii.gz"), r.small_seeds);
    nifti::write_mask(stage.path("intermediates/seeds.nii.gz"), r.seeds);
    nifti::write_mask(stage.path("intermediates/initial_mask_para.nii.gz"), r.para.initial);
    nifti::write_mask(stage.path("intermediates/initial_mask_dia.nii.gz"), r.dia.initial);
  }
  if (cfg.emit_overlays) {
    add_overlays(stage, "para", in.chi_para, r.para.final, in.brain);
    Volume3 abs_dia = in.chi_dia;
    for (float& x : abs_dia.data()) x = std::abs(x);
    add_overlays(stage, "dia", abs_dia, r.dia.final, in.brain);
  }

  const std::string echo = echo_config(cfg);
  MetricsReport& rep = run.report;
  rep.condition = to_string(MaskCondition::without_mask);
  rep.values["seeds_large_voxels"] = static_cast<double>(r.large_seeds.count());
  rep.values["seeds_small_voxels"] = static_cast<double>(r.small_seeds.count());
  rep.values["seeds_voxels"] = static_cast<double>(r.seeds.count());
  rep.values["para_initial_voxels"] = static_cast<double>(r.para.initial.count());
  rep.values["para_voxels"] = static_cast<double>(r.para.final.count());
  rep.values["dia_initial_voxels"] = static_cast<double>(r.dia.initial.count());
  rep.values["dia_voxels"] = static_cast<double>(r.dia.final.count());
  rep.values["para_lower"] = r.para.limits.lower;
  rep.values["para_upper"] = r.para.limits.upper;
  rep.values["dia_lower"] = r.dia.limits.lower;
  rep.values["dia_upper"] = r.dia.limits.upper;
  rep.values["vessel_proportion_pct"] = vessel_proportion(in.brain, r.para.final);
  rep.values["vessel_proportion_pct_dia"] = vessel_proportion(in.brain, r.dia.final);
  rep.values["mean_susceptibility"] = masked_mean_susceptibility(in.chi_para, in.brain, r.para.final, false);
  for (MaskCondition c : {MaskCondition::with_mask, MaskCondition::within_mask}) {
    const BinaryMask3 region = condition_region(c, in.brain, r.para.final);
    if (region.empty()) continue;
    MetricsReport sub;
    sub.condition = to_string(c);
    sub.values["mean_susceptibility"] = masked_mean_susceptibility(in.chi_para, region, region, false);
    rep.conditions.push_back(std::move(sub));
  }
  rep.provenance["r2star"] = abs_path(cfg.r2star);
  rep.provenance["chi_para"] = abs_path(cfg.chi_para);
  rep.provenance["chi_dia"] = abs_path(cfg.chi_dia);
  rep.provenance["brain_mask"] = abs_path(cfg.brain_mask);
  rep.provenance["config_sha256"] = sha256_hex(echo);
  stage.write_text("report.json", rep.to_json());

  const std::vector<ManifestInput> inputs{{"r2star", abs_path(cfg.r2star)},
                                          {"chi_para", abs_path(cfg.chi_para)},
                                          {"chi_dia", abs_path(cfg.chi_dia)},
                                          {"brain_mask", abs_path(cfg.brain_mask)}};
  stage.write_text("manifest.txt", manifest_text("segment", echo, inputs, stage));
  stage.commit();
  return run;
}

MetricsReport run_eval(const EvalArgs& a) {
  if (a.pred.empty()) throw ConfigError("eval needs --pred");
  const BinaryMask3 pred = nifti::read_mask(a.pred);
  MetricsReport rep;
  std::vector<ManifestInput> inputs{{"pred", abs_path(a.pred)}};
  rep.provenance["pred"] = abs_path(a.pred);

  if (!a.gt.empty()) {
    const BinaryMask3 gt = nifti::read_mask(a.gt);
    require_same_grid(pred.geometry(), gt.geometry(), "pred vs gt");
    rep.values["dsc"] = dice(pred, gt);
    if (a.central_slices > 0)
      rep.values["dsc_restricted"] = dice_restricted(pred, gt, central_slices(pred.dims(), a.central_slices));
    rep.provenance["gt"] = abs_path(a.gt);
    inputs.push_back({"gt", abs_path(a.gt)});
  } else if (a.central_slices > 0) {
    throw ConfigError("--central-slices needs --gt");
  }

  if (!a.reference.empty() && a.chi.empty()) throw ConfigError("--reference needs --chi");
  if (!a.chi.empty() && a.roi.empty()) throw ConfigError("--chi needs --roi");
  if (!a.roi.empty()) {
    const BinaryMask3 roi = nifti::read_mask(a.roi);
    require_same_grid(pred.geometry(), roi.geometry(), "pred vs roi");
    rep.values["vessel_proportion_pct"] = vessel_proportion(roi, pred);
    rep.provenance["roi"] = abs_path(a.roi);
    inputs.push_back({"roi", abs_path(a.roi)});
    if (!a.chi.empty()) {
      const Volume3 chi = nifti::read_volume(a.chi);
      require_same_grid(pred.geometry(), chi.geometry(), "pred vs chi");
      Volume3 ref;
      if (!a.reference.empty()) {
        ref = nifti::read_volume(a.reference);
        require_same_grid(pred.geometry(), ref.geometry(), "pred vs reference");
      }
      rep.provenance["chi"] = abs_path(a.chi);
      inputs.push_back({"chi", abs_path(a.chi)});
      if (!a.reference.empty()) {
        rep.provenance["reference"] = abs_path(a.reference);
        inputs.push_back({"reference", abs_path(a.reference)});
      }
      for (MaskCondition c : {MaskCondition::without_mask, MaskCondition::with_mask, MaskCondition::within_mask}) {
        const BinaryMask3 region = condition_region(c, roi, pred);
        if (region.empty()) continue;
        MetricsReport sub;
        sub.condition = to_string(c);
        sub.values["mean_susceptibility"] = masked_mean_susceptibility(chi, region, region, false);
        if (!a.reference.empty()) {
          const RmsePsnr rp = rmse_psnr(chi, ref, region);
          sub.values["rmse"] = rp.rmse;
          sub.values["psnr"] = rp.psnr;
        }
        if (c == MaskCondition::without_mask) {
          rep.condition = sub.condition;
          for (const auto& [k, v] : sub.values) rep.values[k] = v;
        }
        rep.conditions.push_back(std::move(sub));
      }
    }
  }
  if (rep.condition.empty()) rep.condition = to_string(MaskCondition::without_mask);

  if (!a.out_dir.empty()) {
    OutputStage stage(a.out_dir);
    stage.write_text("report.json", rep.to_json());
    std::ostringstream echo;
    echo << "central_slices: " << a.central_slices << "\n";
    stage.write_text("manifest.txt", manifest_text("eval", echo.str(), inputs, stage));
    stage.commit();
  }
  return rep;
}

PhantomScene run_phantom(const SceneSpec& spec, std::uint64_t seed, const fs::path& out_dir) {
  PhantomScene sc = generate_scene(spec, seed);
  OutputStage stage(out_dir);
  nifti::write_volume(stage.path("r2star.nii.gz"), sc.r2star_like);
  nifti::write_volume(stage.path("chi_para.nii.gz"), sc.chi_para_like);
  nifti::write_volume(stage.path("chi_dia.nii.gz"), sc.chi_dia_like);
  nifti::write_mask(stage.path("brain_mask.nii.gz"), sc.brain);
  nifti::write_mask(stage.path("gt_vessels.nii.gz"), sc.gt_vessels);
  nifti::write_mask(stage.path("gt_blobs.nii.gz"), sc.gt_blobs);
  const std::string scene = echo_scene(spec);
  stage.write_text("scene.yaml", scene);
  stage.write_text("segment.yaml",
                   "# inputs of this scene; anisotropy thresholds on the unit-intensity phantom scale\n"
                   "r2star: r2star.nii.gz\n"
                   "chi_para: chi_para.nii.gz\n"
                   "chi_dia: chi_dia.nii.gz\n"
                   "brain_mask: brain_mask.nii.gz\n"
                   "aniso_thresh_para: 0.005\n"
                   "aniso_thresh_dia: 0.005\n");
  stage.write_text("manifest.txt",
                   manifest_text("phantom", scene + "seed: " + std::to_string(seed) + "\n", {}, stage));
  stage.commit();
  return sc;
}

Volume3 run_vesselness(const fs::path& input, const PipelineConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  set_thread_count(cfg.threads);
  const Volume3 v = nifti::read_volume(input);
  v.require_finite(input.string());
  OutputStage stage(out_dir);
  VesselnessResult ves = mfat(v, cfg.seed.mfat);
  nifti::write_volume(stage.path("v_mfat.nii.gz"), ves.v_mfat);
  stage.write_text("manifest.txt", manifest_text("vesselness", echo_config(cfg), {{"input", abs_path(input)}}, stage));
  stage.commit();
  return std::move(ves.v_mfat);
}

}  // namespace vseg
