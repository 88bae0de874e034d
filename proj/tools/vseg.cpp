#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "vseg/config.hpp"
#include "vseg/run.hpp"

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kInput = 3, kGeometry = 4, kOutput = 5 };

struct Overrides {
  std::string config, out;
  bool dump = false, overlays = false;
  std::optional<unsigned> threads;
  std::optional<double> para, dia;
};

void add_common(CLI::App* cmd, Overrides& o, bool thresholds) {
  cmd->add_option("--config", o.config, "YAML config file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  if (thresholds) {
    cmd->add_flag("--dump-intermediates", o.dump, "write seeds, initial masks and filter outputs");
    cmd->add_flag("--overlays", o.overlays, "write PNG slices with mask contours");
    cmd->add_option("--aniso-thresh-para", o.para, "anisotropy threshold for the paramagnetic mask")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--aniso-thresh-dia", o.dia, "anisotropy threshold for the diamagnetic mask")
        ->check(CLI::NonNegativeNumber);
  }
}

vseg::PipelineConfig pipeline_config(const Overrides& o) {
  vseg::PipelineConfig cfg = o.config.empty() ? vseg::PipelineConfig{} : vseg::load_pipeline_config(o.config);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.dump) cfg.dump_intermediates = true;
  if (o.overlays) cfg.emit_overlays = true;
  if (o.para) cfg.refine_para.aniso_thresh = *o.para;
  if (o.dia) cfg.refine_dia.aniso_thresh = *o.dia;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vessel segmentation from R2* and susceptibility-source maps"};
  app.require_subcommand(1);

  Overrides seg_o;
  CLI::App* seg = app.add_subcommand("segment", "seed, grow and refine both vessel masks");
  add_common(seg, seg_o, true);
  seg->get_option("--config")->required();

  Overrides ev_o;
  vseg::EvalArgs ev;
  CLI::App* eval = app.add_subcommand("eval", "compare a mask against ground truth, write a metrics report");
  eval->add_option("--pred", ev.pred, "predicted mask")->required();
  eval->add_option("--gt", ev.gt, "ground-truth mask");
  eval->add_option("--central-slices", ev.central_slices, "also report dsc over this many central slices per axis");
  eval->add_option("--roi", ev.roi, "ROI mask for vessel proportion and mask conditions");
  eval->add_option("--chi", ev.chi, "susceptibility map for per-condition means");
  eval->add_option("--reference", ev.reference, "reference map for per-condition rmse/psnr");
  eval->add_option("--out", ev.out_dir, "directory for report.json (default: print to stdout)");

  Overrides ph_o;
  std::uint64_t seed = 1234;
  CLI::App* phantom = app.add_subcommand("phantom", "write a synthetic scene with ground truth");
  phantom->add_option("--config", ph_o.config, "scene spec (default: the acceptance scene)");
  phantom->add_option("--out", ph_o.out, "output directory")->required();
  phantom->add_option("--seed", seed, "noise seed");

  Overrides ve_o;
  std::string ve_in;
  CLI::App* ves = app.add_subcommand("vesselness", "write the multi-scale vesselness of one volume");
  add_common(ves, ve_o, false);
  ves->add_option("--input", ve_in, "input volume")->required();
  ves->get_option("--out")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*seg) {
      const vseg::SegmentRun run = vseg::run_segment(pipeline_config(seg_o));
      std::printf("para %zu voxels, dia %zu voxels\n", run.result.para.final.count(), run.result.dia.final.count());
    } else if (*eval) {
      const vseg::MetricsReport rep = vseg::run_eval(ev);
      if (ev.out_dir.empty()) std::cout << rep.to_json();
    } else if (*phantom) {
      const vseg::SceneSpec spec =
          ph_o.config.empty() ? vseg::default_acceptance_scene() : vseg::load_scene_spec(ph_o.config);
      vseg::run_phantom(spec, seed, ph_o.out);
    } else if (*ves) {
      vseg::PipelineConfig cfg = pipeline_config(ve_o);
      vseg::run_vesselness(ve_in, cfg, ve_o.out);
    }
  } catch (const vseg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const vseg::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const vseg::GeometryError& e) {
    std::cerr << "geometry mismatch: " << e.what() << "\n";
    return kGeometry;
  } catch (const vseg::OutputError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kOutput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
