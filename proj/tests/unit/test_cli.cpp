#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "vseg/nifti.hpp"

namespace fs = std::filesystem;

namespace {

// Per-process scratch root, removed at exit.
const fs::path& root() {
  static const struct Root {
    fs::path path = fs::temp_directory_path() / ("vseg_test_cli_" + std::to_string(::getpid()));
    Root() { fs::create_directories(path); }
    ~Root() { fs::remove_all(path); }
  } r;
  return r.path;
}

int run(const std::string& args) {
  const std::string cmd = std::string(VSEG_CLI_PATH) + " " + args + " >" + (root() / "stdout.txt").string() + " 2>" +
                          (root() / "stderr.txt").string();
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

const char* kScene =
    "dims: [40, 40, 40]\n"
    "background: [0.3, 0.2, 0.2]\n"
    "tubes:\n"
    "  - path: [[8, 14, 20], [32, 18, 20]]\n"
    "    radius: 2\n"
    "    intensity: [1, 1, 1]\n"
    "  - path: [[20, 8, 12], [20, 30, 28]]\n"
    "    radius: 1\n"
    "    intensity: [1, 1, 1]\n"
    "blobs:\n"
    "  - center: [14, 28, 26]\n"
    "    radius: 5\n"
    "    intensity: [0.8, 0.8]\n";

// One phantom shared by the tests below.
const fs::path& phantom() {
  static const fs::path dir = [] {
    write(root() / "scene.yaml", kScene);
    const fs::path out = root() / "phantom";
    REQUIRE(run("phantom --config " + (root() / "scene.yaml").string() + " --out " + out.string()) == 0);
    return out;
  }();
  return dir;
}

}  // namespace

TEST_CASE("phantom writes six volumes, reproducibly") {
  const fs::path a = phantom();
  int nifti = 0;
  for (const auto& e : fs::directory_iterator(a)) nifti += e.path().string().ends_with(".nii.gz");
  CHECK(nifti == 6);
  CHECK(fs::exists(a / "scene.yaml"));
  CHECK(fs::exists(a / "segment.yaml"));
  CHECK(fs::exists(a / "manifest.txt"));

  const fs::path b = root() / "phantom_again";
  REQUIRE(run("phantom --config " + (root() / "scene.yaml").string() + " --out " + b.string()) == 0);
  for (const char* f : {"r2star.nii.gz", "chi_para.nii.gz", "chi_dia.nii.gz", "brain_mask.nii.gz", "gt_vessels.nii.gz",
                        "gt_blobs.nii.gz", "manifest.txt"})
    CHECK(slurp(a / f) == slurp(b / f));

  const fs::path c = root() / "phantom_seed";
  REQUIRE(run("phantom --config " + (root() / "scene.yaml").string() + " --seed 99 --out " + c.string()) == 0);
  CHECK(slurp(a / "r2star.nii.gz") != slurp(c / "r2star.nii.gz"));
  CHECK(slurp(a / "gt_vessels.nii.gz") == slurp(c / "gt_vessels.nii.gz"));
}

TEST_CASE("phantom: invalid spec exits 2 and writes nothing") {
  std::string bad = kScene;
  bad.replace(bad.find("[32, 18, 20]"), 12, "[45, 18, 20]");
  write(root() / "bad_scene.yaml", bad);
  const fs::path out = root() / "phantom_bad";
  CHECK(run("phantom --config " + (root() / "bad_scene.yaml").string() + " --out " + out.string()) == 2);
  CHECK(slurp(root() / "stderr.txt").find("line 4") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("segment: outputs, determinism across runs and thread counts") {
  const fs::path cfg = phantom() / "segment.yaml";
  const fs::path a = root() / "seg_a", b = root() / "seg_b";
  REQUIRE(run("segment --config " + cfg.string() + " --out " + a.string() + " --overlays --dump-intermediates") == 0);
  REQUIRE(run("segment --config " + cfg.string() + " --out " + b.string() + " --threads 3") == 0);
  for (const char* f : {"vessel_mask_para.nii.gz", "vessel_mask_dia.nii.gz", "vessel_mask_union.nii.gz",
                        "components_para.tsv", "components_dia.tsv", "report.json"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  for (const char* f : {"overlays/para_axial.png", "overlays/dia_sagittal.png", "intermediates/seeds.nii.gz",
                        "intermediates/r2star_vmfat.nii.gz", "intermediates/product_mip.nii.gz",
                        "intermediates/initial_mask_para.nii.gz", "intermediates/ani_para.nii.gz"})
    CHECK(fs::exists(a / f));

  const auto rep = nlohmann::json::parse(slurp(a / "report.json"));
  for (const char* k : {"vessel_proportion_pct", "mean_susceptibility", "condition", "provenance"})
    CHECK(rep.contains(k));

  // the manifest lists every output with its hash
  const std::string man = slurp(a / "manifest.txt");
  CHECK(man.find("[config]") != std::string::npos);
  CHECK(man.find("vessel_mask_para.nii.gz") != std::string::npos);
  CHECK(man.find("overlays/para_axial.png") != std::string::npos);

  // same inputs and flags, another thread count: byte-identical manifest
  const fs::path c = root() / "seg_c";
  REQUIRE(run("segment --config " + cfg.string() + " --out " + c.string() + " --threads 2") == 0);
  CHECK(slurp(b / "manifest.txt") == slurp(c / "manifest.txt"));

  // command-line thresholds override the config
  const fs::path d = root() / "seg_d";
  REQUIRE(run("segment --config " + cfg.string() + " --out " + d.string() + " --aniso-thresh-para 1e9") == 0);
  CHECK(vseg::nifti::read_mask(d / "vessel_mask_para.nii.gz").empty());
  CHECK(slurp(d / "manifest.txt").find("aniso_thresh_para: 1e+09") != std::string::npos);
}

TEST_CASE("segment: grid mismatch exits 4 without output") {
  vseg::nifti::write_mask(root() / "small_brain.nii.gz", vseg::BinaryMask3(vseg::Dims{20, 20, 20}));
  const fs::path p = phantom();
  write(root() / "mismatch.yaml", "r2star: " + (p / "r2star.nii.gz").string() + "\nchi_para: " +
                                      (p / "chi_para.nii.gz").string() + "\nchi_dia: " + (p / "chi_dia.nii.gz").string() +
                                      "\nbrain_mask: small_brain.nii.gz\n");
  const fs::path out = root() / "seg_mismatch";
  CHECK(run("segment --config " + (root() / "mismatch.yaml").string() + " --out " + out.string()) == 4);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("segment: config and input errors") {
  const fs::path out = root() / "seg_err";
  CHECK(run("segment --out " + out.string()) == 2);
  CHECK(run("segment --config " + (root() / "missing.yaml").string() + " --out " + out.string()) == 2);
  write(root() / "badkey.yaml", "k_large: 2\nnot_a_key: 3\n");
  CHECK(run("segment --config " + (root() / "badkey.yaml").string() + " --out " + out.string()) == 2);
  CHECK(slurp(root() / "stderr.txt").find("line 2") != std::string::npos);
  write(root() / "noinput.yaml", "r2star: nope.nii.gz\nchi_para: nope.nii.gz\nchi_dia: nope.nii.gz\nbrain_mask: nope.nii.gz\n");
  CHECK(run("segment --config " + (root() / "noinput.yaml").string() + " --out " + out.string()) == 3);
  CHECK(run("segment --config " + (phantom() / "segment.yaml").string() + " --threads 0 --out " + out.string()) == 2);
  CHECK(run("frobnicate") == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("segment: unwritable output exits 5") {
  write(root() / "a_file", "x");
  CHECK(run("segment --config " + (phantom() / "segment.yaml").string() + " --out " +
            (root() / "a_file" / "out").string()) == 5);
}

TEST_CASE("eval") {
  const fs::path p = phantom();
  CHECK(run("eval --pred " + (p / "gt_vessels.nii.gz").string() + " --gt " + (p / "gt_vessels.nii.gz").string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(root() / "stdout.txt"));
  CHECK(rep["dsc"] == 1.0);

  CHECK(run("eval --pred " + (p / "gt_vessels.nii.gz").string() + " --gt " + (root() / "missing.nii.gz").string()) == 3);
  CHECK(run("eval --pred " + (p / "gt_vessels.nii.gz").string() + " --gt " + (root() / "small_brain.nii.gz").string()) ==
        4);

  const fs::path out = root() / "eval_out";
  REQUIRE(run("eval --pred " + (p / "gt_blobs.nii.gz").string() + " --gt " + (p / "gt_vessels.nii.gz").string() +
              " --central-slices 5 --roi " + (p / "brain_mask.nii.gz").string() + " --chi " +
              (p / "chi_para.nii.gz").string() + " --reference " + (p / "chi_dia.nii.gz").string() + " --out " +
              out.string()) == 0);
  const auto r2 = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(r2["dsc"] == 0.0);
  for (const char* k : {"dsc", "dsc_restricted", "rmse", "psnr", "vessel_proportion_pct", "mean_susceptibility", "condition"})
    CHECK(r2.contains(k));
  CHECK(r2["conditions"].size() == 3);
  CHECK(fs::exists(out / "manifest.txt"));
}

TEST_CASE("vesselness") {
  const fs::path out = root() / "ves";
  CHECK(run("vesselness --input " + (phantom() / "r2star.nii.gz").string() + " --out " + out.string()) == 0);
  const vseg::Volume3 v = vseg::nifti::read_volume(out / "v_mfat.nii.gz");
  CHECK(v.dims() == vseg::Dims{40, 40, 40});
  CHECK(run("vesselness --input " + (root() / "missing.nii.gz").string() + " --out " + (root() / "ves2").string()) == 3);
}
