#include "vseg/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace vseg {

namespace {

std::string where(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& key, const std::string& msg) {
  throw ConfigError(where(n) + "'" + key + "' " + msg);
}

YAML::Node parse_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(n, key, "must be a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, key, "has the wrong type");
  }
}

double number(const YAML::Node& n, const std::string& key) { return scalar<double>(n, key); }

double positive(const YAML::Node& n, const std::string& key) {
  const double v = number(n, key);
  if (!(v > 0.0)) fail(n, key, "must be > 0");
  return v;
}

double non_negative(const YAML::Node& n, const std::string& key) {
  const double v = number(n, key);
  if (!(v >= 0.0)) fail(n, key, "must be >= 0");
  return v;
}

std::vector<double> numbers(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) fail(n, key, "must be a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(number(n[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

std::array<double, 3> triple(const YAML::Node& n, const std::string& key) {
  const auto v = numbers(n, key);
  if (v.size() != 3) fail(n, key, "must have 3 entries");
  return {v[0], v[1], v[2]};
}

Connectivity connectivity(const YAML::Node& n, const std::string& key) {
  const int c = scalar<int>(n, key);
  if (c != 6 && c != 18 && c != 26) fail(n, key, "must be 6, 18 or 26");
  return connectivity_from_int(c);
}

// Shortest %g rendering that reads back to the same double.
std::string fmt(double v) {
  char buf[64];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

using Handler = std::function<void(const YAML::Node&, const std::string&)>;

void dispatch(const YAML::Node& root, const std::map<std::string, Handler>& handlers, const char* what) {
  if (root.IsNull()) return;
  if (!root.IsMap()) throw ConfigError(where(root) + what + " must be a mapping of keys to values");
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string key = scalar<std::string>(it->first, "key");
    const auto h = handlers.find(key);
    if (h == handlers.end()) fail(it->first, key, std::string("is not a known ") + what + " key");
    h->second(it->second, key);
  }
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& text, const std::filesystem::path& base_dir) {
  const YAML::Node root = parse_yaml(text);
  PipelineConfig cfg;
  auto path_key = [&](std::filesystem::path& dst) {
    return [&dst, &base_dir](const YAML::Node& n, const std::string& key) {
      std::filesystem::path p = scalar<std::string>(n, key);
      dst = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
  };
  auto flag = [](bool& dst) {
    return [&dst](const YAML::Node& n, const std::string& key) { dst = scalar<bool>(n, key); };
  };
  SeedConfig& s = cfg.seed;
  const std::map<std::string, Handler> handlers{
      {"r2star", path_key(cfg.r2star)},
      {"chi_para", path_key(cfg.chi_para)},
      {"chi_dia", path_key(cfg.chi_dia)},
      {"brain_mask", path_key(cfg.brain_mask)},
      {"out_dir", path_key(cfg.out_dir)},
      {"k_large", [&](auto& n, auto& k) { s.k_large = number(n, k); }},
      {"k_small", [&](auto& n, auto& k) { s.k_small = number(n, k); }},
      {"slab_mm", [&](auto& n, auto& k) { s.slab_mm = positive(n, k); }},
      {"mip_axis",
       [&](auto& n, auto& k) {
         s.mip_axis = scalar<int>(n, k);
         if (s.mip_axis < 0 || s.mip_axis > 2) fail(n, k, "must be 0, 1 or 2");
       }},
      {"seed_stats_over_brain", flag(s.stats_over_brain)},
      {"hamming_h",
       [&](auto& n, auto& k) {
         if (n.IsSequence()) {
           const auto h = triple(n, k);
           s.hamming = {h[0], h[1], h[2]};
         } else {
           const double h = number(n, k);
           s.hamming = {h, h, h};
         }
         if (!(s.hamming.hx > 0 && s.hamming.hy > 0 && s.hamming.hz > 0)) fail(n, k, "must be > 0");
       }},
      {"inpaint_max_iters",
       [&](auto& n, auto& k) {
         s.inpaint.max_iters = scalar<int>(n, k);
         if (s.inpaint.max_iters < 0) fail(n, k, "must be >= 0");
       }},
      {"inpaint_tol", [&](auto& n, auto& k) { s.inpaint.tol = non_negative(n, k); }},
      {"sigmas",
       [&](auto& n, auto& k) {
         s.mfat.sigmas = numbers(n, k);
         if (s.mfat.sigmas.empty()) fail(n, k, "must not be empty");
         for (double v : s.mfat.sigmas)
           if (!(v > 0.0)) fail(n, k, "entries must be > 0");
       }},
      {"tau_rho", [&](auto& n, auto& k) { s.mfat.tau_rho = non_negative(n, k); }},
      {"tau_nu", [&](auto& n, auto& k) { s.mfat.tau_nu = non_negative(n, k); }},
      {"delta", [&](auto& n, auto& k) { s.mfat.delta = non_negative(n, k); }},
      {"mfat_domain_brain", flag(cfg.mfat_domain_brain)},
      {"gamma1", [&](auto& n, auto& k) { cfg.grow.gamma1 = number(n, k); }},
      {"gamma2", [&](auto& n, auto& k) { cfg.grow.gamma2 = number(n, k); }},
      {"connectivity", [&](auto& n, auto& k) { cfg.grow.connectivity = connectivity(n, k); }},
      {"grow_restrict_to_brain", flag(cfg.grow.restrict_to_brain)},
      {"anisotropy_in_denominator", flag(cfg.grow.anisotropy_in_denominator)},
      {"aniso_thresh_para", [&](auto& n, auto& k) { cfg.refine_para.aniso_thresh = non_negative(n, k); }},
      {"aniso_thresh_dia", [&](auto& n, auto& k) { cfg.refine_dia.aniso_thresh = non_negative(n, k); }},
      {"refine_connectivity",
       [&](auto& n, auto& k) { cfg.refine_para.connectivity = cfg.refine_dia.connectivity = connectivity(n, k); }},
      {"dump_intermediates", flag(cfg.dump_intermediates)},
      {"emit_overlays", flag(cfg.emit_overlays)},
      {"write_union", flag(cfg.write_union)},
      {"threads",
       [&](auto& n, auto& k) {
         const int t = scalar<int>(n, k);
         if (t < 1) fail(n, k, "must be >= 1");
         cfg.threads = static_cast<unsigned>(t);
       }},
  };
  dispatch(root, handlers, "config");
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return parse_pipeline_config(text, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string echo_config(const PipelineConfig& cfg) {
  const SeedConfig& s = cfg.seed;
  std::ostringstream o;
  o << "k_large: " << fmt(s.k_large) << "\n"
    << "k_small: " << fmt(s.k_small) << "\n"
    << "slab_mm: " << fmt(s.slab_mm) << "\n"
    << "mip_axis: " << s.mip_axis << "\n"
    << "seed_stats_over_brain: " << (s.stats_over_brain ? "true" : "false") << "\n"
    << "hamming_h: " << fmt_list({s.hamming.hx, s.hamming.hy, s.hamming.hz}) << "\n"
    << "inpaint_max_iters: " << s.inpaint.max_iters << "\n"
    << "inpaint_tol: " << fmt(s.inpaint.tol) << "\n"
    << "sigmas: " << fmt_list(s.mfat.sigmas) << "\n"
    << "tau_rho: " << fmt(s.mfat.tau_rho) << "\n"
    << "tau_nu: " << fmt(s.mfat.tau_nu) << "\n"
    << "delta: " << fmt(s.mfat.delta) << "\n"
    << "mfat_domain_brain: " << (cfg.mfat_domain_brain ? "true" : "false") << "\n"
    << "gamma1: " << fmt(cfg.grow.gamma1) << "\n"
    << "gamma2: " << fmt(cfg.grow.gamma2) << "\n"
    << "connectivity: " << static_cast<int>(cfg.grow.connectivity) << "\n"
    << "grow_restrict_to_brain: " << (cfg.grow.restrict_to_brain ? "true" : "false") << "\n"
    << "anisotropy_in_denominator: " << (cfg.grow.anisotropy_in_denominator ? "true" : "false") << "\n"
    << "aniso_thresh_para: " << fmt(cfg.refine_para.aniso_thresh) << "\n"
    << "aniso_thresh_dia: " << fmt(cfg.refine_dia.aniso_thresh) << "\n"
    << "refine_connectivity: " << static_cast<int>(cfg.refine_para.connectivity) << "\n";
  return o.str();
}

namespace {

ContrastLevels contrast(const YAML::Node& n, const std::string& key, bool allow_pair) {
  if (n.IsMap()) {
    ContrastLevels c;
    dispatch(n,
             {{"r2star", [&](auto& v, auto& k) { c.r2star = number(v, key + "." + k); }},
              {"chi_para", [&](auto& v, auto& k) { c.chi_para = number(v, key + "." + k); }},
              {"chi_dia", [&](auto& v, auto& k) { c.chi_dia = number(v, key + "." + k); }}},
             "contrast");
    return c;
  }
  const auto v = numbers(n, key);
  if (allow_pair && v.size() == 2) return {v[0], v[1], 0.0};
  if (v.size() != 3) fail(n, key, allow_pair ? "must have 2 or 3 entries" : "must have 3 entries");
  return {v[0], v[1], v[2]};
}

Point3 point(const YAML::Node& n, const std::string& key) { return triple(n, key); }

void check_inside(const YAML::Node& n, const std::string& key, const Point3& p, const SceneSpec& spec) {
  for (int c = 0; c < 3; ++c)
    if (!(p[c] >= 0.0 && p[c] <= static_cast<double>(spec.dims[c] - 1) * spec.spacing[c]))
      fail(n, key, "lies outside the volume");
}

}  // namespace

SceneSpec parse_scene_spec(const std::string& text) {
  const YAML::Node root = parse_yaml(text);
  if (!root.IsMap()) throw ConfigError(where(root) + "scene must be a mapping of keys to values");

  SceneSpec spec;
  if (const YAML::Node preset = root["preset"]) {
    const std::string name = scalar<std::string>(preset, "preset");
    if (name != "acceptance") fail(preset, "preset", "must be 'acceptance'");
    Dims d{128, 128, 128};
    for (auto it = root.begin(); it != root.end(); ++it) {
      const std::string key = scalar<std::string>(it->first, "key");
      if (key == "preset") continue;
      if (key != "dims") fail(it->first, key, "cannot be combined with a preset (only 'dims' can)");
      const auto v = triple(it->second, key);
      for (double x : v)
        if (!(x >= 16.0) || x != static_cast<double>(static_cast<std::size_t>(x)))
          fail(it->second, key, "entries must be integers >= 16");
      d = {static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]), static_cast<std::size_t>(v[2])};
    }
    return scaled_acceptance_scene(d);
  }

  std::vector<std::pair<YAML::Node, std::string>> deferred_points;
  dispatch(
      root,
      {{"dims",
        [&](auto& n, auto& k) {
          const auto v = triple(n, k);
          for (double x : v)
            if (!(x >= 1.0) || x != static_cast<double>(static_cast<std::size_t>(x)))
              fail(n, k, "entries must be positive integers");
          spec.dims = {static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]), static_cast<std::size_t>(v[2])};
        }},
       {"spacing",
        [&](auto& n, auto& k) {
          const auto v = triple(n, k);
          for (double x : v)
            if (!(x > 0.0)) fail(n, k, "entries must be > 0");
          spec.spacing = {v[0], v[1], v[2]};
        }},
       {"background", [&](auto& n, auto& k) { spec.background = contrast(n, k, false); }},
       {"noise_fraction", [&](auto& n, auto& k) { spec.noise_fraction = non_negative(n, k); }},
       {"brain_center", [&](auto& n, auto& k) { spec.brain_center = point(n, k); }},
       {"brain_semi_axes",
        [&](auto& n, auto& k) {
          spec.brain_semi_axes = point(n, k);
          for (double x : spec.brain_semi_axes)
            if (!(x >= 0.0)) fail(n, k, "entries must be >= 0");
        }},
       {"tubes",
        [&](auto& n, auto& k) {
          if (!n.IsSequence()) fail(n, k, "must be a list");
          for (std::size_t t = 0; t < n.size(); ++t) {
            const std::string tk = k + "[" + std::to_string(t) + "]";
            TubeSpec tube;
            dispatch(n[t],
                     {{"path",
                       [&](auto& v, auto& pk) {
                         if (!v.IsSequence()) fail(v, tk + "." + pk, "must be a list of points");
                         for (std::size_t i = 0; i < v.size(); ++i) {
                           const std::string key = tk + ".path[" + std::to_string(i) + "]";
                           tube.path.push_back(point(v[i], key));
                           deferred_points.emplace_back(v[i], key);
                         }
                       }},
                      {"radius", [&](auto& v, auto& rk) { tube.radius_mm = positive(v, tk + "." + rk); }},
                      {"intensity", [&](auto& v, auto& ik) { tube.intensity = contrast(v, tk + "." + ik, false); }}},
                     "tube");
            spec.tubes.push_back(std::move(tube));
          }
        }},
       {"blobs",
        [&](auto& n, auto& k) {
          if (!n.IsSequence()) fail(n, k, "must be a list");
          for (std::size_t b = 0; b < n.size(); ++b) {
            const std::string bk = k + "[" + std::to_string(b) + "]";
            BlobSpec blob;
            dispatch(n[b],
                     {{"center",
                       [&](auto& v, auto& ck) {
                         blob.center = point(v, bk + "." + ck);
                         deferred_points.emplace_back(v, bk + "." + ck);
                       }},
                      {"radius", [&](auto& v, auto& rk) { blob.radius_mm = positive(v, bk + "." + rk); }},
                      {"intensity", [&](auto& v, auto& ik) { blob.intensity = contrast(v, bk + "." + ik, true); }}},
                     "blob");
            spec.blobs.push_back(blob);
          }
        }}},
      "scene");
  for (const auto& [n, key] : deferred_points) check_inside(n, key, point(n, key), spec);
  spec.validate();
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return parse_scene_spec(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string echo_scene(const SceneSpec& spec) {
  auto p3 = [](const Point3& p) { return fmt_list({p[0], p[1], p[2]}); };
  auto lv = [](const ContrastLevels& c) { return fmt_list({c.r2star, c.chi_para, c.chi_dia}); };
  std::ostringstream o;
  o << "dims: [" << spec.dims.nx << ", " << spec.dims.ny << ", " << spec.dims.nz << "]\n"
    << "spacing: " << fmt_list({spec.spacing.dx, spec.spacing.dy, spec.spacing.dz}) << "\n"
    << "background: " << lv(spec.background) << "\n"
    << "noise_fraction: " << fmt(spec.noise_fraction) << "\n"
    << "brain_center: " << p3(spec.brain_center) << "\n"
    << "brain_semi_axes: " << p3(spec.brain_semi_axes) << "\n";
  o << "tubes:" << (spec.tubes.empty() ? " []" : "") << "\n";
  for (const auto& t : spec.tubes) {
    o << "  - radius: " << fmt(t.radius_mm) << "\n    intensity: " << lv(t.intensity) << "\n    path:\n";
    for (const auto& p : t.path) o << "      - " << p3(p) << "\n";
  }
  o << "blobs:" << (spec.blobs.empty() ? " []" : "") << "\n";
  for (const auto& b : spec.blobs)
    o << "  - center: " << p3(b.center) << "\n    radius: " << fmt(b.radius_mm) << "\n    intensity: "
      << lv(b.intensity) << "\n";
  return o.str();
}

}  // namespace vseg
