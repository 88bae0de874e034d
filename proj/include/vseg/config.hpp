#pragma once

#include <filesystem>
#include <string>

#include "vseg/phantom.hpp"
#include "vseg/pipeline.hpp"

namespace vseg {

/// Flat YAML key set; unknown keys, wrong types and out-of-range values raise ConfigError
/// carrying "line:column". Relative input/output paths resolve against `base_dir`.
PipelineConfig parse_pipeline_config(const std::string& text, const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Canonical `key: value` listing of every hyperparameter, in a fixed order. Runtime-only
/// settings (threads, output flags) are left out so the echo is a pure function of the method.
std::string echo_config(const PipelineConfig& cfg);

/// Scene files: either `preset: acceptance` (optionally with `dims`) or an explicit spec with
/// dims, spacing, background, noise_fraction, brain_center, brain_semi_axes, tubes, blobs.
SceneSpec parse_scene_spec(const std::string& text);
SceneSpec load_scene_spec(const std::filesystem::path& path);

/// YAML rendering of a scene that parse_scene_spec reads back to the same spec.
std::string echo_scene(const SceneSpec& spec);

}  // namespace vseg
