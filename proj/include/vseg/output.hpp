#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vseg {

/// Collects a run's files in a hidden sibling of the output directory and moves them into
/// place only on commit(). Destroying an uncommitted stage deletes everything written so far.
class OutputStage {
 public:
  explicit OutputStage(std::filesystem::path out_dir);
  ~OutputStage();
  OutputStage(const OutputStage&) = delete;
  OutputStage& operator=(const OutputStage&) = delete;

  /// Absolute path inside the stage for a relative output name; parent directories are created.
  std::filesystem::path path(const std::string& rel);
  void write_text(const std::string& rel, const std::string& text);

  /// Relative names of every regular file staged so far, sorted.
  std::vector<std::string> files() const;

  std::filesystem::path staged(const std::string& rel) const { return stage_ / rel; }
  const std::filesystem::path& out_dir() const { return out_; }
  void commit();

 private:
  std::filesystem::path out_, stage_;
  bool committed_ = false;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestInput {
  std::string role;
  std::filesystem::path path;
};

/// Plain-text run manifest: the command, the config echo and its hash, one line per input
/// (role, sha256, path) and one "sha256  name" line per staged file.
std::string manifest_text(const std::string& command, const std::string& config_echo,
                          const std::vector<ManifestInput>& inputs, const OutputStage& stage);

}  // namespace vseg
