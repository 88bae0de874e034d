#include "vseg/output.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "vseg/error.hpp"

namespace fs = std::filesystem;

namespace vseg {

OutputStage::OutputStage(fs::path out_dir) : out_(std::move(out_dir)) {
  if (out_.empty()) throw ConfigError("no output directory given");
  out_ = fs::absolute(out_).lexically_normal();
  if (!out_.has_filename()) out_ = out_.parent_path();
  std::error_code ec;
  if (fs::exists(out_, ec) && !fs::is_directory(out_, ec))
    throw OutputError(out_.string() + " exists and is not a directory");
  fs::create_directories(out_.parent_path(), ec);
  if (ec) throw OutputError("cannot create " + out_.parent_path().string() + ": " + ec.message());
  stage_ = out_.parent_path() / ("." + out_.filename().string() + ".staging-" + std::to_string(::getpid()));
  fs::remove_all(stage_, ec);
  if (!fs::create_directory(stage_, ec) || ec)
    throw OutputError("cannot create staging directory " + stage_.string() + ": " + ec.message());
}

OutputStage::~OutputStage() {
  std::error_code ec;
  if (!stage_.empty()) fs::remove_all(stage_, ec);
}

fs::path OutputStage::path(const std::string& rel) {
  const fs::path p = stage_ / rel;
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  if (ec) throw OutputError("cannot create " + p.parent_path().string() + ": " + ec.message());
  return p;
}

void OutputStage::write_text(const std::string& rel, const std::string& text) {
  const fs::path p = path(rel);
  std::ofstream f(p, std::ios::binary);
  f << text;
  f.close();
  if (!f) throw OutputError("cannot write " + p.string());
}

std::vector<std::string> OutputStage::files() const {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(stage_))
    if (e.is_regular_file()) out.push_back(e.path().lexically_relative(stage_).generic_string());
  std::sort(out.begin(), out.end());
  return out;
}

void OutputStage::commit() {
  if (committed_) return;
  std::error_code ec;
  if (!fs::exists(out_, ec)) {
    fs::rename(stage_, out_, ec);
    if (ec) throw OutputError("cannot move outputs into " + out_.string() + ": " + ec.message());
  } else {
    for (const auto& rel : files()) {
      const fs::path dst = out_ / rel;
      fs::create_directories(dst.parent_path(), ec);
      if (!ec) fs::rename(stage_ / rel, dst, ec);
      if (ec) throw OutputError("cannot move " + rel + " into " + out_.string() + ": " + ec.message());
    }
    fs::remove_all(stage_, ec);
  }
  committed_ = true;
  stage_.clear();
}

namespace {

std::string to_hex(const unsigned char* d, unsigned n) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < n; ++i) {
    s += digits[d[i] >> 4];
    s += digits[d[i] & 15];
  }
  return s;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned n = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &n, EVP_sha256(), nullptr)) throw OutputError("sha256 failed");
  return to_hex(md, n);
}

std::string sha256_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (f) {
    f.read(buf.data(), buf.size());
    if (f.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned n = 0;
  EVP_DigestFinal_ex(ctx, md, &n);
  EVP_MD_CTX_free(ctx);
  return to_hex(md, n);
}

std::string manifest_text(const std::string& command, const std::string& config_echo,
                          const std::vector<ManifestInput>& inputs, const OutputStage& stage) {
  std::ostringstream o;
  o << "command: " << command << "\n\n[config]\n" << config_echo;
  o << "\n[config_sha256]\n" << sha256_hex(config_echo) << "\n";
  o << "\n[inputs]\n";
  for (const auto& in : inputs) o << in.role << "  " << sha256_file(in.path) << "  " << in.path.string() << "\n";
  o << "\n[outputs]\n";
  for (const auto& rel : stage.files())
    if (rel != "manifest.txt") o << sha256_file(stage.staged(rel)) << "  " << rel << "\n";
  return o.str();
}

}  // namespace vseg
