#include "vseg/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>

namespace vseg::nifti {

namespace {

constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kDataOffset = 352;

enum DataType : std::int16_t {
  kUInt8 = 2,
  kInt16 = 4,
  kInt32 = 8,
  kFloat32 = 16,
  kFloat64 = 64,
  kInt8 = 256,
  kUInt16 = 512,
  kUInt32 = 768,
};

bool is_gz(const std::filesystem::path& p) { return p.extension() == ".gz"; }

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  gzFile f = gzopen(path.c_str(), "rb");  // reads plain files transparently
  if (f == nullptr) throw InputError("cannot open " + path.string());
  std::vector<std::uint8_t> buf;
  std::uint8_t chunk[1 << 16];
  for (;;) {
    const int n = gzread(f, chunk, sizeof(chunk));
    if (n < 0) {
      gzclose(f);
      throw InputError("read error in " + path.string());
    }
    if (n == 0) break;
    buf.insert(buf.end(), chunk, chunk + n);
  }
  gzclose(f);
  return buf;
}

template <typename T>
T get(const std::uint8_t* p, bool swap) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if (swap) {
    auto* b = reinterpret_cast<std::uint8_t*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  return v;
}

template <typename T>
void put(std::uint8_t* p, T v) {
  std::memcpy(p, &v, sizeof(T));
}

struct Parsed {
  Dims dims;
  Spacing spacing;
  std::int16_t datatype = 0;
  std::size_t offset = kDataOffset;
  double slope = 1.0, inter = 0.0;
  bool swap = false;
  std::vector<std::uint8_t> header;  // native-endian copy
};

Parsed parse_header(const std::vector<std::uint8_t>& buf, const std::filesystem::path& path) {
  if (buf.size() < kHeaderSize) throw InputError(path.string() + ": file too short for a NIfTI-1 header");
  Parsed p;
  const std::int32_t sz = get<std::int32_t>(buf.data(), false);
  if (sz != 348) {
    if (get<std::int32_t>(buf.data(), true) != 348) throw InputError(path.string() + ": not a NIfTI-1 file");
    p.swap = true;
  }
  const std::uint8_t* h = buf.data();
  if (std::memcmp(h + 344, "n+1", 4) != 0 && std::memcmp(h + 344, "ni1", 4) != 0)
    throw InputError(path.string() + ": missing NIfTI-1 magic");
  std::int16_t dim[8];
  for (int i = 0; i < 8; ++i) dim[i] = get<std::int16_t>(h + 40 + 2 * i, p.swap);
  if (dim[0] < 1 || dim[0] > 7) throw InputError(path.string() + ": invalid dim[0]");
  for (int i = 4; i <= dim[0]; ++i)
    if (dim[i] > 1) throw InputError(path.string() + ": only 3D volumes are supported");
  auto extent = [&](int i) { return i <= dim[0] ? static_cast<std::size_t>(std::max<std::int16_t>(dim[i], 1)) : 1u; };
  p.dims = {extent(1), extent(2), extent(3)};
  auto pix = [&](int i) {
    const float v = get<float>(h + 76 + 4 * i, p.swap);
    return (std::isfinite(v) && v > 0.0f) ? static_cast<double>(v) : 1.0;
  };
  p.spacing = {pix(1), pix(2), pix(3)};
  p.datatype = get<std::int16_t>(h + 70, p.swap);
  const float vox = get<float>(h + 108, p.swap);
  p.offset = static_cast<std::size_t>(std::max(vox, 0.0f));
  if (std::memcmp(h + 344, "ni1", 4) == 0) throw InputError(path.string() + ": detached .hdr/.img pairs are not supported");
  if (p.offset < kHeaderSize) p.offset = kDataOffset;
  const float slope = get<float>(h + 112, p.swap);
  const float inter = get<float>(h + 116, p.swap);
  if (std::isfinite(slope) && slope != 0.0f) {
    p.slope = slope;
    p.inter = std::isfinite(inter) ? inter : 0.0;
  }

  // Keep a native-endian copy so writes can reuse it.
  p.header.assign(h, h + kHeaderSize);
  if (p.swap) {
    auto swap_at = [&](std::size_t off, std::size_t width) {
      std::reverse(p.header.begin() + static_cast<long>(off), p.header.begin() + static_cast<long>(off + width));
    };
    swap_at(0, 4);
    swap_at(32, 4);
    swap_at(36, 2);
    for (int i = 0; i < 8; ++i) swap_at(40 + 2 * i, 2);
    for (std::size_t off = 56; off < 68; off += 4) swap_at(off, 4);
    for (std::size_t off : {68u, 70u, 72u, 74u}) swap_at(off, 2);
    for (std::size_t off = 76; off < 120; off += 4) swap_at(off, 4);
    swap_at(120, 2);
    for (std::size_t off = 124; off < 148; off += 4) swap_at(off, 4);
    swap_at(252, 2);
    swap_at(254, 2);
    for (std::size_t off = 256; off < 328; off += 4) swap_at(off, 4);
  }
  return p;
}

std::size_t bytes_per_sample(std::int16_t dt) {
  switch (dt) {
    case kUInt8:
    case kInt8: return 1;
    case kInt16:
    case kUInt16: return 2;
    case kInt32:
    case kUInt32:
    case kFloat32: return 4;
    case kFloat64: return 8;
    default: return 0;
  }
}

double sample(const std::uint8_t* p, std::int16_t dt, bool swap) {
  switch (dt) {
    case kUInt8: return *p;
    case kInt8: return static_cast<std::int8_t>(*p);
    case kInt16: return get<std::int16_t>(p, swap);
    case kUInt16: return get<std::uint16_t>(p, swap);
    case kInt32: return get<std::int32_t>(p, swap);
    case kUInt32: return get<std::uint32_t>(p, swap);
    case kFloat32: return get<float>(p, swap);
    default: return get<double>(p, swap);
  }
}

std::vector<std::uint8_t> default_header(const Dims& d, const Spacing& s) {
  std::vector<std::uint8_t> h(kHeaderSize, 0);
  put<std::int32_t>(h.data(), 348);
  put<char>(h.data() + 38, 'r');
  put<float>(h.data() + 76, 1.0f);  // qfac
  put<std::int16_t>(h.data() + 252, 0);
  put<std::int16_t>(h.data() + 254, 1);  // sform: scaled identity
  const float sp[3] = {static_cast<float>(s.dx), static_cast<float>(s.dy), static_cast<float>(s.dz)};
  for (int r = 0; r < 3; ++r) put<float>(h.data() + 280 + 16 * r + 4 * r, sp[r]);
  put<char>(h.data() + 123, 2);  // mm
  (void)d;
  return h;
}

std::vector<std::uint8_t> build_header(const Geometry& g, std::int16_t datatype, std::int16_t bitpix) {
  std::vector<std::uint8_t> h =
      g.header.raw.size() == kHeaderSize ? g.header.raw : default_header(g.dims, g.spacing);
  put<std::int32_t>(h.data(), 348);
  std::int16_t dim[8] = {3, static_cast<std::int16_t>(g.dims.nx), static_cast<std::int16_t>(g.dims.ny),
                         static_cast<std::int16_t>(g.dims.nz), 1, 1, 1, 1};
  for (int i = 0; i < 8; ++i) put<std::int16_t>(h.data() + 40 + 2 * i, dim[i]);
  put<std::int16_t>(h.data() + 70, datatype);
  put<std::int16_t>(h.data() + 72, bitpix);
  put<float>(h.data() + 80, static_cast<float>(g.spacing.dx));
  put<float>(h.data() + 84, static_cast<float>(g.spacing.dy));
  put<float>(h.data() + 88, static_cast<float>(g.spacing.dz));
  put<float>(h.data() + 108, static_cast<float>(kDataOffset));
  put<float>(h.data() + 112, 1.0f);
  put<float>(h.data() + 116, 0.0f);
  put<float>(h.data() + 124, 0.0f);
  put<float>(h.data() + 128, 0.0f);
  std::memcpy(h.data() + 344, "n+1\0", 4);
  return h;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& header, const void* data,
                std::size_t nbytes) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  const std::uint8_t ext[4] = {0, 0, 0, 0};
  bool ok = true;
  if (is_gz(path)) {
    gzFile f = gzopen(tmp.c_str(), "wb6");
    if (f == nullptr) throw OutputError("cannot create " + tmp.string());
    ok = gzwrite(f, header.data(), static_cast<unsigned>(header.size())) == static_cast<int>(header.size());
    ok = ok && gzwrite(f, ext, 4) == 4;
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::size_t left = nbytes;
    while (ok && left > 0) {
      const unsigned n = static_cast<unsigned>(std::min<std::size_t>(left, 1u << 30));
      ok = gzwrite(f, p, n) == static_cast<int>(n);
      p += n;
      left -= n;
    }
    ok = (gzclose(f) == Z_OK) && ok;
  } else {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw OutputError("cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(ext), 4);
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(nbytes));
    out.close();
    ok = static_cast<bool>(out);
  }
  std::error_code ec;
  if (!ok) {
    std::filesystem::remove(tmp, ec);
    throw OutputError("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw OutputError("cannot move output into place: " + path.string());
  }
}

}  // namespace

Volume3 read_volume(const std::filesystem::path& path) {
  const auto buf = read_all(path);
  Parsed p = parse_header(buf, path);
  const std::size_t bps = bytes_per_sample(p.datatype);
  if (bps == 0) throw InputError(path.string() + ": unsupported NIfTI datatype " + std::to_string(p.datatype));
  const std::size_t n = p.dims.count();
  if (buf.size() < p.offset + n * bps) throw InputError(path.string() + ": truncated voxel data");
  std::vector<float> data(n);
  const std::uint8_t* src = buf.data() + p.offset;
  for (std::size_t i = 0; i < n; ++i)
    data[i] = static_cast<float>(sample(src + i * bps, p.datatype, p.swap) * p.slope + p.inter);
  Volume3 vol(p.dims, p.spacing, std::move(data));
  vol.header().raw = std::move(p.header);
  vol.require_finite(path.string());
  return vol;
}

BinaryMask3 read_mask(const std::filesystem::path& path) {
  Volume3 v = read_volume(path);
  std::vector<std::uint8_t> bits(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) bits[i] = v[i] != 0.0f ? 1 : 0;
  BinaryMask3 m(v.dims(), v.spacing(), std::move(bits));
  m.header() = v.header();
  return m;
}

void write_volume(const std::filesystem::path& path, const Volume3& volume) {
  const auto h = build_header(volume.geometry(), kFloat32, 32);
  write_file(path, h, volume.data().data(), volume.size() * sizeof(float));
}

void write_mask(const std::filesystem::path& path, const BinaryMask3& mask) {
  const auto h = build_header(mask.geometry(), kUInt8, 8);
  write_file(path, h, mask.data().data(), mask.size());
}

}  // namespace vseg::nifti
