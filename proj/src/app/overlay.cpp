#include "vseg/overlay.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>

#include "vseg/mip.hpp"

namespace vseg {

RgbImage overlay_slice(const Volume3& volume, const BinaryMask3& mask, const BinaryMask3& window_region, int axis,
                       std::size_t index) {
  require_same_grid(volume.geometry(), mask.geometry(), "overlay");
  const Dims& d = volume.dims();
  if (axis < 0 || axis > 2) throw ConfigError("overlay axis must be 0, 1 or 2");
  if (index >= d[axis]) throw ConfigError("overlay slice out of range");
  const int ua = axis == 0 ? 1 : 0;
  const int va = axis == 2 ? 1 : 2;
  const std::size_t w = d[ua], h = d[va];

  std::vector<float> samples;
  const bool windowed = window_region.size() == volume.size() && !window_region.empty();
  for (std::size_t n = 0; n < volume.size(); ++n)
    if (!windowed || window_region[n]) samples.push_back(volume[n]);
  auto pct = [&](double q) {
    const std::size_t at = static_cast<std::size_t>(q * static_cast<double>(samples.size() - 1));
    std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(at), samples.end());
    return static_cast<double>(samples[at]);
  };
  const double lo = pct(0.01), hi = pct(0.99);
  const double span = hi > lo ? hi - lo : 1.0;

  auto inside = [&](long u, long v) {
    if (u < 0 || v < 0 || u >= static_cast<long>(w) || v >= static_cast<long>(h)) return false;
    return mask[voxel_from_plane(d, axis, static_cast<std::size_t>(u), static_cast<std::size_t>(v), index)];
  };

  RgbImage img{w, h, std::vector<std::uint8_t>(w * h * 3)};
  for (std::size_t v = 0; v < h; ++v)
    for (std::size_t u = 0; u < w; ++u) {
      const double x = volume[voxel_from_plane(d, axis, u, v, index)];
      const auto g = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp((x - lo) / span, 0.0, 1.0)));
      const long lu = static_cast<long>(u), lv = static_cast<long>(v);
      const bool edge = inside(lu, lv) && !(inside(lu - 1, lv) && inside(lu + 1, lv) && inside(lu, lv - 1) &&
                                            inside(lu, lv + 1));
      std::uint8_t* px = &img.rgb[((h - 1 - v) * w + u) * 3];
      px[0] = edge ? 255 : g;
      px[1] = edge ? 0 : g;
      px[2] = edge ? 0 : g;
    }
  return img;
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  png_image pi{};
  pi.version = PNG_IMAGE_VERSION;
  pi.width = static_cast<png_uint_32>(image.width);
  pi.height = static_cast<png_uint_32>(image.height);
  pi.format = PNG_FORMAT_RGB;
  const std::string tmp = path.string() + ".partial";
  if (!png_image_write_to_file(&pi, tmp.c_str(), 0, image.rgb.data(), 0, nullptr)) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw OutputError("cannot write " + path.string() + ": " + pi.message);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw OutputError("cannot write " + path.string() + ": " + ec.message());
}

}  // namespace vseg
