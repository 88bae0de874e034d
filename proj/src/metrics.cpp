#include "vseg/metrics.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

namespace vseg {

double dice(const BinaryMask3& a, const BinaryMask3& b) {
  require_same_grid(a.geometry(), b.geometry(), "dice");
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a[i];
    nb += b[i];
    both += a[i] && b[i];
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

double dice_restricted(const BinaryMask3& a, const BinaryMask3& b, const std::vector<SliceSel>& slices) {
  require_same_grid(a.geometry(), b.geometry(), "restricted dice");
  if (slices.empty()) throw ConfigError("restricted dice needs at least one slice");
  const Dims& d = a.dims();
  std::vector<std::uint8_t> sel(a.size(), 0);
  for (const auto& s : slices) {
    if (s.axis < 0 || s.axis > 2) throw ConfigError("slice axis must be 0, 1 or 2");
    if (s.index >= d[s.axis]) throw ConfigError("slice index out of range");
    for (std::size_t k = 0; k < d.nz; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i) {
          const std::size_t pos = s.axis == 0 ? i : s.axis == 1 ? j : k;
          if (pos == s.index) sel[lin(i, j, k, d)] = 1;
        }
  }
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!sel[i]) continue;
    na += a[i];
    nb += b[i];
    both += a[i] && b[i];
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

std::vector<SliceSel> central_slices(const Dims& dims, std::size_t count) {
  std::vector<SliceSel> out;
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t n = dims[axis];
    const std::size_t c = std::min(count, n);
    const std::size_t first = (n - c) / 2;
    for (std::size_t s = first; s < first + c; ++s) out.push_back({axis, s});
  }
  return out;
}

RmsePsnr rmse_psnr(const Volume3& pred, const Volume3& ref, const BinaryMask3& region) {
  require_same_grid(pred.geometry(), ref.geometry(), "rmse");
  require_same_grid(pred.geometry(), region.geometry(), "rmse region");
  double ss = 0.0, peak = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!region[i]) continue;
    const double d = static_cast<double>(pred[i]) - ref[i];
    ss += d * d;
    peak = std::max(peak, std::abs(static_cast<double>(ref[i])));
    ++n;
  }
  if (n == 0) throw InputError("rmse over an empty region");
  RmsePsnr out;
  out.rmse = std::sqrt(ss / static_cast<double>(n));
  out.psnr = out.rmse > 0.0 ? 20.0 * std::log10(peak / out.rmse) : std::numeric_limits<double>::infinity();
  return out;
}

double vessel_proportion(const BinaryMask3& roi, const BinaryMask3& vessel) {
  require_same_grid(roi.geometry(), vessel.geometry(), "vessel proportion");
  std::size_t nr = 0, both = 0;
  for (std::size_t i = 0; i < roi.size(); ++i) {
    nr += roi[i];
    both += roi[i] && vessel[i];
  }
  if (nr == 0) throw InputError("vessel proportion over an empty ROI");
  return 100.0 * static_cast<double>(both) / static_cast<double>(nr);
}

double masked_mean_susceptibility(const Volume3& chi, const BinaryMask3& roi, const BinaryMask3& vessel,
                                  bool exclude_vessels) {
  require_same_grid(chi.geometry(), roi.geometry(), "masked mean");
  require_same_grid(chi.geometry(), vessel.geometry(), "masked mean (vessel)");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    if (!roi[i] || (exclude_vessels && vessel[i])) continue;
    sum += chi[i];
    ++n;
  }
  if (n == 0) throw InputError("masked mean over an empty region");
  return sum / static_cast<double>(n);
}

const char* to_string(MaskCondition c) {
  switch (c) {
    case MaskCondition::without_mask: return "without_mask";
    case MaskCondition::with_mask: return "with_mask";
    default: return "within_mask";
  }
}

BinaryMask3 condition_region(MaskCondition c, const BinaryMask3& brain, const BinaryMask3& vessel) {
  require_same_grid(brain.geometry(), vessel.geometry(), "mask condition");
  BinaryMask3 out(brain.geometry());
  for (std::size_t i = 0; i < brain.size(); ++i) {
    bool in = brain[i];
    if (c == MaskCondition::with_mask) in = in && !vessel[i];
    if (c == MaskCondition::within_mask) in = in && vessel[i];
    out.set(i, in);
  }
  return out;
}

namespace {

nlohmann::json report_json(const MetricsReport& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : r.values) {
    if (std::isfinite(v))
      j[k] = v;
    else
      j[k] = v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  }
  if (!r.condition.empty()) j["condition"] = r.condition;
  if (!r.provenance.empty()) j["provenance"] = r.provenance;
  if (!r.conditions.empty()) {
    j["conditions"] = nlohmann::json::array();
    for (const auto& c : r.conditions) j["conditions"].push_back(report_json(c));
  }
  return j;
}

}  // namespace

std::string MetricsReport::to_json() const { return report_json(*this).dump(2) + "\n"; }

}  // namespace vseg
