#pragma once

#include <map>
#include <string>
#include <vector>

#include "vseg/volume.hpp"

namespace vseg {

/// 2|A n B| / (|A| + |B|); 1 when both masks are empty.
double dice(const BinaryMask3& a, const BinaryMask3& b);

struct SliceSel {
  int axis = 2;
  std::size_t index = 0;
};

/// Dice over the union of the selected slices only.
double dice_restricted(const BinaryMask3& a, const BinaryMask3& b, const std::vector<SliceSel>& slices);

/// `count` consecutive slices centred on each axis (the selection used for restricted DSC).
std::vector<SliceSel> central_slices(const Dims& dims, std::size_t count);

struct RmsePsnr {
  double rmse = 0.0;
  double psnr = 0.0;  // +infinity when rmse == 0
};

/// RMSE over the region, PSNR = 20 log10(max|ref| over region / rmse).
RmsePsnr rmse_psnr(const Volume3& pred, const Volume3& ref, const BinaryMask3& region);

/// 100 |roi n vessel| / |roi|.
double vessel_proportion(const BinaryMask3& roi, const BinaryMask3& vessel);

/// Mean of chi over roi, or over roi minus vessel when exclude_vessels is set.
double masked_mean_susceptibility(const Volume3& chi, const BinaryMask3& roi, const BinaryMask3& vessel,
                                  bool exclude_vessels);

enum class MaskCondition { without_mask, with_mask, within_mask };

const char* to_string(MaskCondition c);

/// Evaluation regions for the three mask conditions: the whole brain, brain minus vessels,
/// and vessels inside the brain.
BinaryMask3 condition_region(MaskCondition c, const BinaryMask3& brain, const BinaryMask3& vessel);

struct MetricsReport {
  std::map<std::string, double> values;         // "dsc", "rmse", "psnr", ...
  std::map<std::string, std::string> provenance;  // input paths, config hash
  std::string condition;                         // mask-condition label, may be empty
  std::vector<MetricsReport> conditions;         // per-condition sub-reports

  /// Stable-key JSON document.
  std::string to_json() const;
};

}  // namespace vseg
