#pragma once

#include <cstdint>

#include "lensremap/model.hpp"

namespace lensremap {

/// Operators of a fully pipelined map datapath producing one pixel per
/// cycle, plus the storage it needs for map data.
struct ResourceEstimate {
  int multipliers = 0;
  int adders = 0;  // adders and subtractors
  int dividers = 0;
  std::int64_t memory_bits = 0;

  bool operator==(const ResourceEstimate&) const = default;
};

/// Operator counts of the sampled-map datapath.
///
/// | block                                   | mul | add |
/// |-----------------------------------------|-----|-----|
/// | bilinear interpolator (x map)           |  3  |  6  |
/// | bilinear interpolator (y map)           |  3  |  6  |
/// | sample address (row base, column)       |  0  |  2  |
///
/// Each interpolator is three lerps, lerp(p, q, t) = p + t * (q - p).
/// Cell index and weights are bit slices of the pixel counters (pitch 2^n),
/// so they cost nothing.
struct SamplingDatapath {
  static constexpr int kInterpolators = 2;
  static constexpr int kMultipliersPerInterpolator = 3;
  static constexpr int kAddersPerInterpolator = 6;
  static constexpr int kAddressAdders = 2;
};

/// Counts the operators of the fixed-point on-the-fly evaluation graph for
/// this configuration by walking the same graph the evaluator runs.
ResourceEstimate estimate_onthefly(const LensConfig& cfg);

/// Constant operator counts; memory = grid_w * grid_h * 2 * bits_per_sample.
ResourceEstimate estimate_sampling(int grid_w, int grid_h, int bits_per_sample);

/// Map-side cost of a full-resolution LUT: storage only.
ResourceEstimate estimate_full_lut(int width, int height, int bits_per_value);

}  // namespace lensremap
