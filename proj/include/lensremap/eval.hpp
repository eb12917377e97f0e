#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lensremap/image.hpp"
#include "lensremap/model.hpp"
#include "lensremap/resources.hpp"

namespace lensremap {

/// Per-pixel Euclidean distance between a candidate map and the reference,
/// plus aggregates. rmse_x / rmse_y are the per-axis breakdown.
struct EvalReport {
  int width = 0;
  int height = 0;
  std::vector<double> error_field;
  double rmse = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double rmse_x = 0.0;
  double rmse_y = 0.0;

  double error(int u, int v) const {
    return error_field[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + static_cast<std::size_t>(u)];
  }
};

/// Throws ValidationError on a dimension mismatch.
EvalReport geometric_error(const RemapField& candidate, const RemapField& reference);

/// Grayscale heatmap, intensity = round(255 * min(1, error / scale)).
Image export_heatmap(const EvalReport& report, double scale);

/// Error plane as raw little-endian float32, row-major.
void write_error_plane(std::ostream& out, const EvalReport& report);
void write_error_plane(const std::string& path, const EvalReport& report);

enum class Axis { kX, kY };

/// One-dimensional autocorrelation of the error field along an axis: each
/// row (kX) or column (kY) has its own mean removed, lagged products are
/// averaged over all lines, and the result is normalized so that lag 0 is 1
/// (all zeros for a field that is constant along every line).
std::vector<double> error_autocorrelation(const EvalReport& report, Axis axis, int max_lag);

/// The reference map as stored in a full-resolution LUT of 32-bit floats.
RemapField full_lut_field(const RemapField& reference);

enum class Approach { kReference, kOnTheFly, kSampled, kFullLut };

const char* approach_name(Approach a);
std::optional<Approach> parse_approach(const std::string& name);

/// One approach/parameter combination. `param` is frac_bits for on-the-fly
/// and n for sampling; unused for the reference and the full LUT.
struct SweepCell {
  Approach approach = Approach::kSampled;
  int param = 0;
};

struct SweepGrid {
  std::vector<double> factors{1, 2, 3, 4, 5};
  std::vector<int> frac_bits{12, 16, 20};
  std::vector<int> sampling_factors{5, 6, 7};
  bool include_full_lut = false;
  int sample_frac_bits = 8;
  int sample_int_bits = 13;  // stored sample width is sample_frac_bits + sample_int_bits
  int full_lut_bits = 32;    // storage width per value of the full LUT
  int onthefly_int_bits = 12;

  /// Cells evaluated at each factor, in output order.
  std::vector<SweepCell> cells() const;
};

struct SweepRow {
  Approach approach = Approach::kSampled;
  int param = 0;
  double factor = 0.0;
  double rmse = 0.0;
  double mean = 0.0;
  double max = 0.0;
  ResourceEstimate resources;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Called for every evaluated cell (in output order) with its error report,
/// e.g. to export heatmaps.
using SweepObserver = std::function<void(const SweepRow&, const EvalReport&)>;

/// For each factor: scale the base coefficients, rebuild the reference map,
/// evaluate every cell and attach resource columns. Rows are ordered by
/// factor, then by grid.cells(), independent of the thread count.
SweepResult sweep(const LensConfig& base, const SweepGrid& grid, unsigned threads = 0,
                  const SweepObserver& observer = {});

/// approach,param,factor,rmse,mean,max,mem_bits,mul,add,div
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace lensremap
