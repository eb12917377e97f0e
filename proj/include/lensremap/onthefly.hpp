#pragma once

#include <memory>

#include "lensremap/fixed_point.hpp"
#include "lensremap/model.hpp"

namespace lensremap {

struct OnTheFlyPoint {
  QValue sx;
  QValue sy;
  /// True if any intermediate or the final narrowing saturated.
  bool saturated = false;
};

/// Integer width of the internal format used for normalized-coordinate and
/// polynomial intermediates before narrowing back to the output format.
inline constexpr int kOnTheFlyInternalIntBits = 16;

/// Fixed-point evaluation of the mapping chain, as a hardware datapath would
/// compute it per pixel. Constants are quantized once at construction.
///
/// All intermediates live in fmt widened to kOnTheFlyInternalIntBits integer
/// bits; results are narrowed (saturating) to fmt. With an identity rotation
/// and no rational coefficients the graph contains no division.
class OnTheFlyEvaluator {
 public:
  OnTheFlyEvaluator(const LensConfig& cfg, QFormat fmt);
  ~OnTheFlyEvaluator();
  OnTheFlyEvaluator(OnTheFlyEvaluator&&) noexcept;
  OnTheFlyEvaluator& operator=(OnTheFlyEvaluator&&) noexcept;

  OnTheFlyPoint evaluate(int u, int v) const;

  const LensConfig& config() const { return cfg_; }
  QFormat format() const { return fmt_; }
  QFormat internal_format() const { return internal_; }

 private:
  struct Constants;
  LensConfig cfg_;
  QFormat fmt_;
  QFormat internal_;
  std::unique_ptr<const Constants> k_;
};

OnTheFlyPoint onthefly_map(int u, int v, const LensConfig& cfg, QFormat fmt);

struct OnTheFlyFieldResult {
  RemapField field;
  long saturated_pixels = 0;
};

/// Real values of onthefly_map at every pixel. Errors carry the pixel.
OnTheFlyFieldResult onthefly_field_report(const LensConfig& cfg, QFormat fmt, unsigned threads = 0);
RemapField onthefly_field(const LensConfig& cfg, QFormat fmt, unsigned threads = 0);

}  // namespace lensremap
