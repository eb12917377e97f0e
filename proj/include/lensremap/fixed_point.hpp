#pragma once

#include <cstdint>

#include "lensremap/error.hpp"

namespace lensremap {

/// Signed two's-complement fixed-point format: int_bits (sign included)
/// integer bits and frac_bits fractional bits.
class QFormat {
 public:
  static constexpr int kDefaultIntBits = 12;

  /// Throws ValidationError unless 1 <= frac_bits <= 30, 2 <= int_bits <= 32.
  explicit QFormat(int frac_bits, int int_bits = kDefaultIntBits);

  int frac_bits() const { return frac_bits_; }
  int int_bits() const { return int_bits_; }
  int total_bits() const { return frac_bits_ + int_bits_; }

  double resolution() const;
  std::int64_t raw_min() const { return -(std::int64_t{1} << (total_bits() - 1)); }
  std::int64_t raw_max() const { return (std::int64_t{1} << (total_bits() - 1)) - 1; }
  double min_value() const;
  double max_value() const;

  /// Same fractional precision with at least `int_bits` integer bits.
  QFormat widened(int int_bits) const;

  bool operator==(const QFormat&) const = default;

 private:
  int frac_bits_;
  int int_bits_;
};

/// Fixed-point value: real value = raw * 2^-frac_bits. The saturated flag is
/// sticky through arithmetic so overflow anywhere in a pipeline stays visible.
struct QValue {
  std::int64_t raw = 0;
  QFormat fmt{16};
  bool saturated = false;

  double value() const;
};

/// raw = round_half_away(x * 2^frac_bits), saturated into the format range.
QValue quantize(double x, QFormat fmt);

/// Same real value in another format with the same fractional precision
/// (saturating when narrowing).
QValue requantize(const QValue& q, QFormat fmt);

// Operands must share a format; ValidationError otherwise.
QValue q_add(const QValue& a, const QValue& b);
QValue q_sub(const QValue& a, const QValue& b);
QValue q_neg(const QValue& a);
/// Double-width product, one round-half-away step back to frac_bits.
QValue q_mul(const QValue& a, const QValue& b);
/// round_half_away((a.raw << frac_bits) / b.raw). EvaluationError if b.raw == 0.
QValue q_div(const QValue& a, const QValue& b);

}  // namespace lensremap
