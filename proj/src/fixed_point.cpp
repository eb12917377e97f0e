#include "lensremap/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lensremap {

namespace {

__extension__ typedef __int128 wide_t;

QValue saturate(wide_t raw, QFormat fmt, bool sticky) {
  QValue q{0, fmt, sticky};
  if (raw > fmt.raw_max()) {
    q.raw = fmt.raw_max();
    q.saturated = true;
  } else if (raw < fmt.raw_min()) {
    q.raw = fmt.raw_min();
    q.saturated = true;
  } else {
    q.raw = static_cast<std::int64_t>(raw);
  }
  return q;
}

/// n / d rounded half away from zero, d != 0.
wide_t div_round(wide_t n, wide_t d) {
  const bool negative = (n < 0) != (d < 0);
  const wide_t an = n < 0 ? -n : n;
  const wide_t ad = d < 0 ? -d : d;
  wide_t q = an / ad;
  if (2 * (an - q * ad) >= ad) ++q;
  return negative ? -q : q;
}

/// n / 2^shift rounded half away from zero.
wide_t shift_round(wide_t n, int shift) {
  const wide_t half = wide_t{1} << (shift - 1);
  return n >= 0 ? (n + half) >> shift : -((-n + half) >> shift);
}

void require_same(const QValue& a, const QValue& b, const char* op) {
  if (!(a.fmt == b.fmt)) throw ValidationError(std::string(op) + ": operand formats differ");
}

}  // namespace

QFormat::QFormat(int frac_bits, int int_bits) : frac_bits_(frac_bits), int_bits_(int_bits) {
  if (frac_bits < 1 || frac_bits > 30)
    throw ValidationError("frac_bits must be in 1..30, got " + std::to_string(frac_bits));
  if (int_bits < 2 || int_bits > 32)
    throw ValidationError("int_bits must be in 2..32, got " + std::to_string(int_bits));
}

double QFormat::resolution() const { return std::ldexp(1.0, -frac_bits_); }
double QFormat::min_value() const { return std::ldexp(static_cast<double>(raw_min()), -frac_bits_); }
double QFormat::max_value() const { return std::ldexp(static_cast<double>(raw_max()), -frac_bits_); }

QFormat QFormat::widened(int int_bits) const { return QFormat(frac_bits_, std::max(int_bits_, int_bits)); }

double QValue::value() const { return std::ldexp(static_cast<double>(raw), -fmt.frac_bits()); }

QValue quantize(double x, QFormat fmt) {
  if (!std::isfinite(x)) throw ValidationError("quantize: value is not finite");
  // Scaling by a power of two is exact; std::round is half-away-from-zero.
  const double scaled = std::round(std::ldexp(x, fmt.frac_bits()));
  if (scaled >= std::ldexp(1.0, 62)) return saturate(wide_t{1} << 62, fmt, true);
  if (scaled <= -std::ldexp(1.0, 62)) return saturate(-(wide_t{1} << 62), fmt, true);
  return saturate(static_cast<wide_t>(static_cast<std::int64_t>(scaled)), fmt, false);
}

QValue requantize(const QValue& q, QFormat fmt) {
  if (q.fmt.frac_bits() != fmt.frac_bits())
    throw ValidationError("requantize: fractional precision must match");
  return saturate(q.raw, fmt, q.saturated);
}

QValue q_add(const QValue& a, const QValue& b) {
  require_same(a, b, "q_add");
  return saturate(wide_t{a.raw} + b.raw, a.fmt, a.saturated || b.saturated);
}

QValue q_sub(const QValue& a, const QValue& b) {
  require_same(a, b, "q_sub");
  return saturate(wide_t{a.raw} - b.raw, a.fmt, a.saturated || b.saturated);
}

QValue q_neg(const QValue& a) { return saturate(-wide_t{a.raw}, a.fmt, a.saturated); }

QValue q_mul(const QValue& a, const QValue& b) {
  require_same(a, b, "q_mul");
  const wide_t product = wide_t{a.raw} * b.raw;
  return saturate(shift_round(product, a.fmt.frac_bits()), a.fmt, a.saturated || b.saturated);
}

QValue q_div(const QValue& a, const QValue& b) {
  require_same(a, b, "q_div");
  if (b.raw == 0) throw EvaluationError("q_div: division by zero");
  const wide_t numerator = wide_t{a.raw} * (wide_t{1} << a.fmt.frac_bits());
  return saturate(div_round(numerator, b.raw), a.fmt, a.saturated || b.saturated);
}

}  // namespace lensremap
