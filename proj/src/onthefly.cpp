#include "lensremap/onthefly.hpp"

#include <atomic>

#include "onthefly_chain.hpp"
#include "parallel.hpp"

namespace lensremap {

namespace {

struct FixedBackend {
  using Value = QValue;
  QFormat fmt;

  Value constant(double x) const { return quantize(x, fmt); }
  Value pixel(int p) const { return quantize(p, fmt); }
  Value add(const Value& a, const Value& b) const { return q_add(a, b); }
  Value sub(const Value& a, const Value& b) const { return q_sub(a, b); }
  Value mul(const Value& a, const Value& b) const { return q_mul(a, b); }
  Value div(const Value& a, const Value& b) const { return q_div(a, b); }
};

}  // namespace

struct OnTheFlyEvaluator::Constants : detail::ChainConstants<QValue> {};

OnTheFlyEvaluator::OnTheFlyEvaluator(const LensConfig& cfg, QFormat fmt)
    : cfg_(cfg), fmt_(fmt), internal_(fmt.widened(kOnTheFlyInternalIntBits)) {
  cfg_.validate();
  FixedBackend be{internal_};
  auto k = std::make_unique<Constants>();
  static_cast<detail::ChainConstants<QValue>&>(*k) = detail::make_chain_constants(be, cfg_);
  k_ = std::move(k);
}

OnTheFlyEvaluator::~OnTheFlyEvaluator() = default;
OnTheFlyEvaluator::OnTheFlyEvaluator(OnTheFlyEvaluator&&) noexcept = default;
OnTheFlyEvaluator& OnTheFlyEvaluator::operator=(OnTheFlyEvaluator&&) noexcept = default;

OnTheFlyPoint OnTheFlyEvaluator::evaluate(int u, int v) const {
  FixedBackend be{internal_};
  const auto r = detail::evaluate_chain(be, *k_, u, v);
  OnTheFlyPoint p{requantize(r.sx, fmt_), requantize(r.sy, fmt_), false};
  p.saturated = p.sx.saturated || p.sy.saturated;
  return p;
}

OnTheFlyPoint onthefly_map(int u, int v, const LensConfig& cfg, QFormat fmt) {
  return OnTheFlyEvaluator(cfg, fmt).evaluate(u, v);
}

OnTheFlyFieldResult onthefly_field_report(const LensConfig& cfg, QFormat fmt, unsigned threads) {
  const OnTheFlyEvaluator eval(cfg, fmt);
  OnTheFlyFieldResult out{RemapField(cfg.image_width, cfg.image_height), 0};
  std::atomic<long> saturated{0};
  detail::parallel_rows(cfg.image_height, threads, [&](int v) {
    long row_saturated = 0;
    for (int u = 0; u < cfg.image_width; ++u) {
      OnTheFlyPoint p;
      try {
        p = eval.evaluate(u, v);
      } catch (const EvaluationError& e) {
        throw PixelError(u, v, e.what());
      }
      if (p.saturated) ++row_saturated;
      out.field.set(u, v, {p.sx.value(), p.sy.value()});
    }
    saturated += row_saturated;
  });
  out.saturated_pixels = saturated.load();
  return out;
}

RemapField onthefly_field(const LensConfig& cfg, QFormat fmt, unsigned threads) {
  return onthefly_field_report(cfg, fmt, threads).field;
}

}  // namespace lensremap
