#include "lensremap/resources.hpp"

#include "lensremap/sampling.hpp"
#include "onthefly_chain.hpp"

namespace lensremap {

namespace {

// Evaluates the graph symbolically, counting one operator per node.
struct CountingBackend {
  struct Value {};
  ResourceEstimate counts;

  Value constant(double) { return {}; }
  Value pixel(int) { return {}; }
  Value add(Value, Value) {
    ++counts.adders;
    return {};
  }
  Value sub(Value, Value) {
    ++counts.adders;
    return {};
  }
  Value mul(Value, Value) {
    ++counts.multipliers;
    return {};
  }
  Value div(Value, Value) {
    ++counts.dividers;
    return {};
  }
};

}  // namespace

ResourceEstimate estimate_onthefly(const LensConfig& cfg) {
  CountingBackend be;
  const auto k = detail::make_chain_constants(be, cfg);
  detail::evaluate_chain(be, k, 0, 0);
  be.counts.memory_bits = 0;
  return be.counts;
}

ResourceEstimate estimate_sampling(int grid_w, int grid_h, int bits_per_sample) {
  using D = SamplingDatapath;
  ResourceEstimate e;
  e.multipliers = D::kInterpolators * D::kMultipliersPerInterpolator;
  e.adders = D::kInterpolators * D::kAddersPerInterpolator + D::kAddressAdders;
  e.dividers = 0;
  e.memory_bits = memory_footprint(grid_w, grid_h, bits_per_sample);
  return e;
}

ResourceEstimate estimate_full_lut(int width, int height, int bits_per_value) {
  if (width < 1 || height < 1 || bits_per_value < 1) throw ValidationError("full LUT: sizes must be positive");
  ResourceEstimate e;
  e.memory_bits = std::int64_t{width} * height * 2 * bits_per_value;
  return e;
}

}  // namespace lensremap
