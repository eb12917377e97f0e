#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <variant>

#include "lensremap/image.hpp"
#include "lensremap/model.hpp"
#include "lensremap/onthefly.hpp"
#include "lensremap/sampling.hpp"

namespace lensremap {

enum class BorderPolicy {
  kConstantZero,  // taps outside the image read 0
  kClamp,         // taps are clamped to the nearest edge pixel
};

/// Uniform per-pixel source-coordinate query over the three map approaches:
/// a stored floating-point field, fixed-point on-the-fly evaluation, or a
/// subsampled LUT with bilinear reconstruction.
class MapProvider {
 public:
  enum class Kind { kReference, kOnTheFly, kSampled };

  static MapProvider reference(RemapField field);
  static MapProvider on_the_fly(const LensConfig& cfg, QFormat fmt);
  static MapProvider sampled(SubsampledMap map);

  Kind kind() const;
  int width() const;
  int height() const;

  /// Absolute source coordinate of output pixel (u, v).
  Point2 source(int u, int v) const;

  /// Evaluates the provider at every pixel.
  RemapField materialize(unsigned threads = 0) const;

 private:
  using Storage = std::variant<std::shared_ptr<const RemapField>, std::shared_ptr<const OnTheFlyEvaluator>,
                               std::shared_ptr<const SubsampledMap>>;
  explicit MapProvider(Storage s) : storage_(std::move(s)) {}
  Storage storage_;
};

/// The four interpolation taps around a source coordinate.
struct TapQuad {
  std::int64_t x0 = 0;  // floor(sx)
  std::int64_t y0 = 0;  // floor(sy)
  double a = 0.0;       // sx - x0
  double b = 0.0;       // sy - y0
};

TapQuad tap_quad(Point2 s);

/// round_half_away((1-a)(1-b) p00 + a(1-b) p10 + (1-a) b p01 + a b p11), clamped to 0..255.
std::uint8_t blend_taps(const std::array<std::uint8_t, 4>& p, double a, double b);

/// Bilinear sample of channel c at (sx, sy).
std::uint8_t bilinear_fetch(const Image& src, double sx, double sy, int c = 0,
                            BorderPolicy border = BorderPolicy::kConstantZero);

/// dst(u, v) = src(provider(u, v)) with bilinear interpolation.
Image remap_image(const Image& src, const MapProvider& provider,
                  BorderPolicy border = BorderPolicy::kConstantZero, unsigned threads = 0);

/// Memory bank holding pixel (x, y): 2 * (y mod 2) + (x mod 2).
constexpr int bank_index(std::int64_t x, std::int64_t y) {
  const auto px = static_cast<int>(((x % 2) + 2) % 2);
  const auto py = static_cast<int>(((y % 2) + 2) % 2);
  return 2 * py + px;
}

struct LineRequirement {
  int lines = 0;       // circular buffer capacity in rows
  int read_delay = 0;  // rows written before the first output row is read
};

/// Buffer sizing for a map with the given vertical displacement extrema:
/// read_delay = max(0, ceil(max_dy)) + interp_margin and
/// lines = max(0, ceil(max_dy)) - floor(min_dy) + 1 + interp_margin.
/// interp_margin = 1 accounts for the lower bilinear tap at floor(sy) + 1.
LineRequirement required_lines(const DisplacementBounds& bounds, int interp_margin = 1);

}  // namespace lensremap
