#include "lensremap/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"

namespace lensremap {

int SubsampledMap::grid_extent(int image_extent, int n) {
  const int pitch = 1 << n;
  return (image_extent - 1 + pitch - 1) / pitch + 1;
}

SubsampledMap::SubsampledMap(int image_width, int image_height, int n, int sample_frac_bits,
                             int sample_int_bits, std::vector<std::int32_t> samples_x,
                             std::vector<std::int32_t> samples_y)
    : image_width_(image_width),
      image_height_(image_height),
      n_(n),
      sample_frac_bits_(sample_frac_bits),
      sample_int_bits_(sample_int_bits),
      samples_x_(std::move(samples_x)),
      samples_y_(std::move(samples_y)) {
  if (image_width < 2 || image_height < 2) throw ValidationError("sampled map: image must be at least 2x2");
  if (n < 1 || n > 15) throw ValidationError("sampled map: sampling factor n must be in 1..15");
  if (sample_frac_bits + sample_int_bits > 32)
    throw ValidationError("sampled map: samples must fit in 32 bits");
  grid_w_ = grid_extent(image_width, n);
  grid_h_ = grid_extent(image_height, n);
  if (grid_w_ < 2 || grid_h_ < 2) throw ValidationError("sampled map: grid must be at least 2x2");
  const auto expected = static_cast<std::size_t>(grid_w_) * static_cast<std::size_t>(grid_h_);
  if (samples_x_.size() != expected || samples_y_.size() != expected)
    throw ValidationError("sampled map: expected " + std::to_string(expected) + " samples per axis");
  const QFormat fmt(sample_frac_bits, sample_int_bits);
  for (std::size_t i = 0; i < expected; ++i) {
    if (samples_x_[i] < fmt.raw_min() || samples_x_[i] > fmt.raw_max() || samples_y_[i] < fmt.raw_min() ||
        samples_y_[i] > fmt.raw_max())
      throw ValidationError("sampled map: sample " + std::to_string(i) + " exceeds the sample width");
  }
}

double SubsampledMap::sample_x(int i, int j) const { return std::ldexp(raw_x(i, j), -sample_frac_bits_); }
double SubsampledMap::sample_y(int i, int j) const { return std::ldexp(raw_y(i, j), -sample_frac_bits_); }

SubsampledMap subsample(const RemapField& map, int n, int sample_frac_bits, int sample_int_bits) {
  const int w = map.width();
  const int h = map.height();
  if (n < 1 || n > 15) throw ValidationError("sampling factor n must be in 1..15");
  if ((1 << n) >= std::min(w, h))
    throw ValidationError("sampling pitch 2^" + std::to_string(n) + " must be smaller than the image");
  const int gw = SubsampledMap::grid_extent(w, n);
  const int gh = SubsampledMap::grid_extent(h, n);
  const QFormat fmt(sample_frac_bits, sample_int_bits);

  std::vector<std::int32_t> sx;
  std::vector<std::int32_t> sy;
  sx.reserve(static_cast<std::size_t>(gw * gh));
  sy.reserve(static_cast<std::size_t>(gw * gh));
  for (int j = 0; j < gh; ++j) {
    const int v = std::min(j << n, h - 1);
    for (int i = 0; i < gw; ++i) {
      const int u = std::min(i << n, w - 1);
      const QValue qx = quantize(map.rel_x(u, v), fmt);
      const QValue qy = quantize(map.rel_y(u, v), fmt);
      if (qx.saturated || qy.saturated)
        throw ValidationError("displacement at pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") does not fit the sample width");
      sx.push_back(static_cast<std::int32_t>(qx.raw));
      sy.push_back(static_cast<std::int32_t>(qy.raw));
    }
  }
  return SubsampledMap(w, h, n, sample_frac_bits, sample_int_bits, std::move(sx), std::move(sy));
}

Point2 reconstruct(const SubsampledMap& s, int u, int v) {
  if (u < 0 || u >= s.image_width() || v < 0 || v >= s.image_height())
    throw ValidationError("reconstruct: pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") is outside the image");
  const int n = s.n();
  const int i = u >> n;
  const int j = v >> n;
  // Weights are exact dyadic rationals.
  const double a = std::ldexp(u - (i << n), -n);
  const double b = std::ldexp(v - (j << n), -n);
  // When the image edge falls on a grid line the far neighbour carries zero weight.
  const int i1 = std::min(i + 1, s.grid_w() - 1);
  const int j1 = std::min(j + 1, s.grid_h() - 1);

  const double w00 = (1.0 - a) * (1.0 - b);
  const double w10 = a * (1.0 - b);
  const double w01 = (1.0 - a) * b;
  const double w11 = a * b;
  return {w00 * s.sample_x(i, j) + w10 * s.sample_x(i1, j) + w01 * s.sample_x(i, j1) + w11 * s.sample_x(i1, j1),
          w00 * s.sample_y(i, j) + w10 * s.sample_y(i1, j) + w01 * s.sample_y(i, j1) + w11 * s.sample_y(i1, j1)};
}

RemapField sampled_field(const SubsampledMap& s, unsigned threads) {
  RemapField field(s.image_width(), s.image_height());
  detail::parallel_rows(s.image_height(), threads, [&](int v) {
    for (int u = 0; u < s.image_width(); ++u) {
      const Point2 rel = reconstruct(s, u, v);
      field.set(u, v, {u + rel.x, v + rel.y});
    }
  });
  return field;
}

std::int64_t memory_footprint(int grid_w, int grid_h, int bits_per_sample) {
  if (grid_w < 0 || grid_h < 0 || bits_per_sample < 0)
    throw ValidationError("memory_footprint: negative size");
  return std::int64_t{grid_w} * grid_h * 2 * bits_per_sample;
}

std::int64_t memory_footprint(const SubsampledMap& s, int bits_per_sample) {
  return memory_footprint(s.grid_w(), s.grid_h(), bits_per_sample);
}

}  // namespace lensremap
