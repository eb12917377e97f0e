#pragma once

#include <cstdint>
#include <vector>

#include "lensremap/fixed_point.hpp"
#include "lensremap/model.hpp"

namespace lensremap {

/// Map samples taken every 2^n pixels on both axes, stored as fixed-point
/// relative displacements. Grid point (i, j) holds the displacement of pixel
/// (min(i * 2^n, W - 1), min(j * 2^n, H - 1)).
class SubsampledMap {
 public:
  static constexpr int kDefaultSampleFracBits = 8;
  /// 12 magnitude bits plus sign.
  static constexpr int kDefaultSampleIntBits = 13;

  SubsampledMap() = default;
  /// Takes ownership of raw sample grids; validates geometry and sizes.
  SubsampledMap(int image_width, int image_height, int n, int sample_frac_bits, int sample_int_bits,
                std::vector<std::int32_t> samples_x, std::vector<std::int32_t> samples_y);

  static int grid_extent(int image_extent, int n);

  int image_width() const { return image_width_; }
  int image_height() const { return image_height_; }
  int n() const { return n_; }
  int pitch() const { return 1 << n_; }
  int grid_w() const { return grid_w_; }
  int grid_h() const { return grid_h_; }
  std::size_t sample_count() const { return samples_x_.size(); }
  int sample_frac_bits() const { return sample_frac_bits_; }
  int sample_int_bits() const { return sample_int_bits_; }
  int sample_bits() const { return sample_frac_bits_ + sample_int_bits_; }

  std::int32_t raw_x(int i, int j) const { return samples_x_[index(i, j)]; }
  std::int32_t raw_y(int i, int j) const { return samples_y_[index(i, j)]; }
  double sample_x(int i, int j) const;
  double sample_y(int i, int j) const;

  const std::vector<std::int32_t>& samples_x() const { return samples_x_; }
  const std::vector<std::int32_t>& samples_y() const { return samples_y_; }

  bool operator==(const SubsampledMap&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_w_) + static_cast<std::size_t>(i);
  }

  int image_width_ = 0;
  int image_height_ = 0;
  int n_ = 0;
  int grid_w_ = 0;
  int grid_h_ = 0;
  int sample_frac_bits_ = kDefaultSampleFracBits;
  int sample_int_bits_ = kDefaultSampleIntBits;
  std::vector<std::int32_t> samples_x_;
  std::vector<std::int32_t> samples_y_;
};

/// Samples the relative displacements of `map` on a 2^n grid.
/// Throws ValidationError if either grid extent would be below 2 or 2^n does
/// not fit inside the image.
SubsampledMap subsample(const RemapField& map, int n,
                        int sample_frac_bits = SubsampledMap::kDefaultSampleFracBits,
                        int sample_int_bits = SubsampledMap::kDefaultSampleIntBits);

/// Bilinear blend of the four samples around (u, v), relative displacement.
Point2 reconstruct(const SubsampledMap& s, int u, int v);

/// Absolute map obtained by reconstructing every pixel.
RemapField sampled_field(const SubsampledMap& s, unsigned threads = 0);

/// grid_w * grid_h * 2 * bits_per_sample.
std::int64_t memory_footprint(const SubsampledMap& s, int bits_per_sample);
std::int64_t memory_footprint(int grid_w, int grid_h, int bits_per_sample);

}  // namespace lensremap
