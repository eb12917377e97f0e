#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include <unistd.h>

#include "lensremap/image.hpp"
#include "lensremap/model.hpp"

namespace fixtures {

/// The base calibration with its coefficients multiplied by factor.
inline lensremap::LensConfig base_at(double factor) {
  auto cfg = lensremap::base_calibration();
  cfg.coeffs = lensremap::scale_distortion(cfg.coeffs, factor);
  return cfg;
}

/// The base calibration shrunk to width x height (focal length and principal
/// point scaled with the width), coefficients scaled by factor.
inline lensremap::LensConfig small_frame(int width, int height, double factor) {
  auto cfg = base_at(factor);
  const double s = static_cast<double>(width) / cfg.image_width;
  cfg.image_width = width;
  cfg.image_height = height;
  cfg.intrinsics = {500.0 * s, 500.0 * s, (width - 1) / 2.0, (height - 1) / 2.0};
  cfg.new_intrinsics = cfg.intrinsics;
  return cfg;
}

/// Deterministic textured test image.
inline lensremap::Image pattern(int width, int height, int channels, unsigned seed = 7) {
  lensremap::Image img(width, height, channels);
  std::mt19937 rng(seed);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        const int checker = ((x / 8 + y / 8) % 2) * 160;
        img.at(x, y, c) = static_cast<std::uint8_t>(checker + static_cast<int>(rng() % 90) + 10 * c);
      }
    }
  }
  return img;
}

inline lensremap::Image checkerboard(int width, int height, int cell) {
  lensremap::Image img(width, height, 1);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) img.at(x, y) = ((x / cell + y / cell) % 2) ? 255 : 0;
  return img;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("lensremap_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace fixtures
