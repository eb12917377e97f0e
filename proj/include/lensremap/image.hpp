#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lensremap/error.hpp"

namespace lensremap {

/// 8-bit image, row-major, channel-interleaved. Channels is 1 or 3.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::uint8_t fill = 0);
  Image(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  std::uint8_t at(int x, int y, int c = 0) const { return data_[offset(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return data_[offset(x, y, c)]; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  const std::vector<std::uint8_t>& data() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t offset(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<std::uint8_t> data_;
};

// Binary netpbm: P5 (one channel) and P6 (three channels), maxval 255.
Image read_pnm(std::istream& in);
Image read_pnm(const std::string& path);
void write_pnm(std::ostream& out, const Image& img);
void write_pnm(const std::string& path, const Image& img);

}  // namespace lensremap
