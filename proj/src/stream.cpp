#include "lensremap/stream.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace lensremap {

BufferError::BufferError(const std::string& kind, int u, int v, int needed_row, int oldest_row, int newest_row)
    : EvaluationError(kind + " at output pixel (" + std::to_string(u) + ", " + std::to_string(v) + "): needs row " +
                      std::to_string(needed_row) + ", buffer holds rows " + std::to_string(oldest_row) + ".." +
                      std::to_string(newest_row)),
      u_(u),
      v_(v),
      needed_row_(needed_row),
      oldest_row_(oldest_row),
      newest_row_(newest_row) {}

LineBuffer::LineBuffer(int lines, int width, int channels) : lines_(lines), width_(width), channels_(channels) {
  if (lines < 2) throw ValidationError("line buffer needs at least 2 lines, got " + std::to_string(lines));
  // Each bank keeps half a row (rounded up) per resident line.
  const auto half = static_cast<std::size_t>((width + 1) / 2);
  for (auto& bank : banks_) bank.assign(static_cast<std::size_t>(lines) * half * static_cast<std::size_t>(channels), 0);
}

std::size_t LineBuffer::address(int x, int y, int c) const {
  const auto slot = static_cast<std::size_t>(y % lines_);
  const auto half = static_cast<std::size_t>((width_ + 1) / 2);
  return (slot * half + static_cast<std::size_t>(x / 2)) * static_cast<std::size_t>(channels_) +
         static_cast<std::size_t>(c);
}

void LineBuffer::push_row(const Image& src, int row) {
  if (row != newest_ + 1) throw ValidationError("line buffer rows must be written in order");
  for (int x = 0; x < width_; ++x) {
    auto& bank = banks_[static_cast<std::size_t>(bank_index(x, row))];
    for (int c = 0; c < channels_; ++c) bank[address(x, row, c)] = src.at(x, row, c);
  }
  newest_ = row;
}

std::uint8_t LineBuffer::read(int x, int y, int c) const {
  assert(holds(y));
  return banks_[static_cast<std::size_t>(bank_index(x, y))][address(x, y, c)];
}

StreamResult stream_remap(const Image& src, const MapProvider& provider, const StreamOptions& options) {
  const int width = src.width();
  const int height = src.height();
  if (provider.width() != width || provider.height() != height)
    throw ValidationError("stream: map and image dimensions differ");

  LineRequirement sizing{};
  if (!options.lines || !options.read_delay) sizing = required_lines(displacement_bounds(provider.materialize(1)));
  const int lines = options.lines.value_or(sizing.lines);
  const int delay = options.read_delay.value_or(sizing.read_delay);
  if (delay < 0) throw ValidationError("read delay must be non-negative");

  LineBuffer buffer(lines, width, src.channels());
  StreamResult result{Image(width, height, src.channels()), lines, delay, 0};
  const bool clamp = options.border == BorderPolicy::kClamp;

  // Resolves one tap to an in-image coordinate, or nothing for a constant border.
  auto locate = [&](std::int64_t x, std::int64_t y, int u, int v) -> std::optional<std::pair<int, int>> {
    if (clamp) {
      x = std::clamp<std::int64_t>(x, 0, width - 1);
      y = std::clamp<std::int64_t>(y, 0, height - 1);
    } else if (x < 0 || y < 0 || x >= width || y >= height) {
      return std::nullopt;
    }
    const int row = static_cast<int>(y);
    if (row > buffer.newest_row()) throw BufferUnderflow(u, v, row, buffer.oldest_row(), buffer.newest_row());
    if (row < buffer.oldest_row()) throw BufferOverwritten(u, v, row, buffer.oldest_row(), buffer.newest_row());
    return std::pair<int, int>{static_cast<int>(x), row};
  };

  for (int step = 0;; ++step) {
    if (step < height) buffer.push_row(src, step);
    const int v = step - delay;
    if (v >= height) break;
    result.steps = step + 1;
    if (v < 0) continue;

    for (int u = 0; u < width; ++u) {
      const Point2 s = provider.source(u, v);
      if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
        for (int c = 0; c < src.channels(); ++c) result.image.at(u, v, c) = 0;
        continue;
      }
      const TapQuad q = tap_quad(s);
      const std::array<std::optional<std::pair<int, int>>, 4> taps = {
          locate(q.x0, q.y0, u, v), locate(q.x0 + 1, q.y0, u, v), locate(q.x0, q.y0 + 1, u, v),
          locate(q.x0 + 1, q.y0 + 1, u, v)};
      // The quartet (x0..x0+1, y0..y0+1) occupies every bank exactly once.
      if ((1 << bank_index(q.x0, q.y0) | 1 << bank_index(q.x0 + 1, q.y0) | 1 << bank_index(q.x0, q.y0 + 1) |
           1 << bank_index(q.x0 + 1, q.y0 + 1)) != 0xF)
        throw std::logic_error("bank conflict in interpolation quartet");
      for (int c = 0; c < src.channels(); ++c) {
        std::array<std::uint8_t, 4> p{};
        for (std::size_t k = 0; k < 4; ++k) {
          if (taps[k]) p[k] = buffer.read(taps[k]->first, taps[k]->second, c);
        }
        result.image.at(u, v, c) = blend_taps(p, q.a, q.b);
      }
    }
  }
  return result;
}

Image stream_remap(const Image& src, const MapProvider& provider, int lines) {
  StreamOptions options;
  options.lines = lines;
  return stream_remap(src, provider, options).image;
}

}  // namespace lensremap
