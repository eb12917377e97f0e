#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lensremap/image.hpp"
#include "lensremap/remap.hpp"

namespace lensremap {

/// A tap row was not available in the line buffer when output pixel (u, v)
/// needed it. Base of BufferUnderflow and BufferOverwritten.
class BufferError : public EvaluationError {
 public:
  BufferError(const std::string& kind, int u, int v, int needed_row, int oldest_row, int newest_row);

  int u() const noexcept { return u_; }
  int v() const noexcept { return v_; }
  int needed_row() const noexcept { return needed_row_; }
  int oldest_row() const noexcept { return oldest_row_; }
  int newest_row() const noexcept { return newest_row_; }

 private:
  int u_, v_, needed_row_, oldest_row_, newest_row_;
};

/// The tap row has not been written yet.
class BufferUnderflow : public BufferError {
 public:
  BufferUnderflow(int u, int v, int needed_row, int oldest_row, int newest_row)
      : BufferError("buffer underflow", u, v, needed_row, oldest_row, newest_row) {}
};

/// The tap row was already evicted by newer rows.
class BufferOverwritten : public BufferError {
 public:
  BufferOverwritten(int u, int v, int needed_row, int oldest_row, int newest_row)
      : BufferError("buffer overwritten", u, v, needed_row, oldest_row, newest_row) {}
};

/// Circular store of the most recent `lines` input rows, split over four
/// memories by pixel parity so that any 2x2 quartet is readable at once.
class LineBuffer {
 public:
  LineBuffer(int lines, int width, int channels);

  int lines() const { return lines_; }
  /// Index of the most recently written row, -1 before the first write.
  int newest_row() const { return newest_; }
  /// Oldest row still resident.
  int oldest_row() const { return std::max(0, newest_ - lines_ + 1); }
  bool holds(int row) const { return row >= oldest_row() && row <= newest_; }

  /// Writes the next input row (rows must arrive in order).
  void push_row(const Image& src, int row);

  /// Reads pixel (x, y) from its bank; the row must be resident.
  std::uint8_t read(int x, int y, int c) const;

 private:
  std::size_t address(int x, int y, int c) const;

  int lines_;
  int width_;
  int channels_;
  int newest_ = -1;
  std::array<std::vector<std::uint8_t>, 4> banks_;
};

struct StreamOptions {
  /// Buffer capacity; empty means required_lines of the provider.
  std::optional<int> lines;
  /// Output lag in rows; empty means the read_delay of required_lines.
  std::optional<int> read_delay;
  BorderPolicy border = BorderPolicy::kConstantZero;
};

struct StreamResult {
  Image image;
  int lines = 0;
  int read_delay = 0;
  int steps = 0;  // row periods simulated
};

/// Row-granular model of the streaming datapath: one input row enters the
/// buffer per step and, once read_delay rows are in, one output row leaves
/// per step. Each output pixel reads its four taps from four distinct banks.
/// Throws BufferUnderflow / BufferOverwritten at the first pixel (raster
/// order) whose tap row is not resident. Single-threaded by contract.
StreamResult stream_remap(const Image& src, const MapProvider& provider, const StreamOptions& options = {});

/// Convenience overload with an explicit capacity; the delay is derived from the provider.
Image stream_remap(const Image& src, const MapProvider& provider, int lines);

}  // namespace lensremap
