#include "lensremap/image.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

namespace lensremap {

Image::Image(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 1 || height < 1) throw ValidationError("image dimensions must be positive");
  if (channels != 1 && channels != 3) throw ValidationError("image must have 1 or 3 channels");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * static_cast<std::size_t>(channels),
               fill);
}

Image::Image(int width, int height, int channels, std::vector<std::uint8_t> data) : Image(width, height, channels) {
  if (data.size() != data_.size()) throw ValidationError("image data length does not match its dimensions");
  data_ = std::move(data);
}

namespace {

// Header token reader; skips whitespace and '#' comments.
long read_header_int(std::istream& in, const char* field) {
  int c = in.get();
  while (in) {
    if (c == '#') {
      while (in && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (!in || !std::isdigit(c)) throw ValidationError(std::string("pnm: malformed ") + field);
  long value = 0;
  while (in && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1'000'000) throw ValidationError(std::string("pnm: ") + field + " too large");
    c = in.get();
  }
  // exactly one whitespace byte separates the header from the raster
  if (!in || !std::isspace(c)) throw ValidationError(std::string("pnm: malformed ") + field);
  return value;
}

}  // namespace

Image read_pnm(std::istream& in) {
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw ValidationError("pnm: only binary P5/P6 images are supported");
  const int channels = magic[1] == '5' ? 1 : 3;
  const long width = read_header_int(in, "width");
  const long height = read_header_int(in, "height");
  const long maxval = read_header_int(in, "maxval");
  if (maxval != 255) throw ValidationError("pnm: only maxval 255 is supported");
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width * height * channels));
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) throw ValidationError("pnm: truncated raster");
  return Image(static_cast<int>(width), static_cast<int>(height), channels, std::move(data));
}

Image read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open image '" + path + "'");
  return read_pnm(in);
}

void write_pnm(std::ostream& out, const Image& img) {
  out << (img.channels() == 1 ? "P5" : "P6") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data().data()), static_cast<std::streamsize>(img.data().size()));
}

void write_pnm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write image '" + path + "'");
  write_pnm(out, img);
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace lensremap
