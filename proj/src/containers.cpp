#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "lensremap/io.hpp"

namespace lensremap {

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t k = 0; k < sizeof(T); ++k) out.put(static_cast<char>((u >> (8 * k)) & 0xFF));
}

template <class T>
T get_le(std::istream& in, const char* what) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw ValidationError(std::string("truncated map file: ") + what);
    u |= static_cast<U>(static_cast<U>(c) << (8 * k));
  }
  return static_cast<T>(u);
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in, "map values")); }

void expect_magic(std::istream& in, const char* magic) {
  char m[4] = {};
  in.read(m, 4);
  if (!in || std::memcmp(m, magic, 4) != 0)
    throw ValidationError(std::string("not a ") + magic + " container (bad magic)");
}

std::uint16_t to_u16(int v, const char* what) {
  if (v < 0 || v > 0xFFFF) throw ValidationError(std::string(what) + " does not fit the container header");
  return static_cast<std::uint16_t>(v);
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace

void write_fmap(std::ostream& out, const RemapField& field) {
  out.write("FMAP", 4);
  put_le<std::uint16_t>(out, kContainerVersion);
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.width()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.height()));
  for (double x : field.plane_x()) put_f64(out, x);
  for (double y : field.plane_y()) put_f64(out, y);
}

void write_fmap(const std::string& path, const RemapField& field) {
  write_file(path, [&](std::ostream& out) { write_fmap(out, field); });
}

RemapField read_fmap(std::istream& in) {
  expect_magic(in, "FMAP");
  const auto version = get_le<std::uint16_t>(in, "header");
  if (version != kContainerVersion) throw ValidationError("FMAP: unsupported version " + std::to_string(version));
  get_le<std::uint16_t>(in, "header");
  const auto width = get_le<std::uint32_t>(in, "header");
  const auto height = get_le<std::uint32_t>(in, "header");
  if (width < 1 || height < 1 || width > 65535 || height > 65535)
    throw ValidationError("FMAP: implausible dimensions");
  RemapField field(static_cast<int>(width), static_cast<int>(height));
  for (double& x : field.plane_x()) x = get_f64(in);
  for (double& y : field.plane_y()) y = get_f64(in);
  field.validate();
  return field;
}

void write_smap(std::ostream& out, const SubsampledMap& map) {
  out.write("SMAP", 4);
  put_le<std::uint8_t>(out, kContainerVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(map.n()));
  put_le<std::uint16_t>(out, to_u16(map.grid_w(), "grid_w"));
  put_le<std::uint16_t>(out, to_u16(map.grid_h(), "grid_h"));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(map.sample_frac_bits()));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(map.sample_bits()));
  put_le<std::uint16_t>(out, to_u16(map.image_width(), "image_width"));
  put_le<std::uint16_t>(out, to_u16(map.image_height(), "image_height"));
  for (std::int32_t s : map.samples_x()) put_le(out, s);
  for (std::int32_t s : map.samples_y()) put_le(out, s);
}

void write_smap(const std::string& path, const SubsampledMap& map) {
  write_file(path, [&](std::ostream& out) { write_smap(out, map); });
}

SubsampledMap read_smap(std::istream& in) {
  expect_magic(in, "SMAP");
  const auto version = get_le<std::uint8_t>(in, "header");
  if (version != kContainerVersion) throw ValidationError("SMAP: unsupported version " + std::to_string(version));
  const int n = get_le<std::uint8_t>(in, "header");
  const int grid_w = get_le<std::uint16_t>(in, "header");
  const int grid_h = get_le<std::uint16_t>(in, "header");
  const int frac = get_le<std::uint8_t>(in, "header");
  const int bits = get_le<std::uint8_t>(in, "header");
  const int width = get_le<std::uint16_t>(in, "header");
  const int height = get_le<std::uint16_t>(in, "header");
  if (n < 1 || n > 15 || width < 2 || height < 2) throw ValidationError("SMAP: invalid header");
  if (SubsampledMap::grid_extent(width, n) != grid_w || SubsampledMap::grid_extent(height, n) != grid_h)
    throw ValidationError("SMAP: grid size inconsistent with image size and n");
  const auto count = static_cast<std::size_t>(grid_w) * static_cast<std::size_t>(grid_h);
  std::vector<std::int32_t> sx(count);
  std::vector<std::int32_t> sy(count);
  for (auto& s : sx) s = get_le<std::int32_t>(in, "samples");
  for (auto& s : sy) s = get_le<std::int32_t>(in, "samples");
  return SubsampledMap(width, height, n, frac, bits - frac, std::move(sx), std::move(sy));
}

std::variant<RemapField, SubsampledMap> read_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open map file '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  if (!in) throw ValidationError("map file '" + path + "' is too short");
  in.seekg(0);
  if (std::memcmp(magic, "FMAP", 4) == 0) return read_fmap(in);
  if (std::memcmp(magic, "SMAP", 4) == 0) return read_smap(in);
  throw ValidationError("map file '" + path + "' has unknown magic");
}

}  // namespace lensremap
