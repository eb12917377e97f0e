#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "lensremap/model.hpp"
#include "lensremap/sampling.hpp"

namespace lensremap {

// Binary map containers. All integers are little-endian.
//
// FMAP (dense float map), 16-byte header:
//   0  "FMAP"   4  u16 version (1)   6  u16 reserved (0)
//   8  u32 width   12  u32 height
// then width*height float64 map_x values, then as many map_y values.
//
// SMAP (sampled map), 16-byte header:
//   0  "SMAP"   4  u8 version (1)   5  u8 n
//   6  u16 grid_w   8  u16 grid_h   10  u8 sample_frac_bits   11  u8 bits_per_sample
//   12 u16 image_width   14 u16 image_height
// then grid_w*grid_h int32 samples_x (row-major), then samples_y.

inline constexpr int kContainerVersion = 1;

void write_fmap(std::ostream& out, const RemapField& field);
void write_fmap(const std::string& path, const RemapField& field);
RemapField read_fmap(std::istream& in);

void write_smap(std::ostream& out, const SubsampledMap& map);
void write_smap(const std::string& path, const SubsampledMap& map);
SubsampledMap read_smap(std::istream& in);

/// Reads either container, dispatching on the magic bytes.
std::variant<RemapField, SubsampledMap> read_map_file(const std::string& path);

/// Parses a JSON calibration document:
/// {image_width, image_height, intrinsics{fx,fy,cx,cy}, new_intrinsics{...},
///  coeffs{k1,k2,k3,p1,p2,k4,k5,k6}, rotation[9]}.
/// Missing coefficients are 0, a missing rotation is the identity and a
/// missing new_intrinsics copies intrinsics. Errors name the offending field.
LensConfig parse_lens_config(const std::string& json_text);
LensConfig load_lens_config(const std::string& path);
std::string lens_config_to_json(const LensConfig& cfg);

}  // namespace lensremap
