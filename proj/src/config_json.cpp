#include <algorithm>
#include <array>
#include <optional>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lensremap/io.hpp"

namespace lensremap {

namespace {

using nlohmann::json;

double number_field(const json& obj, const std::string& scope, const char* key, std::optional<double> fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ValidationError("config: missing field '" + scope + key + "'");
  }
  if (!it->is_number()) throw ValidationError("config: field '" + scope + key + "' must be a number");
  return it->get<double>();
}

int int_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("config: missing field '") + key + "'");
  if (!it->is_number_integer()) throw ValidationError(std::string("config: field '") + key + "' must be an integer");
  const auto v = it->get<std::int64_t>();
  if (v < 2 || v > 65535) throw ValidationError(std::string("config: field '") + key + "' must be in 2..65535");
  return static_cast<int>(v);
}

CameraIntrinsics intrinsics_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("config: missing object '") + key + "'");
  if (!it->is_object()) throw ValidationError(std::string("config: '") + key + "' must be an object");
  const std::string scope = std::string(key) + ".";
  CameraIntrinsics cam{number_field(*it, scope, "fx", std::nullopt), number_field(*it, scope, "fy", std::nullopt),
                       number_field(*it, scope, "cx", std::nullopt), number_field(*it, scope, "cy", std::nullopt)};
  try {
    cam.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config: '") + key + "': " + e.what());
  }
  return cam;
}

}  // namespace

LensConfig parse_lens_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config: top level must be an object");

  LensConfig cfg;
  cfg.image_width = int_field(doc, "image_width");
  cfg.image_height = int_field(doc, "image_height");
  cfg.intrinsics = intrinsics_field(doc, "intrinsics");
  cfg.new_intrinsics = doc.contains("new_intrinsics") ? intrinsics_field(doc, "new_intrinsics") : cfg.intrinsics;

  if (const auto it = doc.find("coeffs"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError("config: 'coeffs' must be an object");
    for (const auto& [key, value] : it->items()) {
      static const char* known[] = {"k1", "k2", "k3", "p1", "p2", "k4", "k5", "k6"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
          std::end(known))
        throw ValidationError("config: unknown coefficient 'coeffs." + key + "'");
    }
    auto& c = cfg.coeffs;
    c.k1 = number_field(*it, "coeffs.", "k1", 0.0);
    c.k2 = number_field(*it, "coeffs.", "k2", 0.0);
    c.k3 = number_field(*it, "coeffs.", "k3", 0.0);
    c.p1 = number_field(*it, "coeffs.", "p1", 0.0);
    c.p2 = number_field(*it, "coeffs.", "p2", 0.0);
    c.k4 = number_field(*it, "coeffs.", "k4", 0.0);
    c.k5 = number_field(*it, "coeffs.", "k5", 0.0);
    c.k6 = number_field(*it, "coeffs.", "k6", 0.0);
  }

  if (const auto it = doc.find("rotation"); it != doc.end()) {
    if (!it->is_array() || it->size() != 9) throw ValidationError("config: 'rotation' must be an array of 9 numbers");
    std::array<double, 9> r{};
    for (std::size_t i = 0; i < 9; ++i) {
      if (!(*it)[i].is_number()) throw ValidationError("config: 'rotation[" + std::to_string(i) + "]' must be a number");
      r[i] = (*it)[i].get<double>();
    }
    try {
      cfg.rotation = RotationMatrix::from_row_major(r);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("config: ") + e.what());
    }
  }

  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return cfg;
}

LensConfig load_lens_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_lens_config(text.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string lens_config_to_json(const LensConfig& cfg) {
  auto cam = [](const CameraIntrinsics& c) { return json{{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy}}; };
  const auto& k = cfg.coeffs;
  json doc{{"image_width", cfg.image_width},
           {"image_height", cfg.image_height},
           {"intrinsics", cam(cfg.intrinsics)},
           {"new_intrinsics", cam(cfg.new_intrinsics)},
           {"coeffs",
            {{"k1", k.k1}, {"k2", k.k2}, {"k3", k.k3}, {"p1", k.p1}, {"p2", k.p2}, {"k4", k.k4}, {"k5", k.k5},
             {"k6", k.k6}}},
           {"rotation", cfg.rotation.row_major()}};
  return doc.dump(2) + "\n";
}

}  // namespace lensremap
