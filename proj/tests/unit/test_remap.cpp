#include <doctest.h>

#include <cmath>
#include <optional>

#include "lensremap/error.hpp"
#include "lensremap/onthefly.hpp"
#include "lensremap/remap.hpp"
#include "lensremap/sampling.hpp"
#include "lensremap/stream.hpp"
#include "support/fixtures.hpp"

using namespace lensremap;

namespace {

RemapField shifted(int w, int h, double dx, double dy) {
  RemapField f(w, h);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) f.set(u, v, {u + dx, v + dy});
  return f;
}

/// Straight-line bilinear sample with a zero border.
std::uint8_t scalar_bilinear(const Image& img, double sx, double sy) {
  const double fx = std::floor(sx), fy = std::floor(sy);
  const double a = sx - fx, b = sy - fy;
  auto px = [&](double x, double y) -> double {
    if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return 0;
    return img.at(static_cast<int>(x), static_cast<int>(y));
  };
  const double value = (1 - a) * (1 - b) * px(fx, fy) + a * (1 - b) * px(fx + 1, fy) + (1 - a) * b * px(fx, fy + 1) +
                       a * b * px(fx + 1, fy + 1);
  return static_cast<std::uint8_t>(std::clamp(std::round(value), 0.0, 255.0));
}

}  // namespace

TEST_CASE("bank_index") {
  static_assert(bank_index(0, 0) == 0);
  static_assert(bank_index(1, 0) == 1);
  static_assert(bank_index(0, 1) == 2);
  static_assert(bank_index(1, 1) == 3);
  static_assert(bank_index(-1, -1) == 3);
  for (int y = -3; y < 64; ++y) {
    for (int x = -3; x < 64; ++x) {
      const int mask = 1 << bank_index(x, y) | 1 << bank_index(x + 1, y) | 1 << bank_index(x, y + 1) |
                       1 << bank_index(x + 1, y + 1);
      REQUIRE(mask == 0xF);
    }
  }
}

TEST_CASE("bilinear_fetch") {
  const Image img = fixtures::pattern(20, 10, 1);
  SUBCASE("integer coordinates return the pixel") {
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 20; ++x) REQUIRE(bilinear_fetch(img, x, y) == img.at(x, y));
  }
  SUBCASE("half-way between columns is the rounded mean") {
    for (int x = 0; x + 1 < 20; ++x) {
      const int sum = img.at(x, 4) + img.at(x + 1, 4);
      REQUIRE(bilinear_fetch(img, x + 0.5, 4) == (sum + 1) / 2);
    }
  }
  SUBCASE("border policies") {
    CHECK(bilinear_fetch(img, -5, -5) == 0);
    CHECK(bilinear_fetch(img, 100, 3) == 0);
    CHECK(bilinear_fetch(img, NAN, 3) == 0);
    CHECK(bilinear_fetch(img, -5, -5, 0, BorderPolicy::kClamp) == img.at(0, 0));
    CHECK(bilinear_fetch(img, 100, 3, 0, BorderPolicy::kClamp) == img.at(19, 3));
    CHECK(bilinear_fetch(img, 1e300, -1e300, 0, BorderPolicy::kClamp) == img.at(19, 0));
  }
  SUBCASE("tap weights") {
    const TapQuad q = tap_quad({-0.25, 3.75});
    CHECK(q.x0 == -1);
    CHECK(q.y0 == 3);
    CHECK(q.a == 0.75);
    CHECK(q.b == 0.75);
    CHECK(blend_taps({0, 255, 255, 255}, 1, 1) == 255);
    CHECK(blend_taps({10, 20, 30, 40}, 0.5, 0.5) == 25);
  }
}

TEST_CASE("remap_image") {
  SUBCASE("identity provider is the identity on images") {
    for (auto [w, h] : {std::pair{1, 1}, {7, 3}, {64, 48}}) {
      for (int channels : {1, 3}) {
        const Image img = fixtures::pattern(w, h, channels);
        CHECK(remap_image(img, MapProvider::reference(RemapField::identity(w, h))) == img);
      }
    }
  }
  SUBCASE("integer shift moves the image") {
    const Image img = fixtures::pattern(16, 8, 3);
    const Image out = remap_image(img, MapProvider::reference(shifted(16, 8, 1, 0)));
    for (int y = 0; y < 8; ++y) {
      for (int c = 0; c < 3; ++c) {
        for (int x = 0; x + 1 < 16; ++x) REQUIRE(out.at(x, y, c) == img.at(x + 1, y, c));
        REQUIRE(out.at(15, y, c) == 0);
      }
    }
  }
  SUBCASE("bulk result equals a scalar reimplementation") {
    const Image img = fixtures::checkerboard(640, 480, 16);
    const RemapField ref = build_reference_map(base_calibration());
    const Image out = remap_image(img, MapProvider::reference(ref), BorderPolicy::kConstantZero, 3);
    for (int v = 0; v < 480; ++v)
      for (int u = 0; u < 640; ++u) REQUIRE(out.at(u, v) == scalar_bilinear(img, ref.map_x(u, v), ref.map_y(u, v)));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(remap_image(Image(10, 10, 1), MapProvider::reference(RemapField::identity(10, 11))),
                    ValidationError);
  }
  SUBCASE("deterministic across thread counts") {
    const Image img = fixtures::pattern(640, 480, 3);
    const auto provider = MapProvider::on_the_fly(fixtures::base_at(2), QFormat(16));
    const Image one = remap_image(img, provider, BorderPolicy::kClamp, 1);
    CHECK(remap_image(img, provider, BorderPolicy::kClamp, 4) == one);
  }
}

TEST_CASE("MapProvider") {
  const LensConfig cfg = fixtures::base_at(2);
  const RemapField ref = build_reference_map(cfg);
  const auto r = MapProvider::reference(ref);
  CHECK(r.kind() == MapProvider::Kind::kReference);
  CHECK(r.materialize() == ref);

  const auto o = MapProvider::on_the_fly(cfg, QFormat(16));
  CHECK(o.kind() == MapProvider::Kind::kOnTheFly);
  CHECK(o.materialize(2) == onthefly_field(cfg, QFormat(16)));

  const SubsampledMap s = subsample(ref, 6);
  const auto p = MapProvider::sampled(s);
  CHECK(p.kind() == MapProvider::Kind::kSampled);
  CHECK(p.width() == 640);
  CHECK(p.height() == 480);
  CHECK(p.materialize(2) == sampled_field(s));
}

TEST_CASE("required_lines") {
  const LineRequirement id = required_lines({0, 0, 0, 0});
  CHECK(id.lines == 2);
  CHECK(id.read_delay == 1);
  const LineRequirement r = required_lines({0, 0, -9.7, 10.3});
  CHECK(r.lines == 23);
  CHECK(r.read_delay == 12);
  // A map that only looks upwards still needs the current row resident.
  const LineRequirement up = required_lines({0, 0, -4.5, -2.5});
  CHECK(up.read_delay == 1);
  CHECK(up.lines == 0 - (-5) + 1 + 1);
}

TEST_CASE("LineBuffer") {
  const Image img = fixtures::pattern(9, 6, 3);
  LineBuffer buf(3, 9, 3);
  CHECK(buf.newest_row() == -1);
  CHECK_FALSE(buf.holds(0));
  for (int y = 0; y < 6; ++y) {
    buf.push_row(img, y);
    CHECK(buf.newest_row() == y);
    CHECK(buf.oldest_row() == std::max(0, y - 2));
    for (int r = buf.oldest_row(); r <= y; ++r)
      for (int x = 0; x < 9; ++x)
        for (int c = 0; c < 3; ++c) REQUIRE(buf.read(x, r, c) == img.at(x, r, c));
  }
  CHECK_THROWS_AS(buf.push_row(img, 2), ValidationError);
  CHECK_THROWS_AS(LineBuffer(1, 9, 1), ValidationError);
}

TEST_CASE("stream_remap") {
  SUBCASE("identity provider with two lines") {
    const Image img = fixtures::pattern(33, 17, 1);
    CHECK(stream_remap(img, MapProvider::reference(RemapField::identity(33, 17)), 2) == img);
  }
  SUBCASE("matches the offline engine with automatic sizing") {
    const Image img = fixtures::pattern(640, 480, 1);
    for (double factor : {1.0, 5.0}) {
      const LensConfig cfg = fixtures::base_at(factor);
      const RemapField ref = build_reference_map(cfg);
      for (const MapProvider& p : {MapProvider::reference(ref), MapProvider::on_the_fly(cfg, QFormat(16)),
                                   MapProvider::sampled(subsample(ref, 5))}) {
        for (BorderPolicy border : {BorderPolicy::kConstantZero, BorderPolicy::kClamp}) {
          StreamOptions opts;
          opts.border = border;
          const StreamResult r = stream_remap(img, p, opts);
          const LineRequirement req = required_lines(displacement_bounds(p.materialize()));
          CHECK(r.lines == req.lines);
          CHECK(r.read_delay == req.read_delay);
          CHECK(r.steps == 480 + req.read_delay);
          CHECK(r.image == remap_image(img, p, border));
        }
      }
    }
  }
  SUBCASE("undersized buffers fail exactly where a scan says") {
    const Image img = fixtures::pattern(640, 480, 1);
    const RemapField ref = build_reference_map(fixtures::base_at(5));
    const LineRequirement req = required_lines(displacement_bounds(ref));
    const int delay = req.read_delay;

    // First tap row (raster order, tap order) outside the resident window.
    auto scan = [&](int lines) -> std::optional<std::tuple<int, int, int>> {
      for (int v = 0; v < 480; ++v) {
        const int newest = std::min(v + delay, 479);
        const int oldest = std::max(0, newest - lines + 1);
        for (int u = 0; u < 640; ++u) {
          const auto x0 = static_cast<int>(std::floor(ref.map_x(u, v)));
          const auto y0 = static_cast<int>(std::floor(ref.map_y(u, v)));
          for (auto [x, y] : {std::pair{x0, y0}, {x0 + 1, y0}, {x0, y0 + 1}, {x0 + 1, y0 + 1}}) {
            if (x < 0 || y < 0 || x >= 640 || y >= 480) continue;
            if (y < oldest || y > newest) return std::tuple{u, v, y};
          }
        }
      }
      return std::nullopt;
    };

    int failures = 0;
    for (int cut : {5, 10, 15, 20, 30}) {
      CAPTURE(cut);
      const auto first = scan(req.lines - cut);
      try {
        stream_remap(img, MapProvider::reference(ref), req.lines - cut);
        CHECK_FALSE(first.has_value());
      } catch (const BufferError& e) {
        ++failures;
        REQUIRE(first.has_value());
        CHECK(e.u() == std::get<0>(*first));
        CHECK(e.v() == std::get<1>(*first));
        CHECK(e.needed_row() == std::get<2>(*first));
        CHECK(std::string(e.what()).find("(" + std::to_string(e.u()) + ", " + std::to_string(e.v()) + ")") !=
              std::string::npos);
      }
    }
    CHECK(failures > 0);
  }
  SUBCASE("too short a delay underflows") {
    const Image img = fixtures::pattern(64, 48, 1);
    const auto p = MapProvider::reference(shifted(64, 48, 0, 3));
    StreamOptions opts;
    opts.lines = 10;
    opts.read_delay = 2;
    CHECK_THROWS_AS(stream_remap(img, p, opts), BufferUnderflow);
    opts.read_delay = 4;
    CHECK(stream_remap(img, p, opts).image == remap_image(img, p));
  }
  SUBCASE("a far upward look overwrites") {
    const Image img = fixtures::pattern(64, 48, 1);
    const auto p = MapProvider::reference(shifted(64, 48, 0, -10));
    CHECK_THROWS_AS(stream_remap(img, p, 5), BufferOverwritten);
    CHECK(stream_remap(img, p, StreamOptions{}).image == remap_image(img, p));
  }
  SUBCASE("minimality probe") {
    const Image img = fixtures::pattern(640, 480, 1);
    const auto p = MapProvider::reference(build_reference_map(fixtures::base_at(3)));
    const LineRequirement req = required_lines(displacement_bounds(p.materialize()));
    CHECK_NOTHROW(stream_remap(img, p, req.lines));
    CHECK_THROWS_AS(stream_remap(img, p, req.lines / 2), BufferError);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(stream_remap(Image(8, 8, 1), MapProvider::reference(RemapField::identity(8, 9)), 4),
                    ValidationError);
  }
}
