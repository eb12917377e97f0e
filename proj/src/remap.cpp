#include "lensremap/remap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"

namespace lensremap {

MapProvider MapProvider::reference(RemapField field) {
  field.validate();
  return MapProvider(std::make_shared<const RemapField>(std::move(field)));
}

MapProvider MapProvider::on_the_fly(const LensConfig& cfg, QFormat fmt) {
  return MapProvider(std::make_shared<const OnTheFlyEvaluator>(cfg, fmt));
}

MapProvider MapProvider::sampled(SubsampledMap map) {
  return MapProvider(std::make_shared<const SubsampledMap>(std::move(map)));
}

MapProvider::Kind MapProvider::kind() const { return static_cast<Kind>(storage_.index()); }

int MapProvider::width() const {
  struct {
    int operator()(const std::shared_ptr<const RemapField>& f) const { return f->width(); }
    int operator()(const std::shared_ptr<const OnTheFlyEvaluator>& e) const { return e->config().image_width; }
    int operator()(const std::shared_ptr<const SubsampledMap>& s) const { return s->image_width(); }
  } visitor;
  return std::visit(visitor, storage_);
}

int MapProvider::height() const {
  struct {
    int operator()(const std::shared_ptr<const RemapField>& f) const { return f->height(); }
    int operator()(const std::shared_ptr<const OnTheFlyEvaluator>& e) const { return e->config().image_height; }
    int operator()(const std::shared_ptr<const SubsampledMap>& s) const { return s->image_height(); }
  } visitor;
  return std::visit(visitor, storage_);
}

Point2 MapProvider::source(int u, int v) const {
  struct {
    int u, v;
    Point2 operator()(const std::shared_ptr<const RemapField>& f) const { return f->at(u, v); }
    Point2 operator()(const std::shared_ptr<const OnTheFlyEvaluator>& e) const {
      const auto p = e->evaluate(u, v);
      return {p.sx.value(), p.sy.value()};
    }
    Point2 operator()(const std::shared_ptr<const SubsampledMap>& s) const {
      const auto rel = reconstruct(*s, u, v);
      return {u + rel.x, v + rel.y};
    }
  } visitor{u, v};
  return std::visit(visitor, storage_);
}

RemapField MapProvider::materialize(unsigned threads) const {
  if (kind() == Kind::kReference) return *std::get<0>(storage_);
  RemapField field(width(), height());
  detail::parallel_rows(height(), threads, [&](int v) {
    for (int u = 0; u < width(); ++u) {
      try {
        field.set(u, v, source(u, v));
      } catch (const EvaluationError& e) {
        throw PixelError(u, v, e.what());
      }
    }
  });
  return field;
}

TapQuad tap_quad(Point2 s) {
  // Far-away coordinates are pinned so the integer conversion stays defined;
  // every tap of a pinned coordinate is outside any image.
  constexpr double kLimit = 1e9;
  const double px = std::clamp(s.x, -kLimit, kLimit);
  const double py = std::clamp(s.y, -kLimit, kLimit);
  const double fx = std::floor(px);
  const double fy = std::floor(py);
  return {static_cast<std::int64_t>(fx), static_cast<std::int64_t>(fy), px - fx, py - fy};
}

std::uint8_t blend_taps(const std::array<std::uint8_t, 4>& p, double a, double b) {
  const double value = (1.0 - a) * (1.0 - b) * p[0] + a * (1.0 - b) * p[1] + (1.0 - a) * b * p[2] + a * b * p[3];
  return static_cast<std::uint8_t>(std::clamp(std::round(value), 0.0, 255.0));
}

namespace {

std::uint8_t tap(const Image& src, std::int64_t x, std::int64_t y, int c, BorderPolicy border) {
  if (border == BorderPolicy::kClamp) {
    x = std::clamp<std::int64_t>(x, 0, src.width() - 1);
    y = std::clamp<std::int64_t>(y, 0, src.height() - 1);
  } else if (x < 0 || y < 0 || x >= src.width() || y >= src.height()) {
    return 0;
  }
  return src.at(static_cast<int>(x), static_cast<int>(y), c);
}

}  // namespace

std::uint8_t bilinear_fetch(const Image& src, double sx, double sy, int c, BorderPolicy border) {
  const TapQuad q = tap_quad({sx, sy});
  if (!std::isfinite(sx) || !std::isfinite(sy)) return 0;
  return blend_taps({tap(src, q.x0, q.y0, c, border), tap(src, q.x0 + 1, q.y0, c, border),
                     tap(src, q.x0, q.y0 + 1, c, border), tap(src, q.x0 + 1, q.y0 + 1, c, border)},
                    q.a, q.b);
}

Image remap_image(const Image& src, const MapProvider& provider, BorderPolicy border, unsigned threads) {
  if (provider.width() != src.width() || provider.height() != src.height())
    throw ValidationError("remap: map is " + std::to_string(provider.width()) + "x" +
                          std::to_string(provider.height()) + " but image is " + std::to_string(src.width()) + "x" +
                          std::to_string(src.height()));
  Image dst(src.width(), src.height(), src.channels());
  detail::parallel_rows(src.height(), threads, [&](int v) {
    for (int u = 0; u < src.width(); ++u) {
      const Point2 s = provider.source(u, v);
      for (int c = 0; c < src.channels(); ++c) dst.at(u, v, c) = bilinear_fetch(src, s.x, s.y, c, border);
    }
  });
  return dst;
}

LineRequirement required_lines(const DisplacementBounds& bounds, int interp_margin) {
  if (interp_margin < 0) throw ValidationError("interp_margin must be non-negative");
  const int upper = std::max(0, static_cast<int>(std::ceil(bounds.max_dy)));
  const int lower = static_cast<int>(std::floor(bounds.min_dy));
  return {upper - lower + 1 + interp_margin, upper + interp_margin};
}

}  // namespace lensremap
