#include "lensremap/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"

namespace lensremap {

namespace {

bool all_finite(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

constexpr double kDegenerate = 1e-12;

}  // namespace

void CameraIntrinsics::validate() const {
  if (!all_finite({fx, fy, cx, cy})) throw ValidationError("intrinsics: all fields must be finite");
  if (!(fx > 0.0) || !(fy > 0.0)) throw ValidationError("intrinsics: fx and fy must be positive");
}

void DistortionCoefficients::validate() const {
  if (!all_finite({k1, k2, k3, p1, p2, k4, k5, k6}))
    throw ValidationError("coeffs: all coefficients must be finite");
}

RotationMatrix::RotationMatrix() : r_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

RotationMatrix RotationMatrix::from_row_major(const std::array<double, 9>& r) {
  for (double v : r) {
    if (!std::isfinite(v)) throw ValidationError("rotation: entries must be finite");
  }
  // R^T R - I
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += r[k * 3 + i] * r[k * 3 + j];
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > kTolerance)
        throw ValidationError("rotation: matrix is not orthonormal");
    }
  }
  const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                     r[2] * (r[3] * r[7] - r[4] * r[6]);
  if (std::abs(det - 1.0) > kTolerance) throw ValidationError("rotation: determinant must be +1");
  return RotationMatrix(r);
}

RotationMatrix RotationMatrix::from_axis_angle(double ax, double ay, double az, double angle) {
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  if (!(norm > 0.0)) throw ValidationError("rotation: axis must be non-zero");
  ax /= norm;
  ay /= norm;
  az /= norm;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  return from_row_major({t * ax * ax + c, t * ax * ay - s * az, t * ax * az + s * ay,
                         t * ax * ay + s * az, t * ay * ay + c, t * ay * az - s * ax,
                         t * ax * az - s * ay, t * ay * az + s * ax, t * az * az + c});
}

bool RotationMatrix::is_identity() const { return *this == RotationMatrix(); }

void LensConfig::validate() const {
  if (image_width < 2 || image_height < 2)
    throw ValidationError("image_width and image_height must be at least 2");
  intrinsics.validate();
  new_intrinsics.validate();
  coeffs.validate();
}

RemapField::RemapField(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw ValidationError("remap field dimensions must be positive");
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  map_x_.assign(n, 0.0);
  map_y_.assign(n, 0.0);
}

RemapField RemapField::identity(int width, int height) {
  RemapField f(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) f.set(u, v, {static_cast<double>(u), static_cast<double>(v)});
  }
  return f;
}

void RemapField::validate() const {
  for (std::size_t i = 0; i < map_x_.size(); ++i) {
    if (!std::isfinite(map_x_[i]) || !std::isfinite(map_y_[i]))
      throw ValidationError("remap field holds a non-finite value at index " + std::to_string(i));
  }
}

Point2 normalize_pixel(double u, double v, const CameraIntrinsics& cam) {
  return {(u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy};
}

Point2 apply_inverse_rotation(Point2 p, const RotationMatrix& r) {
  // Columns of R are the rows of R^T.
  const double X = r(0, 0) * p.x + r(1, 0) * p.y + r(2, 0);
  const double Y = r(0, 1) * p.x + r(1, 1) * p.y + r(2, 1);
  const double W = r(0, 2) * p.x + r(1, 2) * p.y + r(2, 2);
  if (std::abs(W) < kDegenerate) throw EvaluationError("ray rotated to infinity (|W| < 1e-12)");
  return {X / W, Y / W};
}

Point2 distort(Point2 p, const DistortionCoefficients& c) {
  const double x = p.x;
  const double y = p.y;
  const double r2 = x * x + y * y;
  const double r4 = r2 * r2;
  const double r6 = r4 * r2;
  const double den = 1.0 + c.k4 * r2 + c.k5 * r4 + c.k6 * r6;
  if (den <= kDegenerate) throw EvaluationError("rational distortion denominator is not positive");
  const double radial = (1.0 + c.k1 * r2 + c.k2 * r4 + c.k3 * r6) / den;
  return {x * radial + 2.0 * c.p1 * x * y + c.p2 * (r2 + 2.0 * x * x),
          y * radial + c.p1 * (r2 + 2.0 * y * y) + 2.0 * c.p2 * x * y};
}

Point2 project(Point2 p, const CameraIntrinsics& cam) {
  return {cam.fx * p.x + cam.cx, cam.fy * p.y + cam.cy};
}

Point2 map_point(int u, int v, const LensConfig& cfg) {
  const Point2 n = normalize_pixel(u, v, cfg.new_intrinsics);
  if (!cfg.rotation.is_identity()) {
    return project(distort(apply_inverse_rotation(n, cfg.rotation), cfg.coeffs), cfg.intrinsics);
  }
  const Point2 d = distort(n, cfg.coeffs);
  const auto& in = cfg.intrinsics;
  const auto& out = cfg.new_intrinsics;
  const double ax = in.fx / out.fx;
  const double ay = in.fy / out.fy;
  return {ax * u + (in.cx - ax * out.cx) + in.fx * (d.x - n.x),
          ay * v + (in.cy - ay * out.cy) + in.fy * (d.y - n.y)};
}

RemapField build_reference_map(const LensConfig& cfg, unsigned threads) {
  cfg.validate();
  RemapField field(cfg.image_width, cfg.image_height);
  detail::parallel_rows(cfg.image_height, threads, [&](int v) {
    for (int u = 0; u < cfg.image_width; ++u) {
      try {
        field.set(u, v, map_point(u, v, cfg));
      } catch (const EvaluationError& e) {
        throw PixelError(u, v, e.what());
      }
    }
  });
  return field;
}

DistortionCoefficients scale_distortion(const DistortionCoefficients& c, double factor) {
  if (!(factor >= 0.0)) throw ValidationError("distortion factor must be non-negative");
  DistortionCoefficients s = c;
  s.k1 *= factor;
  s.k2 *= factor;
  s.k3 *= factor;
  s.p1 *= factor;
  s.p2 *= factor;
  return s;
}

DisplacementBounds displacement_bounds(const RemapField& map) {
  DisplacementBounds b{map.rel_x(0, 0), map.rel_x(0, 0), map.rel_y(0, 0), map.rel_y(0, 0)};
  for (int v = 0; v < map.height(); ++v) {
    for (int u = 0; u < map.width(); ++u) {
      const double dx = map.rel_x(u, v);
      const double dy = map.rel_y(u, v);
      b.min_dx = std::min(b.min_dx, dx);
      b.max_dx = std::max(b.max_dx, dx);
      b.min_dy = std::min(b.min_dy, dy);
      b.max_dy = std::max(b.max_dy, dy);
    }
  }
  return b;
}

LensConfig base_calibration() {
  LensConfig cfg;
  cfg.image_width = 640;
  cfg.image_height = 480;
  cfg.intrinsics = {500.0, 500.0, 319.5, 239.5};
  cfg.new_intrinsics = cfg.intrinsics;
  cfg.coeffs.k1 = -0.05;
  cfg.coeffs.k2 = 0.01;
  cfg.coeffs.k3 = 0.0;
  cfg.coeffs.p1 = 0.001;
  cfg.coeffs.p2 = -0.001;
  return cfg;
}

LensConfig identity_config(int width, int height, const CameraIntrinsics& cam) {
  LensConfig cfg;
  cfg.image_width = width;
  cfg.image_height = height;
  cfg.intrinsics = cam;
  cfg.new_intrinsics = cam;
  return cfg;
}

}  // namespace lensremap
