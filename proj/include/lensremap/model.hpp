#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lensremap/error.hpp"

namespace lensremap {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Pinhole intrinsics (pixels).
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  /// Throws ValidationError unless all fields are finite and fx, fy > 0.
  void validate() const;

  bool operator==(const CameraIntrinsics&) const = default;
};

/// Radial (k1..k3), tangential (p1, p2) and rational-denominator (k4..k6)
/// coefficients. Default constructed coefficients describe a perfect lens.
struct DistortionCoefficients {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double k4 = 0.0;
  double k5 = 0.0;
  double k6 = 0.0;

  void validate() const;
  bool has_rational_terms() const { return k4 != 0.0 || k5 != 0.0 || k6 != 0.0; }

  bool operator==(const DistortionCoefficients&) const = default;
};

/// Proper 3x3 rotation, row-major. Construction checks orthonormality and
/// det = +1 to within 1e-9.
class RotationMatrix {
 public:
  static constexpr double kTolerance = 1e-9;

  RotationMatrix();  // identity

  static RotationMatrix identity() { return RotationMatrix(); }
  /// Throws ValidationError if the matrix is not a rotation.
  static RotationMatrix from_row_major(const std::array<double, 9>& r);
  /// Rodrigues formula; axis need not be normalized but must be non-zero.
  static RotationMatrix from_axis_angle(double ax, double ay, double az, double angle);

  double operator()(int row, int col) const { return r_[static_cast<std::size_t>(row * 3 + col)]; }
  const std::array<double, 9>& row_major() const { return r_; }
  /// True only for the exact identity matrix.
  bool is_identity() const;

  bool operator==(const RotationMatrix&) const = default;

 private:
  explicit RotationMatrix(const std::array<double, 9>& r) : r_(r) {}
  std::array<double, 9> r_;
};

/// One correction problem: input camera, output camera, lens and rotation.
struct LensConfig {
  int image_width = 0;
  int image_height = 0;
  CameraIntrinsics intrinsics;
  CameraIntrinsics new_intrinsics;
  DistortionCoefficients coeffs;
  RotationMatrix rotation;

  void validate() const;
};

/// Dense output-to-input map holding absolute source coordinates.
class RemapField {
 public:
  RemapField() = default;
  RemapField(int width, int height);

  /// The map with map_x(u, v) = u and map_y(u, v) = v.
  static RemapField identity(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return map_x_.size(); }

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(u);
  }

  double map_x(int u, int v) const { return map_x_[index(u, v)]; }
  double map_y(int u, int v) const { return map_y_[index(u, v)]; }
  Point2 at(int u, int v) const { return {map_x(u, v), map_y(u, v)}; }
  void set(int u, int v, Point2 p) {
    map_x_[index(u, v)] = p.x;
    map_y_[index(u, v)] = p.y;
  }

  /// Relative displacement map(u, v) - (u, v).
  double rel_x(int u, int v) const { return map_x(u, v) - u; }
  double rel_y(int u, int v) const { return map_y(u, v) - v; }

  const std::vector<double>& plane_x() const { return map_x_; }
  const std::vector<double>& plane_y() const { return map_y_; }
  std::vector<double>& plane_x() { return map_x_; }
  std::vector<double>& plane_y() { return map_y_; }

  /// Throws ValidationError if any stored value is not finite.
  void validate() const;

  bool operator==(const RemapField&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> map_x_;
  std::vector<double> map_y_;
};

struct DisplacementBounds {
  double min_dx = 0.0;
  double max_dx = 0.0;
  double min_dy = 0.0;
  double max_dy = 0.0;
};

// Steps of the output-to-input mapping chain.

Point2 normalize_pixel(double u, double v, const CameraIntrinsics& cam);
/// [X, Y, W] = R^T [x, y, 1]; returns (X / W, Y / W). Throws EvaluationError if |W| < 1e-12.
Point2 apply_inverse_rotation(Point2 p, const RotationMatrix& rotation);
/// Throws EvaluationError if the rational denominator is <= 1e-12.
Point2 distort(Point2 p, const DistortionCoefficients& c);
Point2 project(Point2 p, const CameraIntrinsics& cam);

/// Source coordinate for output pixel (u, v), evaluated in double precision.
///
/// With an identity rotation the undistorted projection is folded into an
/// affine term, s = (f / f') u + (c - c' f / f') + f * delta, so that an
/// undistorted configuration reproduces (u, v) bit-exactly. Otherwise the
/// chain normalize -> inverse rotation -> distort -> project is evaluated
/// literally.
Point2 map_point(int u, int v, const LensConfig& cfg);

/// map_point for every output pixel. threads = 0 picks the hardware default.
RemapField build_reference_map(const LensConfig& cfg, unsigned threads = 0);

/// Multiplies k1..k3, p1 and p2 by factor; k4..k6 are left unchanged.
DistortionCoefficients scale_distortion(const DistortionCoefficients& c, double factor);

DisplacementBounds displacement_bounds(const RemapField& map);

/// The 640x480 calibration used by the tests and the default sweep:
/// fx = fy = 500, cx = 319.5, cy = 239.5, k1 = -0.05, k2 = 0.01, p1 = 0.001,
/// p2 = -0.001, identity rotation, output camera equal to the input camera.
LensConfig base_calibration();

/// Same camera and image size with every coefficient zeroed.
LensConfig identity_config(int width, int height, const CameraIntrinsics& cam);

}  // namespace lensremap
