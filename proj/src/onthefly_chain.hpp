#pragma once

// The per-pixel evaluation graph of the on-the-fly map, written once and
// instantiated over different arithmetic backends: fixed-point evaluation
// (onthefly.cpp) and operator counting (resources.cpp).
//
// A backend provides
//   using Value = ...;
//   Value constant(double);          // pre-computed, not counted
//   Value pixel(int);                // coordinate counter output, not counted
//   Value add(Value, Value), sub(Value, Value), mul(Value, Value), div(Value, Value);

#include <array>

#include "lensremap/model.hpp"

namespace lensremap::detail {

struct ChainShape {
  bool rotation = false;  // non-identity rotation: 3x3 product plus homogeneous divide
  bool rational = false;  // k4..k6 present: one extra Horner chain and a divide

  static ChainShape of(const LensConfig& cfg) {
    return {!cfg.rotation.is_identity(), cfg.coeffs.has_rational_terms()};
  }
};

template <class Value>
struct ChainConstants {
  ChainShape shape;
  Value one;
  // output camera
  Value inv_fx_out, inv_fy_out, cx_out, cy_out;
  // input camera
  Value fx, fy, cx, cy;
  // identity-rotation affine fold: s = a * u + b + f * delta
  Value ax, ay, bx, by;
  Value k1, k2, k3, k4, k5, k6;
  Value p1, p2, two_p1, two_p2;
  std::array<Value, 9> rt{};  // R^T, row-major
};

template <class Backend>
ChainConstants<typename Backend::Value> make_chain_constants(Backend& be, const LensConfig& cfg) {
  const auto& in = cfg.intrinsics;
  const auto& out = cfg.new_intrinsics;
  const auto& c = cfg.coeffs;
  ChainConstants<typename Backend::Value> k;
  k.shape = ChainShape::of(cfg);
  k.one = be.constant(1.0);
  k.inv_fx_out = be.constant(1.0 / out.fx);
  k.inv_fy_out = be.constant(1.0 / out.fy);
  k.cx_out = be.constant(out.cx);
  k.cy_out = be.constant(out.cy);
  k.fx = be.constant(in.fx);
  k.fy = be.constant(in.fy);
  k.cx = be.constant(in.cx);
  k.cy = be.constant(in.cy);
  const double ax = in.fx / out.fx;
  const double ay = in.fy / out.fy;
  k.ax = be.constant(ax);
  k.ay = be.constant(ay);
  k.bx = be.constant(in.cx - ax * out.cx);
  k.by = be.constant(in.cy - ay * out.cy);
  k.k1 = be.constant(c.k1);
  k.k2 = be.constant(c.k2);
  k.k3 = be.constant(c.k3);
  k.k4 = be.constant(c.k4);
  k.k5 = be.constant(c.k5);
  k.k6 = be.constant(c.k6);
  k.p1 = be.constant(c.p1);
  k.p2 = be.constant(c.p2);
  k.two_p1 = be.constant(2.0 * c.p1);
  k.two_p2 = be.constant(2.0 * c.p2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) k.rt[static_cast<std::size_t>(i * 3 + j)] = be.constant(cfg.rotation(j, i));
  }
  return k;
}

template <class Value>
struct ChainDelta {
  Value dx, dy;
};

/// Distortion displacement (x'' - x', y'' - y') in normalized coordinates.
template <class Backend, class Value = typename Backend::Value>
ChainDelta<Value> chain_delta(Backend& be, const ChainConstants<Value>& k, const Value& x, const Value& y) {
  const Value x2 = be.mul(x, x);
  const Value y2 = be.mul(y, y);
  const Value xy = be.mul(x, y);
  const Value r2 = be.add(x2, y2);

  // radial - 1 = r2 * (k1 + r2 * (k2 + r2 * k3))
  Value poly = be.mul(be.add(be.mul(be.add(be.mul(k.k3, r2), k.k2), r2), k.k1), r2);
  if (k.shape.rational) {
    const Value den = be.mul(be.add(be.mul(be.add(be.mul(k.k6, r2), k.k5), r2), k.k4), r2);
    // (1 + num) / (1 + den) - 1 = (num - den) / (1 + den)
    poly = be.div(be.sub(poly, den), be.add(k.one, den));
  }

  const Value tx = be.add(be.add(r2, x2), x2);  // r2 + 2 x^2
  const Value ty = be.add(be.add(r2, y2), y2);
  const Value dx = be.add(be.add(be.mul(x, poly), be.mul(k.two_p1, xy)), be.mul(k.p2, tx));
  const Value dy = be.add(be.add(be.mul(y, poly), be.mul(k.p1, ty)), be.mul(k.two_p2, xy));
  return {dx, dy};
}

template <class Value>
struct ChainResult {
  Value sx, sy;
};

template <class Backend, class Value = typename Backend::Value>
ChainResult<Value> evaluate_chain(Backend& be, const ChainConstants<Value>& k, int u, int v) {
  const Value pu = be.pixel(u);
  const Value pv = be.pixel(v);
  const Value x = be.mul(be.sub(pu, k.cx_out), k.inv_fx_out);
  const Value y = be.mul(be.sub(pv, k.cy_out), k.inv_fy_out);

  if (!k.shape.rotation) {
    const auto d = chain_delta(be, k, x, y);
    return {be.add(be.add(be.mul(k.ax, pu), k.bx), be.mul(k.fx, d.dx)),
            be.add(be.add(be.mul(k.ay, pv), k.by), be.mul(k.fy, d.dy))};
  }

  const auto& r = k.rt;
  const Value X = be.add(be.add(be.mul(r[0], x), be.mul(r[1], y)), be.mul(r[2], k.one));
  const Value Y = be.add(be.add(be.mul(r[3], x), be.mul(r[4], y)), be.mul(r[5], k.one));
  const Value W = be.add(be.add(be.mul(r[6], x), be.mul(r[7], y)), be.mul(r[8], k.one));
  const Value xr = be.div(X, W);
  const Value yr = be.div(Y, W);
  const auto d = chain_delta(be, k, xr, yr);
  return {be.add(be.mul(k.fx, be.add(xr, d.dx)), k.cx), be.add(be.mul(k.fy, be.add(yr, d.dy)), k.cy)};
}

}  // namespace lensremap::detail
