#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "nckob/branches.hpp"
#include "nckob/errors.hpp"
#include "nckob/scalar.hpp"

namespace nckob {

using cplx = std::complex<double>;

struct Point {
  cplx z1;
  cplx z2;
};

struct TangentVector {
  cplx X;
  cplx Y;
};

// |z1|^2 + |z2|^(2m); the ellipsoid is where this is < 1.
inline double defining_value(const EllipsoidParam& p, const Point& z) {
  return std::norm(z.z1) + p.pow2m(std::abs(z.z2));
}

inline void require_interior(const EllipsoidParam& p, const Point& z) {
  const double h = defining_value(p, z);
  if (!(h < 1.0)) {
    std::string msg = "base point is not interior: gauge ";
    msg += std::isfinite(h) ? std::to_string(gauge(p, std::abs(z.z1), std::abs(z.z2))) : "inf";
    msg += " >= 1 (|z1|^2 + |z2|^(2m) = " + std::to_string(h) + ")";
    throw DomainError(msg);
  }
}

// z -> ((z1 - a)/(1 - conj(a) z1),
//       e^{i theta} (1-|a|^2)^{1/(2m)} z2 / (1 - conj(a) z1)^{1/m}).
// The power uses the principal logarithm; Re(1 - conj(a) z1) > 0 on the
// closure of the ellipsoid.
struct Automorphism {
  cplx a{0.0, 0.0};
  double theta = 0.0;

  Point apply(const EllipsoidParam& p, const Point& z) const {
    const double m = p.m();
    const cplx d = 1.0 - std::conj(a) * z.z1;
    const double s = 1.0 - std::norm(a);
    return {(z.z1 - a) / d,
            std::polar(pow_pos(s, 1.0 / (2 * m)), theta) * z.z2 * std::exp(-std::log(d) / m)};
  }

  // Derivative at z applied to w.
  TangentVector push(const EllipsoidParam& p, const Point& z, const TangentVector& w) const {
    const double m = p.m();
    const cplx d = 1.0 - std::conj(a) * z.z1;
    const double s = 1.0 - std::norm(a);
    const cplx c = std::polar(pow_pos(s, 1.0 / (2 * m)), theta);
    const cplx d_pow = std::exp(-std::log(d) / m);  // d^(-1/m)
    const cplx j11 = s / (d * d);
    const cplx j21 = c * z.z2 * (std::conj(a) / m) * d_pow / d;
    const cplx j22 = c * d_pow;
    return {j11 * w.X, j21 * w.X + j22 * w.Y};
  }
};

// Base point (0, b) and tangent moduli after moving p to the z1 = 0 slice
// and rotating both coordinates to the nonnegative reals.
struct NormalizedQuery {
  double b = 0.0;
  double xmag = 0.0;
  double ymag = 0.0;
  std::optional<double> v;  // (b xmag / (m ymag))^2, unset when ymag = 0
};

inline NormalizedQuery normalize(const EllipsoidParam& p, const Point& z, const TangentVector& w) {
  require_interior(p, z);
  const double m = p.m();
  const double s = 1.0 - std::norm(z.z1);
  NormalizedQuery q;
  q.b = std::abs(z.z2) * pow_pos(s, -1.0 / (2 * m));
  // Derivative of the automorphism with a = z1 at z.
  const cplx X = w.X / s;
  const cplx Y = pow_pos(s, -1.0 / (2 * m)) * (w.Y + std::conj(z.z1) * z.z2 * w.X / (m * s));
  q.xmag = std::abs(X);
  q.ymag = std::abs(Y);
  if (q.ymag > 0.0) {
    const double r = q.b * q.xmag / (m * q.ymag);
    q.v = r * r;
  }
  return q;
}

enum class Branch { zero_vector, origin_gauge, x_zero, y_zero, kappa1, kappa2, tie };

inline std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::zero_vector: return "zero-vector";
    case Branch::origin_gauge: return "origin-gauge";
    case Branch::x_zero: return "X-zero";
    case Branch::y_zero: return "Y-zero";
    case Branch::kappa1: return "kappa1";
    case Branch::kappa2: return "kappa2";
    case Branch::tie: return "tie";
  }
  return "?";
}

struct MetricValue {
  double kappa = 0.0;
  Branch branch = Branch::zero_vector;
  std::optional<double> t;
  std::optional<double> x;
  std::optional<double> v0;
};

struct MetricOptions {
  root::Options root{};
  double tie_band = 1e-12;  // relative |kappa1 - kappa2| reported as a tie
};

// Metric at (0, b) for the tangent (X, 1) written through v. b must be in (0,1).
inline MetricValue kappa_of_v(const EllipsoidParam& p, double b, double v,
                              const MetricOptions& opt = {}) {
  detail::check_base(b, "kappa_of_v");
  if (!(v >= 0.0)) throw DomainError("kappa_of_v: v must be >= 0");
  MetricValue r;
  if (v >= p.vmax()) {
    r.kappa = kappa2(p, b, v);
    r.branch = Branch::kappa2;
    if (v == p.vmax()) r.t = p.tmax();
    return r;
  }
  const auto k1 = kappa1_detail(p, b, v, opt.root);
  r.t = k1.t;
  r.x = k1.x;
  if (v <= 1.0) {
    r.kappa = k1.kappa;
    r.branch = Branch::kappa1;
    return r;
  }
  const double k2 = kappa2(p, b, v);
  if (std::abs(k1.kappa - k2) <= opt.tie_band * k2) {
    r.kappa = std::min(k1.kappa, k2);
    r.branch = Branch::tie;
  } else if (k1.kappa < k2) {
    r.kappa = k1.kappa;
    r.branch = Branch::kappa1;
  } else {
    r.kappa = k2;
    r.branch = Branch::kappa2;
  }
  return r;
}

inline MetricValue kappa(const EllipsoidParam& p, const NormalizedQuery& q,
                         const MetricOptions& opt = {}) {
  MetricValue r;
  if (q.xmag == 0.0 && q.ymag == 0.0) return r;
  if (q.b == 0.0) {
    r.kappa = gauge(p, q.xmag, q.ymag, opt.root);
    r.branch = Branch::origin_gauge;
    return r;
  }
  if (q.xmag == 0.0) {
    r.kappa = q.ymag / (1.0 - q.b * q.b);
    r.branch = Branch::x_zero;
    return r;
  }
  const double b2m = p.pow2m(q.b);
  if (q.ymag == 0.0) {
    r.kappa = q.xmag / std::sqrt(1.0 - b2m);
    r.branch = Branch::y_zero;
    return r;
  }
  const double v = q.v.value_or(std::numeric_limits<double>::infinity());
  if (!(v < p.vmax())) {
    // Scaled form of kappa2 that stays finite when ymag is tiny.
    const double bx = q.b * q.xmag / p.m();
    r.kappa = (p.m() / q.b) * std::sqrt((1 - b2m) * bx * bx + b2m * q.ymag * q.ymag) / (1 - b2m);
    r.branch = Branch::kappa2;
    if (v == p.vmax()) r.t = p.tmax();
    return r;
  }
  r = kappa_of_v(p, q.b, v, opt);
  r.kappa *= q.ymag;
  return r;
}

inline MetricValue kappa(const EllipsoidParam& p, const Point& z, const TangentVector& w,
                         const MetricOptions& opt = {}) {
  return kappa(p, normalize(p, z, w), opt);
}

}  // namespace nckob
