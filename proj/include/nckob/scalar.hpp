#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "nckob/errors.hpp"
#include "nckob/root.hpp"

namespace nckob {

// Discriminant values of 1 + 4m(m-1)v inside (-kDiscriminantClamp, 0) count
// as zero, so v = vmax is accepted despite rounding.
inline constexpr double kDiscriminantClamp = 1e-14;

// x^e for x > 0 through exp(e ln x); 0 maps to 0 for e > 0.
inline double pow_pos(double x, double e) {
  if (x == 0.0 && e > 0.0) return 0.0;
  return std::exp(e * std::log(x));
}

// The exponent m of E(1,m) = {|z1|^2 + |z2|^(2m) < 1} with 0 < m < 1/2.
class EllipsoidParam {
 public:
  explicit EllipsoidParam(double m) : m_(m) {
    if (!(m > 0.0 && m < 0.5)) {
      throw InvalidInput("exponent m must lie in (0, 1/2), got " + std::to_string(m));
    }
    vmax_ = 1.0 / (4.0 * m * (1.0 - m));
    tmax_ = m / (1.0 - m);
  }

  double m() const { return m_; }
  // Largest v for which t(v) is real.
  double vmax() const { return vmax_; }
  // t(vmax) = m/(1-m).
  double tmax() const { return tmax_; }
  // t(1) = (m/(1-m))^2.
  double t_at_one() const { return tmax_ * tmax_; }

  // |z|^(2m) for a nonnegative modulus.
  double pow2m(double r) const { return pow_pos(r, 2.0 * m_); }

 private:
  double m_;
  double vmax_;
  double tmax_;
};

// Minkowski functional of E(1,m): the s > 0 with (x/s)^2 + (y/s)^(2m) = 1.
inline double gauge(const EllipsoidParam& p, double xmag, double ymag,
                    const root::Options& opt = {}) {
  if (!(xmag >= 0.0 && ymag >= 0.0)) {
    throw InvalidInput("gauge: moduli must be nonnegative");
  }
  if (xmag == 0.0 && ymag == 0.0) throw InvalidInput("gauge: zero vector");
  if (ymag == 0.0) return xmag;
  if (xmag == 0.0) return ymag;

  const double m = p.m();
  const double y2m = p.pow2m(ymag);
  auto f = [&](double s) { return (xmag / s) * (xmag / s) + y2m * pow_pos(s, -2.0 * m) - 1.0; };
  auto df = [&](double s) {
    return -2.0 * xmag * xmag / (s * s * s) - 2.0 * m * y2m * pow_pos(s, -2.0 * m - 1.0);
  };
  // Each term alone equals 1 at s = xmag resp. s = ymag; each is at most 1/2
  // beyond sqrt(2) xmag resp. 2^(1/(2m)) ymag. The set is not convex, so
  // xmag + ymag is not an upper bound in general.
  const double lo = std::max(xmag, ymag);
  const double hi = std::max(std::sqrt(2.0) * xmag, std::exp2(1.0 / (2.0 * m)) * ymag);
  root::Options o = opt;
  o.bracket_width = opt.bracket_width * lo;
  return root::bisect_polish(f, df, lo, hi, o).x;
}

// t(v) = 2m^2 v / (1 + 2m(m-1)v + sqrt(1 + 4m(m-1)v)) on [0, vmax].
inline double t_of_v(const EllipsoidParam& p, double v) {
  const double m = p.m();
  if (!(v >= 0.0)) throw DomainError("t_of_v: v must be >= 0, got " + std::to_string(v));
  double disc = 1.0 + 4.0 * m * (m - 1.0) * v;
  if (disc < 0.0) {
    if (disc > -kDiscriminantClamp) {
      disc = 0.0;
    } else {
      throw DomainError("t_of_v: v = " + std::to_string(v) + " exceeds vmax = " +
                        std::to_string(p.vmax()));
    }
  }
  return 2.0 * m * m * v / (1.0 + 2.0 * m * (m - 1.0) * v + std::sqrt(disc));
}

// Inverse of t_of_v: v = t / (t(1-m) + m)^2 on [0, tmax].
inline double v_of_t(const EllipsoidParam& p, double t) {
  const double m = p.m();
  if (!(t >= 0.0 && t <= p.tmax() * (1.0 + 1e-14))) {
    throw DomainError("v_of_t: t = " + std::to_string(t) + " outside [0, " +
                      std::to_string(p.tmax()) + "]");
  }
  const double d = t * (1.0 - m) + m;
  return t / (d * d);
}

namespace detail {

inline void check_base(double b, const char* who) {
  if (!(b > 0.0 && b < 1.0)) {
    throw DomainError(std::string(who) + ": b must lie in (0,1), got " + std::to_string(b));
  }
}

}  // namespace detail

// Residual of x^(2m) - t x^(2m-2) - (1-t) b^(2m).
inline double blaschke_zero_residual(const EllipsoidParam& p, double b, double t, double x) {
  const double m = p.m();
  return pow_pos(x, 2 * m) - t * pow_pos(x, 2 * m - 2) - (1 - t) * p.pow2m(b);
}

// The unique x in [b, 1) with x^(2m) - t x^(2m-2) = (1-t) b^(2m). It is the
// zero of the Blaschke factor carried by the extremal disc for v = v(t).
inline double blaschke_zero(const EllipsoidParam& p, double b, double t,
                            const root::Options& opt = {}) {
  detail::check_base(b, "blaschke_zero");
  if (!(t >= 0.0 && t <= p.tmax() * (1.0 + 1e-14))) {
    throw DomainError("blaschke_zero: t = " + std::to_string(t) + " outside [0, tmax]");
  }
  if (t == 0.0) return b;
  const double m = p.m();
  auto f = [&](double x) { return blaschke_zero_residual(p, b, t, x); };
  auto df = [&](double x) {
    return 2 * m * pow_pos(x, 2 * m - 1) - t * (2 * m - 2) * pow_pos(x, 2 * m - 3);
  };
  // f(b) = t (b^(2m) - b^(2m-2)) <= 0 and f(1) = (1-t)(1 - b^(2m)) > 0.
  const double x = root::bisect_polish(f, df, b, 1.0, opt).x;
  const double tol = 1e-12 * (1.0 + p.pow2m(b));
  if (!(std::abs(f(x)) <= tol)) {
    throw InternalError("blaschke_zero: residual " + std::to_string(f(x)) + " above tolerance");
  }
  return x;
}

// Residual of (m-1)^2 v x^(2m) - (m^2 v / t) x^(2m-2) + ((1-v)/(1-t)) b^(2m)
// with t = t(v).
inline double competing_zero_residual(const EllipsoidParam& p, double b, double v, double x) {
  const double m = p.m();
  const double t = t_of_v(p, v);
  return (m - 1) * (m - 1) * v * pow_pos(x, 2 * m) - (m * m * v / t) * pow_pos(x, 2 * m - 2) +
         ((1 - v) / (1 - t)) * p.pow2m(b);
}

// The root x2 in (0, 1] of the second factor of the disc-existence equation,
// defined for 1 <= v <= vmax. It is the Blaschke zero of the competing,
// non-extremal disc; x2 = 1 at v = 1 and x2 meets blaschke_zero at v = vmax.
inline double competing_zero(const EllipsoidParam& p, double b, double v,
                             const root::Options& opt = {}) {
  detail::check_base(b, "competing_zero");
  if (!(v >= 1.0)) {
    throw DomainError("competing_zero: no root in (0,1) for v < 1, got v = " + std::to_string(v));
  }
  const double t = t_of_v(p, v);
  const double m = p.m();
  const double b2m = p.pow2m(b);
  // After eliminating v the equation reads
  // (1-m)^2 t (x^(2m) - b^(2m)) = m^2 (x^(2m-2) - b^(2m)), increasing in x,
  // negative at x = b and equal to (1-b^(2m))((1-m)^2 t - m^2) >= 0 at x = 1.
  const double c = (1 - m) * (1 - m) * t;
  auto h = [&](double x) {
    return c * (pow_pos(x, 2 * m) - b2m) - m * m * (pow_pos(x, 2 * m - 2) - b2m);
  };
  auto dh = [&](double x) {
    return c * 2 * m * pow_pos(x, 2 * m - 1) - m * m * (2 * m - 2) * pow_pos(x, 2 * m - 3);
  };
  double x = 1.0;
  if (h(1.0) > 0.0) x = root::bisect_polish(h, dh, b, 1.0, opt).x;
  const double tol = 1e-10 * std::max(1.0, m * m * v / t);
  const double res = competing_zero_residual(p, b, v, x);
  if (!(std::abs(res) <= tol)) {
    throw InternalError("competing_zero: residual " + std::to_string(res) + " above tolerance");
  }
  return x;
}

}  // namespace nckob
