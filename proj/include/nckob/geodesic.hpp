#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "nckob/branches.hpp"
#include "nckob/errors.hpp"
#include "nckob/metric.hpp"
#include "nckob/scalar.hpp"

namespace nckob {

// power:    phi(l) = (c1 a1 l / (1 - alpha0 l),
//                     c2 (a2 (1 - alpha2 l) / (1 - alpha0 l))^(1/m))
// blaschke: same, with the second component multiplied by
//           (l - alpha2) / (1 - alpha2 l).
enum class DiscForm { power, blaschke };

inline std::string_view to_string(DiscForm f) {
  return f == DiscForm::power ? "power" : "blaschke";
}

// Real parameters with unimodular prefactors. alpha0 = a2^2 alpha2 and
// 1 + alpha0^2 = a1^2 + a2^2 (1 + alpha2^2) put the boundary trace on the
// boundary of the ellipsoid. For the blaschke form the factor's zero is
// alpha2 = -x with x in (0,1).
struct GeodesicDisc {
  DiscForm form = DiscForm::power;
  double m = 0.25;
  double b = 0.0;
  double v = 0.0;  // +inf for Y = 0 data
  double a1 = 0.0;
  double a2 = 0.0;
  double alpha0 = 0.0;
  double alpha2 = 0.0;
  cplx c1{1.0, 0.0};
  cplx c2{1.0, 0.0};
  double tau = 0.0;

  // Modulus of the Blaschke zero (blaschke form only).
  double zero() const { return -alpha2; }
};

struct DiscValue {
  cplx z1;
  cplx z2;
};

namespace detail {

// a / d without the inf/nan recovery of the library division; d never
// vanishes on the closed unit disc here.
inline cplx quot(cplx a, cplx d) { return a * std::conj(d) / std::norm(d); }

}  // namespace detail

// Evaluation on the closed unit disc. The power base a2 (1 - alpha2 l)/(1 - alpha0 l)
// has nonnegative real part there, so the principal branch is used.
inline DiscValue eval_disc(const GeodesicDisc& d, cplx lambda) {
  const cplx den = 1.0 - d.alpha0 * lambda;
  const cplx base = detail::quot(d.a2 * (1.0 - d.alpha2 * lambda), den);
  cplx second{0.0, 0.0};
  if (d.form == DiscForm::power && d.alpha2 == 0.0 && d.alpha0 == 0.0) {
    second = d.b;  // flat disc: a2^(1/m) = b
  } else if (base != 0.0) {
    second = std::polar(std::exp(0.5 * std::log(std::norm(base)) / d.m), std::arg(base) / d.m);
  }
  if (d.form == DiscForm::blaschke) second *= detail::quot(lambda - d.alpha2, 1.0 - d.alpha2 * lambda);
  return {d.c1 * d.a1 * detail::quot(lambda, den), d.c2 * second};
}

// |phi1|^2 + |phi2|^(2m) at lambda, computed without the fractional power:
// |q^(1/m)|^(2m) = |q|^2.
inline double disc_defining_value(const GeodesicDisc& d, cplx lambda) {
  const double den = std::norm(1.0 - d.alpha0 * lambda);
  const double first = d.a1 * d.a1 * std::norm(lambda) / den;
  double second = d.a2 * d.a2 * std::norm(1.0 - d.alpha2 * lambda) / den;
  if (d.form == DiscForm::blaschke) {
    second *= pow_pos(std::norm(lambda - d.alpha2) / std::norm(1.0 - d.alpha2 * lambda), d.m);
  }
  return first + second;
}

// phi'(0), from the closed form.
inline DiscValue disc_derivative_at_zero(const GeodesicDisc& d) {
  const double g0 = pow_pos(d.a2, 1.0 / d.m);
  const double dg0 = g0 * (d.alpha0 - d.alpha2) / d.m;
  double second = dg0;
  if (d.form == DiscForm::blaschke) second = (1.0 - d.alpha2 * d.alpha2) * g0 - d.alpha2 * dg0;
  return {d.c1 * d.a1, d.c2 * second};
}

// Flat disc l -> (sqrt(1 - b^(2m)) l, b) through (0, b) for tangents (X, 0).
inline GeodesicDisc flat_disc(const EllipsoidParam& p, double b, double xmag) {
  if (!(b >= 0.0 && b < 1.0)) throw DomainError("flat_disc: b must lie in [0,1)");
  if (!(xmag > 0.0)) throw InvalidInput("flat_disc: |X| must be positive");
  GeodesicDisc d;
  d.form = DiscForm::power;
  d.m = p.m();
  d.b = b;
  d.v = std::numeric_limits<double>::infinity();
  d.a2 = pow_pos(b, p.m());
  d.a1 = std::sqrt(1.0 - p.pow2m(b));
  d.tau = xmag / d.a1;
  return d;
}

// Blaschke-free disc through (0, b) with tau phi'(0) = (m sqrt(v)/b, 1).
// It exists iff v >= 1. Eliminating the normalization leaves
// alpha2^2 = 1 / ((1 - b^(2m)) v + b^(2m)), so the system is solved in closed form.
inline GeodesicDisc construct_power(const EllipsoidParam& p, double b, double v) {
  detail::check_base(b, "construct_power");
  if (!(v >= 1.0)) {
    throw DomainError("a power-form disc exists only for v >= 1, got v = " + std::to_string(v));
  }
  const double m = p.m();
  const double B = p.pow2m(b);
  GeodesicDisc d;
  d.form = DiscForm::power;
  d.m = m;
  d.b = b;
  d.v = v;
  d.a2 = pow_pos(b, m);
  // Negative alpha2 makes phi2'(0) positive with c2 = 1.
  d.alpha2 = -1.0 / std::sqrt((1 - B) * v + B);
  d.alpha0 = B * d.alpha2;
  d.a1 = std::sqrt((1 - B) * (1 - B * d.alpha2 * d.alpha2));
  d.tau = m / (b * (1 - B) * std::abs(d.alpha2));
  if (std::isfinite(v)) {
    const double k2 = kappa2(p, b, v);
    if (!(std::abs(d.tau - k2) <= 1e-8 * k2)) {
      throw InternalError("construct_power: tau " + std::to_string(d.tau) +
                          " disagrees with kappa2 " + std::to_string(k2));
    }
  }
  return d;
}

// Residual of v ((m-1) x^(2m) - m x^(2m-2) + b^(2m))^2
//             - (x^(4m-2) - b^(2m) x^(2m) - b^(2m) x^(2m-2) + b^(4m)).
inline double blaschke_existence_residual(const EllipsoidParam& p, double b, double v, double x) {
  const double m = p.m();
  const double B = p.pow2m(b);
  const double l = (m - 1) * pow_pos(x, 2 * m) - m * pow_pos(x, 2 * m - 2) + B;
  return v * l * l -
         (pow_pos(x, 4 * m - 2) - B * pow_pos(x, 2 * m) - B * pow_pos(x, 2 * m - 2) + B * B);
}

// Blaschke disc through (0, b) whose factor vanishes at -x. x must solve the
// existence equation for v (either blaschke_zero or competing_zero).
inline GeodesicDisc construct_blaschke_at(const EllipsoidParam& p, double b, double v, double x) {
  detail::check_base(b, "construct_blaschke_at");
  if (!(x >= b && x < 1.0)) {
    throw DomainError("construct_blaschke_at: zero x = " + std::to_string(x) + " not in [b,1)");
  }
  const double m = p.m();
  GeodesicDisc d;
  d.form = DiscForm::blaschke;
  d.m = m;
  d.b = b;
  d.v = v;
  d.a2 = pow_pos(b / x, m);
  d.alpha2 = -x;
  d.alpha0 = d.a2 * d.a2 * d.alpha2;
  const double a1sq = 1.0 + d.alpha0 * d.alpha0 - d.a2 * d.a2 * (1.0 + x * x);
  if (v == 0.0 && a1sq <= 1e-15) {
    d.a1 = 0.0;  // the disc (0, (l + b)/(1 + b l)) for tangents (0, Y)
  } else if (!(a1sq > 0.0)) {
    throw InfeasibleParameters("construct_blaschke_at: a1^2 = " + std::to_string(a1sq) +
                               " is not positive");
  } else {
    d.a1 = std::sqrt(a1sq);
  }
  d.tau = 1.0 / disc_derivative_at_zero(d).z2.real();
  return d;
}

// Extremal Blaschke disc for 0 <= v <= vmax; its tau is kappa1(v).
inline GeodesicDisc construct_blaschke(const EllipsoidParam& p, double b, double v,
                                       const root::Options& opt = {}) {
  detail::check_base(b, "construct_blaschke");
  if (!(v >= 0.0)) throw DomainError("construct_blaschke: v must be >= 0");
  if (v > p.vmax() && 1.0 + 4.0 * p.m() * (p.m() - 1.0) * v <= -kDiscriminantClamp) {
    throw DomainError("a blaschke-form disc exists only for v <= vmax = " +
                      std::to_string(p.vmax()) + ", got v = " + std::to_string(v));
  }
  const double x = blaschke_zero(p, b, t_of_v(p, v), opt);
  GeodesicDisc d = construct_blaschke_at(p, b, v, x);
  const double k1 = kappa1(p, b, v, opt);
  if (!(std::abs(d.tau - k1) <= 1e-8 * k1)) {
    throw InternalError("construct_blaschke: tau " + std::to_string(d.tau) +
                        " disagrees with kappa1 " + std::to_string(k1));
  }
  const double res = blaschke_existence_residual(p, b, v, x);
  if (!(std::abs(res) <= 1e-10)) {
    throw InternalError("construct_blaschke: existence residual " + std::to_string(res));
  }
  return d;
}

// Blaschke disc at the competing zero (1 < v <= vmax). It satisfies the same
// normalization as the extremal one but never wins; its tau is tau3(v).
inline GeodesicDisc construct_competing(const EllipsoidParam& p, double b, double v,
                                        const root::Options& opt = {}) {
  const double x = competing_zero(p, b, v, opt);
  if (!(x < 1.0)) {
    throw DomainError("construct_competing: competing zero is 1 at v = 1; use construct_power");
  }
  return construct_blaschke_at(p, b, v, x);
}

struct BoundaryReport {
  int samples = 0;
  double max_defect = 0.0;    // max over |l| = 1 of | |phi1|^2 + |phi2|^(2m) - 1 |
  double interior_max = 0.0;  // max of |phi1|^2 + |phi2|^(2m) on a polar grid, r <= 1 - 1e-6
};

inline BoundaryReport boundary_report(const GeodesicDisc& d, int n_samples, int n_radii = 32) {
  if (n_samples < 16) throw InvalidInput("boundary_report: need at least 16 samples");
  if (n_radii < 1) throw InvalidInput("boundary_report: need at least one radius");
  BoundaryReport r;
  r.samples = n_samples;
  const double step = 2.0 * std::numbers::pi / n_samples;
  for (int k = 0; k < n_samples; ++k) {
    const DiscValue z = eval_disc(d, std::polar(1.0, k * step));
    const double h = std::norm(z.z1) + pow_pos(std::abs(z.z2), 2 * d.m);
    r.max_defect = std::max(r.max_defect, std::abs(h - 1.0));
  }
  r.interior_max = -std::numeric_limits<double>::infinity();
  const double rmax = 1.0 - 1e-6;
  for (int j = 0; j <= n_radii; ++j) {
    const double rad = rmax * j / n_radii;
    for (int k = 0; k < n_samples; ++k) {
      const DiscValue z = eval_disc(d, std::polar(rad, k * step));
      r.interior_max = std::max(r.interior_max, std::norm(z.z1) + pow_pos(std::abs(z.z2), 2 * d.m));
      if (j == 0) break;
    }
  }
  return r;
}

}  // namespace nckob
