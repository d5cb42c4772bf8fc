#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nckob/errors.hpp"
#include "nckob/root.hpp"
#include "nckob/scalar.hpp"

// Closed-form branch values of the metric at the base point (0, b) with the
// tangent normalized to (X, 1), as functions of v = (b|X|/m)^2, plus the
// point v0 where the two branches exchange roles.
namespace nckob {

struct Kappa1Detail {
  double kappa = 0.0;
  double t = 0.0;
  double x = 0.0;
};

// Value of the Blaschke-type extremal disc, valid for 0 <= v <= vmax.
inline Kappa1Detail kappa1_detail(const EllipsoidParam& p, double b, double v,
                                  const root::Options& opt = {}) {
  detail::check_base(b, "kappa1");
  if (!(v >= 0.0)) throw DomainError("kappa1: v must be >= 0");
  const double m = p.m();
  const double t = t_of_v(p, v);
  const double x = blaschke_zero(p, b, t, opt);
  const double denom =
      (1 - m) * pow_pos(x, 2 * m) + m * pow_pos(x, 2 * m - 2) - p.pow2m(b);
  if (!(denom > 0.0)) {
    throw InternalError("kappa1: non-positive denominator " + std::to_string(denom));
  }
  return {(m / b) * pow_pos(x, 2 * m - 1) / denom, t, x};
}

inline double kappa1(const EllipsoidParam& p, double b, double v, const root::Options& opt = {}) {
  return kappa1_detail(p, b, v, opt).kappa;
}

// Value of the Blaschke-free disc; the closed form is defined for every
// v >= 0 but is the metric only from v0 on.
inline double kappa2(const EllipsoidParam& p, double b, double v) {
  detail::check_base(b, "kappa2");
  if (!(v >= 0.0)) throw DomainError("kappa2: v must be >= 0");
  const double b2m = p.pow2m(b);
  return (p.m() / b) * std::sqrt((1 - b2m) * v + b2m) / (1 - b2m);
}

// d kappa2 / dv.
inline double kappa2_slope(const EllipsoidParam& p, double b, double v) {
  const double b2m = p.pow2m(b);
  return (p.m() / b) / (2.0 * std::sqrt((1 - b2m) * v + b2m));
}

// The three competing disc values written in t on [(m/(1-m))^2, m/(1-m)].
// tau1 is kappa1, tau2 is kappa2, tau3 belongs to the Blaschke disc whose
// zero is competing_zero.
inline double tau1_of_t(const EllipsoidParam& p, double b, double t,
                        const root::Options& opt = {}) {
  const double m = p.m();
  const double x1 = blaschke_zero(p, b, t, opt);
  return (m / b) * pow_pos(x1, 2 * m - 1) /
         ((pow_pos(x1, 2 * m - 2) - p.pow2m(b)) * ((1 - m) * t + m));
}

inline double tau2_of_t(const EllipsoidParam& p, double b, double t) {
  const double m = p.m();
  const double b2m = p.pow2m(b);
  const double d = t * (1 - m) + m;
  return (m / b) * std::sqrt((1 - b2m) * t + d * d * b2m) / ((1 - b2m) * d);
}

inline double tau3_of_t(const EllipsoidParam& p, double b, double t,
                        const root::Options& opt = {}) {
  const double m = p.m();
  const double x2 = competing_zero(p, b, v_of_t(p, t), opt);
  return (m / b) * pow_pos(x2, 2 * m - 1) / (pow_pos(x2, 2 * m - 2) - p.pow2m(b)) *
         ((1 - m) * t) / (m * (m + (1 - m) * t));
}

// Disc value at the competing zero, written in x2 directly.
inline double tau3(const EllipsoidParam& p, double b, double v, const root::Options& opt = {}) {
  const double m = p.m();
  const double x2 = competing_zero(p, b, v, opt);
  return (m / b) * pow_pos(x2, 2 * m - 1) /
         ((1 - m) * pow_pos(x2, 2 * m) + m * pow_pos(x2, 2 * m - 2) - p.pow2m(b));
}

struct SwitchPoint {
  double x0 = 0.0;
  double t0 = 0.0;
  double v0 = 0.0;
};

// Left-hand side of the equation whose root in (0,1) is x0. x = 1 is a double
// root and is excluded.
inline double switch_equation(const EllipsoidParam& p, double b, double x) {
  const double m = p.m();
  const double B = p.pow2m(b);
  return pow_pos(x, 4 * m - 2) * (-1 - 2 * m + 2 * m * m + B) +
         pow_pos(x, 2 * m) * (1 + (1 - 2 * m) * B) + pow_pos(x, 2 * m - 2) * (1 + (2 * m - 1) * B) -
         (1 - m) * (1 - m) * pow_pos(x, 4 * m) - m * m * pow_pos(x, 4 * m - 4) - B;
}

inline double switch_equation_slope(const EllipsoidParam& p, double b, double x) {
  const double m = p.m();
  const double B = p.pow2m(b);
  return (4 * m - 2) * pow_pos(x, 4 * m - 3) * (-1 - 2 * m + 2 * m * m + B) +
         2 * m * pow_pos(x, 2 * m - 1) * (1 + (1 - 2 * m) * B) +
         (2 * m - 2) * pow_pos(x, 2 * m - 3) * (1 + (2 * m - 1) * B) -
         4 * m * (1 - m) * (1 - m) * pow_pos(x, 4 * m - 1) -
         (4 * m - 4) * m * m * pow_pos(x, 4 * m - 5);
}

inline constexpr int kSwitchScanPoints = 1024;

// The point v0 in (1, vmax) where kappa1 and kappa2 cross. The root x0 is
// isolated by scanning x^(2m) uniformly on (0,1); more than one sign change
// is reported as an error instead of picking one.
inline SwitchPoint switch_point(const EllipsoidParam& p, double b, const root::Options& opt = {}) {
  detail::check_base(b, "switch_point");
  const double m = p.m();
  std::vector<double> grid;
  grid.reserve(kSwitchScanPoints - 1);
  for (int i = 1; i < kSwitchScanPoints; ++i) {
    grid.push_back(pow_pos(static_cast<double>(i) / kSwitchScanPoints, 1.0 / (2 * m)));
  }
  auto f = [&](double x) { return switch_equation(p, b, x); };
  const auto brackets = root::sign_changes(f, grid);
  if (brackets.empty()) {
    throw InternalError("switch_point: no sign change of the x0 equation on (0,1)");
  }
  if (brackets.size() > 1) {
    throw InternalError("switch_point: " + std::to_string(brackets.size()) +
                        " sign changes of the x0 equation on (0,1), expected one");
  }
  const auto [lo, hi] = brackets.front();
  const double x0 = lo == hi ? lo
                             : root::bisect_polish(
                                   f, [&](double x) { return switch_equation_slope(p, b, x); },
                                   lo, hi, opt)
                                   .x;

  const double b2m = p.pow2m(b);
  SwitchPoint s;
  s.x0 = x0;
  s.t0 = (pow_pos(x0, 2 * m) - b2m) / (pow_pos(x0, 2 * m - 2) - b2m);
  s.v0 = v_of_t(p, s.t0);
  if (!(s.v0 > 1.0 && s.v0 < p.vmax())) {
    throw InternalError("switch_point: v0 = " + std::to_string(s.v0) + " outside (1, vmax)");
  }
  const double k1 = kappa1(p, b, s.v0, opt);
  const double k2 = kappa2(p, b, s.v0);
  if (!(std::abs(k1 - k2) <= 1e-8 * k2)) {
    throw InternalError("switch_point: branches differ at v0 by " + std::to_string(k1 - k2));
  }
  return s;
}

}  // namespace nckob
