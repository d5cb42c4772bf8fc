#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nckob/errors.hpp"

namespace nckob::root {

struct Options {
  double bracket_width = 1e-13;  // bisection stops below this width
  int newton_steps = 5;          // polish steps after bisection
};

struct Result {
  double x = 0.0;
  int bisections = 0;
  int newton_steps = 0;
};

// Root of a continuous f on [lo, hi] given f(lo) and f(hi) of opposite sign
// (or one of them zero). Bisection shrinks the bracket to opt.bracket_width,
// then up to opt.newton_steps Newton steps with the derivative df refine the
// midpoint. A Newton step is kept only if it stays inside the final bracket
// and does not increase |f|; otherwise the bisection midpoint stands.
template <class F, class DF>
Result bisect_polish(F&& f, DF&& df, double lo, double hi, const Options& opt = {}) {
  if (!(lo < hi)) {
    throw InternalError("bisect_polish: empty bracket [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0, 0};
  if (fhi == 0.0) return {hi, 0, 0};
  if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi)) {
    throw InternalError("bisect_polish: no sign change on [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
  }

  Result r;
  while (hi - lo > opt.bracket_width) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // bracket is down to adjacent doubles
    const double fm = f(mid);
    ++r.bisections;
    if (fm == 0.0) return {mid, r.bisections, 0};
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }

  double x = lo + 0.5 * (hi - lo);
  double fx = f(x);
  for (int i = 0; i < opt.newton_steps && fx != 0.0; ++i) {
    const double d = df(x);
    if (!std::isfinite(d) || std::abs(d) < std::numeric_limits<double>::min() * 1e4) break;
    const double next = x - fx / d;
    if (!(next >= lo && next <= hi)) break;
    const double fnext = f(next);
    if (!(std::abs(fnext) <= std::abs(fx))) break;
    ++r.newton_steps;
    if (next == x) break;
    x = next;
    fx = fnext;
  }
  r.x = x;
  return r;
}

// Same as above, derivative-free.
template <class F>
Result bisect(F&& f, double lo, double hi, const Options& opt = {}) {
  Options o = opt;
  o.newton_steps = 0;
  return bisect_polish(std::forward<F>(f), [](double) { return 0.0; }, lo, hi, o);
}

// Adjacent grid pairs [grid[i], grid[i+1]] across which f changes sign. A grid
// value that is exactly zero opens a degenerate bracket [g, g].
template <class F>
std::vector<std::pair<double, double>> sign_changes(F&& f, const std::vector<double>& grid) {
  std::vector<std::pair<double, double>> out;
  if (grid.empty()) return out;
  double prev = f(grid[0]);
  if (prev == 0.0) out.emplace_back(grid[0], grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = f(grid[i]);
    if (cur == 0.0) {
      out.emplace_back(grid[i], grid[i]);
    } else if (prev != 0.0 && std::signbit(prev) != std::signbit(cur)) {
      out.emplace_back(grid[i - 1], grid[i]);
    }
    prev = cur;
  }
  return out;
}

}  // namespace nckob::root
