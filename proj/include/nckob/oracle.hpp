#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "nckob/branches.hpp"
#include "nckob/errors.hpp"
#include "nckob/geodesic.hpp"
#include "nckob/metric.hpp"
#include "nckob/scalar.hpp"

// Independent checks of the closed-form metric: certified competitor discs
// give upper bounds through the extremal-disc definition of the metric, the
// kink at v0 is measured by one-sided difference quotients, and the ordering
// of the three candidate disc values is scanned on a grid.
namespace nckob::oracle {

// splitmix64 keyed by (seed, index): the stream of a candidate does not
// depend on which thread generates it or in which order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index)
      : state_(mix(seed ^ mix(index + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next() { return mix(state_ += 0x9E3779B97F4A7C15ULL); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

enum class CandidateKind { exact_form, perturbed_form, bumped_form, polynomial };

inline std::string_view to_string(CandidateKind k) {
  switch (k) {
    case CandidateKind::exact_form: return "exact-form";
    case CandidateKind::perturbed_form: return "perturbed-form";
    case CandidateKind::bumped_form: return "bumped-form";
    case CandidateKind::polynomial: return "polynomial";
  }
  return "?";
}

// psi(l) = base(l) + (0, shift) + l (lin1, lin2) + l^2 (q1[0], q2[0]) + l^3 (q1[1], q2[1]).
// Form-based candidates live on the closed unit disc; polynomial ones are
// entire and may be dilated up to radius_cap.
struct Candidate {
  CandidateKind kind = CandidateKind::polynomial;
  std::uint64_t index = 0;
  std::optional<GeodesicDisc> base;
  double shift = 0.0;
  cplx lin1{0.0, 0.0};
  cplx lin2{0.0, 0.0};
  std::array<cplx, 2> q1{};
  std::array<cplx, 2> q2{};
  double radius_cap = 1.0;

  bool plain_form() const {
    return base && shift == 0.0 && lin1 == 0.0 && lin2 == 0.0 && q1 == std::array<cplx, 2>{} &&
           q2 == std::array<cplx, 2>{};
  }
};

inline DiscValue eval(const Candidate& c, cplx l) {
  DiscValue z{0.0, 0.0};
  if (c.base) z = eval_disc(*c.base, l);
  z.z1 += l * (c.lin1 + l * (c.q1[0] + l * c.q1[1]));
  z.z2 += c.shift + l * (c.lin2 + l * (c.q2[0] + l * c.q2[1]));
  return z;
}

inline DiscValue derivative_at_zero(const Candidate& c) {
  DiscValue d{c.lin1, c.lin2};
  if (c.base) {
    const DiscValue bd = disc_derivative_at_zero(*c.base);
    d.z1 += bd.z1;
    d.z2 += bd.z2;
  }
  return d;
}

inline double defining_value(const Candidate& c, double m, cplx l) {
  if (c.plain_form()) return disc_defining_value(*c.base, l);
  const DiscValue z = eval(c, l);
  return std::norm(z.z1) + pow_pos(std::norm(z.z2), m);
}

struct CertifyOptions {
  int samples = 4096;        // boundary samples of the final certificate
  int coarse_samples = 64;   // screening samples
  double margin = 1e-9;      // required gap below 1
  int refine_peaks = 3;      // sampled maxima refined by golden section
  double rel_tol = 1e-11;    // relative accuracy of the certified radius
};

// Max of |psi1|^2 + |psi2|^(2m) on |l| = r from n uniform samples, with the
// largest local sample maxima refined by golden-section search.
inline double circle_max(const Candidate& c, double m, double r, int n, int refine_peaks) {
  const double step = 2.0 * std::numbers::pi / n;
  if (refine_peaks <= 0) {
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) best = std::max(best, defining_value(c, m, std::polar(r, k * step)));
    return best;
  }
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) vals[k] = defining_value(c, m, std::polar(r, k * step));
  double best = *std::max_element(vals.begin(), vals.end());

  std::vector<int> peaks;
  for (int k = 0; k < n; ++k) {
    const double prev = vals[(k + n - 1) % n];
    const double next = vals[(k + 1) % n];
    if (vals[k] >= prev && vals[k] >= next) peaks.push_back(k);
  }
  const int keep = std::min<int>(refine_peaks, static_cast<int>(peaks.size()));
  std::partial_sort(peaks.begin(), peaks.begin() + keep, peaks.end(),
                    [&](int a, int b) { return vals[a] > vals[b]; });
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < keep; ++i) {
    double lo = (peaks[i] - 1) * step;
    double hi = (peaks[i] + 1) * step;
    auto f = [&](double th) { return defining_value(c, m, std::polar(r, th)); };
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 40; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = f(x2);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

// Largest r <= radius_cap (to relative tolerance rel_tol) at which the
// sampled maximum stays below 1 - margin, or nullopt if none is found above
// 2^-60 radius_cap. guess, when positive, seeds the bracket search with
// [guess (1 - guess_width), guess (1 + guess_width)].
inline std::optional<double> largest_certified_radius(const Candidate& c, double m, int n,
                                                      int refine_peaks, double margin,
                                                      double rel_tol, double guess = 0.0,
                                                      double guess_width = 1e-4) {
  const double thr = 1.0 - margin;
  auto g = [&](double r) { return circle_max(c, m, r, n, refine_peaks) - thr; };
  const double cap = c.radius_cap;

  double lo = 0.0, flo = 0.0, hi = 0.0, fhi = 0.0;
  double start = guess > 0.0 ? std::min(cap, guess * (1.0 + guess_width)) : cap;
  double f = g(start);
  if (!std::isfinite(f)) f = 1.0;
  if (f <= 0.0) {
    lo = start;
    flo = f;
    if (lo == cap) return cap;
    // Grow until the check fails or the cap is reached.
    for (;;) {
      const double r = std::min(cap, lo * 2.0);
      double fr = g(r);
      if (!std::isfinite(fr)) fr = 1.0;
      if (fr > 0.0) {
        hi = r;
        fhi = fr;
        break;
      }
      lo = r;
      flo = fr;
      if (lo == cap) return cap;
    }
  } else {
    hi = start;
    fhi = f;
    // Widen below the guess geometrically, then halve.
    double w = guess_width;
    double r = guess > 0.0 ? std::min(cap, guess * (1.0 - w)) : start * 0.5;
    for (int i = 0;; ++i) {
      if (i > 120 || r < cap * 0x1.0p-60) return std::nullopt;
      double fr = g(r);
      if (!std::isfinite(fr)) fr = 1.0;
      if (fr <= 0.0) {
        lo = r;
        flo = fr;
        break;
      }
      hi = r;
      fhi = fr;
      w *= 2.0;
      r = (guess > 0.0 && w < 0.5) ? guess * (1.0 - w) : r * 0.5;
    }
  }

  // Illinois regula falsi; lo always passes.
  int side = 0;
  double last_width = hi - lo;
  for (int it = 0; it < 200 && hi - lo > rel_tol * hi; ++it) {
    double r = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(r > lo && r < hi) || it % 4 == 3) {
      if (hi - lo > 0.5 * last_width || !(r > lo && r < hi)) r = 0.5 * (lo + hi);
      last_width = hi - lo;
    }
    double fr = g(r);
    if (!std::isfinite(fr)) fr = 1.0;
    if (fr <= 0.0) {
      lo = r;
      flo = fr;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = r;
      fhi = fr;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return lo;
}

struct CertifiedBound {
  double bound = 0.0;       // 1 / (|s| r); the metric is at most this
  double radius = 0.0;      // r: psi(r l) is the certified disc
  double slope = 0.0;       // s with psi'(0) = s (xmag, 1)
};

// Validates psi(0) = (0, b) and psi'(0) = s (xmag, 1) with real s != 0.
inline std::optional<double> candidate_slope(const Candidate& c, double b, double xmag) {
  const DiscValue z0 = eval(c, 0.0);
  if (!(std::abs(z0.z1) <= 1e-12 && std::abs(z0.z2 - b) <= 1e-12)) return std::nullopt;
  const DiscValue d = derivative_at_zero(c);
  const double s = d.z2.real();
  if (!(std::abs(s) > 1e-14) || !(std::abs(d.z2.imag()) <= 1e-12 * std::abs(s))) {
    return std::nullopt;
  }
  if (!(std::abs(d.z1 - s * xmag) <= 1e-12 * std::abs(s) * (1.0 + xmag))) return std::nullopt;
  return s;
}

// Upper bound on the metric at ((0,b); (xmag, 1)) from a candidate disc,
// after shrinking it radially until the boundary samples certify containment.
// Returns nullopt when the candidate does not pass through the base point
// with the right direction, or no radius certifies.
inline std::optional<CertifiedBound> bound_from_candidate(const EllipsoidParam& p, double b,
                                                          double xmag, const Candidate& c,
                                                          const CertifyOptions& opt = {},
                                                          double guess = 0.0,
                                                          double guess_width = 1e-4) {
  const auto s = candidate_slope(c, b, xmag);
  if (!s) return std::nullopt;
  // Every radius it returns has passed the full sampled check.
  const auto r = largest_certified_radius(c, p.m(), opt.samples, opt.refine_peaks, opt.margin,
                                          opt.rel_tol, guess, guess_width);
  if (!r) return std::nullopt;
  return CertifiedBound{1.0 / (std::abs(*s) * *r), *r, *s};
}

// Exact discs through (0, b) matching (xmag, 1) that exist for v, cheapest
// first: the extremal Blaschke disc (v <= vmax), the power disc (v >= 1)
// and the competing Blaschke disc (1 < v <= vmax).
inline std::vector<GeodesicDisc> exact_discs(const EllipsoidParam& p, double b, double v) {
  std::vector<GeodesicDisc> out;
  if (v <= p.vmax()) out.push_back(construct_blaschke(p, b, v));
  if (v >= 1.0) out.push_back(construct_power(p, b, v));
  if (v > 1.0 && v <= p.vmax()) {
    const double x2 = competing_zero(p, b, v);
    if (x2 < 1.0 - 1e-12) out.push_back(construct_blaschke_at(p, b, v, x2));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GeodesicDisc& a, const GeodesicDisc& c) { return a.tau < c.tau; });
  return out;
}

inline cplx random_cplx(CounterRng& rng, double scale) {
  return std::polar(scale * rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());
}

// Random competitor number `index` (>= seeds.size()). nullopt when the drawn
// parameters violate the form constraints.
inline std::optional<Candidate> random_candidate(double b, double xmag,
                                                 const std::vector<GeodesicDisc>& seeds,
                                                 std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  const double pick = rng.uniform();
  const double eps = std::pow(10.0, rng.uniform(-6.0, -0.5));
  Candidate c;
  c.index = index;

  if (pick < 0.35 && !seeds.empty()) {
    // Form disc with perturbed parameters, re-projected onto the boundary
    // normalization, then corrected to pass through (0, b) tangent to (xmag, 1).
    GeodesicDisc d = seeds[rng.next() % seeds.size()];
    d.a2 *= std::exp(eps * rng.uniform(-1.0, 1.0));
    if (d.form == DiscForm::power) {
      d.alpha2 = std::clamp(d.alpha2 + eps * rng.uniform(-1.0, 1.0), -1.0, 1.0);
    } else {
      d.alpha2 = -std::clamp(d.zero() * std::exp(eps * rng.uniform(-1.0, 1.0)), 1e-6, 1.0 - 1e-9);
    }
    if (!(d.a2 > 0.0 && d.a2 < 1.0)) return std::nullopt;
    d.alpha0 = d.a2 * d.a2 * d.alpha2;
    const double a1sq = 1.0 + d.alpha0 * d.alpha0 - d.a2 * d.a2 * (1.0 + d.alpha2 * d.alpha2);
    if (!(a1sq > 0.0)) return std::nullopt;
    d.a1 = std::sqrt(a1sq);
    const DiscValue z0 = eval_disc(d, 0.0);
    const DiscValue d0 = disc_derivative_at_zero(d);
    const double s = d0.z2.real();
    if (!(std::abs(s) > 1e-12)) return std::nullopt;
    c.kind = CandidateKind::perturbed_form;
    c.base = d;
    c.shift = b - z0.z2.real();
    c.lin1 = s * xmag - d0.z1;
    c.radius_cap = 1.0;
  } else if (pick < 0.7 && !seeds.empty()) {
    // Exact disc plus a higher-order bump; value and derivative at 0 are kept.
    const GeodesicDisc& d = seeds[rng.next() % seeds.size()];
    const double scale = eps / d.tau * (1.0 + xmag);
    c.kind = CandidateKind::bumped_form;
    c.base = d;
    c.q1 = {random_cplx(rng, scale), random_cplx(rng, scale)};
    c.q2 = {random_cplx(rng, scale), random_cplx(rng, scale)};
    c.radius_cap = 1.0;
  } else {
    // Cubic polynomial disc (xmag l + ..., b + l + ...), dilated as far as it certifies.
    const double sigma = std::pow(10.0, rng.uniform(-2.0, 0.5)) * (1.0 + xmag);
    c.kind = CandidateKind::polynomial;
    c.shift = b;
    c.lin1 = xmag;
    c.lin2 = 1.0;
    c.q1 = {random_cplx(rng, sigma), random_cplx(rng, sigma)};
    c.q2 = {random_cplx(rng, sigma), random_cplx(rng, sigma)};
    c.radius_cap = 1e6;
  }
  return c;
}

struct SearchEntry {
  std::uint64_t index = 0;
  CandidateKind kind = CandidateKind::polynomial;
  double bound = 0.0;
};

struct SearchReport {
  double m = 0.0;
  double b = 0.0;
  double v = 0.0;
  double best_bound = std::numeric_limits<double>::infinity();
  double formula_value = 0.0;
  double margin = 0.0;  // best_bound - formula_value
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  std::size_t certified = 0;   // candidates with a full certificate
  std::size_t rejected = 0;    // infeasible draws or failed certificates
  std::size_t screened = 0;    // skipped after the coarse screen
  Candidate best_candidate;
  double best_radius = 0.0;
  // Fully certified candidates within 1e-6 relative of the formula.
  std::vector<SearchEntry> near_optimal;

  bool sound(double rel_tol = 1e-6) const { return margin >= -rel_tol * formula_value; }
};

struct SearchOptions {
  CertifyOptions certify{};
  unsigned threads = 1;
  // Multiplies the formula value the search is compared against; 1 except
  // for harness self-tests.
  double formula_scale = 1.0;
};

namespace detail {

struct ChunkResult {
  double best = std::numeric_limits<double>::infinity();
  double best_radius = 0.0;
  std::optional<Candidate> best_candidate;
  std::size_t certified = 0, rejected = 0, screened = 0;
  std::vector<SearchEntry> near;
};

inline void consider(ChunkResult& acc, const Candidate& c, const CertifiedBound& cb,
                     double near_limit) {
  ++acc.certified;
  if (cb.bound < acc.best) {
    acc.best = cb.bound;
    acc.best_radius = cb.radius;
    acc.best_candidate = c;
  }
  if (cb.bound <= near_limit) acc.near.push_back({c.index, c.kind, cb.bound});
}

}  // namespace detail

// Deterministic competitor search for the metric at ((0,b); (xmag, 1)) with
// xmag = m sqrt(v)/b. Candidate i is a pure function of (seed, i); the
// exact discs come first, the remaining budget is random. Random candidates
// whose coarse bound exceeds the best exact bound by more than 1e-6 relative
// skip the full certificate; that threshold is fixed before the random phase,
// so the report does not depend on thread count.
inline SearchReport random_search(const EllipsoidParam& p, double b, double v,
                                  std::uint64_t budget, std::uint64_t seed,
                                  const SearchOptions& opt = {}) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("random_search: b must lie in (0,1)");
  if (!(v > 0.0)) throw DomainError("random_search: v must be positive");
  if (budget < 1) throw InvalidInput("random_search: budget must be >= 1");
  const double m = p.m();
  const double xmag = m * std::sqrt(v) / b;
  SearchReport rep;
  rep.m = m;
  rep.b = b;
  rep.v = v;
  rep.budget = budget;
  rep.seed = seed;
  rep.formula_value = kappa_of_v(p, b, v).kappa * opt.formula_scale;
  const double near_limit = rep.formula_value * (1.0 + 1e-6);

  const std::vector<GeodesicDisc> seeds = exact_discs(p, b, v);
  const std::uint64_t n_seed = std::min<std::uint64_t>(budget, seeds.size());

  detail::ChunkResult total;
  for (std::uint64_t i = 0; i < n_seed; ++i) {
    Candidate c;
    c.kind = CandidateKind::exact_form;
    c.index = i;
    c.base = seeds[i];
    const auto cb = bound_from_candidate(p, b, xmag, c, opt.certify);
    if (cb) {
      detail::consider(total, c, *cb, near_limit);
    } else {
      ++total.rejected;
    }
  }
  const double screen_limit = std::isfinite(total.best) ? total.best * (1.0 + 1e-6)
                                                        : std::numeric_limits<double>::infinity();

  auto run_chunk = [&](std::uint64_t lo, std::uint64_t hi) {
    detail::ChunkResult acc;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const auto c = random_candidate(b, xmag, seeds, seed, i);
      if (!c) {
        ++acc.rejected;
        continue;
      }
      const auto s = candidate_slope(*c, b, xmag);
      if (!s) {
        ++acc.rejected;
        continue;
      }
      // Screening. The circle maximum of |psi1|^2 + |psi2|^(2m) is
      // nondecreasing in r (the function is plurisubharmonic), and sparse
      // samples underestimate it. A candidate whose sparse samples already
      // break the margin at the radius that would tie the screen limit
      // cannot beat that limit.
      const double r_tie = std::min(c->radius_cap, 1.0 / (std::abs(*s) * screen_limit));
      bool screened = false;
      for (int n : {16, opt.certify.coarse_samples, 512}) {
        if (circle_max(*c, m, r_tie, n, 0) > 1.0 - opt.certify.margin) {
          screened = true;
          break;
        }
      }
      if (screened) {
        ++acc.screened;
        continue;
      }
      // Locate the radius on 512 samples, then certify close to it.
      const auto rc = largest_certified_radius(*c, m, 512, 0, opt.certify.margin, 1e-10, r_tie, 1e-2);
      if (!rc) {
        ++acc.rejected;
        continue;
      }
      const auto cb = bound_from_candidate(p, b, xmag, *c, opt.certify, *rc, 1e-8);
      if (cb) {
        detail::consider(acc, *c, *cb, near_limit);
      } else {
        ++acc.rejected;
      }
    }
    return acc;
  };

  const std::uint64_t n_random = budget - n_seed;
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, 64));
  std::vector<detail::ChunkResult> parts(threads);
  if (threads == 1 || n_random < threads) {
    parts[0] = run_chunk(n_seed, budget);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t per = (n_random + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t lo = n_seed + std::min<std::uint64_t>(n_random, t * per);
      const std::uint64_t hi = n_seed + std::min<std::uint64_t>(n_random, (t + 1) * per);
      pool.emplace_back([&, t, lo, hi] { parts[t] = run_chunk(lo, hi); });
    }
    for (auto& th : pool) th.join();
  }
  // Chunks cover increasing index ranges, so strict < keeps the lowest index on ties.
  for (auto& part : parts) {
    total.certified += part.certified;
    total.rejected += part.rejected;
    total.screened += part.screened;
    if (part.best < total.best) {
      total.best = part.best;
      total.best_radius = part.best_radius;
      total.best_candidate = part.best_candidate;
    }
    total.near.insert(total.near.end(), part.near.begin(), part.near.end());
  }

  if (!total.best_candidate) {
    throw InternalError("random_search: no certified candidate among " + std::to_string(budget) +
                        " (rejected " + std::to_string(total.rejected) + ")");
  }
  rep.best_bound = total.best;
  rep.best_radius = total.best_radius;
  rep.best_candidate = *total.best_candidate;
  rep.margin = rep.best_bound - rep.formula_value;
  rep.certified = total.certified;
  rep.rejected = total.rejected;
  rep.screened = total.screened;
  rep.near_optimal = std::move(total.near);
  return rep;
}

// Rebuilds the candidate with the given index of a search.
inline std::optional<Candidate> search_candidate(const EllipsoidParam& p, double b, double v,
                                                 std::uint64_t seed, std::uint64_t index) {
  const double xmag = p.m() * std::sqrt(v) / b;
  const auto seeds = exact_discs(p, b, v);
  if (index < seeds.size()) {
    Candidate c;
    c.kind = CandidateKind::exact_form;
    c.index = index;
    c.base = seeds[index];
    return c;
  }
  return random_candidate(b, xmag, seeds, seed, index);
}

// sup over |l| = r of the distance between two candidates.
inline double trace_distance(const Candidate& a, const Candidate& c, double r, int n = 256) {
  double d = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx l = std::polar(r, 2.0 * std::numbers::pi * k / n);
    const DiscValue za = eval(a, l);
    const DiscValue zc = eval(c, l);
    d = std::max(d, std::sqrt(std::norm(za.z1 - zc.z1) + std::norm(za.z2 - zc.z2)));
  }
  return d;
}

struct SlopePair {
  double left = 0.0;
  double right = 0.0;
  double error_estimate = 0.0;
};

// One-sided slopes of v -> kappa(v) at v from quotients with steps h and h/2,
// combined by Richardson extrapolation. The error estimate is the sum of the
// step-halving differences on both sides plus a rounding floor.
inline SlopePair one_sided_slopes(const EllipsoidParam& p, double b, double v, double step) {
  auto k = [&](double u) { return kappa_of_v(p, b, u).kappa; };
  const double k0 = k(v);
  const double dl1 = (k0 - k(v - step)) / step;
  const double dl2 = (k0 - k(v - step / 2)) / (step / 2);
  const double dr1 = (k(v + step) - k0) / step;
  const double dr2 = (k(v + step / 2) - k0) / (step / 2);
  SlopePair s;
  s.left = 2.0 * dl2 - dl1;
  s.right = 2.0 * dr2 - dr1;
  // Evaluation noise: one-sided second differences at a spacing where
  // truncation is negligible.
  double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(k0);
  const double delta = 1e-9 * std::max(v, 1.0);
  for (int j = 1; j <= 4; ++j) {
    const double d = j * delta;
    noise = std::max(noise, std::abs(k0 - 2.0 * k(v - d) + k(v - 2.0 * d)));
    noise = std::max(noise, std::abs(k0 - 2.0 * k(v + d) + k(v + 2.0 * d)));
  }
  const double rounding = 4.0 * noise / (step / 2);
  s.error_estimate = std::abs(dl2 - dl1) + std::abs(dr2 - dr1) + rounding;
  return s;
}

struct KinkReport {
  double v0 = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
  double step = 0.0;
  double error_estimate = 0.0;
  double m = 0.0;
  double b = 0.0;

  double gap() const { return std::abs(left_slope - right_slope); }
  bool kinked() const { return gap() > 10.0 * error_estimate; }
};

inline KinkReport measure_kink(const EllipsoidParam& p, double b, double step) {
  if (!(step > 1e-6 && step < 1e-2)) {
    throw InvalidInput("kink step must lie in (1e-6, 1e-2), got " + std::to_string(step));
  }
  const SwitchPoint sp = switch_point(p, b);
  const SlopePair s = one_sided_slopes(p, b, sp.v0, step);
  return {sp.v0, s.left, s.right, step, s.error_estimate, p.m(), b};
}

// As measure_kink, but a missing kink is an error.
inline KinkReport kink_report(const EllipsoidParam& p, double b, double step) {
  KinkReport r = measure_kink(p, b, step);
  if (!r.kinked()) {
    throw InternalError("kink_report: slopes " + std::to_string(r.left_slope) + " and " +
                        std::to_string(r.right_slope) + " agree within 10x the error estimate " +
                        std::to_string(r.error_estimate));
  }
  return r;
}

struct OrderingReport {
  int points = 0;
  int violations = 0;          // grid points with tau1 >= tau3
  int sign_violations = 0;     // grid points with m + t(m-1) <= 0
  double min_relative_gap = std::numeric_limits<double>::infinity();  // min (tau3 - tau1)/tau1

  bool holds() const { return points > 0 && violations == 0 && sign_violations == 0; }
};

// tau1(t) < tau3(t) at n interior points of ((m/(1-m))^2, m/(1-m)).
inline OrderingReport branch_ordering_report(const EllipsoidParam& p, double b, int n) {
  if (n < 10) throw InvalidInput("branch ordering scan needs n >= 10");
  const double m = p.m();
  const double lo = p.t_at_one();
  const double hi = p.tmax();
  OrderingReport r;
  for (int i = 1; i <= n; ++i) {
    const double t = lo + (hi - lo) * i / (n + 1);
    const double t1 = tau1_of_t(p, b, t);
    const double t3 = tau3_of_t(p, b, t);
    ++r.points;
    if (!(t1 < t3)) ++r.violations;
    if (!(m + t * (m - 1) > 0.0)) ++r.sign_violations;
    r.min_relative_gap = std::min(r.min_relative_gap, (t3 - t1) / t1);
  }
  return r;
}

inline bool branch_ordering_scan(const EllipsoidParam& p, double b, int n) {
  return branch_ordering_report(p, b, n).holds();
}

// |x1 - x2| at v = vmax, where both roots solve the same equation.
inline double root_merge_gap(const EllipsoidParam& p, double b) {
  return std::abs(blaschke_zero(p, b, p.tmax()) - competing_zero(p, b, p.vmax()));
}

}  // namespace nckob::oracle
