#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nckob/io.hpp"
#include "nckob/nckob.hpp"
#include "nckob/verify.hpp"

namespace {

using nckob::cplx;
using nckob::io::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "re,im" or "re".
cplx parse_complex(const std::string& text, const char* what) {
  std::string s = text;
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(s);
  double re = 0.0, im = 0.0;
  if (!(in >> re)) throw UsageError(std::string(what) + ": cannot parse '" + text + "'");
  if (!(in >> im)) im = 0.0;
  std::string rest;
  if (in >> rest) throw UsageError(std::string(what) + ": trailing text in '" + text + "'");
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw UsageError(std::string(what) + ": non-finite value '" + text + "'");
  }
  return {re, im};
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ordered_json optional_number(const std::optional<double>& x) {
  return x ? ordered_json(*x) : ordered_json(nullptr);
}

// Root tolerance, overridable through NCKOB_ROOT_TOL.
nckob::root::Options root_options() {
  nckob::root::Options o;
  if (const char* env = std::getenv("NCKOB_ROOT_TOL")) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0 && tol <= 1e-6)) {
      throw UsageError(std::string("NCKOB_ROOT_TOL must be a number in (0, 1e-6], got '") + env +
                       "'");
    }
    o.bracket_width = tol;
  }
  return o;
}

void check_m(double m) {
  if (!(m > 0.0 && m < 0.5)) {
    throw UsageError("--m must lie in (0, 1/2), got " + short_number(m) +
                     "; only the non-convex range is covered");
  }
}

void check_b(double b) {
  if (!(b > 0.0 && b < 1.0)) throw UsageError("--b must lie in (0, 1), got " + short_number(b));
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  double m = 0.0;
  std::optional<double> b;
  std::string z1, z2;
  std::string X = "0", Y = "0";
  std::string format = "json";
};

int cmd_eval(const EvalArgs& a) {
  check_m(a.m);
  const nckob::EllipsoidParam p(a.m);
  nckob::Point z;
  if (a.b) {
    if (!(*a.b >= 0.0 && *a.b < 1.0)) throw UsageError("--b must lie in [0, 1), got " + short_number(*a.b));
    z = {0.0, *a.b};
  } else {
    if (a.z1.empty() || a.z2.empty()) throw UsageError("give --b, or both --z1 and --z2");
    z = {parse_complex(a.z1, "--z1"), parse_complex(a.z2, "--z2")};
  }
  const nckob::TangentVector w{parse_complex(a.X, "--X"), parse_complex(a.Y, "--Y")};
  nckob::MetricOptions opt;
  opt.root = root_options();
  const nckob::NormalizedQuery q = nckob::normalize(p, z, w);
  const nckob::MetricValue k = nckob::kappa(p, q, opt);
  std::optional<double> v0;
  if (q.b > 0.0 && q.v && *q.v > 1.0 && *q.v < p.vmax()) v0 = nckob::switch_point(p, q.b, opt.root).v0;

  if (a.format == "csv") {
    std::cout << "m,b,v,kappa,branch,t,x,v0\n"
              << number(a.m) << ',' << number(q.b) << ',' << (q.v ? number(*q.v) : "") << ','
              << number(k.kappa) << ',' << nckob::to_string(k.branch) << ','
              << (k.t ? number(*k.t) : "") << ',' << (k.x ? number(*k.x) : "") << ','
              << (v0 ? number(*v0) : "") << '\n';
    return kExitOk;
  }
  ordered_json j;
  j["m"] = a.m;
  j["b"] = q.b;
  j["v"] = optional_number(q.v);
  j["kappa"] = k.kappa;
  j["branch"] = std::string(nckob::to_string(k.branch));
  j["t"] = optional_number(k.t);
  j["x"] = optional_number(k.x);
  if (v0) j["v0"] = *v0;
  std::cout << nckob::io::dump(j) << '\n';
  return kExitOk;
}

// ---- scan ------------------------------------------------------------------

struct ScanArgs {
  double m = 0.0;
  double b = 0.0;
  double v_lo = 0.0, v_hi = 0.0;
  int n = 0;
  bool log = false;
  std::string format = "csv";
};

int cmd_scan(const ScanArgs& a) {
  check_m(a.m);
  check_b(a.b);
  if (!(a.v_lo > 0.0 && a.v_hi > a.v_lo && std::isfinite(a.v_hi))) {
    throw UsageError("need 0 < --v-lo < --v-hi, got [" + short_number(a.v_lo) + ", " + short_number(a.v_hi) + "]");
  }
  if (a.n < 2) throw UsageError("--n must be at least 2");
  const nckob::EllipsoidParam p(a.m);
  nckob::MetricOptions opt;
  opt.root = root_options();
  ordered_json rows = ordered_json::array();
  if (a.format == "csv") std::cout << "v,kappa,branch,t,x\n";
  for (int i = 0; i < a.n; ++i) {
    const double f = static_cast<double>(i) / (a.n - 1);
    double v = a.log ? a.v_lo * std::pow(a.v_hi / a.v_lo, f) : a.v_lo + (a.v_hi - a.v_lo) * f;
    if (i == a.n - 1) v = a.v_hi;
    const nckob::MetricValue k = nckob::kappa_of_v(p, a.b, v, opt);
    if (a.format == "csv") {
      std::cout << number(v) << ',' << number(k.kappa) << ',' << nckob::to_string(k.branch) << ','
                << (k.t ? number(*k.t) : "") << ',' << (k.x ? number(*k.x) : "") << '\n';
    } else {
      rows.push_back({{"v", v},
                      {"kappa", k.kappa},
                      {"branch", std::string(nckob::to_string(k.branch))},
                      {"t", optional_number(k.t)},
                      {"x", optional_number(k.x)}});
    }
  }
  if (a.format != "csv") std::cout << nckob::io::dump(rows) << '\n';
  return kExitOk;
}

// ---- geodesic --------------------------------------------------------------

struct GeodesicArgs {
  double m = 0.0;
  double b = 0.0;
  std::optional<double> v;
  std::string X, Y;
  std::string form = "auto";
  bool both = false;
  int trace = 0;
  std::string trace_file;
};

void write_trace(const nckob::GeodesicDisc& d, int n, std::ostream& out) {
  out << "theta,re1,im1,re2,im2,defect\n";
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    const cplx l = std::polar(1.0, th);
    const nckob::DiscValue z = nckob::eval_disc(d, l);
    const double defect = nckob::disc_defining_value(d, l) - 1.0;
    out << number(th) << ',' << number(z.z1.real()) << ',' << number(z.z1.imag()) << ','
        << number(z.z2.real()) << ',' << number(z.z2.imag()) << ',' << number(defect) << '\n';
  }
}

int cmd_geodesic(const GeodesicArgs& a) {
  check_m(a.m);
  check_b(a.b);
  const nckob::EllipsoidParam p(a.m);
  const nckob::root::Options ropt = root_options();

  std::vector<nckob::GeodesicDisc> discs;
  cplx phase{1.0, 0.0};  // c1 for complex tangents
  std::optional<double> flat_x;
  double v = 0.0;
  if (a.v) {
    if (!(*a.v >= 0.0)) throw UsageError("--v must be >= 0");
    v = *a.v;
  } else {
    if (a.X.empty() || a.Y.empty()) throw UsageError("give --v, or both --X and --Y");
    const cplx X = parse_complex(a.X, "--X"), Y = parse_complex(a.Y, "--Y");
    if (Y == 0.0) {
      if (X == 0.0) throw UsageError("the zero vector has no geodesic");
      flat_x = std::abs(X);
    } else {
      const double r = a.b * std::abs(X) / (a.m * std::abs(Y));
      v = r * r;
      if (X != 0.0) phase = (X / std::abs(X)) * std::conj(Y / std::abs(Y));
    }
  }

  if (flat_x) {
    if (a.form == "blaschke" || a.both) {
      throw UsageError("tangents with Y = 0 have only the flat disc (power form)");
    }
    discs.push_back(nckob::flat_disc(p, a.b, *flat_x));
  } else if (a.both) {
    if (!(v >= 1.0 && v <= p.vmax())) {
      throw UsageError("--both needs 1 <= v <= vmax = " + short_number(p.vmax()) +
                       ", where both forms exist; got v = " + short_number(v));
    }
    discs.push_back(nckob::construct_blaschke(p, a.b, v, ropt));
    discs.push_back(nckob::construct_power(p, a.b, v));
  } else if (a.form == "power") {
    discs.push_back(nckob::construct_power(p, a.b, v));
  } else if (a.form == "blaschke") {
    discs.push_back(nckob::construct_blaschke(p, a.b, v, ropt));
  } else {
    // The extremal one.
    const nckob::MetricValue k = nckob::kappa_of_v(p, a.b, v, {ropt, 1e-12});
    if (k.branch == nckob::Branch::kappa2) {
      discs.push_back(nckob::construct_power(p, a.b, v));
    } else {
      discs.push_back(nckob::construct_blaschke(p, a.b, v, ropt));
    }
  }
  for (auto& d : discs) {
    d.c1 = phase;
    std::cout << nckob::io::dump(nckob::io::to_json(d)) << '\n';
  }
  if (a.trace > 0) {
    if (a.trace_file.empty()) {
      write_trace(discs.front(), a.trace, std::cout);
    } else {
      std::ofstream out(a.trace_file);
      if (!out) throw UsageError("cannot open trace file '" + a.trace_file + "'");
      write_trace(discs.front(), a.trace, out);
    }
  }
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  bool quick = false;
  std::uint64_t seed = 20261018;
  std::optional<std::uint64_t> budget;
  bool perturb = false;
  unsigned threads = 1;
};

int cmd_verify(const VerifyArgs& a) {
  nckob::verify::Config cfg;
  if (a.quick) {
    cfg.ms = {0.1, 0.25, 0.45};
    cfg.bs = {0.2, 0.5, 0.9};
    cfg.search_points = 5;
    cfg.budget = 2000;
    cfg.random_samples = 50;
  }
  if (a.budget) {
    if (*a.budget < 1) throw UsageError("--budget must be >= 1");
    cfg.budget = *a.budget;
  }
  cfg.seed = a.seed;
  cfg.perturb = a.perturb;
  cfg.threads = std::max(1u, a.threads);

  const nckob::verify::Suite suite(cfg);
  const auto out = suite.run([](const nckob::verify::CheckResult& r) {
    std::cerr << (r.passed ? "PASS" : "FAIL") << "  " << r.id << ". " << r.name << ": " << r.detail
              << std::endl;
  });

  ordered_json j;
  j["passed"] = out.passed();
  j["seed"] = cfg.seed;
  j["budget"] = cfg.budget;
  j["perturb"] = cfg.perturb;
  j["grid"] = {{"m", cfg.ms}, {"b", cfg.bs}};
  ordered_json checks = ordered_json::array();
  for (const auto& c : out.checks) {
    checks.push_back({{"id", c.id},
                      {"name", c.name},
                      {"passed", c.passed},
                      {"worst", c.worst},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  j["checks"] = checks;
  ordered_json searches = ordered_json::array();
  for (const auto& s : out.searches) searches.push_back(nckob::io::to_json(s));
  j["searches"] = searches;
  ordered_json kinks = ordered_json::array();
  for (const auto& k : out.kinks) kinks.push_back(nckob::io::to_json(k));
  j["kinks"] = kinks;
  std::cout << nckob::io::dump(j) << '\n';
  return out.passed() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kobayashi metric of the complex ellipsoids E(1,m), 0 < m < 1/2"};
  app.require_subcommand(1);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "metric at a point and tangent, as one JSON record");
  eval->add_option("--m", ea.m, "exponent m in (0, 1/2)")->required();
  auto* eb = eval->add_option("--b", ea.b, "base point (0, b)");
  auto* ez1 = eval->add_option("--z1", ea.z1, "base point first coordinate, \"re,im\"");
  auto* ez2 = eval->add_option("--z2", ea.z2, "base point second coordinate, \"re,im\"");
  eb->excludes(ez1)->excludes(ez2);
  eval->add_option("--X", ea.X, "tangent first coordinate, \"re,im\"");
  eval->add_option("--Y", ea.Y, "tangent second coordinate, \"re,im\"");
  eval->add_option("--format", ea.format)->check(CLI::IsMember({"json", "csv"}));

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "kappa(v) at (0, b) as CSV rows v,kappa,branch,t,x");
  scan->add_option("--m", sa.m, "exponent m in (0, 1/2)")->required();
  scan->add_option("--b", sa.b, "base point (0, b), b in (0,1)")->required();
  scan->add_option("--v-lo", sa.v_lo)->required();
  scan->add_option("--v-hi", sa.v_hi)->required();
  scan->add_option("--n", sa.n, "number of rows")->required();
  scan->add_flag("--log", sa.log, "logarithmic spacing");
  scan->add_option("--format", sa.format)->check(CLI::IsMember({"json", "csv"}));

  GeodesicArgs ga;
  auto* geo = app.add_subcommand("geodesic", "extremal disc through (0, b) as a JSON record");
  geo->add_option("--m", ga.m, "exponent m in (0, 1/2)")->required();
  geo->add_option("--b", ga.b, "base point (0, b), b in (0,1)")->required();
  auto* gv = geo->add_option("--v", ga.v, "reduced direction parameter v >= 0");
  auto* gx = geo->add_option("--X", ga.X, "tangent first coordinate, \"re,im\"");
  auto* gy = geo->add_option("--Y", ga.Y, "tangent second coordinate, \"re,im\"");
  gv->excludes(gx)->excludes(gy);
  auto* gform = geo->add_option("--form", ga.form, "power, blaschke or auto (the extremal one)")
                    ->check(CLI::IsMember({"auto", "power", "blaschke"}));
  auto* gboth = geo->add_flag("--both", ga.both, "emit both forms (1 <= v <= vmax)");
  gboth->excludes(gform);
  auto* gtrace = geo->add_option("--trace", ga.trace, "boundary samples of the first disc as CSV")
                     ->check(CLI::NonNegativeNumber);
  geo->add_option("--trace-file", ga.trace_file, "write the trace here instead of stdout")
      ->needs(gtrace);

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run the property suite; exit 1 on any failure");
  ver->add_flag("--quick", va.quick, "small grid and budget");
  ver->add_option("--seed", va.seed);
  ver->add_option("--budget", va.budget, "candidates per search point");
  ver->add_flag("--perturb", va.perturb, "inflate formula values; the suite must fail");
  ver->add_option("--threads", va.threads)->check(CLI::Range(1u, 64u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(ea);
    if (*scan) return cmd_scan(sa);
    if (*geo) return cmd_geodesic(ga);
    if (*ver) return cmd_verify(va);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nckob::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nckob::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nckob::InfeasibleParameters& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
