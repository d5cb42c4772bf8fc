#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "nckob/geodesic.hpp"
#include "nckob/oracle.hpp"

namespace nckob::io {

using ordered_json = nlohmann::ordered_json;

// Compact JSON with every floating point number written as %.17g, so a
// parse of the text gives back the same doubles. Non-finite numbers become null.
inline void dump_to(const ordered_json& j, std::string& out) {
  switch (j.type()) {
    case ordered_json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += ordered_json(k).dump();
        out += ':';
        dump_to(v, out);
      }
      out += '}';
      break;
    }
    case ordered_json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_to(v, out);
      }
      out += ']';
      break;
    }
    case ordered_json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
      }
      break;
    }
    default:
      out += j.dump();
  }
}

inline std::string dump(const ordered_json& j) {
  std::string s;
  dump_to(j, s);
  return s;
}

inline ordered_json complex_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

inline ordered_json to_json(const GeodesicDisc& d) {
  ordered_json j;
  j["form"] = std::string(to_string(d.form));
  j["m"] = d.m;
  j["b"] = d.b;
  j["v"] = d.v;
  j["a1"] = d.a1;
  j["a2"] = d.a2;
  j["alpha0"] = d.alpha0;
  j["alpha2"] = d.alpha2;
  if (d.form == DiscForm::blaschke) j["x"] = d.zero();
  j["c1"] = complex_json(d.c1);
  j["c2"] = complex_json(d.c2);
  j["tau"] = d.tau;
  return j;
}

inline double number_or_inf(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline GeodesicDisc disc_from_json(const nlohmann::json& j) {
  GeodesicDisc d;
  const auto form = j.at("form").get<std::string>();
  if (form == "power") {
    d.form = DiscForm::power;
  } else if (form == "blaschke") {
    d.form = DiscForm::blaschke;
  } else {
    throw InvalidInput("unknown disc form '" + form + "'");
  }
  d.m = j.at("m").get<double>();
  d.b = j.at("b").get<double>();
  d.v = number_or_inf(j.at("v"));
  d.a1 = j.at("a1").get<double>();
  d.a2 = j.at("a2").get<double>();
  d.alpha0 = j.at("alpha0").get<double>();
  d.alpha2 = j.at("alpha2").get<double>();
  d.c1 = {j.at("c1").at(0).get<double>(), j.at("c1").at(1).get<double>()};
  d.c2 = {j.at("c2").at(0).get<double>(), j.at("c2").at(1).get<double>()};
  d.tau = j.at("tau").get<double>();
  return d;
}

inline ordered_json to_json(const oracle::Candidate& c) {
  ordered_json j;
  j["kind"] = std::string(to_string(c.kind));
  j["index"] = c.index;
  if (c.base) j["base"] = to_json(*c.base);
  j["shift"] = c.shift;
  j["lin1"] = complex_json(c.lin1);
  j["lin2"] = complex_json(c.lin2);
  j["q1"] = ordered_json::array({complex_json(c.q1[0]), complex_json(c.q1[1])});
  j["q2"] = ordered_json::array({complex_json(c.q2[0]), complex_json(c.q2[1])});
  j["radius_cap"] = c.radius_cap;
  return j;
}

// At most max_near entries of the near-optimal list are written; the full
// count is always given.
inline ordered_json to_json(const oracle::SearchReport& r, std::size_t max_near = 16) {
  ordered_json j;
  j["m"] = r.m;
  j["b"] = r.b;
  j["v"] = r.v;
  j["best_bound"] = r.best_bound;
  j["formula_value"] = r.formula_value;
  j["margin"] = r.margin;
  j["budget"] = r.budget;
  j["seed"] = r.seed;
  j["certified"] = r.certified;
  j["rejected"] = r.rejected;
  j["screened"] = r.screened;
  j["best_radius"] = r.best_radius;
  j["best_candidate"] = to_json(r.best_candidate);
  j["near_optimal_count"] = r.near_optimal.size();
  ordered_json near = ordered_json::array();
  for (std::size_t i = 0; i < r.near_optimal.size() && i < max_near; ++i) {
    const auto& e = r.near_optimal[i];
    near.push_back({{"index", e.index}, {"kind", std::string(to_string(e.kind))}, {"bound", e.bound}});
  }
  j["near_optimal"] = near;
  return j;
}

inline ordered_json to_json(const oracle::KinkReport& k) {
  ordered_json j;
  j["m"] = k.m;
  j["b"] = k.b;
  j["v0"] = k.v0;
  j["left_slope"] = k.left_slope;
  j["right_slope"] = k.right_slope;
  j["step"] = k.step;
  j["error_estimate"] = k.error_estimate;
  j["kinked"] = k.kinked();
  return j;
}

}  // namespace nckob::io
