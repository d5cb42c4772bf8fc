#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "nckob/io.hpp"

using nckob::EllipsoidParam;

TEST(Json, DoublesRoundTripExactly) {
  nckob::io::ordered_json j;
  j["a"] = 0.1;
  j["b"] = 1.0 / 3.0;
  j["c"] = std::numeric_limits<double>::infinity();
  j["d"] = 5e-324;
  const auto text = nckob::io::dump(j);
  const auto back = nlohmann::json::parse(text);
  EXPECT_EQ(back["a"].get<double>(), 0.1);
  EXPECT_EQ(back["b"].get<double>(), 1.0 / 3.0);
  EXPECT_TRUE(back["c"].is_null());
  EXPECT_EQ(back["d"].get<double>(), 5e-324);
}

TEST(Json, DiscRoundTripReproducesTau) {
  const EllipsoidParam p(0.35);
  for (const auto& d : {nckob::construct_power(p, 0.3, 1.04), nckob::construct_blaschke(p, 0.3, 0.7),
                        nckob::flat_disc(p, 0.3, 1.5)}) {
    const auto j = nlohmann::json::parse(nckob::io::dump(nckob::io::to_json(d)));
    const auto e = nckob::io::disc_from_json(j);
    EXPECT_EQ(e.form, d.form);
    EXPECT_EQ(e.a1, d.a1);
    EXPECT_EQ(e.alpha2, d.alpha2);
    EXPECT_EQ(e.v, d.v);
    const auto dz = nckob::disc_derivative_at_zero(e);
    if (std::isfinite(d.v)) {
      EXPECT_EQ(1.0 / dz.z2.real(), d.tau);
    } else {
      EXPECT_NEAR(1.5 / dz.z1.real(), d.tau, 1e-15 * d.tau);
    }
  }
  EXPECT_THROW(nckob::io::disc_from_json(nlohmann::json{{"form", "other"}}), nckob::InvalidInput);
}

TEST(Json, BlaschkeRecordCarriesZero) {
  const EllipsoidParam p(0.35);
  const auto j = nckob::io::to_json(nckob::construct_blaschke(p, 0.3, 0.7));
  EXPECT_EQ(j["x"].get<double>(), -j["alpha2"].get<double>());
  EXPECT_EQ(j["form"], "blaschke");
}

TEST(Json, ReportsSerialize) {
  const EllipsoidParam p(0.3);
  const auto r = nckob::oracle::random_search(p, 0.4, 0.8, 100, 1);
  const auto j = nckob::io::to_json(r, 2);
  EXPECT_LE(j["near_optimal"].size(), 2u);
  EXPECT_EQ(j["near_optimal_count"].get<std::size_t>(), r.near_optimal.size());
  EXPECT_EQ(j["best_candidate"]["index"].get<std::uint64_t>(), r.best_candidate.index);
  const auto k = nckob::io::to_json(nckob::oracle::measure_kink(p, 0.4, 1e-5));
  EXPECT_TRUE(k["kinked"].get<bool>());
  EXPECT_EQ(k["m"].get<double>(), 0.3);
}
