#include <cmath>

#include <gtest/gtest.h>

#include "nckob/branches.hpp"
#include "nckob/oracle.hpp"

namespace {
#include "frozen_values.inc"
}

using nckob::EllipsoidParam;

TEST(Kappa1, KnownRationalPoint) {
  // m = b = 1/4, t = 32/155 gives x = 0.64.
  const EllipsoidParam p(0.25);
  const double v = nckob::v_of_t(p, 32.0 / 155.0);
  const auto d = nckob::kappa1_detail(p, 0.25, v);
  EXPECT_NEAR(d.x, 0.64, 1e-14);
  EXPECT_NEAR(d.kappa, 2.1248339973, 1e-9);
}

TEST(Kappa1, MatchesDiscFamilyReference) {
  for (const auto& c : kKappa1Cases) {
    const EllipsoidParam p(c[0]);
    EXPECT_NEAR(nckob::kappa1(p, c[1], c[2]), c[3], 1e-11 * c[3])
        << c[0] << ' ' << c[1] << ' ' << c[2];
  }
}

TEST(Kappa1, ZeroLimit) {
  for (double b : {0.1, 0.5, 0.9}) {
    const EllipsoidParam p(0.3);
    EXPECT_NEAR(nckob::kappa1(p, b, 0.0), 1.0 / (1.0 - b * b), 1e-14);
  }
}

TEST(Kappa2, MatchesDiscFamilyReference) {
  for (const auto& c : kKappa2Cases) {
    const EllipsoidParam p(c[0]);
    EXPECT_NEAR(nckob::kappa2(p, c[1], c[2]), c[3], 1e-13 * c[3])
        << c[0] << ' ' << c[1] << ' ' << c[2];
  }
}

TEST(Kappa2, ClosedFormAtVEqualsOne) {
  // b^(2m) = 1/2 at m = 1/4, b = 1/2: kappa2(1) = 1 + 1/sqrt(2).
  const EllipsoidParam p(0.25);
  EXPECT_NEAR(nckob::kappa2(p, 0.5, 1.0), 1.0 + 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(nckob::kappa2(p, 0.5, 4.0), 2.3398448098437888, 1e-14);
}

TEST(Kappa2, SlopeMatchesDifferenceQuotient) {
  const EllipsoidParam p(0.2);
  for (double v : {1.5, 3.0, 20.0}) {
    const double h = 1e-6 * v;
    const double fd = (nckob::kappa2(p, 0.4, v + h) - nckob::kappa2(p, 0.4, v - h)) / (2 * h);
    EXPECT_NEAR(nckob::kappa2_slope(p, 0.4, v), fd, 1e-8);
  }
}

TEST(SwitchPoint, MatchesReference) {
  for (const auto& c : kSwitchCases) {
    const EllipsoidParam p(c[0]);
    const auto sp = nckob::switch_point(p, c[1]);
    // The branches cross at a shallow angle for small m and large b; v0 is
    // then only conditioned to a few parts in 1e9.
    EXPECT_NEAR(sp.v0, c[2], 1e-8 * c[2]) << c[0] << ' ' << c[1];
    EXPECT_NEAR(sp.v0, nckob::v_of_t(p, sp.t0), 1e-15 * sp.v0);
    EXPECT_NEAR(std::abs(nckob::switch_equation(p, c[1], sp.x0)), 0.0, 1e-12);
  }
}

TEST(SwitchPoint, BranchesCrossOnce) {
  const EllipsoidParam p(0.25);
  const double b = 0.5;
  const double v0 = nckob::switch_point(p, b).v0;
  for (int i = 1; i < 40; ++i) {
    const double v = 1.0 + (p.vmax() - 1.0) * i / 40.0;
    const double gap = nckob::kappa1(p, b, v) - nckob::kappa2(p, b, v);
    if (v < v0 * (1 - 1e-6)) {
      EXPECT_LT(gap, 0.0) << v;
    } else if (v > v0 * (1 + 1e-6)) {
      EXPECT_GT(gap, 0.0) << v;
    }
  }
}

TEST(TauForms, AgreeWithVForms) {
  const EllipsoidParam p(0.3);
  const double b = 0.6;
  for (double v : {0.2, 1.0, 1.1, 1.15}) {
    const double t = nckob::t_of_v(p, v);
    EXPECT_NEAR(nckob::tau1_of_t(p, b, t), nckob::kappa1(p, b, v), 1e-12);
    EXPECT_NEAR(nckob::tau2_of_t(p, b, t), nckob::kappa2(p, b, v), 1e-12);
  }
  const double v = 1.1;
  EXPECT_NEAR(nckob::tau3_of_t(p, b, nckob::t_of_v(p, v)), nckob::tau3(p, b, v), 1e-9);
}

TEST(TauForms, OrderingAndMergeAcrossGrid) {
  for (double m : {0.05, 0.2, 0.35, 0.45}) {
    for (double b : {0.15, 0.5, 0.85}) {
      const EllipsoidParam p(m);
      EXPECT_TRUE(nckob::oracle::branch_ordering_scan(p, b, 50)) << m << ' ' << b;
      EXPECT_LE(nckob::oracle::root_merge_gap(p, b), 1e-8) << m << ' ' << b;
    }
  }
}

TEST(Branches, DomainErrors) {
  const EllipsoidParam p(0.25);
  EXPECT_THROW(nckob::kappa1(p, 0.0, 0.5), nckob::DomainError);
  EXPECT_THROW(nckob::kappa1(p, 0.5, 2.0), nckob::DomainError);
  EXPECT_THROW(nckob::kappa2(p, 1.0, 2.0), nckob::DomainError);
  EXPECT_THROW(nckob::tau3(p, 0.5, 0.5), nckob::DomainError);
}
