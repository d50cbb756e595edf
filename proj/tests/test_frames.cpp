#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gup/frames.hpp"
#include "gup/legendre_action.hpp"

using namespace gup;

TEST(GalileanBoost, ExactReferenceEvent) {
  const auto out = galilean_apply(GalileanBoost::make(1.0, 1.0), Event1D{0.0, {1.0}});
  EXPECT_NEAR(out.t, -0.70710678118654752, 1e-15);
  EXPECT_NEAR(out.x[0], 0.70710678118654752, 1e-15);
}

TEST(GalileanBoost, LawsAgreeForSmallVelocity) {
  const Event1D e{2.0, {-1.0}};
  const auto ordinary = galilean_apply(GalileanBoost::make(0.5, 1.0, GalileanLaw::Ordinary), e);
  EXPECT_EQ(ordinary.t, 2.0);
  EXPECT_EQ(ordinary.x[0], 0.0);
  const auto first = galilean_apply(GalileanBoost::make(0.5, 1.0, GalileanLaw::FirstOrder), e);
  EXPECT_DOUBLE_EQ(first.x[0], 0.0);
  EXPECT_DOUBLE_EQ(first.t, 2.0 * 0.875 + 0.5);
}

TEST(GalileanBoost, InfiniteScaleIsOrdinary) {
  const Event1D e{1.5, {0.25}};
  const auto exact = galilean_apply(GalileanBoost{3.0}, e);
  EXPECT_EQ(exact.t, 1.5);
  EXPECT_EQ(exact.x[0], 0.25 + 4.5);
}

TEST(GalileanBoost, TransverseAxesUnchanged) {
  const Event3D e{1.0, {1.0, 2.0, 3.0}};
  const auto out = galilean_apply(GalileanBoost::make(0.7, 2.0), e);
  EXPECT_EQ(out.x[1], 2.0);
  EXPECT_EQ(out.x[2], 3.0);
  EXPECT_NEAR(euclidean_interval(Event3D{}, out, 2.0), euclidean_interval(Event3D{}, e, 2.0),
              1e-13);
}

TEST(GalileanBoost, Validation) {
  EXPECT_THROW(GalileanBoost::make(std::nan(""), 1.0), DomainError);
  EXPECT_THROW(GalileanBoost::make(1.0, 0.0), DomainError);
  EXPECT_THROW(GalileanBoost::make(1.0, -2.0), DomainError);
}

TEST(GalileanBoost, InverseAndLargeVelocity) {
  const auto boost = GalileanBoost::make(10.0, 1.0);
  const Event1D e{0.3, {-0.8}};
  const auto back = galilean_apply(galilean_inverse(boost), galilean_apply(boost, e));
  EXPECT_NEAR(back.t, e.t, 1e-15);
  EXPECT_NEAR(back.x[0], e.x[0], 1e-15);
}

TEST(GalileanBoost, FirstOrderGapOrders) {
  // The printed first-order law keeps -x'V/u^2 unscaled, so the gap to the exact law
  // is x'V^3/(2u^4) at leading order: cubic in V at fixed u, quadratic in 1/u^2 at fixed V.
  const Event1D e{0.0, {1.0}};
  auto gap = [&](double V, double u) {
    const auto a = galilean_apply(GalileanBoost::make(V, u), e);
    const auto b = galilean_apply(GalileanBoost::make(V, u, GalileanLaw::FirstOrder), e);
    return std::abs(a.t - b.t);
  };
  EXPECT_NEAR(gap(0.01, 1.0), 0.5e-6, 1e-9);
  EXPECT_NEAR(gap(0.02, 1.0) / gap(0.01, 1.0), 8.0, 0.01);
  EXPECT_NEAR(gap(0.1, 1.0) / gap(0.1, std::sqrt(2.0)), 4.0, 0.05);
  // On the worldline x' = 0 only the (1 - V^2/2u^2) truncation remains, fourth order.
  auto origin_gap = [&](double V) {
    const Event1D o{1.0, {0.0}};
    const auto a = galilean_apply(GalileanBoost::make(V, 1.0), o);
    const auto b = galilean_apply(GalileanBoost::make(V, 1.0, GalileanLaw::FirstOrder), o);
    return std::abs(a.t - b.t);
  };
  EXPECT_NEAR(origin_gap(0.02) / origin_gap(0.01), 16.0, 0.1);
}

TEST(Composition, TangentAddition) {
  const auto c = galilean_compose(GalileanBoost::make(0.5, 1.0), GalileanBoost::make(0.5, 1.0));
  EXPECT_NEAR(c.V, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(velocity_compose(0.5, GalileanBoost::make(0.5, 1.0)), 4.0 / 3.0, 1e-15);
}

TEST(Composition, MatchesSuccessiveBoosts) {
  const auto b1 = GalileanBoost::make(0.3, 1.2);
  const auto b2 = GalileanBoost::make(-0.9, 1.2);
  const Event1D e{0.4, {2.0}};
  const auto one = galilean_apply(galilean_compose(b1, b2), e);
  const auto two = galilean_apply(b1, galilean_apply(b2, e));
  EXPECT_NEAR(one.t, two.t, 1e-14);
  EXPECT_NEAR(one.x[0], two.x[0], 1e-14);
}

TEST(Composition, BeyondQuarterTurnDiffersByHalfTurn) {
  const auto b1 = GalileanBoost::make(2.0, 1.0);
  const auto b2 = GalileanBoost::make(3.0, 1.0);
  const Event1D e{0.4, {2.0}};
  const auto one = galilean_apply(galilean_compose(b1, b2), e);
  const auto two = galilean_apply(b1, galilean_apply(b2, e));
  EXPECT_NEAR(one.t, -two.t, 1e-14);
  EXPECT_NEAR(one.x[0], -two.x[0], 1e-14);
}

TEST(Composition, Errors) {
  EXPECT_THROW(galilean_compose(GalileanBoost::make(2.0, 1.0), GalileanBoost::make(0.5, 1.0)),
               SingularCompositionError);
  EXPECT_THROW(galilean_compose(GalileanBoost::make(0.2, 1.0),
                                GalileanBoost::make(0.2, 1.0, GalileanLaw::FirstOrder)),
               std::invalid_argument);
  EXPECT_THROW(galilean_compose(GalileanBoost::make(0.2, 1.0), GalileanBoost::make(0.2, 2.0)),
               std::invalid_argument);
}

TEST(LorentzBoost, ReferenceEvent) {
  const auto out = lorentz_apply(LorentzBoost::make(0.6, 1.0), Event1D{0.0, {1.0}});
  EXPECT_NEAR(out.x[0], 1.25, 1e-15);
  EXPECT_NEAR(out.t, 0.75, 1e-15);
}

TEST(LorentzBoost, RejectsSuperluminal) {
  EXPECT_THROW(LorentzBoost::make(1.0, 1.0), SuperluminalBoostError);
  EXPECT_THROW(LorentzBoost::make(-2.0, 1.0), SuperluminalBoostError);
  EXPECT_THROW(LorentzBoost::make(0.5, 0.0), DomainError);
  EXPECT_THROW(lorentz_apply(LorentzBoost{1.5, 1.0}, Event1D{}), SuperluminalBoostError);
}

TEST(LorentzBoost, PreservesIntervalAndInverts) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  const auto boost = LorentzBoost::make(0.999 * 2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const Event1D a{d(rng), {d(rng)}};
    const Event1D b{d(rng), {d(rng)}};
    const double before = minkowski_interval(a, b, 2.0);
    const double after = minkowski_interval(lorentz_apply(boost, a), lorentz_apply(boost, b), 2.0);
    EXPECT_LT(std::abs(after - before) / euclidean_interval(a, b, 2.0), 1e-12);
    const auto back = lorentz_apply(lorentz_inverse(boost), lorentz_apply(boost, a));
    EXPECT_NEAR(back.t, a.t, 1e-12);
    EXPECT_NEAR(back.x[0], a.x[0], 1e-12);
  }
}

TEST(Covariance, ExactBoostKeepsFreeMotionStraight) {
  const auto params = DeformationParameters::from_beta(0.01, 1.0);
  const auto kind = HamiltonianKind::nonrel_exact_1d(params);
  const double u = effective_velocity_1d(params);
  const auto result =
      covariance_residual(kind, GalileanBoost::make(0.3 * u, u), make_state(0.0, 1.0), 5.0, 1e-2);
  EXPECT_LT(result.linearity, 1e-10);
  EXPECT_LT(result.slope_error, 1e-10);
  const auto control = covariance_residual(kind, GalileanBoost::make(0.3 * u, u, GalileanLaw::Ordinary),
                                           make_state(0.0, 1.0), 5.0, 1e-2);
  EXPECT_GT(control.residual(), 1e-4);
  EXPECT_THROW(covariance_residual(HamiltonianKind::nonrel_exact_1d(params, PotentialSpec::harmonic(1)),
                                   GalileanBoost::make(1.0, u), make_state(0.0, 1.0), 1.0, 0.1),
               std::invalid_argument);
}
