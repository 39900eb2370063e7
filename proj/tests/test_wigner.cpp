#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qcombpass/fock.hpp"
#include "qcombpass/wigner.hpp"

using namespace qcombpass;

TEST(WignerTmsv, VacuumPeakAndIsotropy) {
  const SqueezeParams vac{0.0, 0.0};
  EXPECT_NEAR(wigner_tmsv(PhaseSpacePoint{}, vac), kUnitWignerPrefactor, 1e-15);
  const double a = wigner_tmsv(PhaseSpacePoint::from_rotated(0.7, 0.0), vac);
  const double b = wigner_tmsv(PhaseSpacePoint::from_rotated(0.0, 0.7), vac);
  EXPECT_NEAR(a, b, 1e-15);
}

TEST(WignerTmsv, SqueezedAlongXPlusForPiPhase) {
  const SqueezeParams sp{1.0, std::numbers::pi};
  const double along_plus = wigner_tmsv(PhaseSpacePoint::from_rotated(0.5, 0.0), sp);
  const double along_minus = wigner_tmsv(PhaseSpacePoint::from_rotated(0.0, 0.5), sp);
  EXPECT_LT(along_plus, along_minus);
}

TEST(WignerTmsv, UnitIntegralWithFourOverPiSquared) {
  const SqueezeParams sp{0.6, std::numbers::pi};
  const double e = std::exp(-0.6), E = std::exp(0.6);
  const double box[4] = {6 * e, 6 * E, 6 * E, 6 * e};
  EXPECT_NEAR(tmsv_integral(sp, kUnitWignerPrefactor, box, 31), 1.0, 1e-6);
}

TEST(WignerTmsv, MatchesDisplacedParityOracle) {
  const SqueezeParams sp{1.0, 0.4};
  const auto st = tmsv_pure_state(sp, 45);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const auto pt = PhaseSpacePoint::from_rotated(-1.0 + 0.5 * i, -1.0 + 0.5 * j, 0.2, -0.3);
      EXPECT_NEAR(wigner_from_density(st, pt), wigner_tmsv(pt, sp), 1e-6);
    }
}

TEST(WignerOracle, VacuumAndOddFockState) {
  const auto vac = TruncatedTwoModeState::fock(3, 0, 0);
  EXPECT_NEAR(wigner_from_density(vac, PhaseSpacePoint{}), 4.0 / (std::numbers::pi * std::numbers::pi), 1e-14);
  const auto one = TruncatedTwoModeState::fock(3, 1, 0);
  EXPECT_LT(wigner_from_density(one, PhaseSpacePoint{}), 0.0);
}

TEST(WignerSeries, VacuumLimit) {
  EXPECT_NEAR(wigner_qcombpass_series(PhaseSpacePoint{}, 0.0, 0.0, PhaseSet{}, 4), kUnitWignerPrefactor, 1e-15);
}

TEST(WignerSeries, AgreesWithOracleAndIntegratesToTrace) {
  const double x = std::tanh(0.46), y = std::tanh(0.245);
  PhaseSet ph;
  ph.phi_s = std::numbers::pi / 2;
  ph.phi_g = std::numbers::pi;
  const int K = select_cutoff(x, y);
  const auto st = build_transceiver_density(x, y, ph, K);
  for (double xp : {-1.5, 0.0, 0.8})
    for (double xm : {-0.4, 1.1}) {
      const auto pt = PhaseSpacePoint::from_rotated(xp, xm, 0.3, -0.2);
      EXPECT_NEAR(wigner_qcombpass_series(pt, x, y, ph, K) / st.raw_trace(), wigner_from_density(st, pt), 1e-6);
    }
  const double half = std::sqrt(static_cast<double>(K)) + 4.0;
  EXPECT_NEAR(wigner_series_integral(x, y, ph, K, {half, 81}), st.raw_trace(), 1e-8);
}

TEST(JIntegral, FiniteDifferenceAgrees) {
  const cplx alpha{0.3, -0.2};
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      const cplx exact = j_integral(alpha, a, b);
      const cplx fd = j_integral_finite_difference(alpha, a, b);
      const double tol = a + b <= 2 ? 1e-6 : 1e-4;
      EXPECT_LT(std::abs(exact - fd), tol * std::max(1.0, std::abs(exact))) << a << "," << b;
    }
}

TEST(WignerGrid, PeakIsDisplacedForProbePhase) {
  const double x = std::tanh(0.46), y = std::tanh(0.245);
  PhaseSet ph;
  ph.phi_s = std::numbers::pi / 2;
  ph.phi_g = std::numbers::pi;
  const int K = select_cutoff(x, y);
  const auto st = build_transceiver_density(x, y, ph, K);
  const WignerAxis ax{-2.0, 2.0, 21};
  const auto grid = wigner_grid(ax, ax, [&](const PhaseSpacePoint& p) {
    return wigner_qcombpass_series(p, x, y, ph, K) / st.raw_trace();
  });
  int bi = 0, bj = 0;
  for (int i = 0; i < ax.count; ++i)
    for (int j = 0; j < ax.count; ++j)
      if (grid.value(i, j) > grid.value(bi, bj)) {
        bi = i;
        bj = j;
      }
  EXPECT_FALSE(bi == 10 && bj == 10);
  EXPECT_THROW(wigner_grid({1.0, 0.0, 3}, ax, [](const PhaseSpacePoint&) { return 0.0; }), std::invalid_argument);
}

TEST(PhaseSpacePoint, RotatedCoordinatesRoundTrip) {
  const auto p = PhaseSpacePoint::from_rotated(0.3, -0.7, 1.1, 0.2);
  EXPECT_NEAR(p.x_plus(), 0.3, 1e-15);
  EXPECT_NEAR(p.x_minus(), -0.7, 1e-15);
  EXPECT_NEAR(p.y_plus(), 1.1, 1e-15);
  EXPECT_NEAR(p.y_minus(), 0.2, 1e-15);
}
