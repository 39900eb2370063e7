#include <cmath>

#include <gtest/gtest.h>

#include "qcombpass/errors.hpp"
#include "qcombpass/fock.hpp"
#include "qcombpass/transceiver.hpp"

using namespace qcombpass;

TEST(TmsvState, ZeroSqueezingIsVacuum) {
  const auto st = tmsv_pure_state({0.0, 1.3}, 5);
  EXPECT_NEAR(std::abs(st.element(0, 0, 0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(st.trace(), 1.0, 1e-15);
  EXPECT_NEAR(number_expectation(st, Mode::Idler), 0.0, 1e-15);
}

// At g = 1.7 a cutoff of 40 keeps only part of the thermal tail
// (tanh^2 1.7 = 0.876), so the normalized state sits below sinh^2 g;
// the frozen value is the truncated geometric mean sum_{n<=40} n u^n / sum u^n.
TEST(TmsvState, MeanPhotonNumberTruncatedAndConverged) {
  const auto st = tmsv_pure_state({1.7, std::numbers::pi}, 40);
  EXPECT_NEAR(number_expectation(st, Mode::Signal), 6.8268892900438, 1e-9);
  EXPECT_NEAR(number_expectation(st, Mode::Idler), number_expectation(st, Mode::Signal), 1e-12);
  EXPECT_LT(number_expectation(st, Mode::Idler), 6.9993683293393349);
  const auto wide = tmsv_pure_state({0.8, 0.0}, 60);
  EXPECT_NEAR(number_expectation(wide, Mode::Idler), std::pow(std::sinh(0.8), 2), 1e-6);
}

TEST(TmsvState, PairPopulationRatio) {
  const auto st = tmsv_pure_state({0.5, 0.0}, 2);
  const double ratio = st.element(1, 1, 1, 1).real() / st.element(0, 0, 0, 0).real();
  EXPECT_NEAR(ratio, 0.21355226703407259, 1e-12);
}

TEST(TmsvState, RejectsBadArguments) {
  EXPECT_THROW(tmsv_pure_state({1.0, 0.0}, 0), std::invalid_argument);
  EXPECT_THROW(tmsv_pure_state({NAN, 0.0}, 4), std::invalid_argument);
}

TEST(TmsvState, IsPureAndHermitian) {
  const auto st = tmsv_pure_state({1.0, 0.4}, 45);
  EXPECT_TRUE(st.is_valid(1e-10));
  EXPECT_NEAR(st.purity(), 1.0, 1e-10);
  EXPECT_NEAR(number_expectation(st, Mode::Signal), 1.3810978455418157, 1e-6);
}

TEST(FockState, SecondMomentOfNumberState) {
  const auto st = TruncatedTwoModeState::fock(4, 0, 2);
  EXPECT_DOUBLE_EQ(second_moment(st, Mode::Idler), 4.0);
  EXPECT_DOUBLE_EQ(second_moment(st, Mode::Signal), 0.0);
  EXPECT_THROW(TruncatedTwoModeState::fock(2, 3, 0), std::out_of_range);
}

TEST(TransceiverDensity, VacuumAtZeroSqueezing) {
  const auto st = build_transceiver_density(0.0, 0.0, PhaseSet{}, 6);
  EXPECT_NEAR(st.element(0, 0, 0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(number_expectation(st, Mode::Idler), 0.0, 1e-15);
}

TEST(TransceiverDensity, BaselineWithoutReturn) {
  const double x = std::tanh(0.34);
  const auto st = build_transceiver_density(x, 0.0, PhaseSet{}, select_cutoff(x, 0.0));
  EXPECT_NEAR(number_expectation(st, Mode::Idler), 0.2402473622980186, 1e-9);
  EXPECT_NEAR(st.raw_trace(), 1.0, 1e-9);
}

TEST(TransceiverDensity, UnitNormalizationIsEnforcedByDefault) {
  const double x = std::tanh(0.34), y = std::tanh(0.2);
  const auto unit = build_transceiver_density(x, y, PhaseSet{}, 30);
  const auto raw = build_transceiver_density(x, y, PhaseSet{}, 30, TraceNormalization::AsWritten);
  EXPECT_NEAR(unit.trace(), 1.0, 1e-12);
  EXPECT_NEAR(raw.trace(), unit.raw_trace(), 1e-12);
  EXPECT_TRUE(unit.is_valid(1e-10));
}

// The state as written is not trace one when y > 0; its trace depends on the
// interference phase.
TEST(TransceiverDensity, RawTraceDependsOnPhase) {
  const double x = std::tanh(0.34), y = std::tanh(0.2);
  const double t0 = build_transceiver_density(x, y, phases_from_interference(0.0), 30).raw_trace();
  const double tpi = build_transceiver_density(x, y, phases_from_interference(std::numbers::pi), 30).raw_trace();
  EXPECT_GT(std::abs(t0 - tpi), 1e-3);
}

TEST(DiagonalContraction, MatchesClosedForm) {
  const double x = std::tanh(0.34), y = std::tanh(0.2);
  for (double Phi : {0.0, 0.7, std::numbers::pi, 4.4}) {
    const double closed = photocount(0.34, 0.2, Phi, 1.0, 1.0, 1.0);
    EXPECT_NEAR(diagonal_contraction_idler_number(x, y, Phi, 200), closed, 1e-12) << Phi;
  }
  EXPECT_NEAR(0.9 * diagonal_contraction_idler_number(x, y, 0.0, 200), 0.32256625375741889, 1e-12);
}

TEST(TruncationTail, Properties) {
  EXPECT_EQ(truncation_tail(0.0, 0.0, 3), 0.0);
  EXPECT_LT(truncation_tail(0.9, 0.0, 50), truncation_tail(0.9, 0.0, 5));
  EXPECT_LT(truncation_tail(0.9, 0.5, 50), truncation_tail(0.9, 0.5, 5));
  EXPECT_THROW(truncation_tail(1.0, 0.2, 5), std::invalid_argument);
}

// Brute-force weight of the generating series u^{n+p} v^q (u = x^2, v = y^2)
// outside the kept index box, normalized to the full series.
TEST(TruncationTail, BoundsDiscardedSeriesWeight) {
  const double x = 0.5, y = 0.3, u = x * x, v = y * y;
  for (int K : {3, 8, 15}) {
    double lost = 0.0;
    for (int n = 0; n < 200; ++n)
      for (int p = 0; p < 200; ++p)
        for (int q = 0; q < 200; ++q)
          if (n + p > K || n + q > K) lost += std::pow(u, n + p) * std::pow(v, q);
    lost *= (1 - u) * (1 - u) * (1 - v);
    EXPECT_LE(lost, truncation_tail(x, y, K)) << K;
    EXPECT_GE(2.0 * lost, truncation_tail(x, y, K)) << K;
  }
}

TEST(SelectCutoff, MeetsToleranceOrThrows) {
  const int K = select_cutoff(0.5, 0.3, 1e-10);
  EXPECT_LE(truncation_tail(0.5, 0.3, K), 1e-10);
  EXPECT_GT(truncation_tail(0.5, 0.3, K - 1), 1e-10);
  EXPECT_THROW(select_cutoff(0.99, 0.99, 1e-12, 20), convergence_error);
}
