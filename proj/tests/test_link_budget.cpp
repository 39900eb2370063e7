#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "qcombpass/link_budget.hpp"

using namespace qcombpass;

namespace {
const BeamSpec kBeam{0.3, 1560e-9};
}

TEST(BeamRadius, ReferenceBeam) {
  EXPECT_NEAR(kBeam.z0(), 181245.73001479576, 1e-6);
  EXPECT_DOUBLE_EQ(beam_radius(0.0, kBeam), 0.3);
  EXPECT_NEAR(beam_radius(100e3, kBeam), 0.34263281812588842, 1e-12);
  EXPECT_NEAR(beam_radius(kBeam.z0(), kBeam), 0.3 * std::sqrt(2.0), 1e-14);
  EXPECT_THROW(beam_radius(-1.0, kBeam), std::invalid_argument);
}

TEST(CollectionEfficiency, ReferenceChain) {
  const CollectionGeometry cg = collection_geometry(kBeam, TargetSpec{});
  EXPECT_NEAR(cg.z_prime0, 236419.44361998615, 1e-5);
  EXPECT_NEAR(cg.w_prime_at_station, 0.37202250128200015, 1e-12);
  EXPECT_NEAR(cg.mu_coll, 0.65028553352032523, 1e-12);
  TargetSpec near;
  near.d = 1e-3;
  EXPECT_NEAR(collection_efficiency(kBeam, near), 1.0, 1e-12);
  double prev = 1.0;
  for (double d : {1e3, 1e4, 1e5, 1e6}) {
    TargetSpec t;
    t.d = d;
    const double mu = collection_efficiency(kBeam, t);
    EXPECT_LT(mu, prev);
    prev = mu;
  }
}

TEST(ReturnField, OnAxisAndFarField) {
  TargetSpec t;
  t.r = 0.0;
  EXPECT_EQ(std::abs(return_field(0.1, 0.0, kBeam, t, 1.0)), 0.0);
  t.r = 1.0;
  EXPECT_NEAR(std::abs(return_field(0.0, 0.0, kBeam, t, 1.0)), 0.67151073843583434, 1e-12);
  double first = 0.0;
  for (double m : {5.0, 10.0, 25.0, 50.0}) {
    TargetSpec far = t;
    far.d = m * kBeam.z0();
    const double v = std::abs(return_field(0.0, 0.0, kBeam, far, 1.0)) * far.d;
    if (first == 0.0) first = v;
    EXPECT_NEAR(v / first, 1.0, 0.02);
  }
}

TEST(RoundtripAttenuation, Profiles) {
  AtmosphereSpec atm;
  EXPECT_DOUBLE_EQ(roundtrip_attenuation(atm, 100e3), 1.0);
  const double d = 100e3;
  const double alpha = -std::log(0.8) / d;
  atm.alpha_profile = [alpha](double) { return alpha; };
  EXPECT_NEAR(roundtrip_attenuation(atm, d), 0.64, 1e-12);
  AtmosphereSpec twice;
  twice.alpha_profile = [alpha](double) { return 2.0 * alpha; };
  EXPECT_NEAR(roundtrip_attenuation(twice, d), 0.64 * 0.64, 1e-12);
  AtmosphereSpec neg;
  neg.alpha_profile = [](double) { return -1.0; };
  EXPECT_THROW(roundtrip_attenuation(neg, d), std::invalid_argument);
}

TEST(CoherenceDiameter, ScalingAndStrongCase) {
  AtmosphereSpec atm;
  atm.cn2_profile = [](double) { return 1e-13; };
  const double r0 = coherence_diameter(atm, 1560e-9, 0.0, 100e3);
  EXPECT_NEAR(r0, 0.0012625903399977837, 1e-9);
  AtmosphereSpec strong;
  strong.cn2_profile = [](double) { return 1e-12; };
  EXPECT_NEAR(coherence_diameter(strong, 1560e-9, 0.0, 100e3) / r0, std::pow(10.0, -0.6), 1e-12);
  EXPECT_NEAR(coherence_diameter(atm, 3120e-9, 0.0, 100e3) / r0, std::pow(2.0, 1.2), 1e-12);
  AtmosphereSpec calm;
  EXPECT_THROW(coherence_diameter(calm, 1560e-9, 0.0, 100e3), std::invalid_argument);
  calm.cn2_profile = [](double) { return 0.0; };
  EXPECT_THROW(coherence_diameter(calm, 1560e-9, 0.0, 100e3), std::invalid_argument);
}

TEST(Turbulence, WanderAndSpread) {
  EXPECT_NEAR(beam_wander_rms(1560e-9, 100e3, 0.3, 0.05), 1.1572647459210276, 1e-12);
  EXPECT_NEAR(beam_wander_rms(1560e-9, 100e3, 0.3, 0.3), 1560e-9 * 100e3 / 0.6, 1e-15);
  EXPECT_NEAR(beam_wander_rms(1560e-9, 200e3, 0.3, 0.05) / beam_wander_rms(1560e-9, 100e3, 0.3, 0.05), 2.0, 1e-14);
  EXPECT_NEAR(beam_spread_rms(1560e-9, 100e3, 0.05), 1.9862536897868538, 1e-12);
  EXPECT_NEAR(beam_spread_rms(1560e-9, 100e3, 0.1), 0.5 * beam_spread_rms(1560e-9, 100e3, 0.05), 1e-15);
  EXPECT_LT(beam_spread_rms(1560e-9, 100e3, 1e12), 1e-12);
  EXPECT_THROW(beam_wander_rms(1560e-9, 100e3, 0.3, 0.0), std::invalid_argument);
}

TEST(IlluminationCheck, TargetSize) {
  TargetSpec t;
  EXPECT_EQ(illumination_check(kBeam, t), Illumination::FullIllumination);
  t.cross_section = 10e-4;
  EXPECT_EQ(illumination_check(kBeam, t), Illumination::PartialIllumination);
  const double w = beam_radius(t.d, kBeam);
  t.cross_section = std::numbers::pi * w * w;
  EXPECT_EQ(illumination_check(kBeam, t), Illumination::FullIllumination);
}

TEST(TabulatedProfile, ParseAndInterpolate) {
  std::istringstream in("# height, value\nz,alpha\n0, 1.0\n100, 3.0\n\n300, 3.0\n");
  const TabulatedProfile p = parse_profile_csv(in);
  EXPECT_DOUBLE_EQ(p(-5.0), 1.0);
  EXPECT_DOUBLE_EQ(p(50.0), 2.0);
  EXPECT_DOUBLE_EQ(p(1e4), 3.0);
  std::istringstream bad("0,1\nfoo\n");
  EXPECT_THROW(parse_profile_csv(bad), std::invalid_argument);
  EXPECT_THROW(TabulatedProfile({{1.0, 0.0}, {1.0, 2.0}}), std::invalid_argument);
}
