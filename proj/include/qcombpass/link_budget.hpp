#ifndef QCOMBPASS_LINK_BUDGET_HPP
#define QCOMBPASS_LINK_BUDGET_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "transceiver.hpp"

namespace qcombpass {

struct BeamSpec {
  double w0 = 0.3;
  double lambda = 1560e-9;

  double theta() const { return lambda / (std::numbers::pi * w0); }
  double z0() const { return std::numbers::pi * w0 * w0 / lambda; }

  void validate() const {
    if (!(w0 > 0.0)) throw std::invalid_argument("beam: w0 must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("beam: lambda must be positive");
  }
};

struct TargetSpec {
  double d = 100e3;
  double r = std::sqrt(0.5);
  double phi_r = 0.0;
  double cross_section = 25.0;

  void validate() const {
    if (!(d > 0.0)) throw std::invalid_argument("target: distance must be positive");
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("target: r must lie in [0,1]");
    if (cross_section < 0.0) throw std::invalid_argument("target: cross section must be non-negative");
  }
};

// Samples (z, value) with linear interpolation; constant extrapolation.
class TabulatedProfile {
 public:
  TabulatedProfile() = default;
  explicit TabulatedProfile(std::vector<std::pair<double, double>> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("profile needs at least one sample");
    for (std::size_t k = 1; k < samples_.size(); ++k) {
      if (!(samples_[k].first > samples_[k - 1].first))
        throw std::invalid_argument("profile heights must be strictly increasing");
    }
  }

  double operator()(double z) const {
    if (z <= samples_.front().first) return samples_.front().second;
    if (z >= samples_.back().first) return samples_.back().second;
    auto hi = std::upper_bound(samples_.begin(), samples_.end(), z,
                               [](double v, const std::pair<double, double>& s) { return v < s.first; });
    auto lo = hi - 1;
    const double t = (z - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  }

  const std::vector<std::pair<double, double>>& samples() const { return samples_; }

 private:
  std::vector<std::pair<double, double>> samples_;
};

inline TabulatedProfile parse_profile_csv(std::istream& in) {
  std::vector<std::pair<double, double>> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double z = 0.0;
    double v = 0.0;
    if (!(fields >> z >> v)) {
      if (samples.empty()) continue;  // header row
      throw std::invalid_argument("profile: malformed row " + std::to_string(lineno));
    }
    samples.emplace_back(z, v);
  }
  return TabulatedProfile(std::move(samples));
}

inline TabulatedProfile load_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile " + path);
  return parse_profile_csv(in);
}

struct AtmosphereSpec {
  double ell = 1.0;                           // round-trip attenuation used when no profile is given
  std::optional<HeightProfile> alpha_profile;  // extinction coefficient, 1/m
  std::optional<HeightProfile> cn2_profile;    // refractive-index structure constant, m^{-2/3}
  double phi_xi = 0.0;
};

inline double beam_radius(double z, const BeamSpec& beam) {
  if (z < 0.0) throw std::invalid_argument("beam_radius: z must be non-negative");
  const double a = z / beam.z0();
  return beam.w0 * std::sqrt(1.0 + a * a);
}

inline std::complex<double> return_field(double x, double y, const BeamSpec& beam, const TargetSpec& target,
                                         std::complex<double> E0) {
  if (!(target.d > 0.0)) throw std::invalid_argument("return_field: distance must be positive");
  const double z = 2.0 * target.d;
  const double z0 = beam.z0();
  const double w = beam_radius(z, beam);
  const double R = z + z0 * z0 / z;
  const double k = 2.0 * std::numbers::pi / beam.lambda;
  const double rho2 = x * x + y * y;
  return std::polar(target.r, target.phi_r) * E0 * (beam.w0 / w) * std::exp(-rho2 / (w * w)) *
         std::polar(1.0, k * rho2 / (2.0 * R));
}

struct CollectionGeometry {
  double w_prime0 = 0.0;   // waist of the returning beam, w(d)
  double z_prime0 = 0.0;   // its Rayleigh range
  double w_prime_at_station = 0.0;
  double mu_coll = 1.0;
};

inline CollectionGeometry collection_geometry(const BeamSpec& beam, const TargetSpec& target) {
  CollectionGeometry c;
  c.w_prime0 = beam_radius(target.d, beam);
  BeamSpec back{c.w_prime0, beam.lambda};
  c.z_prime0 = back.z0();
  c.w_prime_at_station = beam_radius(target.d, back);
  const double ratio = beam.w0 / c.w_prime_at_station;
  c.mu_coll = ratio * ratio;
  return c;
}

inline double collection_efficiency(const BeamSpec& beam, const TargetSpec& target) {
  return collection_geometry(beam, target).mu_coll;
}

inline double roundtrip_attenuation(const AtmosphereSpec& atm, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("roundtrip_attenuation: distance must be positive");
  if (!atm.alpha_profile) {
    if (!(atm.ell > 0.0) || atm.ell > 1.0) throw std::invalid_argument("atmosphere: ell must lie in (0,1]");
    return atm.ell;
  }
  const HeightProfile& alpha = *atm.alpha_profile;
  const int panels = 1000;
  for (int k = 0; k <= panels; ++k) {
    if (alpha(d * k / panels) < 0.0) throw std::invalid_argument("atmosphere: negative extinction");
  }
  return std::exp(-2.0 * trapezoid(alpha, 0.0, d, panels));
}

inline double coherence_diameter(const AtmosphereSpec& atm, double lambda, double d_i, double d) {
  if (!(d > d_i) || d_i < 0.0) throw std::invalid_argument("coherence_diameter: need d > d_i >= 0");
  if (!atm.cn2_profile) throw std::invalid_argument("no turbulence: r0 undefined (infinite)");
  const double integral = trapezoid(*atm.cn2_profile, d_i, d);
  if (integral < 0.0) throw std::invalid_argument("coherence_diameter: negative Cn2 integral");
  if (integral == 0.0) throw std::invalid_argument("no turbulence: r0 undefined (infinite)");
  return 0.186 * std::pow(lambda * lambda / integral, 0.6);
}

inline double beam_wander_rms(double lambda, double d, double w0, double r0) {
  if (!(lambda > 0.0 && d > 0.0 && w0 > 0.0 && r0 > 0.0))
    throw std::invalid_argument("beam_wander_rms: arguments must be positive");
  return lambda * d / (2.0 * w0) * std::pow(w0 / r0, 5.0 / 6.0);
}

inline double beam_spread_rms(double lambda, double d, double r0) {
  if (!(lambda > 0.0 && d > 0.0 && r0 > 0.0)) throw std::invalid_argument("beam_spread_rms: arguments must be positive");
  return 2.0 * lambda * d / (std::numbers::pi * r0);
}

enum class Illumination { FullIllumination, PartialIllumination };

inline Illumination illumination_check(const BeamSpec& beam, const TargetSpec& target) {
  const double w = beam_radius(target.d, beam);
  return target.cross_section >= std::numbers::pi * w * w ? Illumination::FullIllumination
                                                          : Illumination::PartialIllumination;
}

inline const char* to_string(Illumination i) {
  return i == Illumination::FullIllumination ? "full" : "partial";
}

// Spreading is only a point estimate; flag it when it is no longer small
// compared with the diffraction-limited spot.
inline bool turbulence_warning(const BeamSpec& beam, const TargetSpec& target, double r0) {
  return beam_spread_rms(beam.lambda, target.d, r0) > 0.1 * beam_radius(target.d, beam);
}

}  // namespace qcombpass

#endif  // QCOMBPASS_LINK_BUDGET_HPP
