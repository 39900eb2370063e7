#ifndef QCOMBPASS_TRANSCEIVER_HPP
#define QCOMBPASS_TRANSCEIVER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "phases.hpp"

namespace qcombpass {

inline constexpr double kSpeedOfLight = 299792458.0;

struct CombSpec {
  double lambda_c = 1560e-9;
  double omega_rep = 2.0 * std::numbers::pi * 250e6;
  double tau = 0.5e-9;
  int M = 5;
  double omega_ceo = 0.0;

  void validate() const {
    if (!(lambda_c > 0.0)) throw std::invalid_argument("comb: lambda_c must be positive");
    if (!(omega_rep > 0.0)) throw std::invalid_argument("comb: omega_rep must be positive");
    if (!(tau > 0.0)) throw std::invalid_argument("comb: tau must be positive");
    if (M < 0) throw std::invalid_argument("comb: M must be non-negative");
    if (omega_ceo != 0.0) throw std::invalid_argument("comb: omega_ceo must be zero");
  }

  double rep_rate_hz() const { return omega_rep / (2.0 * std::numbers::pi); }
  double omega_c() const { return 2.0 * std::numbers::pi * kSpeedOfLight / lambda_c; }
  double tooth_omega(int m) const { return omega_c() + m * omega_rep + omega_ceo; }

  bool operator==(const CombSpec&) const = default;
};

struct Overlaps {
  double O_S = 1.0;
  double O_I = 1.0;
  double tau_iI = 0.0;
  double tau_isr = 0.0;
  double tau_srS = 0.0;
  double sigma_t = 0.0;

  void validate() const {
    if (O_S < 0.0 || O_S > 1.0) throw std::invalid_argument("overlaps: O_S must lie in [0,1]");
    if (O_I < 0.0 || O_I > 1.0) throw std::invalid_argument("overlaps: O_I must lie in [0,1]");
    if (sigma_t < 0.0) throw std::invalid_argument("overlaps: sigma_t must be non-negative");
  }

  bool operator==(const Overlaps&) const = default;
};

struct DetectorSpec {
  double mu_d = 1.0;
  double mu_coll = 1.0;

  void validate() const {
    if (mu_d < 0.0 || mu_d > 1.0) throw std::invalid_argument("detector: mu_d must lie in [0,1]");
    if (mu_coll < 0.0 || mu_coll > 1.0) throw std::invalid_argument("detector: mu_coll must lie in [0,1]");
  }

  bool operator==(const DetectorSpec&) const = default;
};

struct PathIdentityFidelity {
  std::complex<double> t_X{1.0, 0.0};
  std::complex<double> t_Y{1.0, 0.0};

  void validate() const {
    if (std::abs(t_X) > 1.0 + 1e-15 || std::abs(t_Y) > 1.0 + 1e-15)
      throw std::invalid_argument("path identity: |t| must not exceed 1");
  }
};

// Imperfect mode matching at the two Y-junctions scales the first-order
// interference amplitude by |t_X| (signal) and |t_Y| (idler).
inline std::pair<double, double> effective_overlaps(const Overlaps& o, const PathIdentityFidelity& f) {
  f.validate();
  return {o.O_S * std::abs(f.t_X), o.O_I * std::abs(f.t_Y)};
}

inline double spectral_weight(int m, const CombSpec& comb) {
  comb.validate();
  if (std::abs(m) > comb.M) throw std::out_of_range("spectral_weight: |m| exceeds M");
  const double k = comb.omega_rep * comb.omega_rep * comb.tau * comb.tau / 4.0;
  double norm = 0.0;
  for (int j = -comb.M; j <= comb.M; ++j) norm += std::exp(-static_cast<double>(j) * j * k);
  return std::exp(-static_cast<double>(m) * m * k) / norm;
}

// g~ = g mu_coll r ell z0/d, limited to g~ <= g when the far-field factor
// would exceed unity at short range.
inline double renormalized_squeezing(double g, const DetectorSpec& det, double r, double ell, double z0, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("renormalized_squeezing: distance must be positive");
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("renormalized_squeezing: r must lie in [0,1]");
  if (ell < 0.0 || ell > 1.0) throw std::invalid_argument("renormalized_squeezing: ell must lie in [0,1]");
  det.validate();
  const double factor = det.mu_coll * r * ell * z0 / d;
  return g * std::min(1.0, factor);
}

inline double photocount(double g_eta, double gtilde_eta, double Phi, double O_S, double O_I, double mu_d) {
  if (g_eta < 0.0 || gtilde_eta < 0.0) throw std::invalid_argument("photocount: squeezing must be non-negative");
  const double s = std::sinh(g_eta);
  const double y = std::tanh(gtilde_eta);
  const double c = std::cos(wrap_two_pi(Phi));
  const double bracket = 1.0 + 2.0 * O_S * O_I * y * (c - y) / (1.0 + y * y - 2.0 * y * c);
  return 2.0 * mu_d * s * s * bracket;
}

inline double baseline_photocount(double g_eta, double mu_d) {
  const double s = std::sinh(g_eta);
  return 2.0 * mu_d * s * s;
}

inline double visibility(double gtilde_eta, double O_S, double O_I) {
  const double y = std::tanh(gtilde_eta);
  const double o = O_S * O_I;
  return 2.0 * o * y / (1.0 + o * y * y);
}

struct PerturbativeCount {
  double value = 0.0;
  bool outside_regime = false;  // g >= 0.3: the O(g^3) truncation is unreliable
};

inline PerturbativeCount perturbative_photocount(double g, double eta, double r, double Psi, double O_S, double O_I,
                                                 double mu_d, bool chopper_on) {
  PerturbativeCount out;
  out.outside_regime = g >= 0.3;
  const double ge = g * eta;
  out.value = 2.0 * mu_d * ge * ge;
  if (chopper_on) out.value += 4.0 * O_S * O_I * mu_d * ge * ge * ge * r * std::cos(Psi);
  return out;
}

using HeightProfile = std::function<double(double)>;

inline double trapezoid(const HeightProfile& f, double a, double b, int panels = 1000) {
  const double h = (b - a) / panels;
  double sum = 0.5 * (f(a) + f(b));
  for (int k = 1; k < panels; ++k) sum += f(a + k * h);
  return sum * h;
}

inline double propagation_phase(double omega, double d, const HeightProfile& refractive_profile = {}) {
  if (d < 0.0) throw std::invalid_argument("propagation_phase: distance must be non-negative");
  if (!refractive_profile) return 2.0 * omega * d / kSpeedOfLight;
  if (d == 0.0) return 0.0;
  return 2.0 * omega / kSpeedOfLight * trapezoid(refractive_profile, 0.0, d);
}

inline double overlap_from_delay(double delay, double sigma_t) {
  if (!(sigma_t > 0.0)) throw std::invalid_argument("overlap_from_delay: sigma_t must be positive");
  return std::exp(-delay * delay / (sigma_t * sigma_t));
}

inline double count_rate(double n_per_pulse, double pulse_rate, double duty_cycle) {
  if (duty_cycle < 0.0 || duty_cycle > 1.0) throw std::invalid_argument("count_rate: duty cycle must lie in [0,1]");
  return n_per_pulse * pulse_rate * duty_cycle;
}

inline std::pair<double, double> strong_squeezing_asymptotics(double g_eta, double gtilde_eta) {
  return {std::exp(2.0 * g_eta) / 2.0, 1.0 - 2.0 * std::exp(-4.0 * gtilde_eta)};
}

}  // namespace qcombpass

#endif  // QCOMBPASS_TRANSCEIVER_HPP
