#ifndef QCOMBPASS_PHASES_HPP
#define QCOMBPASS_PHASES_HPP

#include <cmath>
#include <numbers>

namespace qcombpass {

struct SqueezeParams {
  double g = 0.0;
  double phi_g = 0.0;

  double squeezing_db() const { return -10.0 * std::log10(std::exp(-2.0 * g)); }
};

// Phases entering the interference term. phi_s is the round-trip signal
// propagation phase (the "s_r" phase of the reflected probe).
struct PhaseSet {
  double phi_s = 0.0;
  double phi_i = 0.0;
  double phi_S = 0.0;
  double phi_I = 0.0;
  double phi_r = 0.0;
  double phi_xi = 0.0;
  double phi_g = 0.0;

  double interference_phase() const {
    return phi_s + phi_i - phi_S - phi_I + phi_r + phi_xi + phi_g;
  }
  double perturbative_phase() const { return phi_s + phi_i - phi_S - phi_I + phi_r; }

  // Phase attached to each index pair of the transceiver state.
  double reverse_pair_phase() const { return phi_S + phi_I + phi_g; }
  double forward_idler_phase() const { return phi_i + phi_g; }
  double reflected_signal_phase() const { return phi_s + phi_r + phi_g + phi_xi; }

  bool operator==(const PhaseSet&) const = default;
};

// Builds a PhaseSet whose interference phase equals Phi with every other
// contribution set to zero.
inline PhaseSet phases_from_interference(double Phi) {
  PhaseSet p;
  p.phi_s = Phi;
  return p;
}

inline double wrap_two_pi(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, two_pi);
  return r < 0.0 ? r + two_pi : r;
}

}  // namespace qcombpass

#endif  // QCOMBPASS_PHASES_HPP
