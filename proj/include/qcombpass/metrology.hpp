#ifndef QCOMBPASS_METROLOGY_HPP
#define QCOMBPASS_METROLOGY_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "transceiver.hpp"

namespace qcombpass {

struct MetrologyInputs {
  double x = 0.0;  // tanh(g eta)
  double y = 0.0;  // tanh(g~ eta)
  double Phi = 0.0;

  static MetrologyInputs from_squeezing(double g_eta, double gtilde_eta, double Phi) {
    return {std::tanh(g_eta), std::tanh(gtilde_eta), Phi};
  }

  double mean_signal_photons() const { return y * y / (1.0 - y * y); }
};

struct Moments {
  double mean = 0.0;
  double second = 0.0;
  double dphi = 0.0;

  double variance() const { return second - mean * mean; }
};

// sin(Phi) with multiples of pi mapped to an exact zero.
inline double exact_sin(double Phi) {
  const double r = std::remainder(Phi, std::numbers::pi);
  if (std::abs(r) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(Phi))) return 0.0;
  return std::sin(Phi);
}

inline Moments moments(const MetrologyInputs& in) {
  if (!(in.x >= 0.0 && in.x < 1.0 && in.y >= 0.0 && in.y < 1.0))
    throw std::invalid_argument("moments: x and y must lie in [0,1)");
  const double x2 = in.x * in.x;
  const double y = in.y;
  const double c = std::cos(in.Phi);
  const double den = 1.0 + y * y - 2.0 * y * c;
  Moments m;
  m.mean = 2.0 * x2 / (1.0 - x2) * (1.0 + 2.0 * y * (c - y) / den);
  m.second = (1.0 + 2.0 * x2) / (1.0 - x2) * m.mean;
  m.dphi = 4.0 * x2 * y * (1.0 - y * y) * std::abs(exact_sin(in.Phi)) / ((1.0 - x2) * den * den);
  return m;
}

inline constexpr double kInfiniteUncertainty = std::numeric_limits<double>::infinity();

inline double phase_uncertainty(const MetrologyInputs& in) {
  const Moments m = moments(in);
  const double var = m.variance();
  if (var < -1e-12) throw consistency_error("phase_uncertainty: negative photon-number variance");
  if (m.dphi == 0.0) return kInfiniteUncertainty;
  return std::sqrt(std::max(var, 0.0)) / m.dphi;
}

inline double sql_uncertainty(double gtilde_eta) {
  if (gtilde_eta < 0.0) throw std::invalid_argument("sql_uncertainty: squeezing must be non-negative");
  if (gtilde_eta == 0.0) return kInfiniteUncertainty;
  return 1.0 / std::sinh(gtilde_eta);
}

// Channel for region scans: g~ = ratio * g, both multiplied by eta.
struct RegionChannel {
  double gtilde_over_g = 1.0;
  double eta = 1.0;
};

enum class AdvantageCell { Advantage, NoAdvantage, Inconsistent };

inline AdvantageCell advantage_cell(double Phi, double g, const RegionChannel& ch) {
  const double ge = g * ch.eta;
  const double gte = g * ch.gtilde_over_g * ch.eta;
  const double sql = sql_uncertainty(gte);
  if (!std::isfinite(sql)) return AdvantageCell::NoAdvantage;
  const MetrologyInputs in = MetrologyInputs::from_squeezing(ge, gte, Phi);
  if (moments(in).variance() < -1e-12) return AdvantageCell::Inconsistent;
  const double q = phase_uncertainty(in);
  return q < sql ? AdvantageCell::Advantage : AdvantageCell::NoAdvantage;
}

struct AdvantageRegion {
  std::vector<double> phi_axis;
  std::vector<double> g_axis;
  std::vector<std::vector<bool>> advantage;  // [phi][g]
  int inconsistent_cells = 0;

  bool any() const {
    for (const auto& row : advantage)
      for (bool b : row)
        if (b) return true;
    return false;
  }
};

inline AdvantageRegion advantage_region(const std::vector<double>& phi_axis, const std::vector<double>& g_axis,
                                        const RegionChannel& ch) {
  AdvantageRegion out{phi_axis, g_axis, {}, 0};
  out.advantage.assign(phi_axis.size(), std::vector<bool>(g_axis.size(), false));
  for (std::size_t i = 0; i < phi_axis.size(); ++i) {
    for (std::size_t j = 0; j < g_axis.size(); ++j) {
      const AdvantageCell c = advantage_cell(phi_axis[i], g_axis[j], ch);
      if (c == AdvantageCell::Inconsistent) ++out.inconsistent_cells;
      out.advantage[i][j] = c == AdvantageCell::Advantage;
    }
  }
  return out;
}

// Everything needed to recompute g~ at a new distance.
struct DistanceChannel {
  DetectorSpec detector;
  double r = 1.0;
  double ell = 1.0;
  double z0 = 1.0;
  double eta = 1.0;
};

enum class AdvantageMeasure { Difference, Ratio };

// Difference: dPhi_SQL - dPhi_q (positive means advantage).
// Ratio: dPhi_SQL / dPhi_q (above one means advantage).
inline double advantage_at_distance(double d, double g, const DistanceChannel& ch, double Phi,
                                    AdvantageMeasure measure) {
  const double gt = renormalized_squeezing(g, ch.detector, ch.r, ch.ell, ch.z0, d);
  const double sql = sql_uncertainty(gt * ch.eta);
  const MetrologyInputs in = MetrologyInputs::from_squeezing(g * ch.eta, gt * ch.eta, Phi);
  const Moments m = moments(in);
  if (m.variance() < -1e-12 || m.dphi == 0.0 || !std::isfinite(sql))
    return measure == AdvantageMeasure::Ratio ? 0.0 : -kInfiniteUncertainty;
  const double q = phase_uncertainty(in);
  return measure == AdvantageMeasure::Ratio ? sql / q : sql - q;
}

inline std::vector<std::vector<double>> advantage_vs_distance(const std::vector<double>& d_axis,
                                                              const std::vector<double>& squeezing_list,
                                                              const DistanceChannel& ch,
                                                              double Phi = std::numbers::pi / 4.0,
                                                              AdvantageMeasure measure = AdvantageMeasure::Difference) {
  std::vector<std::vector<double>> out(d_axis.size(), std::vector<double>(squeezing_list.size()));
  for (std::size_t i = 0; i < d_axis.size(); ++i)
    for (std::size_t j = 0; j < squeezing_list.size(); ++j)
      out[i][j] = advantage_at_distance(d_axis[i], squeezing_list[j], ch, Phi, measure);
  return out;
}

}  // namespace qcombpass

#endif  // QCOMBPASS_METROLOGY_HPP
