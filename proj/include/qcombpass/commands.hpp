#ifndef QCOMBPASS_COMMANDS_HPP
#define QCOMBPASS_COMMANDS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "checks.hpp"
#include "csv.hpp"
#include "link_budget.hpp"
#include "metrology.hpp"
#include "scenario.hpp"
#include "strobe.hpp"
#include "transceiver.hpp"
#include "units.hpp"
#include "wigner.hpp"

namespace qcombpass {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) v.push_back(steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1));
    return v;
  }

  void validate() const {
    if (steps < 1) throw std::invalid_argument("empty range: need at least one step");
    if (steps > 1 && !(hi > lo)) throw std::invalid_argument("empty range: HI must exceed LO");
  }
};

// "LO:HI:N"; LO and HI accept the unit syntax of the given dimension.
inline Range parse_range(const std::string& text, Dimension dim = Dimension::Dimensionless) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos)
    throw std::invalid_argument("range must look like LO:HI:N, got '" + text + "'");
  Range r;
  r.lo = parse_quantity(text.substr(0, a), dim);
  r.hi = parse_quantity(text.substr(a + 1, b - a - 1), dim);
  const double n = parse_quantity(text.substr(b + 1), Dimension::Dimensionless);
  if (n != std::floor(n)) throw std::invalid_argument("range step count must be an integer");
  r.steps = static_cast<int>(n);
  r.validate();
  return r;
}

enum class SweepAxis { Distance, Phase, Squeezing };

inline SweepAxis parse_axis(const std::string& s) {
  if (s == "distance") return SweepAxis::Distance;
  if (s == "phase") return SweepAxis::Phase;
  if (s == "squeezing") return SweepAxis::Squeezing;
  throw std::invalid_argument("unknown axis '" + s + "' (distance|phase|squeezing)");
}

// Distance ranges are in km, phase ranges in radians, squeezing in units of g.
inline std::string cmd_photocount_sweep(const SensingScenario& s, SweepAxis axis, const Range& range,
                                        const std::vector<double>& squeezing_list = {}) {
  range.validate();
  const char* axis_name = axis == SweepAxis::Distance ? "d_km" : axis == SweepAxis::Phase ? "phi" : "g_axis";
  CsvTable table({axis_name, "g", "gtilde_eta", "n", "n_max", "n_min", "baseline", "visibility"});
  std::vector<double> gs = squeezing_list;
  if (gs.empty() || axis == SweepAxis::Squeezing) gs = {s.squeeze.g};
  const double eta = s.eta();
  const double Phi0 = s.phases().interference_phase();
  for (double g0 : gs) {
    for (double v : range.values()) {
      double g = g0, d = s.target.d, Phi = Phi0;
      if (axis == SweepAxis::Distance) d = v * 1e3;
      if (axis == SweepAxis::Phase) Phi = v;
      if (axis == SweepAxis::Squeezing) g = v;
      if (!(d > 0.0)) throw std::invalid_argument("distance must be positive");
      const double ge = g * eta;
      const double gte = s.gtilde_at(g, d) * eta;
      const double O_S = s.overlaps.O_S, O_I = s.overlaps.O_I;
      table.add_row({v, g, gte, photocount(ge, gte, Phi, O_S, O_I, s.mu_d), photocount(ge, gte, 0.0, O_S, O_I, s.mu_d),
                     photocount(ge, gte, std::numbers::pi, O_S, O_I, s.mu_d), baseline_photocount(ge, s.mu_d),
                     visibility(gte, O_S, O_I)});
    }
  }
  return table.str();
}

// Reflectance axis is r^2; distance axis in km.
inline std::string cmd_visibility_map(const SensingScenario& s, const Range& r2_axis, const Range& d_axis_km) {
  r2_axis.validate();
  d_axis_km.validate();
  CsvTable table({"reflectance", "d_km", "visibility"});
  for (double r2 : r2_axis.values()) {
    if (r2 < 0.0 || r2 > 1.0) throw std::invalid_argument("reflectance must lie in [0,1]");
    SensingScenario t = s;
    t.target.r = std::sqrt(r2);
    for (double dk : d_axis_km.values()) {
      if (!(dk > 0.0)) throw std::invalid_argument("distance must be positive");
      const double gte = t.gtilde_at(t.squeeze.g, dk * 1e3) * t.eta();
      table.add_row({r2, dk, visibility(gte, t.overlaps.O_S, t.overlaps.O_I)});
    }
  }
  return table.str();
}

enum class WignerKind { Transceiver, Tmsv };

struct WignerCommandResult {
  std::string csv;
  int term_cutoff = 0;
  double spot_check_max_deviation = 0.0;
  int spot_checks = 0;
  double minimum = 0.0;
  double peak_x_plus = 0.0;
  double peak_x_minus = 0.0;
};

inline WignerCommandResult cmd_wigner(const SensingScenario& s, WignerKind which, const WignerAxis& x_plus,
                                      const WignerAxis& x_minus) {
  WignerCommandResult out;
  WignerGrid grid;
  if (which == WignerKind::Tmsv) {
    const SqueezeParams sp = s.squeeze;
    grid = wigner_grid(x_plus, x_minus, [&](const PhaseSpacePoint& p) { return wigner_tmsv(p, sp); });
  } else {
    const double x = std::tanh(s.g_eta());
    const double y = std::tanh(s.gtilde_eta());
    const PhaseSet ph = s.phases();
    const int K = select_cutoff(x, y);
    out.term_cutoff = K;
    const TruncatedTwoModeState st = build_transceiver_density(x, y, ph, K);
    const double norm = st.raw_trace();
    grid = wigner_grid(x_plus, x_minus,
                       [&](const PhaseSpacePoint& p) { return wigner_qcombpass_series(p, x, y, ph, K) / norm; });
    // Oracle spot check on five fixed, scattered grid points.
    for (int k = 0; k < 5; ++k) {
      const int i = (7919 * k + 3) % x_plus.count;
      const int j = (104729 * k + 11) % x_minus.count;
      const double oracle = wigner_from_density(st, PhaseSpacePoint::from_rotated(x_plus.at(i), x_minus.at(j)));
      out.spot_check_max_deviation = std::max(out.spot_check_max_deviation, std::abs(oracle - grid.value(i, j)));
      ++out.spot_checks;
    }
  }
  CsvTable table({"x_plus", "x_minus", "w"});
  double best = -1e300;
  out.minimum = 1e300;
  for (int i = 0; i < x_plus.count; ++i)
    for (int j = 0; j < x_minus.count; ++j) {
      const double w = grid.value(i, j);
      table.add_row({x_plus.at(i), x_minus.at(j), w});
      out.minimum = std::min(out.minimum, w);
      if (w > best) {
        best = w;
        out.peak_x_plus = x_plus.at(i);
        out.peak_x_minus = x_minus.at(j);
      }
    }
  out.csv = table.str();
  return out;
}

inline std::string cmd_metrology_region(const SensingScenario& s, const Range& g_axis, int phi_points,
                                        std::optional<double> eta = std::nullopt, int* inconsistent = nullptr) {
  g_axis.validate();
  if (phi_points < 1) throw std::invalid_argument("need at least one phase sample");
  RegionChannel ch = s.region_channel();
  if (eta) ch.eta = *eta;
  std::vector<double> phis;
  for (int k = 0; k < phi_points; ++k) phis.push_back(2.0 * std::numbers::pi * k / phi_points);
  const AdvantageRegion reg = advantage_region(phis, g_axis.values(), ch);
  if (inconsistent) *inconsistent = reg.inconsistent_cells;
  CsvTable table({"phi", "g", "advantage"});
  for (std::size_t i = 0; i < phis.size(); ++i)
    for (std::size_t j = 0; j < reg.g_axis.size(); ++j)
      table.add_row({phis[i], reg.g_axis[j], reg.advantage[i][j] ? 1.0 : 0.0});
  return table.str();
}

inline std::string cmd_metrology_distance(const SensingScenario& s, const Range& d_axis_km,
                                          const std::vector<double>& squeezing_list, AdvantageMeasure measure,
                                          std::optional<double> eta = std::nullopt,
                                          double Phi = std::numbers::pi / 4.0) {
  d_axis_km.validate();
  DistanceChannel ch = s.distance_channel();
  if (eta) ch.eta = *eta;
  std::vector<double> ds;
  for (double dk : d_axis_km.values()) {
    if (!(dk > 0.0)) throw std::invalid_argument("distance must be positive");
    ds.push_back(dk * 1e3);
  }
  const auto m = advantage_vs_distance(ds, squeezing_list, ch, Phi, measure);
  CsvTable table({"d_km", "g", "delta"});
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = 0; j < squeezing_list.size(); ++j) table.add_row({ds[i] / 1e3, squeezing_list[j], m[i][j]});
  return table.str();
}

inline std::string cmd_link_budget(const SensingScenario& s) {
  const BeamSpec beam = s.beam();
  const CollectionGeometry cg = collection_geometry(beam, s.target);
  CsvTable table({"quantity", "value"});
  auto row = [&](const std::string& k, double v) { table.add_text_row({k, format_fixed9(v)}); };
  row("z0_m", beam.z0());
  row("theta_rad", beam.theta());
  row("w_d_m", beam_radius(s.target.d, beam));
  row("z0_prime_m", cg.z_prime0);
  row("w_prime_0_m", cg.w_prime_at_station);
  row("mu_coll", s.mu_coll());
  row("ell", s.ell_at(s.target.d));
  row("eta", s.eta());
  row("gtilde", s.gtilde());
  row("gtilde_eta", s.gtilde_eta());
  row("visibility", visibility(s.gtilde_eta(), s.overlaps.O_S, s.overlaps.O_I));
  row("n_max", s.photocount_at(0.0));
  row("count_rate_hz", count_rate(s.photocount_at(0.0), s.pulse_rate, s.duty_cycle));
  table.add_text_row({"illumination", to_string(illumination_check(beam, s.target))});
  std::optional<double> r0 = s.r0;
  const AtmosphereSpec atm = s.atmosphere();
  if (!r0 && atm.cn2_profile) r0 = coherence_diameter(atm, beam.lambda, 0.0, s.target.d);
  if (r0) {
    row("r0_m", *r0);
    row("beam_wander_rms_m", beam_wander_rms(beam.lambda, s.target.d, beam.w0, *r0));
    row("beam_spread_rms_m", beam_spread_rms(beam.lambda, s.target.d, *r0));
    table.add_text_row({"turbulence_warning", turbulence_warning(beam, s.target, *r0) ? "1" : "0"});
  }
  return table.str();
}

struct StrobeOptions {
  int target_sites = 10;
  long steps = 40;
  int p = 1;
  bool chopper = true;
  double g = 0.1;
  double eta = 1.0;
  double r = 1.0;
  double Psi = 0.0;
  double O_S = 1.0;
  double O_I = 1.0;
  double mu_d = 1.0;
};

inline nlohmann::json to_json(const strobe::PulseRecord& r, long step) {
  nlohmann::json j;
  j["step"] = step;
  j["species"] = strobe::to_string(r.species);
  j["birth"] = r.birth_step;
  j["position"] = r.position;
  j["direction"] = strobe::to_string(r.direction);
  j["order"] = r.amplitude_order;
  j["phase"] = r.phase;
  return j;
}

// Returns the detection CSV; per-step JSON lines go to `dump` when given.
inline std::string cmd_strobe(const StrobeOptions& o, std::ostream* dump = nullptr) {
  using namespace strobe;
  LatticeConfig cfg;
  cfg.target_position = o.target_sites;
  cfg.total_steps = o.steps;
  cfg.eta = o.eta;
  cfg.validate();
  ChopperSchedule sch{o.p, 0, o.chopper};
  sch.validate();
  World w = initial_world(o.g);
  while (w.time < cfg.total_steps) {
    w = step(std::move(w), cfg, sch);
    if (dump)
      for (const auto& r : w.pulses) *dump << to_json(r, w.time).dump() << "\n";
  }
  CsvTable table({"step", "idler_birth", "twin_chopped", "interference", "count", "perturbative"});
  for (const auto& e : w.detections) {
    if (e.step < cfg.steady_step()) continue;
    const double n = event_photocount(e, o.g, o.r, o.Psi, o.O_S, o.O_I, o.mu_d);
    const double ref = perturbative_photocount(o.g, o.eta, o.r, o.Psi, o.O_S, o.O_I, o.mu_d, e.twin_chopped).value;
    table.add_text_row({std::to_string(e.step), std::to_string(e.idler_birth), e.twin_chopped ? "1" : "0",
                        e.has_interference() ? "1" : "0", format_fixed9(n), format_fixed9(ref)});
  }
  return table.str();
}

struct ValidateReport {
  std::string text;
  bool failed = false;
};

inline ValidateReport cmd_validate(const SensingScenario* s, const checks::Options& o) {
  ValidateReport rep;
  std::ostringstream out;
  for (const auto& c : checks::run_all(s, o)) {
    out << c.line() << "\n";
    if (c.status == checks::Status::Fail) rep.failed = true;
  }
  rep.text = out.str();
  return rep;
}

}  // namespace qcombpass

#endif  // QCOMBPASS_COMMANDS_HPP
