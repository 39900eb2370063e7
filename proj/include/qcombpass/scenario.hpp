#ifndef QCOMBPASS_SCENARIO_HPP
#define QCOMBPASS_SCENARIO_HPP

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "link_budget.hpp"
#include "metrology.hpp"
#include "phases.hpp"
#include "transceiver.hpp"
#include "units.hpp"

namespace qcombpass {

// One fully specified run. Defaults reproduce the reference parameter set
// (1560 nm comb at 250 MHz, 0.5 ns pulses, 11 teeth, 30 cm waist, 100 km
// target with r^2 = 0.5, round-trip loss 0.64, mu_d = 0.9).
struct SensingScenario {
  SqueezeParams squeeze{1.7, 0.0};
  CombSpec comb;
  int tooth = 0;
  std::optional<double> eta_override;
  double pulse_rate = 125e6;

  double w0 = 0.3;
  TargetSpec target;

  double ell = 0.64;
  double phi_xi = 0.0;
  std::optional<double> r0;
  std::optional<double> cn2;  // uniform structure constant over the path
  std::string alpha_profile_path;
  std::string cn2_profile_path;
  std::optional<TabulatedProfile> alpha_profile;
  std::optional<TabulatedProfile> cn2_profile;

  double mu_d = 0.9;
  std::optional<double> mu_coll_override;
  double duty_cycle = 0.5;

  Overlaps overlaps;

  double phi_s = 0.0;
  double phi_i = 0.0;
  double phi_S = 0.0;
  double phi_I = 0.0;

  BeamSpec beam() const { return {w0, comb.lambda_c}; }

  double eta() const { return eta_override ? *eta_override : spectral_weight(tooth, comb); }

  PhaseSet phases() const {
    PhaseSet p;
    p.phi_s = phi_s;
    p.phi_i = phi_i;
    p.phi_S = phi_S;
    p.phi_I = phi_I;
    p.phi_r = target.phi_r;
    p.phi_xi = phi_xi;
    p.phi_g = squeeze.phi_g;
    return p;
  }

  AtmosphereSpec atmosphere() const {
    AtmosphereSpec a;
    a.ell = ell;
    a.phi_xi = phi_xi;
    if (alpha_profile) a.alpha_profile = HeightProfile(*alpha_profile);
    if (cn2_profile) a.cn2_profile = HeightProfile(*cn2_profile);
    else if (cn2) {
      const double c = *cn2;
      a.cn2_profile = HeightProfile([c](double) { return c; });
    }
    return a;
  }

  double mu_coll_at(double d) const {
    if (mu_coll_override) return *mu_coll_override;
    TargetSpec t = target;
    t.d = d;
    return collection_efficiency(beam(), t);
  }
  double mu_coll() const { return mu_coll_at(target.d); }

  double ell_at(double d) const { return roundtrip_attenuation(atmosphere(), d); }

  double gtilde_at(double g, double d) const {
    return renormalized_squeezing(g, DetectorSpec{mu_d, mu_coll_at(d)}, target.r, ell_at(d), beam().z0(), d);
  }
  double gtilde() const { return gtilde_at(squeeze.g, target.d); }
  double g_eta() const { return squeeze.g * eta(); }
  double gtilde_eta() const { return gtilde() * eta(); }

  double photocount_at(double Phi) const {
    return photocount(g_eta(), gtilde_eta(), Phi, overlaps.O_S, overlaps.O_I, mu_d);
  }

  RegionChannel region_channel() const {
    const double g = squeeze.g > 0.0 ? squeeze.g : 1.0;
    return {gtilde_at(g, target.d) / g, eta()};
  }

  DistanceChannel distance_channel() const {
    return {DetectorSpec{mu_d, mu_coll()}, target.r, ell_at(target.d), beam().z0(), eta()};
  }

  void validate() const {
    if (!std::isfinite(squeeze.g) || squeeze.g < 0.0) throw scenario_error("squeeze.g: must be finite and >= 0");
    comb.validate();
    if (std::abs(tooth) > comb.M) throw scenario_error("comb.m: |m| must not exceed M");
    if (eta_override && (*eta_override < 0.0 || *eta_override > 1.0))
      throw scenario_error("comb.eta: must lie in [0,1]");
    if (!(pulse_rate > 0.0)) throw scenario_error("comb.pulse_rate: must be positive");
    if (!(w0 > 0.0)) throw scenario_error("beam.w0: must be positive");
    if (!(target.d > 0.0)) throw scenario_error("target.d: must be positive");
    if (target.r < 0.0 || target.r > 1.0) throw scenario_error("target.r2: must lie in [0,1]");
    if (target.cross_section < 0.0) throw scenario_error("target.cross_section: must be non-negative");
    if (!(ell > 0.0) || ell > 1.0) throw scenario_error("atmosphere.ell: must lie in (0,1]");
    if (r0 && !(*r0 > 0.0)) throw scenario_error("atmosphere.r0: must be positive");
    if (cn2 && *cn2 < 0.0) throw scenario_error("atmosphere.cn2: must be non-negative");
    if (mu_d < 0.0 || mu_d > 1.0) throw scenario_error("detector.mu_d: must lie in [0,1]");
    if (mu_coll_override && (*mu_coll_override < 0.0 || *mu_coll_override > 1.0))
      throw scenario_error("detector.mu_coll: must lie in [0,1]");
    if (duty_cycle < 0.0 || duty_cycle > 1.0) throw scenario_error("detector.duty_cycle: must lie in [0,1]");
    if (overlaps.O_S < 0.0 || overlaps.O_S > 1.0) throw scenario_error("overlaps.O_S: must lie in [0,1]");
    if (overlaps.O_I < 0.0 || overlaps.O_I > 1.0) throw scenario_error("overlaps.O_I: must lie in [0,1]");
    if (overlaps.sigma_t < 0.0) throw scenario_error("overlaps.sigma_t: must be non-negative");
  }

  bool operator==(const SensingScenario& o) const {
    return squeeze.g == o.squeeze.g && squeeze.phi_g == o.squeeze.phi_g && comb == o.comb && tooth == o.tooth &&
           eta_override == o.eta_override && pulse_rate == o.pulse_rate && w0 == o.w0 && target.d == o.target.d &&
           target.r == o.target.r && target.phi_r == o.target.phi_r && target.cross_section == o.target.cross_section &&
           ell == o.ell && phi_xi == o.phi_xi && r0 == o.r0 && cn2 == o.cn2 &&
           alpha_profile_path == o.alpha_profile_path && cn2_profile_path == o.cn2_profile_path && mu_d == o.mu_d &&
           mu_coll_override == o.mu_coll_override && duty_cycle == o.duty_cycle && overlaps == o.overlaps &&
           phi_s == o.phi_s && phi_i == o.phi_i && phi_S == o.phi_S && phi_I == o.phi_I;
  }
};

namespace detail {

struct KeySpec {
  const char* section;
  const char* key;
  Dimension dim;
  bool required;
};

inline const std::vector<KeySpec>& scenario_keys() {
  static const std::vector<KeySpec> keys{
      {"squeeze", "g", Dimension::Dimensionless, true},
      {"squeeze", "phi_g", Dimension::Angle, false},
      {"comb", "lambda_c", Dimension::Length, true},
      {"comb", "f_rep", Dimension::Frequency, false},
      {"comb", "tau", Dimension::Time, false},
      {"comb", "M", Dimension::Dimensionless, false},
      {"comb", "omega_ceo", Dimension::Frequency, false},
      {"comb", "m", Dimension::Dimensionless, false},
      {"comb", "eta", Dimension::Dimensionless, false},
      {"comb", "pulse_rate", Dimension::Frequency, false},
      {"beam", "w0", Dimension::Length, false},
      {"target", "d", Dimension::Length, true},
      {"target", "r2", Dimension::Dimensionless, true},
      {"target", "phi_r", Dimension::Angle, false},
      {"target", "cross_section", Dimension::Area, false},
      {"atmosphere", "ell", Dimension::Dimensionless, false},
      {"atmosphere", "phi_xi", Dimension::Angle, false},
      {"atmosphere", "r0", Dimension::Length, false},
      {"atmosphere", "cn2", Dimension::Dimensionless, false},
      {"atmosphere", "alpha_profile", Dimension::Dimensionless, false},
      {"atmosphere", "cn2_profile", Dimension::Dimensionless, false},
      {"detector", "mu_d", Dimension::Dimensionless, false},
      {"detector", "mu_coll", Dimension::Dimensionless, false},
      {"detector", "duty_cycle", Dimension::Dimensionless, false},
      {"overlaps", "O_S", Dimension::Dimensionless, false},
      {"overlaps", "O_I", Dimension::Dimensionless, false},
      {"overlaps", "tau_iI", Dimension::Time, false},
      {"overlaps", "tau_isr", Dimension::Time, false},
      {"overlaps", "tau_srS", Dimension::Time, false},
      {"overlaps", "sigma_t", Dimension::Time, false},
      {"phases", "phi_s", Dimension::Angle, false},
      {"phases", "phi_i", Dimension::Angle, false},
      {"phases", "phi_S", Dimension::Angle, false},
      {"phases", "phi_I", Dimension::Angle, false},
  };
  return keys;
}

}  // namespace detail

inline SensingScenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw scenario_error(std::string("scenario syntax error: ") + e.message() + " (line " +
                         std::to_string(e.line()) + ")");
  }

  std::map<std::string, std::string> values;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw scenario_error("key '" + section + "' outside of any section");
    for (const auto& [key, leaf] : body) {
      const std::string name = section + "." + key;
      bool known = false;
      for (const auto& k : detail::scenario_keys()) known = known || (name == std::string(k.section) + "." + k.key);
      if (!known) throw scenario_error("unknown key '" + name + "'");
      values[name] = leaf.get_value<std::string>();
    }
  }

  std::vector<std::string> missing;
  for (const auto& k : detail::scenario_keys()) {
    const std::string name = std::string(k.section) + "." + k.key;
    if (k.required && !values.count(name)) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw scenario_error("missing required keys: " + list);
  }

  auto number = [&](const std::string& name, Dimension dim) -> std::optional<double> {
    auto it = values.find(name);
    if (it == values.end()) return std::nullopt;
    try {
      return parse_quantity(it->second, dim);
    } catch (const std::invalid_argument& e) {
      throw scenario_error(name + ": " + e.what());
    }
  };
  auto integer = [&](const std::string& name) -> std::optional<int> {
    auto v = number(name, Dimension::Dimensionless);
    if (!v) return std::nullopt;
    if (*v != std::floor(*v)) throw scenario_error(name + ": must be an integer");
    return static_cast<int>(*v);
  };

  SensingScenario s;
  s.squeeze.g = *number("squeeze.g", Dimension::Dimensionless);
  if (auto v = number("squeeze.phi_g", Dimension::Angle)) s.squeeze.phi_g = *v;
  s.comb.lambda_c = *number("comb.lambda_c", Dimension::Length);
  if (auto v = number("comb.f_rep", Dimension::Frequency)) s.comb.omega_rep = 2.0 * std::numbers::pi * *v;
  if (auto v = number("comb.tau", Dimension::Time)) s.comb.tau = *v;
  if (auto v = integer("comb.M")) s.comb.M = *v;
  if (auto v = number("comb.omega_ceo", Dimension::Frequency)) s.comb.omega_ceo = *v;
  if (auto v = integer("comb.m")) s.tooth = *v;
  s.eta_override = number("comb.eta", Dimension::Dimensionless);
  if (auto v = number("comb.pulse_rate", Dimension::Frequency)) s.pulse_rate = *v;
  if (auto v = number("beam.w0", Dimension::Length)) s.w0 = *v;
  s.target.d = *number("target.d", Dimension::Length);
  const double r2 = *number("target.r2", Dimension::Dimensionless);
  if (r2 < 0.0 || r2 > 1.0) throw scenario_error("target.r2: must lie in [0,1]");
  s.target.r = std::sqrt(r2);
  if (auto v = number("target.phi_r", Dimension::Angle)) s.target.phi_r = *v;
  if (auto v = number("target.cross_section", Dimension::Area)) s.target.cross_section = *v;
  if (auto v = number("atmosphere.ell", Dimension::Dimensionless)) s.ell = *v;
  if (auto v = number("atmosphere.phi_xi", Dimension::Angle)) s.phi_xi = *v;
  s.r0 = number("atmosphere.r0", Dimension::Length);
  s.cn2 = number("atmosphere.cn2", Dimension::Dimensionless);
  auto load_profile = [&](const std::string& name, std::string& path_out, std::optional<TabulatedProfile>& out) {
    auto it = values.find(name);
    if (it == values.end()) return;
    path_out = std::string(detail::trim(it->second));
    std::filesystem::path p(path_out);
    if (p.is_relative()) p = base_dir / p;
    try {
      out = load_profile_csv(p.string());
    } catch (const std::exception& e) {
      throw scenario_error(name + ": " + e.what());
    }
  };
  load_profile("atmosphere.alpha_profile", s.alpha_profile_path, s.alpha_profile);
  load_profile("atmosphere.cn2_profile", s.cn2_profile_path, s.cn2_profile);
  if (auto v = number("detector.mu_d", Dimension::Dimensionless)) s.mu_d = *v;
  s.mu_coll_override = number("detector.mu_coll", Dimension::Dimensionless);
  if (auto v = number("detector.duty_cycle", Dimension::Dimensionless)) s.duty_cycle = *v;
  if (auto v = number("overlaps.tau_iI", Dimension::Time)) s.overlaps.tau_iI = *v;
  if (auto v = number("overlaps.tau_isr", Dimension::Time)) s.overlaps.tau_isr = *v;
  if (auto v = number("overlaps.tau_srS", Dimension::Time)) s.overlaps.tau_srS = *v;
  if (auto v = number("overlaps.sigma_t", Dimension::Time)) s.overlaps.sigma_t = *v;
  // Overlaps may be given directly or derived from the pulse delays.
  auto O_S = number("overlaps.O_S", Dimension::Dimensionless);
  auto O_I = number("overlaps.O_I", Dimension::Dimensionless);
  if (s.overlaps.sigma_t > 0.0) {
    if (!O_S) O_S = overlap_from_delay(s.overlaps.tau_srS, s.overlaps.sigma_t);
    if (!O_I) O_I = overlap_from_delay(s.overlaps.tau_iI, s.overlaps.sigma_t);
  }
  if (O_S) s.overlaps.O_S = *O_S;
  if (O_I) s.overlaps.O_I = *O_I;
  if (auto v = number("phases.phi_s", Dimension::Angle)) s.phi_s = *v;
  if (auto v = number("phases.phi_i", Dimension::Angle)) s.phi_i = *v;
  if (auto v = number("phases.phi_S", Dimension::Angle)) s.phi_S = *v;
  if (auto v = number("phases.phi_I", Dimension::Angle)) s.phi_I = *v;

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw scenario_error(e.what());
  }
  return s;
}

inline SensingScenario parse_scenario_string(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline SensingScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw scenario_error("cannot open scenario file " + path);
  return parse_scenario(in, std::filesystem::path(path).parent_path());
}

// Writes every field in SI base units with round-trippable precision.
inline std::string save_scenario(const SensingScenario& s) {
  std::ostringstream out;
  auto kv = [&](const char* key, double v) { out << key << " = " << format_exact(v) << "\n"; };
  out << "[squeeze]\n";
  kv("g", s.squeeze.g);
  kv("phi_g", s.squeeze.phi_g);
  out << "\n[comb]\n";
  kv("lambda_c", s.comb.lambda_c);
  kv("f_rep", s.comb.omega_rep / (2.0 * std::numbers::pi));
  kv("tau", s.comb.tau);
  kv("M", s.comb.M);
  kv("omega_ceo", s.comb.omega_ceo);
  kv("m", s.tooth);
  if (s.eta_override) kv("eta", *s.eta_override);
  kv("pulse_rate", s.pulse_rate);
  out << "\n[beam]\n";
  kv("w0", s.w0);
  out << "\n[target]\n";
  kv("d", s.target.d);
  kv("r2", s.target.r * s.target.r);
  kv("phi_r", s.target.phi_r);
  kv("cross_section", s.target.cross_section);
  out << "\n[atmosphere]\n";
  kv("ell", s.ell);
  kv("phi_xi", s.phi_xi);
  if (s.r0) kv("r0", *s.r0);
  if (s.cn2) kv("cn2", *s.cn2);
  if (!s.alpha_profile_path.empty()) out << "alpha_profile = " << s.alpha_profile_path << "\n";
  if (!s.cn2_profile_path.empty()) out << "cn2_profile = " << s.cn2_profile_path << "\n";
  out << "\n[detector]\n";
  kv("mu_d", s.mu_d);
  if (s.mu_coll_override) kv("mu_coll", *s.mu_coll_override);
  kv("duty_cycle", s.duty_cycle);
  out << "\n[overlaps]\n";
  kv("O_S", s.overlaps.O_S);
  kv("O_I", s.overlaps.O_I);
  kv("tau_iI", s.overlaps.tau_iI);
  kv("tau_isr", s.overlaps.tau_isr);
  kv("tau_srS", s.overlaps.tau_srS);
  kv("sigma_t", s.overlaps.sigma_t);
  out << "\n[phases]\n";
  kv("phi_s", s.phi_s);
  kv("phi_i", s.phi_i);
  kv("phi_S", s.phi_S);
  kv("phi_I", s.phi_I);
  return out.str();
}

}  // namespace qcombpass

#endif  // QCOMBPASS_SCENARIO_HPP
