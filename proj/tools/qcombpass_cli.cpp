#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcombpass/commands.hpp"
#include "qcombpass/errors.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kConvergence = 3 };

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw qcombpass::scenario_error("cannot write '" + out_path + "'");
  f << text;
}

qcombpass::SensingScenario scenario_or_default(const std::string& path) {
  return path.empty() ? qcombpass::SensingScenario{} : qcombpass::load_scenario(path);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) v.push_back(qcombpass::parse_quantity(item, qcombpass::Dimension::Dimensionless));
  return v;
}

// "XMIN:XMAX:NX,YMIN:YMAX:NY" for the (x+, x-) plane.
std::pair<qcombpass::WignerAxis, qcombpass::WignerAxis> parse_grid(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("grid must look like LO:HI:N,LO:HI:N");
  const auto a = qcombpass::parse_range(text.substr(0, comma));
  const auto b = qcombpass::parse_range(text.substr(comma + 1));
  return {{a.lo, a.hi, a.steps}, {b.lo, b.hi, b.steps}};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qcombpass;
  CLI::App app{"Quantum comb-pass sensing: photocounts, Wigner functions, metrology and link budgets"};
  app.require_subcommand(1);

  std::string scenario_path, out_path;

  auto* sweep = app.add_subcommand("photocount-sweep", "Idler photocount versus distance, phase or squeezing");
  std::string axis = "distance", range_text = "10:200:20", g_text;
  sweep->add_option("--scenario", scenario_path, "Scenario INI file");
  sweep->add_option("--out", out_path, "Output CSV (default stdout)");
  sweep->add_option("--axis", axis, "distance|phase|squeezing")->check(CLI::IsMember({"distance", "phase", "squeezing"}));
  sweep->add_option("--range", range_text, "LO:HI:N (km, rad or g)");
  sweep->add_option("--g", g_text, "Comma-separated squeezing values for distance/phase sweeps");

  auto* vmap = app.add_subcommand("visibility-map", "Visibility over reflectance and distance");
  std::string r2_text = "0:1:11", d_text = "10:200:20";
  vmap->add_option("--scenario", scenario_path, "Scenario INI file");
  vmap->add_option("--out", out_path, "Output CSV");
  vmap->add_option("--reflectance", r2_text, "LO:HI:N in r^2");
  vmap->add_option("--range", d_text, "Distance LO:HI:N in km");

  auto* wig = app.add_subcommand("wigner", "Wigner function on the (x+, x-) plane");
  std::string state = "qcombpass", grid_text = "-2:2:41,-2:2:41";
  wig->add_option("--scenario", scenario_path, "Scenario INI file");
  wig->add_option("--out", out_path, "Output CSV");
  wig->add_option("--state", state, "qcombpass|tmsv")->check(CLI::IsMember({"qcombpass", "tmsv"}));
  wig->add_option("--grid", grid_text, "XMIN:XMAX:NX,YMIN:YMAX:NY");

  auto* met = app.add_subcommand("metrology", "Advantage region or advantage versus distance");
  std::string mode = "region", measure = "difference", met_g = "0:3:31", met_d = "10:200:20", met_list = "1,1.7,3";
  int phi_points = 64;
  std::optional<double> eta;
  met->add_option("--scenario", scenario_path, "Scenario INI file");
  met->add_option("--out", out_path, "Output CSV");
  met->add_option("--mode", mode, "region|distance")->check(CLI::IsMember({"region", "distance"}));
  met->add_option("--range", met_g, "Squeezing axis LO:HI:N (region mode)");
  met->add_option("--phi-points", phi_points, "Number of phase samples 2*pi*k/N (region mode)");
  met->add_option("--distance", met_d, "Distance LO:HI:N in km (distance mode)");
  met->add_option("--g", met_list, "Comma-separated squeezing values (distance mode)");
  met->add_option("--measure", measure, "difference|ratio")->check(CLI::IsMember({"difference", "ratio"}));
  met->add_option("--eta", eta, "Override the channel transmissivity");

  auto* strobe_cmd = app.add_subcommand("strobe", "Discrete pulse-lattice simulation");
  StrobeOptions so;
  bool no_chopper = false;
  std::string dump_path;
  strobe_cmd->add_option("--out", out_path, "Detection CSV");
  strobe_cmd->add_option("--target", so.target_sites, "Target position in lattice sites");
  strobe_cmd->add_option("--steps", so.steps, "Total time steps");
  strobe_cmd->add_option("--period", so.p, "Chopper period p");
  strobe_cmd->add_flag("--no-chopper", no_chopper, "Leave the chopper open");
  strobe_cmd->add_option("--g", so.g, "Squeezing per pass");
  strobe_cmd->add_option("--eta", so.eta, "Channel transmissivity");
  strobe_cmd->add_option("--dump", dump_path, "Per-step JSON-lines state dump");

  auto* link = app.add_subcommand("link-budget", "Beam, collection and turbulence summary");
  link->add_option("--scenario", scenario_path, "Scenario INI file");
  link->add_option("--out", out_path, "Output CSV");

  auto* val = app.add_subcommand("validate", "Run the invariant suite");
  std::optional<double> tolerance;
  val->add_option("--scenario", scenario_path, "Scenario INI file");
  val->add_option("--out", out_path, "Report file");
  val->add_option("--tolerance", tolerance, "Override every numeric tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*sweep) {
      const auto s = scenario_or_default(scenario_path);
      const SweepAxis ax = parse_axis(axis);
      const Dimension dim = ax == SweepAxis::Phase ? Dimension::Angle : Dimension::Dimensionless;
      emit(cmd_photocount_sweep(s, ax, parse_range(range_text, dim), parse_list(g_text)), out_path);
    } else if (*vmap) {
      const auto s = scenario_or_default(scenario_path);
      emit(cmd_visibility_map(s, parse_range(r2_text), parse_range(d_text)), out_path);
    } else if (*wig) {
      const auto s = scenario_or_default(scenario_path);
      const auto [xp, xm] = parse_grid(grid_text);
      const auto r = cmd_wigner(s, state == "tmsv" ? WignerKind::Tmsv : WignerKind::Transceiver, xp, xm);
      emit(r.csv, out_path);
      if (r.spot_checks > 0)
        std::fprintf(stderr, "series cutoff %d, oracle spot checks %d, max deviation %.3e\n", r.term_cutoff,
                     r.spot_checks, r.spot_check_max_deviation);
    } else if (*met) {
      const auto s = scenario_or_default(scenario_path);
      if (mode == "region") {
        int inconsistent = 0;
        emit(cmd_metrology_region(s, parse_range(met_g), phi_points, eta, &inconsistent), out_path);
        if (inconsistent > 0)
          std::fprintf(stderr, "warning: %d cells have a negative photon-number variance\n", inconsistent);
      } else {
        emit(cmd_metrology_distance(s, parse_range(met_d), parse_list(met_list),
                                    measure == "ratio" ? AdvantageMeasure::Ratio : AdvantageMeasure::Difference, eta),
             out_path);
      }
    } else if (*strobe_cmd) {
      so.chopper = !no_chopper;
      std::optional<std::ofstream> dump;
      if (!dump_path.empty()) {
        dump.emplace(dump_path, std::ios::binary);
        if (!*dump) throw scenario_error("cannot write '" + dump_path + "'");
      }
      emit(cmd_strobe(so, dump ? &*dump : nullptr), out_path);
    } else if (*link) {
      emit(cmd_link_budget(scenario_or_default(scenario_path)), out_path);
    } else if (*val) {
      std::optional<SensingScenario> s;
      if (!scenario_path.empty()) s = load_scenario(scenario_path);
      checks::Options o;
      o.tolerance_override = tolerance;
      const auto rep = cmd_validate(s ? &*s : nullptr, o);
      emit(rep.text, out_path);
      return rep.failed ? kValidation : kOk;
    }
  } catch (const convergence_error& e) {
    std::fprintf(stderr, "convergence error: %s (tail %.3e)\n", e.what(), e.tail());
    return kConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kOk;
}
