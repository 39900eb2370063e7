// One line per acceptance criterion; exit status is nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qcombpass/commands.hpp"

namespace {

using namespace qcombpass;

// Pinned tolerances.
constexpr double kZ0 = 180e3, kZ0Rel = 0.02;
constexpr double kWd = 0.34, kWdRel = 0.02;
constexpr double kZ0p = 230e3, kZ0pRel = 0.03;
constexpr double kWp = 0.37, kWpRel = 0.02;
constexpr double kMuColl = 0.65, kMuCollAbs = 0.02;
constexpr double kGtEta = 0.2, kGtEtaAbs = 0.02;
constexpr double kEta0 = 0.2;
constexpr double kVis = 0.38, kVisAbs = 0.02;
constexpr double kRateLo = 5e6, kRateHi = 5e7;
constexpr double kSlopeMin = 3.9;
constexpr double kStrobeTol = 1e-12;
constexpr double kWignerTol = 1e-6;
constexpr double kNormTol = 1e-3;
constexpr double kClosedMomentTol = 1e-12;
constexpr double kOracleMomentTol = 1e-6;
constexpr double kFdRelTol = 1e-6;
constexpr double kWanderLo = 0.8, kWanderHi = 1.5;
constexpr double kSpreadRel = 1e-12;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %2d %-28s %s  %s [%.2fs]\n", id, name.c_str(), ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string f(const char* format, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

bool within_rel(double v, double want, double rel) { return std::abs(v - want) <= rel * want; }

SensingScenario reference() {
  SensingScenario s;
  s.r0 = 0.05;
  return s;
}

template <class F>
void timed(int id, const std::string& name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, ok, detail, dt);
}

}  // namespace

int main() {
  timed(1, "link_budget_chain", [](std::string& d) {
    SensingScenario s = reference();
    s.eta_override = kEta0;
    const BeamSpec beam = s.beam();
    const CollectionGeometry cg = collection_geometry(beam, s.target);
    const double wd = beam_radius(s.target.d, beam);
    const double mu = s.mu_coll();
    const double gte = s.gtilde_eta();
    d = f("z0=%.4gkm", beam.z0() / 1e3) + f(" w(d)=%.4gm", wd) + f(" z0'=%.4gkm", cg.z_prime0 / 1e3) +
        f(" w'(0)=%.4gm", cg.w_prime_at_station) + f(" mu_coll=%.4f", mu) + f(" gtilde*eta0=%.4f", gte);
    return within_rel(beam.z0(), kZ0, kZ0Rel) && within_rel(wd, kWd, kWdRel) &&
           within_rel(cg.z_prime0, kZ0p, kZ0pRel) && within_rel(cg.w_prime_at_station, kWp, kWpRel) &&
           std::abs(mu - kMuColl) <= kMuCollAbs && std::abs(gte - kGtEta) <= kGtEtaAbs;
  });

  timed(2, "reference_visibility_rate", [](std::string& d) {
    const SensingScenario s = reference();
    const double v = visibility(s.gtilde_eta(), s.overlaps.O_S, s.overlaps.O_I);
    const double rate = count_rate(s.photocount_at(0.0), s.pulse_rate, s.duty_cycle);
    d = f("eta=%.4f", s.eta()) + f(" V=%.4f", v) + f(" rate=%.3e/s", rate);
    return std::abs(v - kVis) <= kVisAbs && rate >= kRateLo && rate <= kRateHi;
  });

  timed(3, "oracle_equivalence", [](std::string& d) {
    const auto pts = checks::oracle_grid();
    const auto c = checks::compare_photocount_oracle(pts, 0.9);
    d = std::to_string(c.failing) + "/" + std::to_string(pts.size()) + " points outside max(1e-8,10*tail)" +
        f("; max error=%.3e", c.max_error) + f(" (trace of state off by up to %.3f)", c.max_trace_deviation);
    return c.failing == 0;
  });

  timed(4, "perturbative_slope", [](std::string& d) {
    const double slope = checks::perturbative_slope();
    d = f("slope=%.4f", slope);
    return slope >= kSlopeMin;
  });

  timed(5, "strobe_agreement", [](std::string& d) {
    const auto s = checks::strobe_summary(50);
    d = f("max error=%.2e", s.max_error) + f(" chopper-off spread=%.2e", s.off_spread) +
        " gating mismatches=" + std::to_string(s.gating_mismatches) + " steady events=" +
        std::to_string(s.steady_events);
    return s.steady_events > 0 && s.max_error <= kStrobeTol && s.off_spread <= kStrobeTol && s.gating_mismatches == 0;
  });

  timed(6, "wigner_cross_check", [](std::string& d) {
    const auto sets = checks::wigner_sets(nullptr);
    double worst = 0.0;
    for (const auto& s : sets) worst = std::max(worst, checks::series_vs_oracle_max(s));
    const auto a = checks::tmsv_anisotropy(2.3);
    const auto n = checks::normalization_report(sets.front());
    const double norm = std::max({n.vacuum, n.tmsv, n.transceiver});
    d = std::to_string(sets.size()) + f(" sets, max series-oracle=%.2e", worst) +
        f("; <x+^2>/<x-^2>=%.3e", a.var_plus / a.var_minus) + f("; normalization error=%.2e", norm);
    return sets.size() >= 3 && worst < kWignerTol && a.var_plus < a.var_minus && norm < kNormTol;
  });

  timed(7, "metrology_identities", [](std::string& d) {
    const auto m = checks::metrology_summary();
    d = f("closed=%.2e", m.closed_identity) + f(" oracle=%.2e", m.oracle_identity) + f(" fd=%.2e", m.fd_relative) +
        " negative variance " + std::to_string(m.negative_variance) + "/" + std::to_string(m.samples);
    return m.closed_identity <= kClosedMomentTol && m.oracle_identity <= kOracleMomentTol &&
           m.fd_relative <= kFdRelTol && m.negative_variance == 0;
  });

  timed(8, "advantage_region_properties", [](std::string& d) {
    const SensingScenario s = reference();
    const int N = 64;
    std::vector<double> phis, gs;
    for (int k = 0; k < N; ++k) phis.push_back(2.0 * std::numbers::pi * k / N);
    for (int k = 1; k <= 40; ++k) gs.push_back(0.1 * k);
    const RegionChannel base = s.region_channel();
    bool nonempty = false, symmetric = true;
    std::string which;
    for (double eta : {s.eta(), 0.2, 1.0}) {
      const AdvantageRegion reg = advantage_region(phis, gs, {base.gtilde_over_g, eta});
      if (reg.any() && !nonempty) {
        nonempty = true;
        which = f("eta=%.4f", eta);
      }
      for (int k = 1; k < N; ++k)
        for (std::size_t j = 0; j < gs.size(); ++j)
          if (reg.advantage[k][j] != reg.advantage[N - k][j]) symmetric = false;
    }
    const AdvantageRegion dark = advantage_region(phis, gs, {0.0, s.eta()});
    d = std::string("nonempty=") + (nonempty ? "yes (" + which + ")" : "no") + " symmetric=" +
        (symmetric ? "yes" : "no") + " empty at r=0=" + (dark.any() ? "no" : "yes");
    return nonempty && symmetric && !dark.any();
  });

  timed(9, "turbulence_estimates", [](std::string& d) {
    const double lambda = 1560e-9, dist = 100e3, w0 = 0.3, r0 = 0.05;
    const double wander = beam_wander_rms(lambda, dist, w0, r0);
    const double spread = beam_spread_rms(lambda, dist, r0);
    const double formula = 2.0 * lambda * dist / (std::numbers::pi * r0);
    d = f("wander=%.4fm", wander) + f(" spread=%.4fm", spread);
    return wander >= kWanderLo && wander <= kWanderHi && std::abs(spread - formula) <= kSpreadRel * formula;
  });

  timed(10, "determinism", [](std::string& d) {
    auto emit_all = []() {
      const SensingScenario s = reference();
      std::ostringstream all, dump;
      all << cmd_validate(&s, {}).text;
      all << cmd_photocount_sweep(s, SweepAxis::Distance, {10, 200, 20}, {1.0, 1.7});
      all << cmd_photocount_sweep(s, SweepAxis::Phase, {0, 2 * std::numbers::pi, 17});
      all << cmd_photocount_sweep(s, SweepAxis::Squeezing, {0.1, 3, 12});
      all << cmd_visibility_map(s, {0, 1, 6}, {10, 200, 5});
      all << cmd_wigner(s, WignerKind::Transceiver, {-2, 2, 9}, {-2, 2, 9}).csv;
      all << cmd_wigner(s, WignerKind::Tmsv, {-2, 2, 9}, {-2, 2, 9}).csv;
      all << cmd_metrology_region(s, {0.2, 4, 20}, 32);
      all << cmd_metrology_distance(s, {10, 200, 10}, {1, 1.7, 3}, AdvantageMeasure::Ratio);
      all << cmd_link_budget(s);
      all << cmd_strobe({}, &dump) << dump.str();
      return all.str();
    };
    const std::string a = emit_all();
    const std::string b = emit_all();
    d = std::to_string(a.size()) + " bytes per run, " + (a == b ? "identical" : "DIFFERENT");
    return !a.empty() && a == b;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
