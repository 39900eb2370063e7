#ifndef QCOMBPASS_CHECKS_HPP
#define QCOMBPASS_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fock.hpp"
#include "metrology.hpp"
#include "scenario.hpp"
#include "strobe.hpp"
#include "transceiver.hpp"
#include "wigner.hpp"

namespace qcombpass::checks {

enum class Status { Pass, Fail, Skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  Status status = Status::Skipped;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  bool numeric = true;

  std::string line() const {
    char buf[128];
    std::string out = std::string(to_string(status)) + " " + name;
    if (status != Status::Skipped && numeric) {
      std::snprintf(buf, sizeof buf, " measured=%.6e tolerance=%.3e", measured, tolerance);
      out += buf;
    }
    if (!detail.empty()) out += " (" + detail + ")";
    return out;
  }
};

struct Options {
  std::optional<double> tolerance_override;
  double tol(double nominal) const { return tolerance_override ? *tolerance_override : nominal; }
};

inline CheckResult numeric(std::string name, double measured, double tolerance, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tolerance;
  r.status = measured < tolerance ? Status::Pass : Status::Fail;
  r.detail = std::move(detail);
  return r;
}

inline CheckResult boolean(std::string name, bool ok, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.status = ok ? Status::Pass : Status::Fail;
  r.numeric = false;
  r.detail = std::move(detail);
  return r;
}

inline CheckResult skipped(std::string name, std::string why) {
  CheckResult r;
  r.name = std::move(name);
  r.status = Status::Skipped;
  r.detail = std::move(why);
  return r;
}

inline std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct GridPoint {
  double x, y, Phi;
};

// 5 x 5 x 4 points with x, y <= tanh(0.6).
inline std::vector<GridPoint> oracle_grid() {
  std::vector<GridPoint> pts;
  const double gx[] = {0.1, 0.225, 0.35, 0.475, 0.6};
  const double gy[] = {0.0, 0.15, 0.3, 0.45, 0.6};
  const double ph[] = {0.3, 1.9, 3.5, 5.1};
  for (double a : gx)
    for (double b : gy)
      for (double c : ph) pts.push_back({std::tanh(a), std::tanh(b), c});
  return pts;
}

struct OracleComparison {
  double max_error = 0.0;
  double max_tail = 0.0;
  int failing = 0;
  double worst_closed = 0.0;
  double worst_oracle = 0.0;
  double max_trace_deviation = 0.0;  // as-written trace
};

inline OracleComparison compare_photocount_oracle(const std::vector<GridPoint>& pts, double mu_d) {
  OracleComparison c;
  for (const auto& p : pts) {
    const int K = select_cutoff(p.x, p.y);
    const double tail = truncation_tail(p.x, p.y, K);
    const PhaseSet ph = phases_from_interference(p.Phi);
    const TruncatedTwoModeState st = build_transceiver_density(p.x, p.y, ph, K);
    const double oracle = mu_d * number_expectation(st, Mode::Idler);
    const double closed = photocount(std::atanh(p.x), std::atanh(p.y), p.Phi, 1.0, 1.0, mu_d);
    const double err = std::abs(oracle - closed);
    const double tol = std::max(1e-8, 10.0 * tail);
    if (err >= tol) ++c.failing;
    if (err > c.max_error) {
      c.max_error = err;
      c.worst_closed = closed;
      c.worst_oracle = oracle;
    }
    c.max_tail = std::max(c.max_tail, tail);
    c.max_trace_deviation = std::max(c.max_trace_deviation, std::abs(st.raw_trace() - 1.0));
  }
  return c;
}

inline CheckResult oracle_equivalence(const Options& o) {
  const auto pts = oracle_grid();
  const OracleComparison c = compare_photocount_oracle(pts, 0.9);
  const double tol = o.tol(std::max(1e-8, 10.0 * c.max_tail));
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d/%zu points outside tolerance; worst closed=%.6f oracle=%.6f; as-written trace off by up to %.4f",
                c.failing, pts.size(), c.worst_closed, c.worst_oracle, c.max_trace_deviation);
  return numeric("oracle_equivalence", c.max_error, tol, buf);
}

// The signal-index contraction against the closed form: checks the
// geometric-series algebra independently of the trace question.
inline CheckResult contraction_algebra(const Options& o) {
  double worst = 0.0;
  for (const auto& p : oracle_grid()) {
    const double a = diagonal_contraction_idler_number(p.x, p.y, p.Phi, 400);
    const double b = photocount(std::atanh(p.x), std::atanh(p.y), p.Phi, 1.0, 1.0, 1.0);
    worst = std::max(worst, std::abs(a - b));
  }
  return numeric("contraction_algebra", worst, o.tol(1e-10));
}

inline double perturbative_slope() {
  std::vector<double> lx, ly;
  for (int k = 0; k <= 20; ++k) {
    const double g = std::pow(10.0, -3.0 + 2.0 * k / 20.0);
    const double closed = photocount(g, g, 0.0, 1.0, 1.0, 1.0);
    const double pert = perturbative_photocount(g, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, true).value;
    lx.push_back(std::log(g));
    ly.push_back(std::log(std::abs(closed - pert)));
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline CheckResult perturbative_limit(const Options& o) {
  const double slope = perturbative_slope();
  return numeric("perturbative_slope", std::abs(4.0 - slope), o.tol(0.1), fmt("slope=%.6f", slope));
}

struct StrobeSummary {
  double max_error = 0.0;     // vs perturbative_photocount, chopper on
  double off_spread = 0.0;    // chopper off: max |count - baseline| across Psi
  int gating_mismatches = 0;  // interference present != twin chopped (p = 1)
  int steady_events = 0;
  bool periodic = true;
  double visibility_error = 0.0;
};

inline StrobeSummary strobe_summary(int target_sites = 50) {
  using namespace strobe;
  StrobeSummary out;
  LatticeConfig cfg;
  cfg.target_position = target_sites;
  cfg.total_steps = 2L * target_sites + 40;
  ChopperSchedule on{1, 0, true};
  World w = run(initial_world(1.0), cfg, on);

  const double gs[] = {0.01, 0.05, 0.1};
  const double rs[] = {0.3, 1.0};
  const double psis[] = {0.0, 1.0, 2.5};
  const double os[][2] = {{1.0, 1.0}, {0.6, 0.8}};
  for (const DetectionEvent& e : w.detections) {
    if (e.step < cfg.steady_step()) continue;
    ++out.steady_events;
    if (e.has_interference() != e.twin_chopped) ++out.gating_mismatches;
    for (double g : gs)
      for (double r : rs)
        for (double psi : psis)
          for (const auto& ov : os) {
            const double got = event_photocount(e, g, r, psi, ov[0], ov[1], 0.9);
            const double want = perturbative_photocount(g, cfg.eta, r, psi, ov[0], ov[1], 0.9, e.twin_chopped).value;
            out.max_error = std::max(out.max_error, std::abs(got - want));
          }
  }
  // Visibility over a Psi sweep on an interfering event: 2 O_S O_I g eta r
  // to leading order (the ratio carries an O(g^2) correction).
  for (const DetectionEvent& e : w.detections) {
    if (e.step < cfg.steady_step() || !e.has_interference()) continue;
    const double g = 0.01, r = 0.7;
    const double nmax = event_photocount(e, g, r, 0.0, 1.0, 1.0, 1.0);
    const double nmin = event_photocount(e, g, r, std::numbers::pi, 1.0, 1.0, 1.0);
    out.visibility_error = std::abs((nmax - nmin) / (nmax + nmin) - 2.0 * g * r) / (2.0 * g * r);
    break;
  }

  ChopperSchedule off{1, 0, false};
  World wo = run(initial_world(1.0), cfg, off);
  for (const DetectionEvent& e : wo.detections) {
    if (e.step < cfg.steady_step()) continue;
    for (double psi : psis) {
      const double got = event_photocount(e, 0.1, 1.0, psi, 1.0, 1.0, 0.9);
      const double base = perturbative_photocount(0.1, 1.0, 1.0, psi, 1.0, 1.0, 0.9, false).value;
      out.off_spread = std::max(out.off_spread, std::abs(got - base));
    }
  }

  for (int p : {1, 3}) {
    LatticeConfig c2 = cfg;
    c2.target_position = 12;
    c2.total_steps = 2L * 12 + 4 + 6L * p;
    ChopperSchedule sch{p, 0, true};
    World s = initial_world(1.0);
    std::vector<std::vector<std::tuple<int, int, int>>> sigs;
    while (s.time < c2.total_steps) {
      s = step(std::move(s), c2, sch);
      sigs.push_back(site_signature(s));
    }
    const long start = 2L * 12 + 3;
    for (long t = start; t + 2L * p < c2.total_steps; ++t)
      if (sigs[static_cast<std::size_t>(t - 1)] != sigs[static_cast<std::size_t>(t - 1 + 2 * p)]) out.periodic = false;
  }
  return out;
}

inline std::vector<CheckResult> strobe_agreement(const Options& o) {
  const StrobeSummary s = strobe_summary();
  std::vector<CheckResult> out;
  out.push_back(numeric("strobe_vs_perturbative", s.max_error, o.tol(1e-12),
                        std::to_string(s.steady_events) + " steady detections"));
  out.push_back(numeric("strobe_chopper_off_flat", s.off_spread, o.tol(1e-12)));
  out.push_back(boolean("strobe_interference_gating", s.gating_mismatches == 0,
                        std::to_string(s.gating_mismatches) + " mismatches"));
  out.push_back(boolean("strobe_periodicity", s.periodic));
  return out;
}

struct WignerSet {
  std::string label;
  double x, y;
  PhaseSet phases;
};

inline std::vector<WignerSet> wigner_sets(const SensingScenario* scenario) {
  std::vector<WignerSet> sets;
  if (scenario && scenario->squeeze.g > 0.0)
    sets.push_back({"scenario", std::tanh(scenario->g_eta()), std::tanh(scenario->gtilde_eta()), scenario->phases()});
  {
    // g = 2.3, phi_g = pi, eta = 0.2, r^2 = 0.5 at 100 km, probe phase pi/2.
    const double eta = 0.2, g = 2.3;
    const BeamSpec beam{0.3, 1560e-9};
    const double gt = renormalized_squeezing(g, DetectorSpec{0.9, 0.65}, std::sqrt(0.5), 0.64, beam.z0(), 100e3);
    PhaseSet ph;
    ph.phi_g = std::numbers::pi;
    ph.phi_s = std::numbers::pi / 2.0;
    sets.push_back({"g2.3_phi_pi", std::tanh(g * eta), std::tanh(gt * eta), ph});
  }
  {
    PhaseSet ph;
    ph.phi_s = 0.7;
    ph.phi_i = -0.4;
    ph.phi_S = 0.25;
    ph.phi_I = 1.3;
    ph.phi_g = 1.1;
    ph.phi_xi = 0.3;
    sets.push_back({"generic", std::tanh(0.6), std::tanh(0.5), ph});
  }
  if (sets.size() < 3) {
    PhaseSet ph;
    ph.phi_s = std::numbers::pi / 4.0;
    sets.push_back({"x0.34_y0.2", std::tanh(0.34), std::tanh(0.2), ph});
  }
  return sets;
}

inline double series_vs_oracle_max(const WignerSet& s, int n = 7, double half = 2.0) {
  const int K = select_cutoff(s.x, s.y);
  const TruncatedTwoModeState st = build_transceiver_density(s.x, s.y, s.phases, K);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double xp = -half + 2.0 * half * i / (n - 1);
      const double xm = -half + 2.0 * half * j / (n - 1);
      const PhaseSpacePoint pt = PhaseSpacePoint::from_rotated(xp, xm);
      const double a = wigner_qcombpass_series(pt, s.x, s.y, s.phases, K) / st.raw_trace();
      const double b = wigner_from_density(st, pt);
      worst = std::max(worst, std::abs(a - b));
    }
  return worst;
}

// <x^2> along a one-dimensional slice by trapezoid quadrature.
inline double slice_second_moment(const std::function<double(double)>& f, double half_width, int points = 4001) {
  const double h = 2.0 * half_width / (points - 1);
  double m0 = 0.0, m2 = 0.0;
  for (int k = 0; k < points; ++k) {
    const double x = -half_width + k * h;
    const double w = (k == 0 || k == points - 1) ? 0.5 : 1.0;
    const double v = f(x);
    m0 += w * v;
    m2 += w * v * x * x;
  }
  return m2 / m0;
}

struct TmsvAnisotropy {
  double var_plus = 0.0;
  double var_minus = 0.0;
  double ratio_error = 0.0;  // |ratio / e^{-4g} - 1|
};

inline TmsvAnisotropy tmsv_anisotropy(double g) {
  const SqueezeParams sp{g, std::numbers::pi};
  TmsvAnisotropy a;
  a.var_plus = slice_second_moment(
      [&](double x) { return wigner_tmsv(PhaseSpacePoint::from_rotated(x, 0.0), sp); }, 12.0 * std::exp(-g));
  a.var_minus = slice_second_moment(
      [&](double x) { return wigner_tmsv(PhaseSpacePoint::from_rotated(0.0, x), sp); }, 12.0 * std::exp(g));
  a.ratio_error = std::abs(a.var_plus / a.var_minus / std::exp(-4.0 * g) - 1.0);
  return a;
}

struct NormalizationReport {
  double vacuum = 0.0;  // quadrature of the enforced-normalized distribution on a second grid, minus 1
  double tmsv = 0.0;
  double transceiver = 0.0;
  double tmsv_enforced_constant = 0.0;
};

inline NormalizationReport normalization_report(const WignerSet& s) {
  NormalizationReport r;
  {
    // Vacuum and TMSV: enforce on a coarse box, verify on a wider, finer one.
    const SqueezeParams vac{0.0, 0.0};
    const double box_a[4] = {4.0, 4.0, 4.0, 4.0};
    const double box_b[4] = {5.0, 5.0, 5.0, 5.0};
    const double c = 1.0 / tmsv_integral(vac, 1.0, box_a, 21);
    r.vacuum = std::abs(tmsv_integral(vac, c, box_b, 27) - 1.0);
  }
  {
    const SqueezeParams sp{1.0, std::numbers::pi};
    const double e = std::exp(-1.0), E = std::exp(1.0);
    const double box_a[4] = {6.0 * e, 6.0 * E, 6.0 * E, 6.0 * e};
    const double box_b[4] = {7.0 * e, 7.0 * E, 7.0 * E, 7.0 * e};
    const double c = 1.0 / tmsv_integral(sp, 1.0, box_a, 23);
    r.tmsv_enforced_constant = c;
    r.tmsv = std::abs(tmsv_integral(sp, c, box_b, 29) - 1.0);
  }
  {
    const int K = select_cutoff(s.x, s.y);
    const double half = std::sqrt(static_cast<double>(K)) + 4.0;
    const double c = 1.0 / wigner_series_integral(s.x, s.y, s.phases, K, {half, 81}, 1.0);
    r.transceiver = std::abs(wigner_series_integral(s.x, s.y, s.phases, K, {half + 1.0, 101}, c) - 1.0);
  }
  return r;
}

inline std::vector<CheckResult> wigner_cross_checks(const SensingScenario* scenario, const Options& o) {
  std::vector<CheckResult> out;
  const auto sets = wigner_sets(scenario);
  for (const auto& s : sets)
    out.push_back(numeric("wigner_series_vs_oracle[" + s.label + "]", series_vs_oracle_max(s), o.tol(1e-6)));
  const TmsvAnisotropy a = tmsv_anisotropy(2.3);
  out.push_back(boolean("tmsv_squeezed_along_x_plus", a.var_plus < a.var_minus,
                        fmt("<x+^2>=%.6e", a.var_plus) + fmt(" <x-^2>=%.6e", a.var_minus)));
  out.push_back(numeric("tmsv_anisotropy_ratio", a.ratio_error, o.tol(1e-6)));
  const NormalizationReport n = normalization_report(sets.front());
  out.push_back(numeric("wigner_normalization_vacuum", n.vacuum, o.tol(1e-3)));
  out.push_back(numeric("wigner_normalization_tmsv", n.tmsv, o.tol(1e-3),
                        fmt("enforced constant %.9f", n.tmsv_enforced_constant) +
                            fmt(" vs 4/pi^2 = %.9f", kUnitWignerPrefactor) +
                            fmt(", alternate 4/pi^4 = %.9f", kAlternateWignerPrefactor)));
  out.push_back(numeric("wigner_normalization_transceiver", n.transceiver, o.tol(1e-3)));
  return out;
}

struct MetrologySummary {
  double closed_identity = 0.0;  // relative
  double oracle_identity = 0.0;  // second moment of the oracle vs closed form
  double fd_relative = 0.0;
  int negative_variance = 0;
  int samples = 0;
  double min_variance = 0.0;
};

inline MetrologySummary metrology_summary() {
  MetrologySummary m;
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> unit(0.0, 0.99);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  m.samples = 10000;
  for (int k = 0; k < m.samples; ++k) {
    const MetrologyInputs in{unit(rng), unit(rng), angle(rng)};
    const Moments mo = moments(in);
    const double x2 = in.x * in.x;
    const double want = (1.0 + 2.0 * x2) / (1.0 - x2) * mo.mean;
    m.closed_identity = std::max(m.closed_identity, std::abs(mo.second - want) / std::max(1.0, std::abs(want)));
    if (mo.variance() < 0.0) ++m.negative_variance;
    m.min_variance = std::min(m.min_variance, mo.variance());
  }
  for (const auto& p : oracle_grid()) {
    const MetrologyInputs in{p.x, p.y, p.Phi};
    const Moments mo = moments(in);
    const int K = select_cutoff(p.x, p.y);
    const TruncatedTwoModeState st = build_transceiver_density(p.x, p.y, phases_from_interference(p.Phi), K);
    m.oracle_identity = std::max(m.oracle_identity, std::abs(second_moment(st, Mode::Idler) - mo.second));
    if (std::abs(std::sin(p.Phi)) > 1e-3 && p.y > 0.0) {
      const double h = 1e-5;
      const double ge = std::atanh(p.x), gte = std::atanh(p.y);
      const double fd = (photocount(ge, gte, p.Phi + h, 1, 1, 1) - photocount(ge, gte, p.Phi - h, 1, 1, 1)) / (2.0 * h);
      m.fd_relative = std::max(m.fd_relative, std::abs(std::abs(fd) - mo.dphi) / mo.dphi);
    }
  }
  return m;
}

inline std::vector<CheckResult> metrology_identities(const Options& o) {
  const MetrologySummary m = metrology_summary();
  std::vector<CheckResult> out;
  out.push_back(numeric("metrology_second_moment_closed", m.closed_identity, o.tol(1e-12)));
  out.push_back(numeric("metrology_second_moment_oracle", m.oracle_identity, o.tol(1e-6)));
  out.push_back(numeric("metrology_dphi_finite_difference", m.fd_relative, o.tol(1e-6)));
  out.push_back(numeric("metrology_variance_nonnegative", std::max(0.0, -m.min_variance), o.tol(1e-12),
                        std::to_string(m.negative_variance) + "/" + std::to_string(m.samples) +
                            " random points with negative variance"));
  return out;
}

inline std::vector<CheckResult> scenario_checks(const SensingScenario& s, const Options& o) {
  std::vector<CheckResult> out;
  if (s.squeeze.g == 0.0 || s.gtilde_eta() == 0.0) {
    out.push_back(skipped("scenario_visibility_identity", "no squeezing or no return"));
    out.push_back(skipped("scenario_oracle_point", "no squeezing or no return"));
    out.push_back(skipped("scenario_phase_uncertainty", "no squeezing or no return"));
    return out;
  }
  const double nmax = s.photocount_at(0.0);
  const double nmin = s.photocount_at(std::numbers::pi);
  const double v = visibility(s.gtilde_eta(), s.overlaps.O_S, s.overlaps.O_I);
  out.push_back(numeric("scenario_visibility_identity", std::abs((nmax - nmin) / (nmax + nmin) - v), o.tol(1e-12),
                        fmt("V=%.6f", v)));
  const double x = std::tanh(s.g_eta()), y = std::tanh(s.gtilde_eta());
  const OracleComparison c = compare_photocount_oracle({{x, y, s.phases().interference_phase()}}, s.mu_d);
  out.push_back(numeric("scenario_oracle_point", c.max_error, o.tol(std::max(1e-8, 10.0 * c.max_tail)),
                        fmt("closed=%.6f", c.worst_closed) + fmt(" oracle=%.6f", c.worst_oracle)));
  const MetrologyInputs in{x, y, s.phases().interference_phase()};
  const Moments mo = moments(in);
  if (mo.dphi == 0.0) {
    out.push_back(skipped("scenario_phase_uncertainty", "operating point has zero phase sensitivity"));
  } else {
    out.push_back(boolean("scenario_phase_uncertainty", mo.variance() >= 0.0,
                          fmt("variance=%.6e", mo.variance())));
  }
  return out;
}

inline std::vector<CheckResult> run_all(const SensingScenario* scenario, const Options& o) {
  std::vector<CheckResult> out;
  out.push_back(oracle_equivalence(o));
  out.push_back(contraction_algebra(o));
  out.push_back(perturbative_limit(o));
  for (auto& c : strobe_agreement(o)) out.push_back(std::move(c));
  for (auto& c : wigner_cross_checks(scenario, o)) out.push_back(std::move(c));
  for (auto& c : metrology_identities(o)) out.push_back(std::move(c));
  if (scenario)
    for (auto& c : scenario_checks(*scenario, o)) out.push_back(std::move(c));
  return out;
}

}  // namespace qcombpass::checks

#endif  // QCOMBPASS_CHECKS_HPP
