#ifndef QCOMBPASS_STROBE_HPP
#define QCOMBPASS_STROBE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "phases.hpp"

namespace qcombpass::strobe {

enum class Species { Pump, s, i, S, I, SMerged, IMerged };
enum class Direction { L, R };

inline const char* to_string(Species s) {
  switch (s) {
    case Species::Pump: return "pump";
    case Species::s: return "s";
    case Species::i: return "i";
    case Species::S: return "S";
    case Species::I: return "I";
    case Species::SMerged: return "S_merged";
    case Species::IMerged: return "I_merged";
  }
  return "?";
}

inline const char* to_string(Direction d) { return d == Direction::L ? "L" : "R"; }

struct PulseRecord {
  Species species = Species::Pump;
  long birth_step = 0;
  int position = 0;
  Direction direction = Direction::R;
  int amplitude_order = 0;   // power of g
  double coefficient = 1.0;  // powers of eta carried by the pulse
  int reflections = 0;       // powers of the target amplitude r
  double phase = 0.0;
  bool delayed = false;      // returning signal already passed the delay line
  std::vector<PulseRecord> constituents;  // filled for merged pulses

  bool reflected() const { return species == Species::s && direction == Direction::L; }
};

struct ChopperSchedule {
  int p = 1;
  int offset = 0;
  bool enabled = true;

  void validate() const {
    if (p < 1) throw std::invalid_argument("chopper: p must be at least 1");
  }

  // True when the wheel blocks the site at this step. Period 2p.
  bool blocks(long step) const {
    if (!enabled) return false;
    const long k = step + offset;
    const long block = (k >= 0 ? k / p : -((-k + p - 1) / p));
    return ((block % 2) + 2) % 2 == 0;
  }
};

struct LatticeConfig {
  int target_position = 10;
  int chopper_position = 2;
  long total_steps = 40;
  bool continuous_pump = true;
  double eta = 1.0;
  PhaseSet phases;  // phases accumulated by the records (all zero by default)

  static constexpr int crystal_position = 0;
  static constexpr int dichroic_position = 1;
  static constexpr int pre_detection_position = -1;
  static constexpr int detector_position = -2;
  static constexpr int block_position = -3;

  void validate() const {
    if (target_position <= dichroic_position + 1)
      throw std::invalid_argument("lattice: target must lie beyond the chopper region (x_T >= 3)");
    if (chopper_position <= dichroic_position || chopper_position >= target_position)
      throw std::invalid_argument("lattice: chopper must sit between the dichroic mirror and the target");
    if (total_steps <= 2L * target_position + 3)
      throw std::invalid_argument("lattice: total_steps must exceed 2 x_T + 3 to reach steady state");
    if (!(eta >= 0.0)) throw std::invalid_argument("lattice: eta must be non-negative");
  }

  // First step at which a detected idler can be accompanied by a returned signal.
  long steady_step() const { return 2L * target_position + 4; }
};

struct DetectionEvent {
  long step = 0;
  long idler_birth = -1;          // birth of the forward idler i in the merged mode
  bool twin_chopped = false;      // its twin s was absorbed by the chopper
  std::vector<PulseRecord> idler;   // constituents of I_merged
  std::vector<PulseRecord> signal;  // constituents of S_merged at the same step

  const PulseRecord* find(const std::vector<PulseRecord>& v, Species s, bool reflected = false) const {
    for (const auto& r : v)
      if (r.species == s && (s != Species::s || r.reflected() == reflected)) return &r;
    return nullptr;
  }
  bool has_reflected_signal() const { return find(signal, Species::s, true) != nullptr; }
  bool has_interference() const {
    return twin_chopped && has_reflected_signal() && find(signal, Species::S) && find(idler, Species::I) &&
           find(idler, Species::i);
  }
};

struct World {
  long time = 0;
  double g = 0.0;
  std::vector<PulseRecord> pulses;
  std::vector<DetectionEvent> detections;
  std::set<long> chopped_births;
};

inline PulseRecord make_pump(long birth) {
  PulseRecord p;
  p.species = Species::Pump;
  p.birth_step = birth;
  p.position = LatticeConfig::crystal_position;
  p.direction = Direction::R;
  return p;
}

// World at t = 0 holding a single pump pulse entering the crystal.
inline World initial_world(double g) {
  World w;
  w.g = g;
  w.pulses.push_back(make_pump(0));
  return w;
}

namespace detail {

inline PulseRecord spawn(Species s, long birth, Direction dir, double eta, double phase) {
  PulseRecord r;
  r.species = s;
  r.birth_step = birth;
  r.position = LatticeConfig::crystal_position;
  r.direction = dir;
  r.amplitude_order = 1;
  r.coefficient = eta;
  r.phase = phase;
  return r;
}

inline bool is_idler(Species s) { return s == Species::i || s == Species::I; }
inline bool is_signal(Species s) { return s == Species::s || s == Species::S; }

}  // namespace detail

inline World step(World world, const LatticeConfig& config, const ChopperSchedule& schedule) {
  const long t = world.time;
  const long next = t + 1;
  const PhaseSet& ph = config.phases;

  std::vector<PulseRecord> moving;
  moving.reserve(world.pulses.size() + 4);
  for (const PulseRecord& r : world.pulses) {
    if (r.species == Species::Pump && r.position == LatticeConfig::crystal_position && world.g > 0.0) {
      if (r.direction == Direction::R) {
        moving.push_back(detail::spawn(Species::s, t, Direction::R, config.eta, 0.0));
        moving.push_back(detail::spawn(Species::i, t, Direction::R, config.eta, 0.0));
      } else {
        moving.push_back(detail::spawn(Species::S, t, Direction::L, config.eta, ph.phi_S));
        moving.push_back(detail::spawn(Species::I, t, Direction::L, config.eta, ph.phi_I));
      }
    }
    moving.push_back(r);
  }

  std::vector<PulseRecord> after;
  after.reserve(moving.size());
  for (PulseRecord r : moving) {
    if (r.direction == Direction::R) {
      const bool reflect_at_dichroic =
          (r.species == Species::Pump || r.species == Species::i) && r.position == LatticeConfig::dichroic_position;
      const bool reflect_at_target = r.species == Species::s && r.position == config.target_position;
      if (reflect_at_dichroic) {
        r.direction = Direction::L;
        if (r.species == Species::i) r.phase += ph.phi_i;
      } else if (reflect_at_target) {
        r.direction = Direction::L;
        r.reflections += 1;
        r.phase += ph.phi_s + ph.phi_r;
      } else {
        r.position += 1;
        if (r.species == Species::s && r.position == config.chopper_position && schedule.blocks(next)) {
          world.chopped_births.insert(r.birth_step);
          continue;
        }
      }
    } else {
      r.position -= 1;
      if (r.species == Species::s && r.position == LatticeConfig::crystal_position && !r.delayed) {
        r.delayed = true;
        r.position += 1;
      }
    }
    if (r.position < LatticeConfig::block_position || r.position > config.target_position)
      throw std::out_of_range("pulse escaped the lattice; enlarge the configuration");
    if (r.position == LatticeConfig::block_position) continue;  // beam block absorbs
    after.push_back(std::move(r));
  }

  // Path identity: pulses leaving the pre-detection site share one mode.
  std::vector<PulseRecord> out;
  PulseRecord merged_idler;
  PulseRecord merged_signal;
  merged_idler.species = Species::IMerged;
  merged_signal.species = Species::SMerged;
  for (PulseRecord& r : after) {
    if (r.position == LatticeConfig::detector_position && r.direction == Direction::L &&
        (detail::is_idler(r.species) || detail::is_signal(r.species))) {
      PulseRecord& m = detail::is_idler(r.species) ? merged_idler : merged_signal;
      m.constituents.push_back(std::move(r));
      continue;
    }
    out.push_back(std::move(r));
  }
  for (PulseRecord* m : {&merged_signal, &merged_idler}) {
    if (m->constituents.empty()) continue;
    m->position = LatticeConfig::detector_position;
    m->direction = Direction::L;
    m->birth_step = m->constituents.front().birth_step;
    for (const auto& c : m->constituents) m->amplitude_order = std::max(m->amplitude_order, c.amplitude_order);
  }
  if (!merged_signal.constituents.empty()) out.push_back(merged_signal);
  if (!merged_idler.constituents.empty()) {
    DetectionEvent e;
    e.step = next;
    e.idler = merged_idler.constituents;
    e.signal = merged_signal.constituents;
    if (const PulseRecord* i = e.find(e.idler, Species::i)) {
      e.idler_birth = i->birth_step;
      e.twin_chopped = world.chopped_births.count(i->birth_step) > 0;
    }
    world.detections.push_back(std::move(e));  // idler detector absorbs I_merged
  }

  if (config.continuous_pump) out.push_back(make_pump(next));
  world.pulses = std::move(out);
  world.time = next;
  return world;
}

inline World run(World world, const LatticeConfig& config, const ChopperSchedule& schedule) {
  config.validate();
  schedule.validate();
  while (world.time < config.total_steps) world = step(std::move(world), config, schedule);
  return world;
}

inline double amplitude(const PulseRecord& r, double g, double rr) {
  return std::pow(g, r.amplitude_order) * r.coefficient * std::pow(rr, r.reflections);
}

// Idler count assembled from the records of one detection event: the two
// diagonal configurations (reverse pair, forward idler) plus the cross term
// between the reverse pair and (forward idler, returned signal) when the
// forward idler's twin was chopped.
inline double event_photocount(const DetectionEvent& e, double g, double r, double Psi, double O_S, double O_I,
                               double mu_d) {
  double count = 0.0;
  for (const auto& c : e.idler) {
    const double a = amplitude(c, g, r);
    count += a * a;
  }
  if (e.has_interference()) {
    const PulseRecord* I = e.find(e.idler, Species::I);
    const PulseRecord* i = e.find(e.idler, Species::i);
    const PulseRecord* sr = e.find(e.signal, Species::s, true);
    const PulseRecord* S = e.find(e.signal, Species::S);
    const double pair = amplitude(*I, g, r);
    const double forward = amplitude(*i, g, r) * amplitude(*sr, g, r);
    const double phase = Psi + sr->phase + i->phase - S->phase - I->phase;
    count += 4.0 * O_S * O_I * pair * forward * std::cos(phase);
  }
  return mu_d * count;
}

inline double idler_photocount(const World& world, const LatticeConfig& config, double g, double r, double Psi,
                               double O_S, double O_I, double mu_d) {
  if (world.time < config.steady_step() || world.detections.empty() ||
      world.detections.back().step < config.steady_step())
    throw std::logic_error("idler_photocount: steady state not reached");
  return event_photocount(world.detections.back(), g, r, Psi, O_S, O_I, mu_d);
}

// Sorted (position, direction, species) triples; the per-site species multiset.
inline std::vector<std::tuple<int, int, int>> site_signature(const World& world) {
  std::vector<std::tuple<int, int, int>> sig;
  for (const auto& r : world.pulses)
    sig.emplace_back(r.position, static_cast<int>(r.direction), static_cast<int>(r.species));
  std::sort(sig.begin(), sig.end());
  return sig;
}

inline int chopper_feasibility(double rotation_hz, double omega_rep) {
  if (!(rotation_hz > 0.0)) throw std::invalid_argument("chopper_feasibility: rotation rate must be positive");
  const double rep_rate = omega_rep / (2.0 * std::numbers::pi);
  const double p = std::round(rep_rate / (2.0 * rotation_hz));
  if (p < 1.0) throw std::invalid_argument("chopper faster than rep rate");
  return static_cast<int>(p);
}

}  // namespace qcombpass::strobe

#endif  // QCOMBPASS_STROBE_HPP
