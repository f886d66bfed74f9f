#include "djnmr/refocusing.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace djnmr {

namespace {

constexpr int kSpins = 3;
constexpr int kSegments = 4;

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", s);
  return buf;
}

void require_three_spins(const SpinSystem& sys, const char* what) {
  if (sys.n_spins() != kSpins) {
    throw std::invalid_argument(std::string(what) + ": refocusing schedules need a three-spin system");
  }
}

// Smallest theta' = theta + 2 pi k with theta' / rate > 0.
PiFraction normalize_angle(PiFraction theta, double rate) {
  const PiFraction c = theta.canonical();
  if (c.is_zero()) throw std::invalid_argument("refocusing: zero rotation angle");
  if ((c.over_pi() > 0.0) == (rate > 0.0)) return c;
  return rate > 0.0 ? c + PiFraction(2) : c - PiFraction(2);
}

PulseAxis pattern_axis(AxisPattern pattern, std::size_t k) {
  if (pattern == AxisPattern::Uniform) return PulseAxis::PlusX;
  static constexpr PulseAxis alternating[] = {PulseAxis::PlusX, PulseAxis::MinusX, PulseAxis::MinusX, PulseAxis::PlusX};
  return alternating[k % 4];
}

// Four equal segments; placements are (boundary, target) in chronological order.
PulseSchedule four_segment(const Generator& gen, PiFraction effective, double duration,
                           const std::vector<std::pair<int, int>>& placements, const PulseOptions& opts) {
  PulseSchedule sched{duration, std::vector<double>(kSegments, duration / kSegments), {}, gen, effective};
  for (std::size_t k = 0; k < placements.size(); ++k) {
    const auto [boundary, target] = placements[k];
    sched.pulses.push_back(PiPulse{boundary * (duration / kSegments), boundary, target,
                                   pattern_axis(opts.pattern, k), opts.flip_error});
  }
  return sched;
}

ComplexOperator pulse_unitary(const PiPulse& p) {
  Axis axis = Axis::X;
  double sign = 1.0;
  switch (p.axis) {
    case PulseAxis::PlusX: break;
    case PulseAxis::MinusX: sign = -1.0; break;
    case PulseAxis::PlusY: axis = Axis::Y; break;
    case PulseAxis::MinusY: axis = Axis::Y; sign = -1.0; break;
  }
  ComplexOperator gen = ComplexOperator::zero(8);
  for (int s = 1; s <= kSpins; ++s) {
    if (p.flips(s)) gen += spin_operator(axis, s, kSpins);
  }
  return general_unitary_exp(gen * sign, std::numbers::pi * (1.0 + p.flip_error));
}

}  // namespace

std::string_view to_string(PulseAxis axis) {
  switch (axis) {
    case PulseAxis::PlusX: return "+x";
    case PulseAxis::MinusX: return "-x";
    case PulseAxis::PlusY: return "+y";
    case PulseAxis::MinusY: return "-y";
  }
  return "+x";
}

int PulseSchedule::soft_pulse_count() const {
  return static_cast<int>(std::count_if(pulses.begin(), pulses.end(), [](const PiPulse& p) { return !p.is_hard(); }));
}

SignMatrix sign_matrix(const PulseSchedule& sched) {
  SignMatrix out;
  std::array<int, 3> a{1, 1, 1};
  for (std::size_t seg = 0; seg < sched.segments.size(); ++seg) {
    for (const auto& p : sched.pulses) {
      if (p.boundary != static_cast<int>(seg)) continue;
      for (int s = 1; s <= kSpins; ++s) {
        if (p.flips(s)) a[s - 1] = -a[s - 1];
      }
    }
    out.push_back(a);
  }
  return out;
}

std::array<int, 3> final_orientation(const PulseSchedule& sched) {
  std::array<int, 3> a{1, 1, 1};
  for (const auto& p : sched.pulses) {
    for (int s = 1; s <= kSpins; ++s) {
      if (p.flips(s)) a[s - 1] = -a[s - 1];
    }
  }
  return a;
}

int pair_slot(int i, int j) {
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  if (lo == 1 && hi == 2) return 0;
  if (lo == 2 && hi == 3) return 1;
  if (lo == 1 && hi == 3) return 2;
  throw std::out_of_range("pair_slot: invalid pair");
}

SignIntegrals sign_accumulation(const PulseSchedule& sched) {
  SignIntegrals out;
  const SignMatrix signs = sign_matrix(sched);
  for (std::size_t seg = 0; seg < signs.size(); ++seg) {
    const double dt = sched.segments[seg];
    const auto& a = signs[seg];
    for (int s = 0; s < kSpins; ++s) out.spin[s] += a[s] * dt;
    out.pair[0] += a[0] * a[1] * dt;
    out.pair[1] += a[1] * a[2] * dt;
    out.pair[2] += a[0] * a[2] * dt;
  }
  return out;
}

PulseSchedule schedule_z(int spin, PiFraction angle, const SpinSystem& sys, const PulseOptions& opts) {
  require_three_spins(sys, "schedule_z");
  const Generator gen = Generator::z(spin, angle);
  const double rate = 2.0 * std::numbers::pi * sys.shift_hz(spin);
  if (rate == 0.0) {
    throw std::invalid_argument("schedule_z: spin " + std::to_string(spin) + " has zero chemical shift");
  }
  const PiFraction effective = normalize_angle(gen.angle(), rate);
  const double duration = effective.radians() / rate;
  std::array<int, 2> spectators{};
  for (int s = 1, k = 0; s <= kSpins; ++s) {
    if (s != spin) spectators[k++] = s;
  }
  return four_segment(gen, effective, duration,
                      {{1, spectators[0]}, {2, spectators[1]}, {3, spectators[0]}, {4, spectators[1]}}, opts);
}

PulseSchedule schedule_j(int i, int j, PiFraction angle, const SpinSystem& sys, const PulseOptions& opts) {
  require_three_spins(sys, "schedule_j");
  const Generator gen = Generator::coupling(i, j, angle);
  const double rate = std::numbers::pi * sys.coupling_hz(gen.spin(), gen.partner());
  if (rate == 0.0) {
    throw std::invalid_argument("schedule_j: J" + std::to_string(gen.spin()) + std::to_string(gen.partner()) +
                                " is zero");
  }
  const PiFraction effective = normalize_angle(gen.angle(), rate);
  const double duration = effective.radians() / rate;
  const int spectator = 6 - gen.spin() - gen.partner();
  return four_segment(gen, effective, duration,
                      {{1, spectator}, {2, kHardPulse}, {3, spectator}, {4, kHardPulse}}, opts);
}

PulseSchedule schedule_for(const Generator& gen, const SpinSystem& sys, const PulseOptions& opts) {
  if (gen.is_coupling()) return schedule_j(gen.spin(), gen.partner(), gen.angle(), sys, opts);
  return schedule_z(gen.spin(), gen.angle(), sys, opts);
}

ComplexOperator simulate_schedule(const PulseSchedule& sched, const SpinSystem& sys) {
  require_three_spins(sys, "simulate_schedule");
  const ComplexOperator h = hamiltonian(sys);
  ComplexOperator u = ComplexOperator::identity(8);
  const int n_seg = static_cast<int>(sched.segments.size());
  for (int b = 0; b <= n_seg; ++b) {
    for (const auto& p : sched.pulses) {
      if (p.boundary == b) u = pulse_unitary(p) * u;
    }
    if (b < n_seg) u = unitary_exp_diagonal(h, sched.segments[b]) * u;
  }
  return u;
}

OperatorSequence prepare_for_compilation(const OperatorSequence& seq) {
  std::vector<std::pair<int, PiFraction>> z;  // spin, accumulated angle
  std::vector<std::pair<std::pair<int, int>, PiFraction>> j;
  auto add_z = [&z](int spin, PiFraction angle) {
    auto it = std::find_if(z.begin(), z.end(), [spin](const auto& e) { return e.first == spin; });
    if (it == z.end()) {
      z.emplace_back(spin, angle);
    } else {
      it->second = it->second + angle;
    }
  };
  for (const auto& g : seq.generators()) {
    if (!g.is_coupling()) {
      add_z(g.spin(), g.angle());
      continue;
    }
    const std::pair<int, int> key{g.spin(), g.partner()};
    auto it = std::find_if(j.begin(), j.end(), [&key](const auto& e) { return e.first == key; });
    if (it == j.end()) {
      j.emplace_back(key, g.angle());
    } else {
      it->second = it->second + g.angle();
    }
  }
  for (auto& [pair, angle] : j) {
    angle = angle.canonical();
    if (angle.over_pi() < 0.0) {
      angle = angle + PiFraction(1);
      add_z(pair.first, PiFraction(1));
      add_z(pair.second, PiFraction(1));
    }
  }
  OperatorSequence out;
  for (const auto& [spin, angle] : z) out.add_z(spin, angle);
  for (const auto& [pair, angle] : j) out.add_coupling(pair.first, pair.second, angle);
  out.set_label(seq.label());
  return out;
}

std::vector<PulseSchedule> compile_sequence(const OperatorSequence& seq, const SpinSystem& sys,
                                            const PulseOptions& opts) {
  std::vector<PulseSchedule> out;
  const OperatorSequence prepared = prepare_for_compilation(seq);
  for (const auto& g : prepared.generators()) out.push_back(schedule_for(g, sys, opts));
  return out;
}

double total_duration(const std::vector<PulseSchedule>& schedules) {
  double t = 0.0;
  for (const auto& s : schedules) t += s.duration;
  return t;
}

ComplexOperator simulate_compiled(const std::vector<PulseSchedule>& schedules, const SpinSystem& sys) {
  ComplexOperator u = ComplexOperator::identity(8);
  for (const auto& s : schedules) u = simulate_schedule(s, sys) * u;
  return u;
}

std::string schedule_to_text(const PulseSchedule& sched) {
  std::string out;
  const int n_seg = static_cast<int>(sched.segments.size());
  for (int b = 0; b <= n_seg; ++b) {
    for (const auto& p : sched.pulses) {
      if (p.boundary != b) continue;
      out += "t=" + fmt_seconds(p.time) + " pulse " + (p.is_hard() ? "hard" : "soft") +
             " spin=" + (p.is_hard() ? std::string("all") : std::to_string(p.target)) +
             " axis=" + std::string(to_string(p.axis)) + "\n";
    }
    if (b < n_seg) out += "segment dt=" + fmt_seconds(sched.segments[b]) + "\n";
  }
  return out;
}

std::string schedule_to_json(const PulseSchedule& sched) {
  nlohmann::json j;
  j["realizes"] = sched.realizes.to_string();
  j["effective_angle_over_pi"] = sched.effective_angle.ratio_string();
  j["duration_s"] = sched.duration;
  j["segments_s"] = sched.segments;
  j["pulses"] = nlohmann::json::array();
  for (const auto& p : sched.pulses) {
    j["pulses"].push_back({{"time_s", p.time},
                           {"kind", p.is_hard() ? "hard" : "soft"},
                           {"spin", p.is_hard() ? nlohmann::json("all") : nlohmann::json(p.target)},
                           {"axis", std::string(to_string(p.axis))},
                           {"nominal_angle", "pi"},
                           {"flip_error", p.flip_error}});
  }
  return j.dump(2);
}

}  // namespace djnmr
