#pragma once

#include "djnmr/sequence.hpp"
#include "djnmr/spin_system.hpp"

#include <array>
#include <string>
#include <vector>

namespace djnmr {

enum class PulseAxis { PlusX, MinusX, PlusY, MinusY };

std::string_view to_string(PulseAxis axis);

inline constexpr int kHardPulse = 0;

// Instantaneous pi pulse. target is a spin index (soft, selective) or
// kHardPulse for a rotation of every spin.
struct PiPulse {
  double time = 0.0;
  int boundary = 0;  // index of the segment boundary the pulse sits on
  int target = kHardPulse;
  PulseAxis axis = PulseAxis::PlusX;
  double flip_error = 0.0;  // actual rotation is pi (1 + flip_error)

  bool is_hard() const { return target == kHardPulse; }
  bool flips(int spin) const { return is_hard() || target == spin; }
};

// Free-evolution segments partitioning [0, duration] with pulses on the
// segment boundaries (boundary k is at the start of segment k; the last
// boundary is the end of the schedule).
struct PulseSchedule {
  double duration = 0.0;
  std::vector<double> segments;
  std::vector<PiPulse> pulses;
  Generator realizes;
  // Angle actually accumulated by the free evolution; differs from the
  // generator angle by a multiple of 2 pi.
  PiFraction effective_angle;

  int soft_pulse_count() const;
};

// Orientation (+1/-1) of each spin during each segment.
using SignMatrix = std::vector<std::array<int, 3>>;

SignMatrix sign_matrix(const PulseSchedule& sched);
// Orientation after the final boundary.
std::array<int, 3> final_orientation(const PulseSchedule& sched);

// Toggling-frame integrals in seconds: sum a_i dt per spin and sum a_i a_j dt
// per pair, pairs ordered (12, 23, 13).
struct SignIntegrals {
  std::array<double, 3> spin{};
  std::array<double, 3> pair{};
};

SignIntegrals sign_accumulation(const PulseSchedule& sched);

// Index of a pair in SignIntegrals::pair.
int pair_slot(int i, int j);

enum class AxisPattern {
  Alternating,  // x, -x, -x, x
  Uniform,      // x, x, x, x
};

struct PulseOptions {
  AxisPattern pattern = AxisPattern::Alternating;
  double flip_error = 0.0;
};

// Four T/4 segments. The lower-numbered spectator is flipped at T/4 and 3T/4,
// the other at T/2 and T.
PulseSchedule schedule_z(int spin, PiFraction angle, const SpinSystem& sys, const PulseOptions& opts = {});

// Four T/4 segments. The spectator is flipped at T/4 and 3T/4, hard pulses at
// T/2 and T.
PulseSchedule schedule_j(int i, int j, PiFraction angle, const SpinSystem& sys, const PulseOptions& opts = {});

PulseSchedule schedule_for(const Generator& gen, const SpinSystem& sys, const PulseOptions& opts = {});

// Piecewise propagation under the full Hamiltonian with instantaneous pulses.
ComplexOperator simulate_schedule(const PulseSchedule& sched, const SpinSystem& sys);

// Rewrites a sequence into the form that is compiled: each negative-angle
// coupling J_ij(theta) becomes J_ij(theta + pi) Z_i(pi) Z_j(pi) (equal up to global
// phase, and a much shorter evolution), z-rotations of the same spin are
// merged, all z-rotations come first and couplings last.
OperatorSequence prepare_for_compilation(const OperatorSequence& seq);

// One schedule per generator of prepare_for_compilation(seq), in order.
std::vector<PulseSchedule> compile_sequence(const OperatorSequence& seq, const SpinSystem& sys,
                                            const PulseOptions& opts = {});

double total_duration(const std::vector<PulseSchedule>& schedules);

// Product of simulate_schedule over the compiled list, first schedule first.
ComplexOperator simulate_compiled(const std::vector<PulseSchedule>& schedules, const SpinSystem& sys);

// One event per line, chronological:
//   t=<seconds> pulse soft|hard spin=<i|all> axis=<+x|-x|+y|-y>
//   segment dt=<seconds>
std::string schedule_to_text(const PulseSchedule& sched);
std::string schedule_to_json(const PulseSchedule& sched);

}  // namespace djnmr
