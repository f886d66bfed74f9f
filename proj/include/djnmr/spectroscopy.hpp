#pragma once

#include "djnmr/functions.hpp"
#include "djnmr/refocusing.hpp"
#include "djnmr/sequence.hpp"
#include "djnmr/spin_system.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace djnmr {

enum class StateKind { Thermal, Pure, Derived };

std::string_view to_string(StateKind k);

// Traceless deviation density matrix.
struct DeviationState {
  DeviationState(ComplexOperator rho, StateKind kind);

  ComplexOperator rho;
  StateKind kind;
};

// I1z + I2z + I3z
DeviationState rho_thermal();
// Deviation part of |000><000|: thermal + 2I1zI2z + 2I2zI3z + 2I1zI3z + 4I1zI2zI3z.
DeviationState rho_pure();
DeviationState initial_state(StateKind kind);

enum class Realization {
  IdealGenerators,   // product of exact generator exponentials
  CompiledSchedules, // refocused pulse schedules under the full Hamiltonian
  ExactUnitary,      // u_f itself; the only option for non-promise functions
};

std::string_view to_string(Realization r);

// Sequence used to realize f: empty for constants, the table entry for f or
// its complement otherwise. Throws std::out_of_range if f has no entry.
OperatorSequence function_sequence(BinaryFunction f);

// The unitary applied after the pseudo-Hadamard.
ComplexOperator realize(BinaryFunction f, const SpinSystem& sys, Realization realization,
                        const PulseOptions& opts = {});

// rho -> V rho V^dagger with V = U_f(realization) exp(-i (pi/2) sum I_y). The
// second Hadamard and the readout pulse cancel and are not applied.
DeviationState run_protocol(BinaryFunction f, const DeviationState& state, const SpinSystem& sys,
                            Realization realization, const PulseOptions& opts = {});

struct Acquisition {
  double dwell_s = 20e-6;
  int n_points = 16384;
  int zero_fill = 8;  // spectrum length = n_points * zero_fill
};

// s(k) = Tr(e^{-iHt} rho e^{iHt} I+) exp(-pi linewidth t), t = k dwell.
// Rejects acquisitions whose window cannot hold every line without aliasing.
std::vector<std::complex<double>> fid(const DeviationState& state, const SpinSystem& sys, const Acquisition& acq);

struct Spectrum {
  std::vector<double> freq_hz;  // ascending, spanning [-1/(2 dwell), 1/(2 dwell))
  std::vector<std::complex<double>> amplitude;
  Acquisition acquisition;
  double linewidth_hz = 0.0;

  double resolution_hz() const { return freq_hz.size() > 1 ? freq_hz[1] - freq_hz[0] : 0.0; }
};

// dwell-scaled DFT with the first point halved, zero-filled and centred.
Spectrum spectrum(const std::vector<std::complex<double>>& fid, const Acquisition& acq, double linewidth_hz);

struct Line {
  int spin;                // 1..3
  int sign1;               // +1 if the lower-numbered partner is up (m = +1/2)
  int sign2;               // same for the higher-numbered partner
  double freq_hz;          // shift + sign1 J/2 + sign2 J/2
  double signed_amplitude; // window integral normalised to the line's full area
  bool overlapped;         // integration window shares spectrum with another line
};

struct LineList {
  std::vector<Line> lines;
  bool any_overlap() const;
};

// The 12 predicted transitions, ordered by spin then (+,+), (+,-), (-,+), (-,-).
std::vector<Line> predicted_lines(const SpinSystem& sys);

// Integrates the real part over +-2 linewidth around each predicted line and
// divides by the area fraction a Lorentzian of that linewidth puts there.
LineList extract_lines(const Spectrum& spec, const SpinSystem& sys);

enum class Verdict { Constant, Balanced, Ambiguous };

std::string_view to_string(Verdict v);

struct Classification {
  Verdict verdict;
  bool confident;
  double min_ratio;  // smallest amplitude / reference amplitude
};

// Constant when every line keeps the reference sign with at least half its
// magnitude; balanced when some line is reversed with at least half its
// magnitude; anything else is reported as ambiguous (low confidence).
Classification classify_from_spectrum(const LineList& lines, const LineList& reference);

// Weight (sum of |rho_ab|^2) per coherence order p = M_a - M_b in -3..3.
std::map<int, double> coherence_order_decomposition(const DeviationState& state);

// End-to-end experiment for one function.
struct ExperimentConfig {
  StateKind state = StateKind::Thermal;
  Realization realization = Realization::CompiledSchedules;
  Acquisition acquisition;
  PulseOptions pulses;
};

struct ExperimentResult {
  BinaryFunction function;
  Spectrum spectrum;
  LineList lines;
  Classification classification;
};

// The reference is the f = 0x00 experiment under the same configuration.
LineList reference_lines(const SpinSystem& sys, const ExperimentConfig& cfg);
ExperimentResult run_experiment(BinaryFunction f, const SpinSystem& sys, const ExperimentConfig& cfg);
ExperimentResult run_experiment(BinaryFunction f, const SpinSystem& sys, const ExperimentConfig& cfg,
                                const LineList& reference);

std::string spectrum_to_csv(const Spectrum& spec);
std::string lines_to_csv(const LineList& lines);
// {hex_index, verdict, confident, lines: [...]}
std::string verdict_to_json(const ExperimentResult& result);

}  // namespace djnmr
