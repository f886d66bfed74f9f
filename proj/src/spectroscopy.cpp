#include "djnmr/spectroscopy.hpp"

#include <fftw3.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace djnmr {

namespace {

constexpr int kSpins = 3;
constexpr int kDim = 8;

// Fraction of a Lorentzian's area (FWHM = linewidth) within +-2 linewidth.
const double kWindowFraction = 2.0 / std::numbers::pi * std::atan(4.0);

std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double round_sig(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::stod(buf);
}

// Trapezoidal integral of Re(amplitude) over [lo, hi] on the sampled grid,
// with linear interpolation at the window edges.
double integrate_real(const Spectrum& spec, double lo, double hi) {
  const auto& f = spec.freq_hz;
  if (f.size() < 2) return 0.0;
  auto value_at = [&](double x) {
    auto it = std::upper_bound(f.begin(), f.end(), x);
    if (it == f.begin() || it == f.end()) return 0.0;
    const std::size_t k = static_cast<std::size_t>(it - f.begin());
    const double t = (x - f[k - 1]) / (f[k] - f[k - 1]);
    return (1.0 - t) * spec.amplitude[k - 1].real() + t * spec.amplitude[k].real();
  };
  double total = 0.0;
  double prev_x = lo;
  double prev_y = value_at(lo);
  auto it = std::upper_bound(f.begin(), f.end(), lo);
  for (; it != f.end() && *it < hi; ++it) {
    const std::size_t k = static_cast<std::size_t>(it - f.begin());
    const double y = spec.amplitude[k].real();
    total += 0.5 * (prev_y + y) * (*it - prev_x);
    prev_x = *it;
    prev_y = y;
  }
  total += 0.5 * (prev_y + value_at(hi)) * (hi - prev_x);
  return total;
}

}  // namespace

std::string_view to_string(StateKind k) {
  switch (k) {
    case StateKind::Thermal: return "thermal";
    case StateKind::Pure: return "pure";
    case StateKind::Derived: return "derived";
  }
  return "derived";
}

std::string_view to_string(Realization r) {
  switch (r) {
    case Realization::IdealGenerators: return "ideal";
    case Realization::CompiledSchedules: return "compiled";
    case Realization::ExactUnitary: return "exact";
  }
  return "ideal";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Constant: return "constant";
    case Verdict::Balanced: return "balanced";
    case Verdict::Ambiguous: return "ambiguous";
  }
  return "ambiguous";
}

DeviationState::DeviationState(ComplexOperator r, StateKind k) : rho(std::move(r)), kind(k) {
  if (!rho.is_hermitian(1e-12)) throw std::invalid_argument("DeviationState: density matrix is not hermitian");
}

DeviationState rho_thermal() {
  ComplexOperator rho = ComplexOperator::zero(kDim);
  for (int s = 1; s <= kSpins; ++s) rho += spin_operator(Axis::Z, s, kSpins);
  return DeviationState(rho, StateKind::Thermal);
}

DeviationState rho_pure() {
  const auto z1 = spin_operator(Axis::Z, 1, kSpins);
  const auto z2 = spin_operator(Axis::Z, 2, kSpins);
  const auto z3 = spin_operator(Axis::Z, 3, kSpins);
  ComplexOperator rho = rho_thermal().rho;
  rho += 2.0 * (z1 * z2) + 2.0 * (z2 * z3) + 2.0 * (z1 * z3) + 4.0 * (z1 * z2 * z3);
  return DeviationState(rho, StateKind::Pure);
}

DeviationState initial_state(StateKind kind) {
  switch (kind) {
    case StateKind::Thermal: return rho_thermal();
    case StateKind::Pure: return rho_pure();
    case StateKind::Derived: break;
  }
  throw std::invalid_argument("initial_state: only thermal and pure states can be prepared");
}

OperatorSequence function_sequence(BinaryFunction f) {
  if (classify(f) == FunctionClass::Constant) {
    OperatorSequence empty;
    empty.set_label(f.hex_index());
    return empty;
  }
  auto entry = find_table_entry(f);
  if (!entry) throw std::out_of_range("no operator sequence for function " + f.hex_string());
  OperatorSequence seq = entry->sequence;
  seq.set_label(f.hex_index());
  return seq;
}

ComplexOperator realize(BinaryFunction f, const SpinSystem& sys, Realization realization, const PulseOptions& opts) {
  switch (realization) {
    case Realization::ExactUnitary: return u_f(f);
    case Realization::IdealGenerators: return sequence_to_unitary(function_sequence(f));
    case Realization::CompiledSchedules: return simulate_compiled(compile_sequence(function_sequence(f), sys, opts), sys);
  }
  throw std::invalid_argument("realize: unknown realization");
}

DeviationState run_protocol(BinaryFunction f, const DeviationState& state, const SpinSystem& sys,
                            Realization realization, const PulseOptions& opts) {
  const ComplexOperator v = realize(f, sys, realization, opts) * pseudo_hadamard();
  ComplexOperator rho = v * state.rho * v.adjoint();
  // Strip rounding-level anti-hermitian noise.
  rho = ComplexOperator(0.5 * (rho.matrix() + rho.matrix().adjoint()));
  return DeviationState(std::move(rho), StateKind::Derived);
}

std::vector<Line> predicted_lines(const SpinSystem& sys) {
  if (sys.n_spins() != kSpins) throw std::invalid_argument("predicted_lines: three-spin system required");
  std::vector<Line> out;
  for (int spin = 1; spin <= kSpins; ++spin) {
    int partners[2];
    for (int s = 1, k = 0; s <= kSpins; ++s) {
      if (s != spin) partners[k++] = s;
    }
    for (int s1 : {1, -1}) {
      for (int s2 : {1, -1}) {
        const double f = sys.shift_hz(spin) + 0.5 * s1 * sys.coupling_hz(spin, partners[0]) +
                         0.5 * s2 * sys.coupling_hz(spin, partners[1]);
        out.push_back(Line{spin, s1, s2, f, 0.0, false});
      }
    }
  }
  return out;
}

std::vector<std::complex<double>> fid(const DeviationState& state, const SpinSystem& sys, const Acquisition& acq) {
  if (!(acq.dwell_s > 0.0)) throw std::invalid_argument("fid: dwell time must be positive");
  if (!is_power_of_two(acq.n_points)) throw std::invalid_argument("fid: n_points must be a power of two");
  const double nyquist = 0.5 / acq.dwell_s;
  for (const auto& line : predicted_lines(sys)) {
    if (std::abs(line.freq_hz) >= nyquist) {
      throw std::invalid_argument("fid: line at " + fmt(line.freq_hz) + " Hz aliases; spectral window is +-" +
                                  fmt(nyquist) + " Hz");
    }
  }
  const ComplexOperator h = hamiltonian(sys);
  const ComplexOperator raise = total_raising(kSpins);
  // Tr(e^{-iHt} rho e^{iHt} I+) = sum_{a,b} rho_ba (I+)_ab e^{i (E_a - E_b) t} for diagonal H.
  struct Term {
    std::complex<double> weight;
    double omega;
  };
  std::vector<Term> terms;
  for (int a = 0; a < kDim; ++a) {
    for (int b = 0; b < kDim; ++b) {
      const auto w = state.rho(b, a) * raise(a, b);
      if (w != std::complex<double>(0.0)) terms.push_back({w, h(a, a).real() - h(b, b).real()});
    }
  }
  const double decay = std::numbers::pi * sys.linewidth_hz();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(acq.n_points));
  for (int k = 0; k < acq.n_points; ++k) {
    const double t = k * acq.dwell_s;
    std::complex<double> s = 0.0;
    for (const auto& term : terms) s += term.weight * std::polar(1.0, term.omega * t);
    out[static_cast<std::size_t>(k)] = s * std::exp(-decay * t);
  }
  return out;
}

Spectrum spectrum(const std::vector<std::complex<double>>& signal, const Acquisition& acq, double linewidth_hz) {
  if (!(acq.dwell_s > 0.0)) throw std::invalid_argument("spectrum: dwell time must be positive");
  if (!is_power_of_two(static_cast<long long>(signal.size()))) {
    throw std::invalid_argument("spectrum: FID length must be a power of two");
  }
  if (!is_power_of_two(acq.zero_fill)) throw std::invalid_argument("spectrum: zero_fill must be a power of two");
  const std::size_t n = signal.size() * static_cast<std::size_t>(acq.zero_fill);

  std::vector<std::complex<double>> in(n, 0.0);
  std::copy(signal.begin(), signal.end(), in.begin());
  in[0] *= 0.5;
  std::vector<std::complex<double>> out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }

  Spectrum spec;
  spec.acquisition = acq;
  spec.linewidth_hz = linewidth_hz;
  spec.freq_hz.resize(n);
  spec.amplitude.resize(n);
  const double df = 1.0 / (static_cast<double>(n) * acq.dwell_s);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + half) % n;
    spec.freq_hz[j] = (static_cast<double>(j) - static_cast<double>(half)) * df;
    spec.amplitude[j] = acq.dwell_s * out[k];
  }
  return spec;
}

bool LineList::any_overlap() const {
  return std::any_of(lines.begin(), lines.end(), [](const Line& l) { return l.overlapped; });
}

LineList extract_lines(const Spectrum& spec, const SpinSystem& sys) {
  const double lw = spec.linewidth_hz;
  if (!(lw > 0.0)) throw std::invalid_argument("extract_lines: a positive linewidth is required");
  const double half_window = 2.0 * lw;
  LineList out;
  out.lines = predicted_lines(sys);
  for (auto& line : out.lines) {
    const double integral = integrate_real(spec, line.freq_hz - half_window, line.freq_hz + half_window);
    // A line of coherence amplitude A has total area A/2 with the halved first point.
    line.signed_amplitude = integral / (0.5 * kWindowFraction);
    for (const auto& other : out.lines) {
      if (&other != &line && std::abs(other.freq_hz - line.freq_hz) < 2.0 * half_window) line.overlapped = true;
    }
  }
  return out;
}

Classification classify_from_spectrum(const LineList& lines, const LineList& reference) {
  if (lines.lines.size() != reference.lines.size() || lines.lines.empty()) {
    throw std::invalid_argument("classify_from_spectrum: line lists do not match");
  }
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lines.lines.size(); ++k) {
    const double ref = reference.lines[k].signed_amplitude;
    if (ref == 0.0) throw std::invalid_argument("classify_from_spectrum: reference line has zero amplitude");
    min_ratio = std::min(min_ratio, lines.lines[k].signed_amplitude / ref);
  }
  if (min_ratio >= 0.5) return {Verdict::Constant, true, min_ratio};
  if (min_ratio <= -0.5) return {Verdict::Balanced, true, min_ratio};
  return {Verdict::Ambiguous, false, min_ratio};
}

std::map<int, double> coherence_order_decomposition(const DeviationState& state) {
  std::map<int, double> out;
  for (int p = -kSpins; p <= kSpins; ++p) out[p] = 0.0;
  for (int a = 0; a < kDim; ++a) {
    for (int b = 0; b < kDim; ++b) {
      const int p = static_cast<int>(std::lround(total_m(a, kSpins) - total_m(b, kSpins)));
      out[p] += std::norm(state.rho(a, b));
    }
  }
  return out;
}

LineList reference_lines(const SpinSystem& sys, const ExperimentConfig& cfg) {
  const auto rho = run_protocol(BinaryFunction::from_hex(0x00), initial_state(cfg.state), sys, cfg.realization,
                                cfg.pulses);
  return extract_lines(spectrum(fid(rho, sys, cfg.acquisition), cfg.acquisition, sys.linewidth_hz()), sys);
}

ExperimentResult run_experiment(BinaryFunction f, const SpinSystem& sys, const ExperimentConfig& cfg) {
  return run_experiment(f, sys, cfg, reference_lines(sys, cfg));
}

ExperimentResult run_experiment(BinaryFunction f, const SpinSystem& sys, const ExperimentConfig& cfg,
                                const LineList& reference) {
  const auto rho = run_protocol(f, initial_state(cfg.state), sys, cfg.realization, cfg.pulses);
  Spectrum spec = spectrum(fid(rho, sys, cfg.acquisition), cfg.acquisition, sys.linewidth_hz());
  LineList lines = extract_lines(spec, sys);
  const Classification cls = classify_from_spectrum(lines, reference);
  return ExperimentResult{f, std::move(spec), std::move(lines), cls};
}

std::string spectrum_to_csv(const Spectrum& spec) {
  std::string out = "freq_hz,real,imag\n";
  out.reserve(spec.freq_hz.size() * 48);
  for (std::size_t k = 0; k < spec.freq_hz.size(); ++k) {
    out += fmt(spec.freq_hz[k]) + "," + fmt(spec.amplitude[k].real()) + "," + fmt(spec.amplitude[k].imag()) + "\n";
  }
  return out;
}

std::string lines_to_csv(const LineList& lines) {
  std::string out = "spin,sign1,sign2,freq_hz,amplitude\n";
  for (const auto& l : lines.lines) {
    out += std::to_string(l.spin) + "," + (l.sign1 > 0 ? "+" : "-") + "," + (l.sign2 > 0 ? "+" : "-") + "," +
           fmt(l.freq_hz) + "," + fmt(l.signed_amplitude, "%.6g") + "\n";
  }
  return out;
}

std::string verdict_to_json(const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["hex_index"] = result.function.hex_string();
  j["verdict"] = std::string(to_string(result.classification.verdict));
  j["confident"] = result.classification.confident;
  j["lines"] = nlohmann::ordered_json::array();
  for (const auto& l : result.lines.lines) {
    j["lines"].push_back({{"spin", l.spin},
                          {"sign1", l.sign1 > 0 ? "+" : "-"},
                          {"sign2", l.sign2 > 0 ? "+" : "-"},
                          {"freq_hz", round_sig(l.freq_hz, 10)},
                          {"amplitude", round_sig(l.signed_amplitude, 6)},
                          {"overlapped", l.overlapped}});
  }
  return j.dump(2) + "\n";
}

}  // namespace djnmr
