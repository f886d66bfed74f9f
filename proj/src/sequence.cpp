#include "djnmr/sequence.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

namespace djnmr {

namespace {

constexpr int kSpins = 3;
constexpr char kSpinNames[] = {'I', 'S', 'R'};

void require_spin(int spin, const char* what) {
  if (spin < 1 || spin > kSpins) {
    throw std::out_of_range(std::string(what) + ": spin index " + std::to_string(spin) + " outside 1..3");
  }
}

}  // namespace

Generator::Generator(GeneratorKind kind, int spin, int partner, PiFraction angle)
    : kind_(kind), spin_(spin), partner_(partner), angle_(angle.canonical()) {
  if (angle_.is_zero()) throw std::invalid_argument("Generator: zero rotation angle");
}

Generator Generator::z(int spin, PiFraction angle) {
  require_spin(spin, "Generator::z");
  return Generator(GeneratorKind::ZRotation, spin, spin, angle);
}

Generator Generator::coupling(int i, int j, PiFraction angle) {
  require_spin(i, "Generator::coupling");
  require_spin(j, "Generator::coupling");
  if (i == j) throw std::invalid_argument("Generator::coupling: a spin cannot couple to itself");
  return Generator(GeneratorKind::Coupling, std::min(i, j), std::max(i, j), angle);
}

ComplexOperator Generator::operator_term() const {
  if (kind_ == GeneratorKind::ZRotation) return spin_operator(Axis::Z, spin_, kSpins);
  return 2.0 * (spin_operator(Axis::Z, spin_, kSpins) * spin_operator(Axis::Z, partner_, kSpins));
}

ComplexOperator Generator::unitary() const { return unitary_exp_diagonal(operator_term(), angle_.radians()); }

std::string Generator::to_string() const {
  const std::string arg = "(" + angle_.to_string() + ")";
  if (kind_ == GeneratorKind::ZRotation) return std::string(1, kSpinNames[spin_ - 1]) + "z" + arg;
  return "J" + std::to_string(spin_) + std::to_string(partner_) + arg;
}

OperatorSequence::OperatorSequence(std::vector<Generator> gens, std::optional<std::uint8_t> label)
    : gens_(std::move(gens)), label_(label) {}

OperatorSequence& OperatorSequence::add_z(int spin, PiFraction angle) {
  if (!angle.canonical().is_zero()) gens_.push_back(Generator::z(spin, angle));
  return *this;
}

OperatorSequence& OperatorSequence::add_coupling(int i, int j, PiFraction angle) {
  if (!angle.canonical().is_zero()) gens_.push_back(Generator::coupling(i, j, angle));
  return *this;
}

int OperatorSequence::coupling_count() const {
  return static_cast<int>(std::count_if(gens_.begin(), gens_.end(), [](const Generator& g) { return g.is_coupling(); }));
}

int OperatorSequence::distinct_couplings() const {
  std::set<std::pair<int, int>> pairs;
  for (const auto& g : gens_) {
    if (g.is_coupling()) pairs.emplace(g.spin(), g.partner());
  }
  return static_cast<int>(pairs.size());
}

std::string OperatorSequence::to_text() const {
  if (gens_.empty()) return "identity";
  std::string out;
  for (const auto& g : gens_) {
    if (!out.empty()) out += ' ';
    out += g.to_string();
  }
  return out;
}

std::string OperatorSequence::to_json() const {
  nlohmann::json j;
  if (label_) {
    j["label"] = BinaryFunction::from_hex(*label_).hex_string();
  } else {
    j["label"] = nullptr;
  }
  j["generators"] = nlohmann::json::array();
  for (const auto& g : gens_) {
    nlohmann::json e;
    if (g.is_coupling()) {
      e["kind"] = "coupling";
      e["pair"] = std::to_string(g.spin()) + std::to_string(g.partner());
    } else {
      e["kind"] = "zrot";
      e["spin"] = g.spin();
    }
    e["angle_over_pi"] = g.angle().ratio_string();
    j["generators"].push_back(std::move(e));
  }
  return j.dump();
}

OperatorSequence parse_sequence(std::string_view text) {
  OperatorSequence seq;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "identity") continue;
    const auto open = tok.find('(');
    if (open == std::string::npos || tok.back() != ')') {
      throw std::invalid_argument("malformed generator '" + tok + "'");
    }
    const std::string name = tok.substr(0, open);
    const PiFraction angle = parse_pi_fraction(std::string_view(tok).substr(open + 1, tok.size() - open - 2));
    if (name.size() == 2 && name[1] == 'z') {
      const auto* it = std::find(std::begin(kSpinNames), std::end(kSpinNames), name[0]);
      if (it == std::end(kSpinNames)) throw std::invalid_argument("unknown spin in '" + tok + "'");
      seq.add_z(static_cast<int>(it - std::begin(kSpinNames)) + 1, angle);
    } else if (name.size() == 3 && name[0] == 'J' && name[1] >= '1' && name[1] <= '3' && name[2] >= '1' &&
               name[2] <= '3') {
      seq.add_coupling(name[1] - '0', name[2] - '0', angle);
    } else {
      throw std::invalid_argument("unknown generator '" + tok + "'");
    }
  }
  return seq;
}

OperatorSequence sequence_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    OperatorSequence seq;
    if (j.contains("label") && !j.at("label").is_null()) {
      seq.set_label(parse_function_index(j.at("label").get<std::string>()).hex_index());
    }
    for (const auto& e : j.at("generators")) {
      const auto kind = e.at("kind").get<std::string>();
      const PiFraction angle = parse_pi_fraction(e.at("angle_over_pi").get<std::string>());
      if (kind == "zrot") {
        seq.add_z(e.at("spin").get<int>(), angle);
      } else if (kind == "coupling") {
        const auto pair = e.at("pair").get<std::string>();
        if (pair.size() != 2) throw std::invalid_argument("bad coupling pair '" + pair + "'");
        seq.add_coupling(pair[0] - '0', pair[1] - '0', angle);
      } else {
        throw std::invalid_argument("unknown generator kind '" + kind + "'");
      }
    }
    return seq;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("sequence JSON: ") + e.what());
  }
}

ComplexOperator sequence_to_unitary(const OperatorSequence& seq) {
  ComplexOperator u = ComplexOperator::identity(8);
  for (const auto& g : seq.generators()) u = g.unitary() * u;
  return u;
}

std::string_view to_string(FunctionType t) {
  switch (t) {
    case FunctionType::I: return "I";
    case FunctionType::II: return "II";
    case FunctionType::III: return "III";
    case FunctionType::IV: return "IV";
  }
  return "?";
}

FunctionType classify_type(const OperatorSequence& seq) {
  return static_cast<FunctionType>(seq.distinct_couplings() + 1);
}

// Four rows correct transcription errors in the source listing, each confirmed by phase accumulation:
//  - the row listed as f_3B (five 1-bits) realizes f_4B,
//  - the type-III row listed as f_13 (three 1-bits) realizes f_1B,
//  - the type-IV row listed as f_1B realizes f_2B,
//  - f_4E starts with Iz(pi/2), not Iz(pi).
const std::map<std::uint8_t, TableEntry>& table_one() {
  static const std::map<std::uint8_t, TableEntry> table = [] {
    struct Row {
      std::uint8_t hex;
      FunctionType type;
      const char* text;
    };
    static constexpr Row rows[] = {
        {0x0F, FunctionType::I, "Iz(pi)"},
        {0x33, FunctionType::I, "Sz(pi)"},
        {0x55, FunctionType::I, "Rz(pi)"},
        {0x3C, FunctionType::I, "Iz(pi) Sz(pi)"},
        {0x66, FunctionType::I, "Sz(pi) Rz(pi)"},
        {0x5A, FunctionType::I, "Rz(pi) Iz(pi)"},
        {0x69, FunctionType::I, "Iz(pi) Sz(pi) Rz(pi)"},
        {0x36, FunctionType::II, "Sz(pi) Iz(-pi/2) Rz(-pi/2) J13(pi/2)"},
        {0x39, FunctionType::II, "Sz(pi) Iz(pi/2) Rz(-pi/2) J13(pi/2)"},
        {0x63, FunctionType::II, "Sz(pi) Iz(-pi/2) Rz(pi/2) J13(pi/2)"},
        {0x6C, FunctionType::II, "Sz(pi) Iz(pi/2) Rz(pi/2) J13(pi/2)"},
        {0x56, FunctionType::II, "Rz(pi) Iz(-pi/2) Sz(-pi/2) J12(pi/2)"},
        {0x59, FunctionType::II, "Rz(pi) Iz(pi/2) Sz(-pi/2) J12(pi/2)"},
        {0x65, FunctionType::II, "Rz(pi) Iz(-pi/2) Sz(pi/2) J12(pi/2)"},
        {0x6A, FunctionType::II, "Rz(pi) Iz(pi/2) Sz(pi/2) J12(pi/2)"},
        {0x1E, FunctionType::II, "Iz(pi) Sz(-pi/2) Rz(-pi/2) J23(pi/2)"},
        {0x2D, FunctionType::II, "Iz(pi) Sz(pi/2) Rz(-pi/2) J23(pi/2)"},
        {0x4B, FunctionType::II, "Iz(pi) Sz(-pi/2) Rz(pi/2) J23(pi/2)"},
        {0x78, FunctionType::II, "Iz(pi) Sz(pi/2) Rz(pi/2) J23(pi/2)"},
        {0x3A, FunctionType::III, "Sz(pi/2) Rz(-pi/2) J12(pi/2) J13(pi/2)"},
        {0x53, FunctionType::III, "Sz(pi/2) Rz(pi/2) J12(-pi/2) J13(pi/2)"},
        {0x35, FunctionType::III, "Sz(pi/2) Rz(pi/2) J12(pi/2) J13(-pi/2)"},
        {0x5C, FunctionType::III, "Sz(-pi/2) Rz(pi/2) J12(pi/2) J13(pi/2)"},
        {0x2E, FunctionType::III, "Iz(pi/2) Rz(-pi/2) J12(pi/2) J23(pi/2)"},
        {0x47, FunctionType::III, "Iz(pi/2) Rz(pi/2) J12(-pi/2) J23(pi/2)"},
        {0x1D, FunctionType::III, "Iz(pi/2) Rz(pi/2) J12(pi/2) J23(-pi/2)"},
        {0x74, FunctionType::III, "Iz(-pi/2) Rz(pi/2) J12(pi/2) J23(pi/2)"},
        {0x4E, FunctionType::III, "Iz(pi/2) Sz(-pi/2) J23(pi/2) J13(pi/2)"},
        {0x1B, FunctionType::III, "Iz(pi/2) Sz(pi/2) J23(-pi/2) J13(pi/2)"},
        {0x27, FunctionType::III, "Iz(pi/2) Sz(pi/2) J23(pi/2) J13(-pi/2)"},
        {0x72, FunctionType::III, "Iz(-pi/2) Sz(pi/2) J23(pi/2) J13(pi/2)"},
        {0x17, FunctionType::IV, "Sz(pi) J12(pi/2) J23(pi/2) J13(-pi/2)"},
        {0x2B, FunctionType::IV, "Sz(pi) J12(pi/2) J23(-pi/2) J13(pi/2)"},
        {0x4D, FunctionType::IV, "Sz(pi) J12(pi/2) J23(pi/2) J13(pi/2)"},
        {0x71, FunctionType::IV, "Sz(pi) J12(-pi/2) J23(pi/2) J13(pi/2)"},
    };
    std::map<std::uint8_t, TableEntry> out;
    for (const auto& r : rows) {
      OperatorSequence seq = parse_sequence(r.text);
      seq.set_label(r.hex);
      out.emplace(r.hex, TableEntry{r.hex, r.type, std::move(seq)});
    }
    return out;
  }();
  return table;
}

std::uint64_t table_checksum(const std::map<std::uint8_t, TableEntry>& table) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [hex, entry] : table) {
    char prefix[8];
    std::snprintf(prefix, sizeof prefix, "%02X ", static_cast<unsigned>(hex));
    const std::string line =
        std::string(prefix) + std::string(to_string(entry.type)) + " " + entry.sequence.to_text() + "\n";
    for (unsigned char c : line) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::optional<TableEntry> find_table_entry(BinaryFunction f) {
  const auto& table = table_one();
  if (auto it = table.find(f.hex_index()); it != table.end()) return it->second;
  if (auto it = table.find(f.complement().hex_index()); it != table.end()) return it->second;
  return std::nullopt;
}

int TableReport::passed() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const TableCheck& c) { return c.passed; }));
}

TableCheck verify_entry(std::uint8_t hex_index, const OperatorSequence& seq, double tol) {
  const auto match = equal_up_to_global_phase(sequence_to_unitary(seq), u_f(BinaryFunction::from_hex(hex_index)), tol);
  return TableCheck{hex_index, classify_type(seq), match.equal, match.phase, match.max_deviation};
}

TableReport verify_table(double tol) { return verify_table(table_one(), tol); }

TableReport verify_table(const std::map<std::uint8_t, TableEntry>& table, double tol) {
  TableReport report;
  report.entries.reserve(table.size());
  for (const auto& [hex, entry] : table) report.entries.push_back(verify_entry(hex, entry.sequence, tol));
  return report;
}

double WalshCoefficients::radians(unsigned mask) const { return units(mask) * std::numbers::pi / 8.0; }

double WalshCoefficients::c(int spin) const {
  require_spin(spin, "WalshCoefficients::c");
  return radians(1u << (spin - 1));
}

double WalshCoefficients::c(int i, int j) const {
  require_spin(i, "WalshCoefficients::c");
  require_spin(j, "WalshCoefficients::c");
  if (i == j) throw std::invalid_argument("WalshCoefficients::c: pair needs two distinct spins");
  return radians((1u << (i - 1)) | (1u << (j - 1)));
}

namespace {

// prod_{i in mask} s_i(x), s_i = 1 - 2 x_i.
int character(unsigned mask, int x) {
  int v = 1;
  for (int spin = 1; spin <= kSpins; ++spin) {
    if ((mask >> (spin - 1)) & 1u) v *= spin_bit(x, spin, kSpins) ? -1 : 1;
  }
  return v;
}

}  // namespace

int WalshCoefficients::reconstruct_eighths(int x) const {
  int total = 0;
  for (unsigned mask = 0; mask < 8; ++mask) total += eighths[mask] * character(mask, x);
  return total;
}

WalshCoefficients walsh(BinaryFunction f) {
  WalshCoefficients w;
  for (unsigned mask = 0; mask < 8; ++mask) {
    int sum = 0;
    for (int x = 0; x < 8; ++x) sum += f(x) * character(mask, x);
    w.eighths[mask] = sum;
  }
  return w;
}

OperatorSequence synthesize(BinaryFunction f) {
  if (classify(f) != FunctionClass::Balanced) {
    throw std::invalid_argument("synthesize: " + f.hex_string() + " is not balanced");
  }
  // Generator slots: Iz, Sz, Rz, J12, J23, J13. Each digit d in 0..3 is an
  // angle d*pi/2; phases are tracked in units of pi/4 modulo 8.
  static constexpr std::array<std::pair<int, int>, 6> slots = {{{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 3}, {1, 3}}};
  std::array<std::array<int, 8>, 6> slot_sign{};
  for (std::size_t k = 0; k < slots.size(); ++k) {
    for (int x = 0; x < 8; ++x) {
      const auto [i, j] = slots[k];
      const int si = spin_bit(x, i, kSpins) ? -1 : 1;
      const int sj = spin_bit(x, j, kSpins) ? -1 : 1;
      slot_sign[k][x] = k < 3 ? si : si * sj;
    }
  }
  std::array<int, 8> target{};
  for (int x = 0; x < 8; ++x) target[x] = 4 * (f(x) - f(0));

  std::optional<std::array<int, 6>> best;
  std::array<int, 3> best_cost{};
  std::array<int, 6> digits{};
  for (int code = 0; code < 4096; ++code) {
    for (int k = 5, c = code; k >= 0; --k, c /= 4) digits[k] = c % 4;
    std::array<int, 8> phase{};
    for (int x = 0; x < 8; ++x) {
      for (int k = 0; k < 6; ++k) phase[x] -= digits[k] * slot_sign[k][x];
    }
    bool match = true;
    for (int x = 1; x < 8 && match; ++x) {
      match = ((phase[x] - phase[0] - target[x]) % 8 + 8) % 8 == 0;
    }
    if (!match) continue;
    const int couplings = (digits[3] != 0) + (digits[4] != 0) + (digits[5] != 0);
    const int count = couplings + (digits[0] != 0) + (digits[1] != 0) + (digits[2] != 0);
    const std::array<int, 3> cost{couplings, count, code};
    if (!best || cost < best_cost) {
      best = digits;
      best_cost = cost;
    }
  }
  if (!best) throw SynthesisError("synthesize: no quarter-turn assignment realizes " + f.hex_string());

  OperatorSequence seq;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const PiFraction angle((*best)[k], 2);
    if (k < 3) {
      seq.add_z(slots[k].first, angle);
    } else {
      seq.add_coupling(slots[k].first, slots[k].second, angle);
    }
  }
  seq.set_label(f.hex_index());
  if (!equal_up_to_global_phase(sequence_to_unitary(seq), u_f(f), 1e-10).equal) {
    throw SynthesisError("synthesize: candidate for " + f.hex_string() + " failed unitary verification");
  }
  return seq;
}

}  // namespace djnmr
