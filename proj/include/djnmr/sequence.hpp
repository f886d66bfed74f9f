#pragma once

#include "djnmr/angle.hpp"
#include "djnmr/functions.hpp"
#include "djnmr/quantum_core.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace djnmr {

enum class GeneratorKind { ZRotation, Coupling };

// exp(-i theta I_iz) or exp(-i theta 2 I_iz I_jz). The angle is stored in
// its canonical representative in (-pi, pi] and is never zero.
class Generator {
 public:
  static Generator z(int spin, PiFraction angle);
  static Generator coupling(int i, int j, PiFraction angle);

  GeneratorKind kind() const { return kind_; }
  bool is_coupling() const { return kind_ == GeneratorKind::Coupling; }
  // For ZRotation both are the target spin; for Coupling spin() < partner().
  int spin() const { return spin_; }
  int partner() const { return partner_; }
  PiFraction angle() const { return angle_; }

  // I_iz or 2 I_iz I_jz on three spins.
  ComplexOperator operator_term() const;
  ComplexOperator unitary() const;

  // "Iz(pi)", "Sz(-pi/2)", "J13(pi/2)"
  std::string to_string() const;
  // Same kind and target.
  bool same_target(const Generator& other) const { return kind_ == other.kind_ && spin_ == other.spin_ && partner_ == other.partner_; }

  friend bool operator==(const Generator&, const Generator&) = default;

 private:
  Generator(GeneratorKind kind, int spin, int partner, PiFraction angle);
  GeneratorKind kind_;
  int spin_;
  int partner_;
  PiFraction angle_;
};

// Ordered product of commuting z-diagonal generators. Zero-angle terms are
// dropped on insertion.
class OperatorSequence {
 public:
  OperatorSequence() = default;
  explicit OperatorSequence(std::vector<Generator> gens, std::optional<std::uint8_t> label = std::nullopt);

  OperatorSequence& add_z(int spin, PiFraction angle);
  OperatorSequence& add_coupling(int i, int j, PiFraction angle);

  const std::vector<Generator>& generators() const& { return gens_; }
  std::vector<Generator> generators() && { return std::move(gens_); }
  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }
  std::optional<std::uint8_t> label() const { return label_; }
  void set_label(std::optional<std::uint8_t> label) { label_ = label; }

  int coupling_count() const;
  // Number of distinct coupled pairs.
  int distinct_couplings() const;

  // "Sz(pi) J12(pi/2) J23(pi/2) J13(pi/2)"; empty sequence is "identity".
  std::string to_text() const;
  std::string to_json() const;

  friend bool operator==(const OperatorSequence&, const OperatorSequence&) = default;

 private:
  std::vector<Generator> gens_;
  std::optional<std::uint8_t> label_;
};

// Inverse of OperatorSequence::to_text.
OperatorSequence parse_sequence(std::string_view text);
OperatorSequence sequence_from_json(const std::string& text);

ComplexOperator sequence_to_unitary(const OperatorSequence& seq);

enum class FunctionType { I = 1, II = 2, III = 3, IV = 4 };

std::string_view to_string(FunctionType t);

// Distinct couplings 0, 1, 2, 3 map to types I..IV.
FunctionType classify_type(const OperatorSequence& seq);

struct TableEntry {
  std::uint8_t hex_index;
  FunctionType type;
  OperatorSequence sequence;
};

// The 35 sequences for the distinct non-trivial U_f (functions with f(0) = 0;
// each also realizes its complement up to a global sign). I, S, R are spins
// 1, 2, 3.
const std::map<std::uint8_t, TableEntry>& table_one();

// FNV-1a (64-bit) over "<hex> <type> <sequence text>\n" lines in index order.
std::uint64_t table_checksum(const std::map<std::uint8_t, TableEntry>& table);

// Table lookup for f or its complement; empty for functions with no entry.
std::optional<TableEntry> find_table_entry(BinaryFunction f);

struct TableCheck {
  std::uint8_t hex_index;
  FunctionType type;
  bool passed;
  double phase;
  double max_deviation;
};

struct TableReport {
  std::vector<TableCheck> entries;
  int passed() const;
  bool all_passed() const { return passed() == static_cast<int>(entries.size()); }
};

TableCheck verify_entry(std::uint8_t hex_index, const OperatorSequence& seq, double tol = 1e-10);
TableReport verify_table(double tol = 1e-10);
TableReport verify_table(const std::map<std::uint8_t, TableEntry>& table, double tol = 1e-10);

// Multilinear expansion of pi f(x) in s_i = 1 - 2 x_i. Coefficients are kept
// as exact integers in units of pi/8, indexed by a subset mask over spins
// (bit 0 = spin 1, bit 1 = spin 2, bit 2 = spin 3).
struct WalshCoefficients {
  std::array<int, 8> eighths{};

  int units(unsigned mask) const { return eighths.at(mask); }
  double radians(unsigned mask) const;
  double c0() const { return radians(0); }
  double c(int spin) const;
  double c(int i, int j) const;
  double c123() const { return radians(7); }

  // sum_S c_S prod_{i in S} s_i in units of pi/8; equals 8 f(x) exactly.
  int reconstruct_eighths(int x) const;
};

WalshCoefficients walsh(BinaryFunction f);

class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive search over angles {0, pi/2, pi, 3pi/2} for each of the six
// generators (Iz, Sz, Rz, J12, J23, J13). Returns a matching sequence with
// the fewest couplings, then fewest generators, then lowest base-4 digit
// encoding in slot order. Throws SynthesisError if nothing matches.
OperatorSequence synthesize(BinaryFunction f);

}  // namespace djnmr
