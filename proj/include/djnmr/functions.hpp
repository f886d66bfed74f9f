#pragma once

#include "djnmr/quantum_core.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace djnmr {

enum class FunctionClass { Constant, Balanced, Neither };

std::string_view to_string(FunctionClass c);

// f: {0,1}^3 -> {0,1}, indexed by its output string f(0)...f(7) read as an
// 8-bit number with f(0) the most significant bit (0x1E is 00011110).
class BinaryFunction {
 public:
  static constexpr int kBits = 3;
  static constexpr int kInputs = 8;

  static BinaryFunction from_hex(int index);
  static BinaryFunction from_outputs(const std::array<int, kInputs>& outputs);

  std::uint8_t hex_index() const { return index_; }
  int operator()(int x) const;
  std::array<int, kInputs> outputs() const;
  int ones() const;
  BinaryFunction complement() const { return BinaryFunction(static_cast<std::uint8_t>(0xFF - index_)); }

  // "0x1E"
  std::string hex_string() const;

  friend bool operator==(BinaryFunction, BinaryFunction) = default;

 private:
  explicit BinaryFunction(std::uint8_t index) : index_(index) {}
  std::uint8_t index_;
};

// Accepts "0xNN" (case-insensitive) or decimal.
BinaryFunction parse_function_index(std::string_view text);

FunctionClass classify(BinaryFunction f);

// diag((-1)^f(x)), x = 0..7.
ComplexOperator u_f(BinaryFunction f);

// All 70 balanced functions, ascending by index.
std::vector<BinaryFunction> enumerate_balanced();

// |<000| H^-1 U_f H |000>| with H the hard pi/2 y-rotation on every spin.
double ideal_dj_overlap(BinaryFunction f);

// exp(-i (pi/2) sum_i I_iy) on three spins.
ComplexOperator pseudo_hadamard();

}  // namespace djnmr
