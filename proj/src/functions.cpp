#include "djnmr/functions.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace djnmr {

std::string_view to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::Constant: return "constant";
    case FunctionClass::Balanced: return "balanced";
    case FunctionClass::Neither: return "neither";
  }
  return "neither";
}

BinaryFunction BinaryFunction::from_hex(int index) {
  if (index < 0 || index > 0xFF) {
    throw std::out_of_range("function index " + std::to_string(index) + " outside 0x00..0xFF");
  }
  return BinaryFunction(static_cast<std::uint8_t>(index));
}

BinaryFunction BinaryFunction::from_outputs(const std::array<int, kInputs>& outputs) {
  int index = 0;
  for (int v : outputs) {
    if (v != 0 && v != 1) throw std::invalid_argument("function outputs must be 0 or 1");
    index = (index << 1) | v;
  }
  return BinaryFunction(static_cast<std::uint8_t>(index));
}

int BinaryFunction::operator()(int x) const {
  if (x < 0 || x >= kInputs) throw std::out_of_range("function argument outside 0..7");
  return (index_ >> (kInputs - 1 - x)) & 1;
}

std::array<int, BinaryFunction::kInputs> BinaryFunction::outputs() const {
  std::array<int, kInputs> out{};
  for (int x = 0; x < kInputs; ++x) out[x] = (*this)(x);
  return out;
}

int BinaryFunction::ones() const { return std::popcount(index_); }

std::string BinaryFunction::hex_string() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", static_cast<unsigned>(index_));
  return buf;
}

BinaryFunction parse_function_index(std::string_view text) {
  int base = 10;
  std::string_view digits = text;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits.remove_prefix(2);
  }
  int value = -1;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw std::invalid_argument("invalid function index '" + std::string(text) + "'");
  }
  return BinaryFunction::from_hex(value);
}

FunctionClass classify(BinaryFunction f) {
  const int ones = f.ones();
  if (ones == 0 || ones == BinaryFunction::kInputs) return FunctionClass::Constant;
  if (ones == BinaryFunction::kInputs / 2) return FunctionClass::Balanced;
  return FunctionClass::Neither;
}

ComplexOperator u_f(BinaryFunction f) {
  Eigen::VectorXcd d(BinaryFunction::kInputs);
  for (int x = 0; x < BinaryFunction::kInputs; ++x) d(x) = f(x) ? -1.0 : 1.0;
  return ComplexOperator::diagonal(d);
}

std::vector<BinaryFunction> enumerate_balanced() {
  std::vector<BinaryFunction> out;
  for (int idx = 0; idx <= 0xFF; ++idx) {
    auto f = BinaryFunction::from_hex(idx);
    if (classify(f) == FunctionClass::Balanced) out.push_back(f);
  }
  return out;
}

ComplexOperator pseudo_hadamard() {
  ComplexOperator sum_y = ComplexOperator::zero(8);
  for (int k = 1; k <= 3; ++k) sum_y += spin_operator(Axis::Y, k, 3);
  return general_unitary_exp(sum_y, std::numbers::pi / 2.0);
}

double ideal_dj_overlap(BinaryFunction f) {
  const ComplexOperator h = pseudo_hadamard();
  // The second pulse is the -pi/2 rotation, so constant functions return to |000>.
  const ComplexOperator circuit = h.adjoint() * u_f(f) * h;
  return std::abs(circuit(0, 0));
}

}  // namespace djnmr
