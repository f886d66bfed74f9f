#pragma once

#include "djnmr/quantum_core.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace djnmr {

// Weakly coupled spin-1/2 system in the rotating frame. Frequencies are
// stored in Hz; the 2*pi conversion happens only when operators are built.
class SpinSystem {
 public:
  // Validates sizes (1..3 spins), zero diagonal, symmetric couplings and a
  // non-negative linewidth.
  SpinSystem(std::vector<double> shift_hz, std::vector<std::vector<double>> coupling_hz, double linewidth_hz);

  int n_spins() const { return static_cast<int>(shift_hz_.size()); }

  // 1-based accessors.
  double shift_hz(int spin) const;
  double coupling_hz(int i, int j) const;
  double linewidth_hz() const { return linewidth_hz_; }

  const std::vector<double>& shifts() const { return shift_hz_; }
  const std::vector<std::vector<double>>& couplings() const { return coupling_hz_; }

  SpinSystem with_linewidth(double linewidth_hz) const;

 private:
  std::vector<double> shift_hz_;
  std::vector<std::vector<double>> coupling_hz_;
  double linewidth_hz_;
};

// The three carbon-13 spins of labelled alanine.
SpinSystem alanine_preset();

// Diagonal H = sum_i 2 pi shift_i I_iz + sum_{i<j} pi J_ij 2 I_iz I_jz in rad/s.
ComplexOperator hamiltonian(const SpinSystem& sys);

// exp(-i H t), t in seconds.
ComplexOperator free_propagator(const SpinSystem& sys, double t);

// {"shift_hz": [...], "coupling_hz": [[...]], "linewidth_hz": x}; unknown keys
// are rejected.
SpinSystem spin_system_from_json(const std::string& text);
SpinSystem load_spin_system(const std::filesystem::path& path);
std::string spin_system_to_json(const SpinSystem& sys);

}  // namespace djnmr
