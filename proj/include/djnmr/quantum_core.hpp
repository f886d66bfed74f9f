#pragma once

#include <Eigen/Dense>

#include <complex>

namespace djnmr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class Axis { X, Y, Z };

// Dense square operator on the Hilbert space of one to three spin-1/2
// particles. The dimension is always 2, 4 or 8.
class ComplexOperator {
 public:
  explicit ComplexOperator(Matrix m);

  static ComplexOperator identity(int dim);
  static ComplexOperator zero(int dim);
  static ComplexOperator diagonal(const Eigen::VectorXcd& entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  int n_spins() const;
  const Matrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  ComplexOperator adjoint() const;
  Complex trace() const { return m_.trace(); }

  // Largest entry modulus.
  double max_abs() const;
  bool is_hermitian(double tol = 1e-12) const;
  bool is_unitary(double tol = 1e-12) const;
  bool is_diagonal(double tol = 0.0) const;

  ComplexOperator& operator+=(const ComplexOperator& rhs);
  ComplexOperator& operator-=(const ComplexOperator& rhs);
  ComplexOperator& operator*=(Complex s);

  friend ComplexOperator operator+(ComplexOperator lhs, const ComplexOperator& rhs) { return lhs += rhs; }
  friend ComplexOperator operator-(ComplexOperator lhs, const ComplexOperator& rhs) { return lhs -= rhs; }
  friend ComplexOperator operator*(ComplexOperator lhs, Complex s) { return lhs *= s; }
  friend ComplexOperator operator*(Complex s, ComplexOperator rhs) { return rhs *= s; }
  friend ComplexOperator operator*(const ComplexOperator& lhs, const ComplexOperator& rhs);

 private:
  Matrix m_;
};

// max |A_ij - B_ij|
double max_abs_diff(const ComplexOperator& a, const ComplexOperator& b);

ComplexOperator kron(const ComplexOperator& a, const ComplexOperator& b);
ComplexOperator commutator(const ComplexOperator& a, const ComplexOperator& b);

// Single-spin angular momentum component (1/2 Pauli) embedded at position
// spin_index (1-based, spin 1 is the most significant tensor factor).
ComplexOperator spin_operator(Axis axis, int spin_index, int n_spins);

// Sum over all spins of I_x + i I_y.
ComplexOperator total_raising(int n_spins);

// Bit value (0 or 1) of a spin (1-based, spin 1 most significant) in a
// computational basis state.
inline int spin_bit(int basis_state, int spin_index, int n_spins) {
  return (basis_state >> (n_spins - spin_index)) & 1;
}

// Total z angular momentum quantum number of a computational basis state.
// Bit value 0 is m = +1/2.
double total_m(int basis_state, int n_spins);

struct PhaseMatch {
  bool equal = false;
  double phase = 0.0;          // phi in (-pi, pi] with A ~ exp(i phi) B
  double max_deviation = 0.0;  // max |A - exp(i phi) B|
};

PhaseMatch equal_up_to_global_phase(const ComplexOperator& a, const ComplexOperator& b, double tol);

// exp(-i t D) for a diagonal hermitian D.
ComplexOperator unitary_exp_diagonal(const ComplexOperator& d, double t);

// exp(-i t H) for a hermitian H via eigendecomposition.
ComplexOperator general_unitary_exp(const ComplexOperator& h, double t);

}  // namespace djnmr
