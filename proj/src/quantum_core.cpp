#include "djnmr/quantum_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace djnmr {

namespace {

bool valid_dim(Eigen::Index d) { return d == 2 || d == 4 || d == 8; }

void require_same_dim(const ComplexOperator& a, const ComplexOperator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()) + ")");
  }
}

ComplexOperator pauli_half(Axis axis) {
  Matrix m(2, 2);
  switch (axis) {
    case Axis::X:
      m << 0.0, 0.5, 0.5, 0.0;
      break;
    case Axis::Y:
      m << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
      break;
    case Axis::Z:
      m << 0.5, 0.0, 0.0, -0.5;
      break;
  }
  return ComplexOperator(m);
}

}  // namespace

ComplexOperator::ComplexOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || !valid_dim(m_.rows())) {
    throw std::invalid_argument("ComplexOperator: expected a square 2x2, 4x4 or 8x8 matrix, got " +
                                std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  }
}

ComplexOperator ComplexOperator::identity(int dim) { return ComplexOperator(Matrix::Identity(dim, dim)); }

ComplexOperator ComplexOperator::zero(int dim) { return ComplexOperator(Matrix::Zero(dim, dim)); }

ComplexOperator ComplexOperator::diagonal(const Eigen::VectorXcd& entries) {
  return ComplexOperator(Matrix(entries.asDiagonal()));
}

int ComplexOperator::n_spins() const {
  switch (dim()) {
    case 2: return 1;
    case 4: return 2;
    default: return 3;
  }
}

ComplexOperator ComplexOperator::adjoint() const { return ComplexOperator(m_.adjoint()); }

double ComplexOperator::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

bool ComplexOperator::is_hermitian(double tol) const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol; }

bool ComplexOperator::is_unitary(double tol) const {
  return (m_.adjoint() * m_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
}

bool ComplexOperator::is_diagonal(double tol) const {
  for (int r = 0; r < dim(); ++r) {
    for (int c = 0; c < dim(); ++c) {
      if (r != c && std::abs(m_(r, c)) > tol) return false;
    }
  }
  return true;
}

ComplexOperator& ComplexOperator::operator+=(const ComplexOperator& rhs) {
  require_same_dim(*this, rhs, "operator+");
  m_ += rhs.m_;
  return *this;
}

ComplexOperator& ComplexOperator::operator-=(const ComplexOperator& rhs) {
  require_same_dim(*this, rhs, "operator-");
  m_ -= rhs.m_;
  return *this;
}

ComplexOperator& ComplexOperator::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

ComplexOperator operator*(const ComplexOperator& lhs, const ComplexOperator& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  return ComplexOperator(lhs.matrix() * rhs.matrix());
}

double max_abs_diff(const ComplexOperator& a, const ComplexOperator& b) {
  require_same_dim(a, b, "max_abs_diff");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

ComplexOperator kron(const ComplexOperator& a, const ComplexOperator& b) {
  const int na = a.dim();
  const int nb = b.dim();
  Matrix out(na * nb, na * nb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.matrix();
    }
  }
  return ComplexOperator(std::move(out));
}

ComplexOperator commutator(const ComplexOperator& a, const ComplexOperator& b) { return a * b - b * a; }

ComplexOperator spin_operator(Axis axis, int spin_index, int n_spins) {
  if (n_spins < 1 || n_spins > 3) {
    throw std::invalid_argument("spin_operator: n_spins must be 1..3, got " + std::to_string(n_spins));
  }
  if (spin_index < 1 || spin_index > n_spins) {
    throw std::out_of_range("spin_operator: spin index " + std::to_string(spin_index) + " out of range 1.." +
                            std::to_string(n_spins));
  }
  const ComplexOperator id2 = ComplexOperator::identity(2);
  ComplexOperator out = spin_index == 1 ? pauli_half(axis) : id2;
  for (int k = 2; k <= n_spins; ++k) {
    out = kron(out, k == spin_index ? pauli_half(axis) : id2);
  }
  return out;
}

ComplexOperator total_raising(int n_spins) {
  if (n_spins < 1 || n_spins > 3) {
    throw std::invalid_argument("total_raising: n_spins must be 1..3, got " + std::to_string(n_spins));
  }
  const int dim = 1 << n_spins;
  ComplexOperator out = ComplexOperator::zero(dim);
  const Complex i(0.0, 1.0);
  for (int k = 1; k <= n_spins; ++k) {
    out += spin_operator(Axis::X, k, n_spins) + i * spin_operator(Axis::Y, k, n_spins);
  }
  return out;
}

double total_m(int basis_state, int n_spins) {
  double m = 0.0;
  for (int k = 0; k < n_spins; ++k) {
    m += ((basis_state >> k) & 1) ? -0.5 : 0.5;
  }
  return m;
}

PhaseMatch equal_up_to_global_phase(const ComplexOperator& a, const ComplexOperator& b, double tol) {
  require_same_dim(a, b, "equal_up_to_global_phase");
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  const double largest = b.matrix().cwiseAbs().maxCoeff(&row, &col);
  PhaseMatch out;
  if (largest <= tol) {
    // No reference entry to anchor a phase on.
    out.max_deviation = max_abs_diff(a, b);
    return out;
  }
  out.phase = std::arg(a(static_cast<int>(row), static_cast<int>(col)) / b(static_cast<int>(row), static_cast<int>(col)));
  if (out.phase <= -std::numbers::pi) out.phase += 2.0 * std::numbers::pi;
  const Complex rot = std::polar(1.0, out.phase);
  out.max_deviation = (a.matrix() - rot * b.matrix()).cwiseAbs().maxCoeff();
  out.equal = out.max_deviation <= tol;
  return out;
}

ComplexOperator unitary_exp_diagonal(const ComplexOperator& d, double t) {
  if (!d.is_diagonal()) {
    throw std::invalid_argument("unitary_exp_diagonal: operator is not diagonal");
  }
  Eigen::VectorXcd entries(d.dim());
  for (int k = 0; k < d.dim(); ++k) {
    if (d(k, k).imag() != 0.0) {
      throw std::invalid_argument("unitary_exp_diagonal: operator is not hermitian");
    }
    entries(k) = std::polar(1.0, -t * d(k, k).real());
  }
  return ComplexOperator::diagonal(entries);
}

ComplexOperator general_unitary_exp(const ComplexOperator& h, double t) {
  const double scale = std::max(1.0, h.max_abs());
  if (!h.is_hermitian(1e-12 * scale)) {
    throw std::invalid_argument("general_unitary_exp: operator is not hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("general_unitary_exp: eigendecomposition failed");
  }
  const Eigen::VectorXd& evals = solver.eigenvalues();
  Eigen::VectorXcd phases(evals.size());
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    phases(k) = std::polar(1.0, -t * evals(k));
  }
  const Matrix& v = solver.eigenvectors();
  return ComplexOperator(v * phases.asDiagonal() * v.adjoint());
}

}  // namespace djnmr
