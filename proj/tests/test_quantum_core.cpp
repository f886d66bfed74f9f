#include "djnmr/quantum_core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace djnmr;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexOperator random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(n(rng), n(rng));
  return ComplexOperator((m + m.adjoint()) * 0.5);
}

ComplexOperator random_unitary(std::mt19937& rng) { return general_unitary_exp(random_hermitian(8, rng), 1.0); }

}  // namespace

TEST(ComplexOperator, RejectsUnsupportedDimensions) {
  EXPECT_THROW(ComplexOperator(Matrix::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(ComplexOperator(Matrix::Zero(2, 4)), std::invalid_argument);
  EXPECT_THROW(ComplexOperator::identity(16), std::invalid_argument);
  EXPECT_EQ(ComplexOperator::identity(8).n_spins(), 3);
}

TEST(ComplexOperator, FlagsAndArithmetic) {
  const auto x = spin_operator(Axis::X, 1, 1);
  EXPECT_TRUE(x.is_hermitian());
  EXPECT_FALSE(x.is_diagonal());
  EXPECT_FALSE(total_raising(1).is_hermitian());
  EXPECT_TRUE((x * 2.0).is_unitary());  // Pauli X
  EXPECT_FALSE(x.is_unitary());
  EXPECT_DOUBLE_EQ((x + x - x).max_abs(), 0.5);
}

TEST(SpinOperator, SingleSpinZ) {
  const auto z = spin_operator(Axis::Z, 1, 1);
  EXPECT_EQ(z(0, 0), Complex(0.5));
  EXPECT_EQ(z(1, 1), Complex(-0.5));
  EXPECT_TRUE(z.is_diagonal());
}

TEST(SpinOperator, SecondOfTwoSpins) {
  const auto z = spin_operator(Axis::Z, 2, 2);
  const double expected[] = {0.5, -0.5, 0.5, -0.5};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(z(i, i), Complex(expected[i]));
  EXPECT_TRUE(z.is_diagonal());
}

TEST(SpinOperator, SquaredTraceIsTwoOnThreeSpins) {
  const auto x = spin_operator(Axis::X, 1, 3);
  EXPECT_NEAR(std::abs((x * x).trace() - Complex(2.0)), 0.0, 1e-15);
}

TEST(SpinOperator, RejectsBadIndices) {
  EXPECT_THROW(spin_operator(Axis::Z, 0, 3), std::out_of_range);
  EXPECT_THROW(spin_operator(Axis::Z, 4, 3), std::out_of_range);
  EXPECT_THROW(spin_operator(Axis::Z, 1, 4), std::invalid_argument);
}

TEST(SpinOperator, CommutationRelations) {
  for (int i = 1; i <= 3; ++i) {
    const auto xi = spin_operator(Axis::X, i, 3);
    const auto yi = spin_operator(Axis::Y, i, 3);
    const auto zi = spin_operator(Axis::Z, i, 3);
    EXPECT_LE(max_abs_diff(commutator(xi, yi), Complex(0, 1) * zi), 1e-12);
    EXPECT_LE(max_abs_diff(commutator(yi, zi), Complex(0, 1) * xi), 1e-12);
    for (int j = 1; j <= 3; ++j) {
      if (j == i) continue;
      for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        for (Axis b : {Axis::X, Axis::Y, Axis::Z}) {
          EXPECT_EQ(commutator(spin_operator(a, i, 3), spin_operator(b, j, 3)).max_abs(), 0.0);
        }
      }
    }
  }
}

TEST(TotalRaising, OneSpin) {
  const auto p = total_raising(1);
  EXPECT_EQ(p(0, 1), Complex(1.0));
  EXPECT_EQ(p(0, 0), Complex(0.0));
  EXPECT_EQ(p(1, 0), Complex(0.0));
  EXPECT_EQ(p(1, 1), Complex(0.0));
}

TEST(TotalRaising, ThreeSpinsStructure) {
  const auto p = total_raising(3);
  EXPECT_EQ(p.trace(), Complex(0.0));
  int nonzero = 0;
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      if (std::abs(p(a, b)) == 0.0) continue;
      ++nonzero;
      // Raises one spin: a has exactly one more m=+1/2 bit than b.
      EXPECT_EQ(total_m(a, 3) - total_m(b, 3), 1.0);
      EXPECT_EQ(p(a, b), Complex(1.0));
    }
  }
  EXPECT_EQ(nonzero, 12);
}

TEST(SpinBit, MostSignificantIsSpinOne) {
  EXPECT_EQ(spin_bit(0b100, 1, 3), 1);
  EXPECT_EQ(spin_bit(0b100, 3, 3), 0);
  EXPECT_EQ(spin_bit(0b001, 3, 3), 1);
  EXPECT_EQ(total_m(0, 3), 1.5);
  EXPECT_EQ(total_m(7, 3), -1.5);
}

TEST(GlobalPhase, NegationIsPhasePi) {
  std::mt19937 rng(1);
  const auto u = random_unitary(rng);
  const auto m = equal_up_to_global_phase(u, u * Complex(-1.0), 1e-10);
  EXPECT_TRUE(m.equal);
  EXPECT_NEAR(std::abs(m.phase), kPi, 1e-12);
}

TEST(GlobalPhase, RelativePhaseIsNotGlobal) {
  std::mt19937 rng(2);
  const auto u = random_unitary(rng);
  Eigen::VectorXcd d = Eigen::VectorXcd::Ones(8);
  d(7) = -1.0;
  EXPECT_FALSE(equal_up_to_global_phase(u, u * ComplexOperator::diagonal(d), 1e-10).equal);
}

TEST(GlobalPhase, RecoversArbitraryPhase) {
  std::mt19937 rng(3);
  const auto u = random_unitary(rng);
  for (double phi : {0.3, -2.0, 3.0}) {
    const auto m = equal_up_to_global_phase(u * std::polar(1.0, phi), u, 1e-10);
    EXPECT_TRUE(m.equal);
    EXPECT_NEAR(m.phase, phi, 1e-12);
    EXPECT_LE(m.max_deviation, 1e-14);
  }
}

TEST(GlobalPhase, DimensionMismatchThrows) {
  EXPECT_THROW(equal_up_to_global_phase(ComplexOperator::identity(2), ComplexOperator::identity(4), 1e-10),
               std::invalid_argument);
}

TEST(GlobalPhase, EquivalenceRelationUnderTinyPerturbation) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1e-13, 1e-13);
  const auto a = random_unitary(rng);
  Matrix pb = a.matrix() * std::polar(1.0, 1.1);
  Matrix pc = a.matrix() * std::polar(1.0, -0.4);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      pb(i, j) += Complex(u(rng), u(rng));
      pc(i, j) += Complex(u(rng), u(rng));
    }
  const ComplexOperator b(pb);
  const ComplexOperator c(pc);
  EXPECT_TRUE(equal_up_to_global_phase(a, a, 1e-10).equal);
  EXPECT_TRUE(equal_up_to_global_phase(a, b, 1e-10).equal);
  EXPECT_TRUE(equal_up_to_global_phase(b, a, 1e-10).equal);
  EXPECT_TRUE(equal_up_to_global_phase(b, c, 1e-10).equal);
  EXPECT_TRUE(equal_up_to_global_phase(a, c, 1e-10).equal);
}

TEST(UnitaryExpDiagonal, ZeroAngleIsIdentity) {
  const auto u = unitary_exp_diagonal(spin_operator(Axis::Z, 1, 1), 0.0);
  EXPECT_EQ(max_abs_diff(u, ComplexOperator::identity(2)), 0.0);
}

TEST(UnitaryExpDiagonal, FullTurnIsMinusIdentity) {
  const auto u = unitary_exp_diagonal(spin_operator(Axis::Z, 1, 1), 2.0 * kPi);
  EXPECT_LE(max_abs_diff(u, ComplexOperator::identity(2) * Complex(-1.0)), 1e-15);
}

TEST(UnitaryExpDiagonal, ZzQuarterTurn) {
  const auto zz = 2.0 * (spin_operator(Axis::Z, 1, 2) * spin_operator(Axis::Z, 2, 2));
  const auto u = unitary_exp_diagonal(zz, kPi / 2);
  const Complex m = std::polar(1.0, -kPi / 4);
  const Complex p = std::polar(1.0, kPi / 4);
  const Complex expected[] = {m, p, p, m};
  for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(u(i, i) - expected[i]), 1e-15);
  EXPECT_TRUE(u.is_diagonal());
}

TEST(UnitaryExpDiagonal, RejectsNonDiagonal) {
  EXPECT_THROW(unitary_exp_diagonal(spin_operator(Axis::X, 1, 1), 1.0), std::invalid_argument);
  Eigen::VectorXcd d(2);
  d << Complex(1.0, 0.5), 0.0;
  EXPECT_THROW(unitary_exp_diagonal(ComplexOperator::diagonal(d), 1.0), std::invalid_argument);
}

TEST(UnitaryExpDiagonal, GroupLaw) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  Eigen::VectorXcd d(8);
  for (int i = 0; i < 8; ++i) d(i) = u(rng);
  const auto D = ComplexOperator::diagonal(d);
  for (int k = 0; k < 20; ++k) {
    const double a = u(rng) / 10.0;
    const double b = u(rng) / 10.0;
    const auto lhs = unitary_exp_diagonal(D, a) * unitary_exp_diagonal(D, b);
    EXPECT_LE(max_abs_diff(lhs, unitary_exp_diagonal(D, a + b)), 1e-12);
  }
}

TEST(GeneralUnitaryExp, ZeroTimeIsIdentity) {
  std::mt19937 rng(6);
  EXPECT_LE(max_abs_diff(general_unitary_exp(random_hermitian(8, rng), 0.0), ComplexOperator::identity(8)), 1e-14);
}

TEST(GeneralUnitaryExp, TwoHalfTurnsEqualOneTurn) {
  auto y = ComplexOperator::zero(8);
  for (int i = 1; i <= 3; ++i) y += spin_operator(Axis::Y, i, 3);
  const auto half = general_unitary_exp(y, kPi / 2);
  EXPECT_LE(max_abs_diff(half * half, general_unitary_exp(y, kPi)), 1e-12);
}

TEST(GeneralUnitaryExp, PiAboutYFlipsZState) {
  const auto u = general_unitary_exp(spin_operator(Axis::Y, 1, 1), kPi);
  EXPECT_NEAR(std::abs(u(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(u(0, 0)), 0.0, 1e-15);
}

TEST(GeneralUnitaryExp, AgreesWithDiagonalPathAndIsUnitary) {
  std::mt19937 rng(7);
  for (int k = 0; k < 10; ++k) {
    const auto h = random_hermitian(8, rng);
    const auto u = general_unitary_exp(h, 0.7);
    EXPECT_TRUE(u.is_unitary(1e-12));
  }
  const auto z = spin_operator(Axis::Z, 2, 3);
  EXPECT_LE(max_abs_diff(general_unitary_exp(z, 1.3), unitary_exp_diagonal(z, 1.3)), 1e-14);
}

TEST(GeneralUnitaryExp, RejectsNonHermitian) {
  EXPECT_THROW(general_unitary_exp(total_raising(2), 1.0), std::invalid_argument);
}

TEST(Kron, DimensionsAndValues) {
  const auto z = spin_operator(Axis::Z, 1, 1);
  const auto zz = kron(z, z);
  EXPECT_EQ(zz.dim(), 4);
  EXPECT_EQ(max_abs_diff(zz, spin_operator(Axis::Z, 1, 2) * spin_operator(Axis::Z, 2, 2)), 0.0);
}
