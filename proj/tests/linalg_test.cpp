#include <gtest/gtest.h>

#include <dmlqu/linalg.hpp>
#include <dmlqu/models.hpp>

#include "test_support.hpp"

using namespace dmlqu;
using dmlqu::testing::Rng;

namespace {

double orthonormality_error(const ComplexMatrix& v) {
  return max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(v.dim()));
}

}  // namespace

TEST(HermitianEigen, DiagonalInput) {
  const std::array<double, 4> d{1, 2, 3, 4};
  const auto eig = hermitian_eigendecomposition(ComplexMatrix::diagonal(d));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(eig.eigenvalues[i], d[i]);
  EXPECT_EQ(max_abs_diff(eig.eigenvectors, ComplexMatrix::identity(4)), 0.0);
}

TEST(HermitianEigen, UnsortedDiagonalIsSorted) {
  const std::array<double, 4> d{3, -1, 2, 0};
  const auto eig = hermitian_eigendecomposition(ComplexMatrix::diagonal(d));
  EXPECT_TRUE(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
  EXPECT_DOUBLE_EQ(eig.eigenvalues.front(), -1.0);
}

TEST(HermitianEigen, ZeroMatrix) {
  const auto eig = hermitian_eigendecomposition(ComplexMatrix(4));
  for (double v : eig.eigenvalues) EXPECT_EQ(v, 0.0);
}

TEST(HermitianEigen, ZModelHamiltonianMatchesOmega) {
  // Omega = sqrt(4 + 2.25) = 2.5
  const auto eig = hermitian_eigendecomposition(hamiltonian_z(ZModelParams(1.0, 0.5, 1.0)));
  const std::array<double, 4> expect{-2.5, -0.5, 0.5, 2.5};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(eig.eigenvalues[i], expect[i], 1e-12);
}

TEST(HermitianEigen, RejectsNonHermitianNamingEntries) {
  ComplexMatrix m(4);
  m(1, 3) = 1.0;
  try {
    hermitian_eigendecomposition(m);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,3)"), std::string::npos) << e.what();
  }
}

TEST(HermitianEigen, RandomReconstructionAndOrthonormality) {
  Rng rng(11);
  double worst_recon = 0.0, worst_orth = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const ComplexMatrix m = dmlqu::testing::random_hermitian(rng, 4, dmlqu::testing::uniform(rng, 0.01, 10.0));
    const auto eig = hermitian_eigendecomposition(m);
    worst_recon = std::max(worst_recon, max_abs_diff(eig.reconstruct(), m));
    worst_orth = std::max(worst_orth, orthonormality_error(eig.eigenvectors));
    ASSERT_TRUE(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
  }
  EXPECT_LE(worst_recon, 1e-10);
  EXPECT_LE(worst_orth, 1e-12);
}

TEST(HermitianEigen, DegenerateSpectrum) {
  Rng rng(5);
  // U diag(1,1,2,2) U^dagger with a random unitary built from a Hermitian eigenbasis.
  const auto basis = hermitian_eigendecomposition(dmlqu::testing::random_hermitian(rng)).eigenvectors;
  const std::array<double, 4> d{1, 1, 2, 2};
  const ComplexMatrix m = EigenDecomposition{{d.begin(), d.end()}, basis}.reconstruct();
  const auto eig = hermitian_eigendecomposition(0.5 * (m + m.adjoint()));
  EXPECT_LE(max_abs_diff(eig.reconstruct(), m), 1e-12);
  EXPECT_LE(orthonormality_error(eig.eigenvectors), 1e-12);
}

TEST(HermitianEigen, DeterministicPhaseConvention) {
  Rng rng(3);
  const ComplexMatrix m = dmlqu::testing::random_hermitian(rng);
  const auto a = hermitian_eigendecomposition(m);
  const auto b = hermitian_eigendecomposition(m);
  EXPECT_EQ(max_abs_diff(a.eigenvectors, b.eigenvectors), 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      const Complex c = a.eigenvectors(i, k);
      if (std::abs(c) > 1e-12) {
        EXPECT_EQ(c.imag(), 0.0);
        EXPECT_GT(c.real(), 0.0);
        break;
      }
    }
  }
}

TEST(SymmetricEigen3, MatchesKnownSpectrum) {
  const RealMatrix3 m{{{2, 1, 0}, {1, 2, 0}, {0, 0, 5}}};
  const auto ev = symmetric_eigenvalues(m);
  EXPECT_NEAR(ev[0], 1.0, 1e-14);
  EXPECT_NEAR(ev[1], 3.0, 1e-14);
  EXPECT_NEAR(ev[2], 5.0, 1e-14);
}

TEST(MatrixSqrt, IdentityQuarter) {
  const ComplexMatrix r = matrix_sqrt_psd(0.25 * ComplexMatrix::identity(4));
  EXPECT_LE(max_abs_diff(r, 0.5 * ComplexMatrix::identity(4)), 1e-15);
}

TEST(MatrixSqrt, ProjectorIsIdempotent) {
  Rng rng(8);
  const ComplexMatrix p = dmlqu::testing::projector(dmlqu::testing::random_ket(rng));
  EXPECT_LE(max_abs_diff(matrix_sqrt_psd(p), p), 1e-14);
}

TEST(MatrixSqrt, ThermalStateSquares) {
  const ComplexMatrix h = hamiltonian_z(ZModelParams(1.0, 0.5, 1.0));
  ComplexMatrix rho = matrix_exp_scaled(h, -1.0);
  rho *= 1.0 / rho.trace().real();
  const ComplexMatrix s = matrix_sqrt_psd(rho);
  EXPECT_LE(max_abs_diff(s * s, rho), 1e-9);
  EXPECT_LE(max_abs_diff(s, s.adjoint()), 1e-15);
  EXPECT_GE(hermitian_eigendecomposition(s).eigenvalues.front(), 0.0);
}

TEST(MatrixSqrt, RandomPsdSquares) {
  Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    const auto rho = dmlqu::testing::random_density(rng);
    const ComplexMatrix s = matrix_sqrt_psd(rho.matrix());
    ASSERT_LE(max_abs_diff(s * s, rho.matrix()), 1e-9);
  }
}

TEST(MatrixSqrt, ClampsTinyNegativeEigenvalues) {
  const std::array<double, 4> d{-5e-11, 0.25, 0.25, 0.5};
  const ComplexMatrix s = matrix_sqrt_psd(ComplexMatrix::diagonal(d));
  EXPECT_EQ(s(0, 0), Complex(0.0));
}

TEST(MatrixSqrt, RejectsNegativeEigenvalue) {
  const std::array<double, 4> d{-1e-6, 0.25, 0.25, 0.5};
  try {
    matrix_sqrt_psd(ComplexMatrix::diagonal(d));
    FAIL() << "expected NotPsdError";
  } catch (const NotPsdError& e) {
    EXPECT_DOUBLE_EQ(e.eigenvalue(), -1e-6);
  }
}

TEST(Kron, IdentityIdentity) {
  EXPECT_EQ(max_abs_diff(kron(identity2(), identity2()), ComplexMatrix::identity(4)), 0.0);
}

TEST(Kron, SigmaZIdentity) {
  const std::array<double, 4> d{1, 1, -1, -1};
  EXPECT_EQ(max_abs_diff(kron(pauli_z(), identity2()), ComplexMatrix::diagonal(d)), 0.0);
}

TEST(Kron, SigmaXSigmaXAntidiagonal) {
  const ComplexMatrix k = kron(pauli_x(), pauli_x());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(k(i, j), Complex(i + j == 3 ? 1.0 : 0.0));
}

TEST(Kron, DimensionMismatch) {
  EXPECT_THROW(kron(ComplexMatrix::identity(4), identity2()), ValidationError);
}

TEST(Kron, Bilinear) {
  Rng rng(2);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ComplexMatrix a = dmlqu::testing::random_hermitian(rng, 2);
    const ComplexMatrix a2 = dmlqu::testing::random_hermitian(rng, 2);
    const ComplexMatrix b = dmlqu::testing::random_hermitian(rng, 2);
    worst = std::max(worst, max_abs_diff(kron(a + a2, b), kron(a, b) + kron(a2, b)));
  }
  EXPECT_LE(worst, 1e-14);
}

TEST(MatrixExp, ZeroScaleIsIdentity) {
  Rng rng(4);
  EXPECT_EQ(max_abs_diff(matrix_exp_scaled(dmlqu::testing::random_hermitian(rng), 0.0), ComplexMatrix::identity(4)),
            0.0);
}

TEST(MatrixExp, Diagonal) {
  const std::array<double, 4> d{-1, 0.5, 2, 3};
  const ComplexMatrix e = matrix_exp_scaled(ComplexMatrix::diagonal(d), 0.7);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(e(i, i).real(), std::exp(0.7 * d[i]), 1e-13 * std::exp(0.7 * d[i]));
}

TEST(MatrixExp, TraceMatchesClosedFormPartition) {
  // Z = 2 cosh(Omega) + 2 cosh(J(Delta-1)) at beta = 1, Omega = 2.5.
  const ComplexMatrix e = matrix_exp_scaled(hamiltonian_z(ZModelParams(1.0, 0.5, 1.0)), -1.0);
  const double z = 2.0 * std::cosh(2.5) + 2.0 * std::cosh(-0.5);
  EXPECT_NEAR(e.trace().real(), z, 1e-12 * z);
}

TEST(MatrixExp, OverflowIsReported) {
  const std::array<double, 4> d{-800, 0, 0, 1};
  EXPECT_THROW(matrix_exp_scaled(ComplexMatrix::diagonal(d), -1.0), OverflowError);
}

TEST(ComplexMatrix, RejectsOtherDimensions) {
  EXPECT_THROW(ComplexMatrix(3), ValidationError);
  EXPECT_THROW(ComplexMatrix(2, {1.0, 2.0, 3.0}), ValidationError);
}
