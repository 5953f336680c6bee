#include <gtest/gtest.h>

#include <dmlqu/lqu.hpp>

#include "test_support.hpp"

using namespace dmlqu;
using dmlqu::testing::Rng;
using dmlqu::testing::uniform;

namespace {

struct Frozen {
  Model model;
  double j, delta, dm, t, lqu;
};

// Reference values from an independent dense expm + eigh computation.
const Frozen kFrozen[] = {
    {Model::z_dm, 1.0, 0.5, 1.0, 1.0, 0.35194572633611476},
    {Model::z_dm, 1.0, 0.5, 1.0, 2.0, 0.11318111602992709},
    {Model::z_dm, -1.5, 0.3, 0.7, 0.8, 0.2742529866049641},
    {Model::z_dm, 2.0, 1.0, 0.0, 1.5, 0.5070570978646918},
    {Model::x_dm, 1.0, 0.5, 1.0, 1.0, 0.655909951685621},
    {Model::x_dm, 1.0, 0.5, 1.0, 2.0, 0.24956654973230386},
    {Model::x_dm, -1.5, 0.3, 0.7, 0.8, 0.17337934998062066},
    {Model::x_dm, 2.0, 1.0, 0.0, 1.5, 0.5070570978646918},
};

DensityMatrix4 numeric_thermal(Model m, double j, double delta, double dm, double t) {
  const ComplexMatrix h =
      m == Model::z_dm ? hamiltonian_z(ZModelParams(j, delta, dm)) : hamiltonian_x(XModelParams(j, delta, dm));
  return gibbs_state_numeric(h, Temperature(t));
}

DensityMatrix4 local_rotate(const DensityMatrix4& rho, const ComplexMatrix& ua, const ComplexMatrix& ub) {
  const ComplexMatrix u = kron(ua, ub);
  ComplexMatrix r = u * rho.matrix() * u.adjoint();
  return DensityMatrix4(0.5 * (r + r.adjoint()));
}

}  // namespace

TEST(FanoBloch, MaximallyMixed) {
  const FanoBloch r = fano_bloch(XState(0.25, 0.25, 0.25, 0.25, 0.0, 0.0));
  EXPECT_EQ(r.r00, 1.0);
  EXPECT_EQ(r.r11, 0.0);
  EXPECT_EQ(r.r22, 0.0);
  EXPECT_EQ(r.r33, 0.0);
  EXPECT_EQ(r.r03, 0.0);
  EXPECT_EQ(r.r30, 0.0);
}

TEST(FanoBloch, BellPhiPlus) {
  const FanoBloch r = fano_bloch(XState(0.5, 0.0, 0.0, 0.5, 0.5, 0.0));
  EXPECT_EQ(r.r11, 1.0);
  EXPECT_EQ(r.r22, -1.0);
  EXPECT_EQ(r.r33, 1.0);
}

TEST(FanoBloch, MatchesTraceOracle) {
  Rng rng(31);
  for (int k = 0; k < 500; ++k) {
    const XState x = phase_normalize_x(dmlqu::testing::random_x_state(rng));
    const ComplexMatrix m = x.matrix();
    const FanoBloch r = fano_bloch(x);
    using dmlqu::testing::pauli_expectation;
    ASSERT_NEAR(r.r11, pauli_expectation(m, 1, 1), 1e-14);
    ASSERT_NEAR(r.r22, pauli_expectation(m, 2, 2), 1e-14);
    ASSERT_NEAR(r.r33, pauli_expectation(m, 3, 3), 1e-14);
    ASSERT_NEAR(r.r03, pauli_expectation(m, 0, 3), 1e-14);
    ASSERT_NEAR(r.r30, pauli_expectation(m, 3, 0), 1e-14);
    ASSERT_NEAR(r.r00, pauli_expectation(m, 0, 0), 1e-14);
  }
}

TEST(Omega, MatchesWMatrixEigenvalues) {
  Rng rng(32);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const XState x = phase_normalize_x(dmlqu::testing::random_x_state(rng));
    const OmegaTriple w = omega_eigenvalues(x);
    std::array<double, 3> closed{w.omega1, w.omega2, w.omega3};
    std::sort(closed.begin(), closed.end());
    const auto numeric = symmetric_eigenvalues(w_matrix(DensityMatrix4(x)));
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(closed[i] - numeric[i]));
    ASSERT_GE(w.omega1, w.omega2 - 1e-15);
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Omega, ProductStateHasZeroLqu) {
  // diag(1/2, 1/2, 0, 0) = |0><0| (x) I/2
  const XState x(0.5, 0.5, 0.0, 0.0, 0.0, 0.0);
  const OmegaTriple w = omega_eigenvalues(x);
  EXPECT_NEAR(w.omega3, 1.0, 1e-15);
  const LquResult r = lqu_closed(x);
  EXPECT_NEAR(r.value, 0.0, 1e-15);
  EXPECT_EQ(r.branch, Branch::omega3);
  EXPECT_EQ(r.method, Method::closed_form);
}

TEST(Omega, MaximallyMixedHasZeroLqu) {
  const LquResult r = lqu_closed(XState(0.25, 0.25, 0.25, 0.25, 0.0, 0.0));
  EXPECT_NEAR(r.value, 0.0, 1e-15);
  EXPECT_NEAR(r.omega1, 1.0, 1e-15);
  EXPECT_NEAR(r.omega3, 1.0, 1e-15);
}

TEST(Omega, RankDeficientBlockThrows) {
  try {
    omega_eigenvalues(XState(0.5, 0.0, 0.0, 0.5, 0.5, 0.0));
    FAIL() << "expected RankDeficiencyError";
  } catch (const RankDeficiencyError& e) {
    EXPECT_EQ(e.block(), 2);
  }
  try {
    omega_eigenvalues(XState(0.0, 0.5, 0.5, 0.0, 0.0, 0.5));
    FAIL() << "expected RankDeficiencyError";
  } catch (const RankDeficiencyError& e) {
    EXPECT_EQ(e.block(), 1);
  }
}

TEST(LquClosed, BellStatesFallBackToWMatrix) {
  for (const auto& ket : {dmlqu::testing::bell_phi_plus(), dmlqu::testing::bell_phi_minus(),
                          dmlqu::testing::bell_psi_plus(), dmlqu::testing::bell_psi_minus()}) {
    const DensityMatrix4 rho = dmlqu::testing::pure_density(ket);
    const ComplexMatrix& m = rho.matrix();
    const XState x = phase_normalize_x(XState(m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(),
                                              m(0, 3), m(1, 2)));
    const LquResult r = lqu_closed(x);
    EXPECT_EQ(r.method, Method::w_matrix);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_NEAR(lqu_w(rho).value, 1.0, 1e-12);
  }
}

TEST(LquClosed, FrozenThermalValues) {
  for (const Frozen& f : kFrozen) {
    const ThermalLqu t = thermal_lqu(f.model, f.j, f.delta, f.dm, Temperature(f.t));
    EXPECT_NEAR(t.lqu.value, f.lqu, 1e-10) << to_string(f.model) << " J=" << f.j << " T=" << f.t;
    EXPECT_EQ(t.lqu.method, Method::closed_form);
  }
}

TEST(LquW, FrozenThermalValuesFromNumericState) {
  for (const Frozen& f : kFrozen) {
    const LquResult r = lqu_w(numeric_thermal(f.model, f.j, f.delta, f.dm, f.t));
    EXPECT_NEAR(r.value, f.lqu, 1e-10) << to_string(f.model) << " J=" << f.j << " T=" << f.t;
  }
}

TEST(LquBruteForce, FrozenThermalValues) {
  for (const Frozen& f : kFrozen) {
    const LquResult r = lqu_bruteforce(numeric_thermal(f.model, f.j, f.delta, f.dm, f.t));
    EXPECT_NEAR(r.value, f.lqu, 1e-7) << to_string(f.model) << " J=" << f.j << " T=" << f.t;
    EXPECT_EQ(r.method, Method::brute_force);
  }
}

TEST(LquBruteForce, RejectsBadSettings) {
  const DensityMatrix4 rho(0.25 * ComplexMatrix::identity(4));
  EXPECT_THROW(lqu_bruteforce(rho, 4), ValidationError);
  EXPECT_THROW(lqu_bruteforce(rho, 64, -1), ValidationError);
}

TEST(LquBruteForce, AgreesWithWMatrixOnGeneralStates) {
  Rng rng(33);
  for (int k = 0; k < 12; ++k) {
    const DensityMatrix4 rho = dmlqu::testing::random_density(rng);
    ASSERT_NEAR(lqu_bruteforce(rho).value, lqu_w(rho).value, 1e-7);
  }
}

TEST(LquW, GeneralStatesUseFullEigenproblem) {
  Rng rng(34);
  const DensityMatrix4 rho = dmlqu::testing::random_density(rng);
  const LquResult r = lqu_w(rho);
  EXPECT_EQ(r.branch, Branch::none);
  EXPECT_GE(r.value, 0.0);
  EXPECT_LE(r.value, 1.0);
}

TEST(LquW, PureStateEqualsLinearEntropy) {
  // For pure states LQU = 2(1 - Tr rho_A^2).
  Rng rng(35);
  for (int k = 0; k < 50; ++k) {
    const auto ket = dmlqu::testing::random_ket(rng);
    const ComplexMatrix ra = reduced_a(ket);
    const double purity = (ra * ra).trace().real();
    ASSERT_NEAR(lqu_w(dmlqu::testing::pure_density(ket)).value, 2.0 * (1.0 - purity), 1e-12);
  }
}

TEST(LquW, ProductStatesHaveZeroLqu) {
  Rng rng(36);
  for (int k = 0; k < 50; ++k) {
    const ComplexMatrix rho = kron(dmlqu::testing::random_qubit_state(rng), dmlqu::testing::random_qubit_state(rng));
    ASSERT_NEAR(lqu_w(DensityMatrix4(0.5 * (rho + rho.adjoint()))).value, 0.0, 1e-10);
  }
}

TEST(LquW, LocalUnitaryInvariance) {
  Rng rng(37);
  for (int k = 0; k < 200; ++k) {
    const DensityMatrix4 rho = dmlqu::testing::random_density(rng);
    const DensityMatrix4 rot =
        local_rotate(rho, dmlqu::testing::random_unitary2(rng), dmlqu::testing::random_unitary2(rng));
    ASSERT_NEAR(lqu_w(rho).value, lqu_w(rot).value, 1e-10);
  }
}

TEST(LquClosed, AgreesWithWMatrixOnRandomXStates) {
  Rng rng(38);
  for (int k = 0; k < 1000; ++k) {
    const XState x = dmlqu::testing::random_x_state(rng);
    const double closed = lqu_closed(phase_normalize_x(x)).value;
    ASSERT_NEAR(closed, lqu_w(DensityMatrix4(x)).value, 1e-10);
    ASSERT_GE(closed, 0.0);
    ASSERT_LE(closed, 1.0);
  }
}

TEST(LquClosed, BranchReportsLargerOmega) {
  const LquResult r = thermal_lqu(Model::z_dm, 1.0, 0.5, 1.0, Temperature(1.0)).lqu;
  EXPECT_NEAR(r.value, 1.0 - std::max(r.omega1, r.omega3), 1e-15);
  EXPECT_EQ(r.branch, r.omega1 >= r.omega3 ? Branch::omega1 : Branch::omega3);
}

TEST(SkewInformation, MaximallyMixedIsZero) {
  const DensityMatrix4 rho(0.25 * ComplexMatrix::identity(4));
  EXPECT_NEAR(skew_information(rho, LocalObservable(0, 0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(variance_observable(rho, LocalObservable(0, 0, 1)), 1.0, 1e-15);
}

TEST(SkewInformation, PureStateEqualsVariance) {
  const DensityMatrix4 rho = dmlqu::testing::pure_density(dmlqu::testing::bell_phi_plus());
  for (const auto& obs : {LocalObservable(1, 0, 0), LocalObservable(0, 1, 0), LocalObservable(0, 0, 1)}) {
    EXPECT_NEAR(skew_information(rho, obs), 1.0, 1e-12);
    EXPECT_NEAR(variance_observable(rho, obs), 1.0, 1e-15);
  }
}

TEST(SkewInformation, BoundedByVariance) {
  Rng rng(39);
  for (int k = 0; k < 300; ++k) {
    const DensityMatrix4 rho = dmlqu::testing::random_density(rng);
    const auto obs = LocalObservable::from_direction(dmlqu::testing::normal(rng), dmlqu::testing::normal(rng),
                                                     dmlqu::testing::normal(rng));
    const double skew = skew_information(rho, obs);
    ASSERT_GE(skew, -1e-15);
    ASSERT_LE(skew, variance_observable(rho, obs) + 1e-12);
  }
}

TEST(LocalObservableType, RequiresUnitVector) {
  EXPECT_THROW(LocalObservable(1, 1, 0), ValidationError);
  EXPECT_THROW(LocalObservable::from_direction(0, 0, 0), ValidationError);
  const auto o = LocalObservable::from_direction(0, 3, 4);
  EXPECT_DOUBLE_EQ(o.ny(), 0.6);
  EXPECT_DOUBLE_EQ(o.nz(), 0.8);
  EXPECT_LE(max_abs_diff(LocalObservable(0, 0, 1).matrix(), kron(pauli_z(), identity2())), 0.0);
}

TEST(ThermalLqu, LowTemperatureReachesOne) {
  for (Model m : {Model::z_dm, Model::x_dm}) {
    const ThermalLqu t = thermal_lqu(m, 1.0, 0.5, 1.0, Temperature(1e-3));
    EXPECT_NEAR(t.lqu.value, 1.0, 1e-9) << to_string(m);
  }
}

TEST(ThermalLqu, HighTemperatureVanishes) {
  for (Model m : {Model::z_dm, Model::x_dm}) {
    const ThermalLqu t = thermal_lqu(m, 1.0, 0.5, 1.0, Temperature(1000.0));
    EXPECT_LT(t.lqu.value, 1e-5) << to_string(m);
    EXPECT_GE(t.lqu.value, 0.0);
  }
}

TEST(ThermalLqu, DmSignSymmetry) {
  Rng rng(40);
  for (int k = 0; k < 200; ++k) {
    const double j = uniform(rng, 0.1, 3.0) * (k % 2 ? 1.0 : -1.0);
    const double delta = uniform(rng, 0.0, 1.0);
    const double dm = uniform(rng, 0.0, 4.0);
    const Temperature t(uniform(rng, 0.1, 10.0));
    for (Model m : {Model::z_dm, Model::x_dm})
      ASSERT_NEAR(thermal_lqu(m, j, delta, dm, t).lqu.value, thermal_lqu(m, j, delta, -dm, t).lqu.value, 1e-12);
  }
}

TEST(ThermalLqu, ClosedFormMatchesNumericPipeline) {
  // Near-pure states lose half the digits in sqrt(rho) on every route.
  Rng rng(41);
  double worst_mixed = 0.0, worst_pure = 0.0;
  for (int k = 0; k < 300; ++k) {
    double j = uniform(rng, -3.0, 3.0);
    if (j == 0.0) j = 1.0;
    const double delta = uniform(rng, 0.0, 1.0);
    const double dm = uniform(rng, -3.0, 3.0);
    const double t = std::exp(uniform(rng, std::log(0.1), std::log(20.0)));
    for (Model m : {Model::z_dm, Model::x_dm}) {
      const double closed = thermal_lqu(m, j, delta, dm, Temperature(t)).lqu.value;
      const DensityMatrix4 rho = numeric_thermal(m, j, delta, dm, t);
      const double err = std::abs(closed - lqu_w(rho).value);
      if (hermitian_eigendecomposition(rho.matrix()).eigenvalues.front() > 1e-8)
        worst_mixed = std::max(worst_mixed, err);
      else
        worst_pure = std::max(worst_pure, err);
    }
  }
  EXPECT_LE(worst_mixed, 1e-10);
  EXPECT_LE(worst_pure, 1e-7);
}

TEST(ThermalLqu, ReportsPartition) {
  const ThermalLqu t = thermal_lqu(Model::x_dm, 1.0, 0.5, 1.0, Temperature(1.0));
  EXPECT_NEAR(t.partition.log, 3.11512643991879, 1e-12);
}

TEST(Names, ToString) {
  EXPECT_EQ(to_string(Method::closed_form), "closed-form");
  EXPECT_EQ(to_string(Method::w_matrix), "w-matrix");
  EXPECT_EQ(to_string(Method::brute_force), "brute-force");
  EXPECT_EQ(to_string(Branch::omega1), "omega1");
  EXPECT_EQ(to_string(Branch::omega3), "omega3");
  EXPECT_EQ(to_string(Branch::none), "none");
  EXPECT_EQ(to_string(Model::z_dm), "z-dm");
  EXPECT_EQ(to_string(Model::x_dm), "x-dm");
}
