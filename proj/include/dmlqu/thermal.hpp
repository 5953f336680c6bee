#pragma once

// Gibbs states of the two DM models: closed forms evaluated with the
// largest Boltzmann exponent factored out, numeric e^{-beta H} states for
// cross-checking, and the double-Hadamard reduction of the x-DM state to
// X form.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "linalg.hpp"
#include "models.hpp"

namespace dmlqu {

inline constexpr double kMinTemperature = 1e-6;
inline constexpr double kXFormLeakageTol = 1e-10;

class Temperature {
public:
  explicit Temperature(double t) : t_(t) {
    if (!(t >= kMinTemperature) || !std::isfinite(t)) {
      std::ostringstream os;
      os << "temperature must be finite and >= " << kMinTemperature << ", got " << t
         << " (use ground_state for T = 0)";
      throw ValidationError(os.str());
    }
  }

  double value() const noexcept { return t_; }
  double beta() const noexcept { return 1.0 / t_; }

private:
  double t_;
};

/// Two-qubit state with nonzero entries only on the diagonal and anti-diagonal.
/// r14 and r23 are the upper-triangle coherences rho_14 and rho_23.
class XState {
public:
  XState(double p11, double p22, double p33, double p44, Complex r14, Complex r23)
      : p11_(p11), p22_(p22), p33_(p33), p44_(p44), r14_(r14), r23_(r23) {
    validate();
  }

  double p11() const noexcept { return p11_; }
  double p22() const noexcept { return p22_; }
  double p33() const noexcept { return p33_; }
  double p44() const noexcept { return p44_; }
  Complex r14() const noexcept { return r14_; }
  Complex r23() const noexcept { return r23_; }

  ComplexMatrix matrix() const {
    ComplexMatrix m(4);
    m(0, 0) = p11_;
    m(1, 1) = p22_;
    m(2, 2) = p33_;
    m(3, 3) = p44_;
    m(0, 3) = r14_;
    m(3, 0) = std::conj(r14_);
    m(1, 2) = r23_;
    m(2, 1) = std::conj(r23_);
    return m;
  }

private:
  void validate() const {
    constexpr double tol = 1e-12;
    for (double p : {p11_, p22_, p33_, p44_}) {
      if (!std::isfinite(p) || p < -tol) throw ValidationError("X state population is negative or not finite");
    }
    if (std::abs(p11_ + p22_ + p33_ + p44_ - 1.0) > tol) {
      std::ostringstream os;
      os << "X state populations sum to " << p11_ + p22_ + p33_ + p44_ << ", expected 1";
      throw ValidationError(os.str());
    }
    auto bound = [](double a, double b) { return std::sqrt(std::max(a, 0.0) * std::max(b, 0.0)); };
    if (!(std::abs(r14_) <= bound(p11_, p44_) + tol)) {
      throw ValidationError("X state violates positivity: |rho14| > sqrt(rho11 rho44)");
    }
    if (!(std::abs(r23_) <= bound(p22_, p33_) + tol)) {
      throw ValidationError("X state violates positivity: |rho23| > sqrt(rho22 rho33)");
    }
  }

  double p11_, p22_, p33_, p44_;
  Complex r14_, r23_;
};

/// Unit-trace, Hermitian, positive semidefinite 4x4 matrix.
class DensityMatrix4 {
public:
  explicit DensityMatrix4(const ComplexMatrix& m) : m_(m) {
    if (m.dim() != 4) throw ValidationError("density matrix must be 4x4");
    require_hermitian(m);
    const double tr_err = std::abs(m.trace() - Complex(1.0));
    if (tr_err > 1e-12) {
      std::ostringstream os;
      os << "density matrix trace differs from 1 by " << tr_err;
      throw ValidationError(os.str());
    }
    const double lo = hermitian_eigendecomposition(m).eigenvalues.front();
    if (lo < -kPsdClamp) {
      std::ostringstream os;
      os << "density matrix has negative eigenvalue " << lo;
      throw NotPsdError(os.str(), lo);
    }
  }

  explicit DensityMatrix4(const XState& x) : m_(x.matrix()) {}

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

private:
  ComplexMatrix m_;
};

/// Partition function with its logarithm; value is +inf once it overflows.
struct Partition {
  double value;
  double log;
};

// ---------------------------------------------------------------------------
// Numeric route

/// e^{-beta H} / Tr e^{-beta H}, shifted by the lowest eigenvalue of H.
inline DensityMatrix4 gibbs_state_numeric(const ComplexMatrix& h, Temperature temp) {
  const EigenDecomposition eig = hermitian_eigendecomposition(h);
  const double beta = temp.beta();
  const double lo = eig.eigenvalues.front();
  ComplexMatrix rho = eig.apply([&](double e) { return std::exp(-beta * (e - lo)); });
  rho *= 1.0 / rho.trace().real();
  return DensityMatrix4(0.5 * (rho + rho.adjoint()));
}

inline Partition gibbs_partition_numeric(const ComplexMatrix& h, Temperature temp) {
  const EigenDecomposition eig = hermitian_eigendecomposition(h);
  const double beta = temp.beta();
  const double lo = eig.eigenvalues.front();
  double sum = 0.0;
  for (double e : eig.eigenvalues) sum += std::exp(-beta * (e - lo));
  return Partition{std::exp(-beta * lo) * sum, -beta * lo + std::log(sum)};
}

// ---------------------------------------------------------------------------
// z-axis DM, closed form

namespace detail {

struct ShiftedZ {
  double shift;              // beta * max(|J(Delta-1)|, Omega)
  double ea_plus, ea_minus;  // e^{+-beta J(Delta-1) - shift}
  double eo_plus, eo_minus;  // e^{+-beta Omega - shift}
  double zs;                 // Z e^{-shift}
};

inline ShiftedZ shifted_z(const ZModelParams& p, Temperature temp) {
  const double beta = temp.beta();
  const double a = beta * p.j() * (p.delta() - 1.0);
  const double o = beta * p.omega();
  const double s = std::max(std::abs(a), o);
  ShiftedZ z{s, std::exp(a - s), std::exp(-a - s), std::exp(o - s), std::exp(-o - s), 0.0};
  z.zs = z.ea_plus + z.ea_minus + z.eo_plus + z.eo_minus;
  return z;
}

struct ShiftedX {
  double shift;
  double e_c;   // e^{beta J(Delta-1) - shift}
  double e_d;   // e^{-beta J(Delta+1) - shift}
  double ch;    // e^{beta J} cosh(beta Omega1) e^{-shift}
  double shc;   // e^{beta J} sinh(beta Omega1) / Omega1 e^{-shift}
  double zs;    // Z' e^{-shift}
};

inline ShiftedX shifted_x(const XModelParams& p, Temperature temp) {
  const double beta = temp.beta();
  const double bj = beta * p.j();
  const double bo = beta * p.omega1();
  const double c = bj * (p.delta() - 1.0);
  const double d = -bj * (p.delta() + 1.0);
  const double s = std::max({bj + bo, bj - bo, c, d});
  ShiftedX x{};
  x.shift = s;
  x.e_c = std::exp(c - s);
  x.e_d = std::exp(d - s);
  const double up = std::exp(bj + bo - s);
  x.ch = 0.5 * (up + std::exp(bj - bo - s));
  x.shc = p.omega1() > 0.0 ? -up * std::expm1(-2.0 * bo) / (2.0 * p.omega1()) : beta * std::exp(bj - s);
  x.zs = x.e_c + x.e_d + 2.0 * x.ch;
  return x;
}

}  // namespace detail

/// 2 cosh(beta Omega) + 2 cosh(beta J (Delta - 1)).
inline Partition partition_z(const ZModelParams& p, Temperature temp) {
  const auto z = detail::shifted_z(p, temp);
  return Partition{z.zs * std::exp(z.shift), z.shift + std::log(z.zs)};
}

inline XState thermal_state_z_closed(const ZModelParams& p, Temperature temp) {
  const auto z = detail::shifted_z(p, temp);
  const double corner = 0.5 * (z.ea_plus + z.ea_minus) / z.zs;
  const double inner = 0.5 * (z.eo_plus + z.eo_minus) / z.zs;
  const double r14 = 0.5 * (z.ea_plus - z.ea_minus) / z.zs;
  const double sh = 0.5 * (z.eo_plus - z.eo_minus) / z.zs;
  const Complex r23 = -std::polar(1.0, p.theta()) * sh;
  return XState(corner, inner, inner, corner, r14, r23);
}

// ---------------------------------------------------------------------------
// x-axis DM, closed form

/// 2 (e^{-beta J} cosh(beta Delta J) + e^{beta J} cosh(beta Omega1)).
inline Partition partition_x(const XModelParams& p, Temperature temp) {
  const auto x = detail::shifted_x(p, temp);
  return Partition{x.zs * std::exp(x.shift), x.shift + std::log(x.zs)};
}

/// Centrosymmetric thermal state
///   [a mu nu b; nu c d mu; mu d c nu; b nu mu a].
inline DensityMatrix4 thermal_state_x_closed(const XModelParams& p, Temperature temp) {
  const auto x = detail::shifted_x(p, temp);
  const double dj = p.delta() * p.j();
  const double minus = x.ch - dj * x.shc;
  const double plus = x.ch + dj * x.shc;
  const double a = (minus + x.e_c) / (2.0 * x.zs);
  const double b = (x.e_c - minus) / (2.0 * x.zs);
  const double c = (plus + x.e_d) / (2.0 * x.zs);
  const double d = (x.e_d - plus) / (2.0 * x.zs);
  const Complex mu(0.0, -p.dx() * x.shc / x.zs);
  const Complex nu = -mu;
  return DensityMatrix4(ComplexMatrix(4, {a, mu, nu, b,
                                          nu, c, d, mu,
                                          mu, d, c, nu,
                                          b, nu, mu, a}));
}

/// The x-DM thermal state after conjugation by H (x) H, written directly in X form.
inline XState thermal_state_x_hadamard_closed(const XModelParams& p, Temperature temp) {
  const auto x = detail::shifted_x(p, temp);
  const double corner = 0.5 * (x.e_c + x.e_d) / x.zs;
  const double r14 = 0.5 * (x.e_c - x.e_d) / x.zs;
  const double inner = x.ch / x.zs;
  const Complex r23 = -x.shc * Complex(p.delta() * p.j(), 2.0 * p.dx()) / x.zs;
  return XState(corner, inner, inner, corner, r14, r23);
}

// ---------------------------------------------------------------------------
// X-form reduction and local phase removal

/// (H (x) H) M (H (x) H); an involution.
inline ComplexMatrix hadamard_conjugate(const ComplexMatrix& m) {
  const ComplexMatrix hh = kron(hadamard(), hadamard());
  return hh * m * hh;
}

/// Maps a centrosymmetric state to X form. Throws NotCentrosymmetricError if
/// any entry off the X pattern exceeds 1e-10 after conjugation.
inline XState hadamard_x_form(const DensityMatrix4& rho) {
  const ComplexMatrix m = hadamard_conjugate(rho.matrix());
  double leak = 0.0;
  std::size_t li = 0, lj = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j || i + j == 3) continue;
      if (std::abs(m(i, j)) > leak) {
        leak = std::abs(m(i, j));
        li = i;
        lj = j;
      }
    }
  if (leak > kXFormLeakageTol) {
    std::ostringstream os;
    os << "state is not centrosymmetric: Hadamard-conjugated entry (" << li << "," << lj
       << ") has modulus " << leak;
    throw NotCentrosymmetricError(os.str(), leak);
  }
  return XState(m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(), m(0, 3), m(1, 2));
}

/// Replaces both coherences by their moduli (a local unitary change of phase).
inline XState phase_normalize_x(const XState& x) {
  return XState(x.p11(), x.p22(), x.p33(), x.p44(), std::abs(x.r14()), std::abs(x.r23()));
}

}  // namespace dmlqu
