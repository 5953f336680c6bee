#pragma once

// Two-qubit anisotropic Heisenberg XY Hamiltonians with a z-axis or an
// x-axis Dzyaloshinskii-Moriya term, their closed-form spectra, and
// ground-state classification. Energies in units with k_B = 1.

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "linalg.hpp"

namespace dmlqu {

/// Whether Delta is restricted to [0, 1].
enum class DomainCheck { strict, allow_any_delta };

namespace detail {

inline void validate_common(double j, double delta, double dm, DomainCheck check) {
  if (!std::isfinite(j) || !std::isfinite(delta) || !std::isfinite(dm)) {
    throw ValidationError("model parameters must be finite");
  }
  if (j == 0.0) throw ValidationError("coupling J must be nonzero");
  if (check == DomainCheck::strict && (delta < 0.0 || delta > 1.0)) {
    std::ostringstream os;
    os << "anisotropy Delta must lie in [0, 1], got " << delta
       << " (pass DomainCheck::allow_any_delta to explore outside)";
    throw ValidationError(os.str());
  }
}

}  // namespace detail

/// J (sx sx + Delta sy sy) + Dz (sx sy - sy sx).
class ZModelParams {
public:
  ZModelParams(double j, double delta, double dz, DomainCheck check = DomainCheck::strict)
      : j_(j), delta_(delta), dz_(dz) {
    detail::validate_common(j, delta, dz, check);
  }

  double j() const noexcept { return j_; }
  double delta() const noexcept { return delta_; }
  double dz() const noexcept { return dz_; }

  /// sqrt(4 Dz^2 + (Delta+1)^2 J^2)
  double omega() const noexcept { return std::hypot(2.0 * dz_, (delta_ + 1.0) * j_); }
  /// Phase of J(Delta+1) + 2i Dz; atan2 keeps |phi3> on the +Omega level for J < 0.
  double theta() const noexcept { return std::atan2(2.0 * dz_, j_ * (delta_ + 1.0)); }

private:
  double j_, delta_, dz_;
};

/// J (sx sx + Delta sy sy) + Dx (sy sz - sz sy).
class XModelParams {
public:
  XModelParams(double j, double delta, double dx, DomainCheck check = DomainCheck::strict)
      : j_(j), delta_(delta), dx_(dx) {
    detail::validate_common(j, delta, dx, check);
  }

  double j() const noexcept { return j_; }
  double delta() const noexcept { return delta_; }
  double dx() const noexcept { return dx_; }

  /// sqrt(4 Dx^2 + Delta^2 J^2)
  double omega1() const noexcept { return std::hypot(2.0 * dx_, delta_ * j_); }

  // (Omega1 -/+ Delta J) / Dx, evaluated without cancellation using
  // (Omega1 - Delta J)(Omega1 + Delta J) = 4 Dx^2.
  std::optional<double> zeta1() const noexcept {
    if (dx_ == 0.0) return std::nullopt;
    const double dj = delta_ * j_;
    return dj >= 0.0 ? 4.0 * dx_ / (omega1() + dj) : (omega1() - dj) / dx_;
  }
  std::optional<double> zeta2() const noexcept {
    if (dx_ == 0.0) return std::nullopt;
    const double dj = delta_ * j_;
    return dj <= 0.0 ? 4.0 * dx_ / (omega1() - dj) : (omega1() + dj) / dx_;
  }

private:
  double j_, delta_, dx_;
};

using Vec4 = std::array<Complex, 4>;

struct Level {
  int index;          // 1..4
  std::string label;  // "phi1".."phi4"
  double energy;
  Vec4 vector;
};

struct Spectrum {
  std::array<Level, 4> levels;
};

struct GroundStateReport {
  std::string ground_label;
  int ground_index;
  double ground_energy;
  bool degenerate;
  bool maximally_entangled;
};

inline constexpr double kDegeneracyGap = 1e-9;

inline ComplexMatrix hamiltonian_z(const ZModelParams& p) {
  const double corner = p.j() * (1.0 - p.delta());
  const double inner = p.j() * (p.delta() + 1.0);
  const Complex up(inner, 2.0 * p.dz());
  return ComplexMatrix(4, {0.0, 0.0, 0.0, corner,
                           0.0, 0.0, up, 0.0,
                           0.0, std::conj(up), 0.0, 0.0,
                           corner, 0.0, 0.0, 0.0});
}

inline ComplexMatrix hamiltonian_x(const XModelParams& p) {
  const double corner = p.j() * (1.0 - p.delta());
  const double inner = p.j() * (p.delta() + 1.0);
  const Complex id(0.0, p.dx());
  return ComplexMatrix(4, {0.0, id, -id, corner,
                           -id, 0.0, inner, id,
                           id, inner, 0.0, -id,
                           corner, -id, id, 0.0});
}

namespace detail {

inline Vec4 normalized(Vec4 v) {
  double n = 0.0;
  for (const Complex& c : v) n += std::norm(c);
  n = std::sqrt(n);
  for (Complex& c : v) c /= n;
  return v;
}

inline Level make_level(int index, double energy, const Vec4& v) {
  return Level{index, "phi" + std::to_string(index), energy, v};
}

}  // namespace detail

inline Spectrum spectrum_z(const ZModelParams& p) {
  const double r = 1.0 / std::sqrt(2.0);
  const double a = p.j() * (p.delta() - 1.0);
  const double om = p.omega();
  const Complex ph = std::polar(r, p.theta());
  return Spectrum{{
      detail::make_level(1, a, {-r, 0.0, 0.0, r}),
      detail::make_level(2, -a, {r, 0.0, 0.0, r}),
      detail::make_level(3, om, {0.0, ph, r, 0.0}),
      detail::make_level(4, -om, {0.0, -ph, r, 0.0}),
  }};
}

inline Spectrum spectrum_x(const XModelParams& p) {
  const double r = 1.0 / std::sqrt(2.0);
  const double j = p.j();
  const double om1 = p.omega1();
  const double e3 = -j + om1;
  const double e4 = -j - om1;

  Vec4 v3, v4;
  const auto z1 = p.zeta1();
  const auto z2 = p.zeta2();
  if (z1 && z2 && std::isfinite(*z1) && std::isfinite(*z2)) {
    // Components 1/sqrt(zeta^2/4 + 1) and zeta/sqrt(zeta^2 + 4), overall 1/sqrt(2).
    auto family = [r](double zeta, double sign) {
      const double h = std::hypot(zeta, 2.0);
      const double outer = 2.0 / h;
      const Complex inner(0.0, sign * zeta / h);
      return detail::normalized(Vec4{-r * outer, r * inner, -r * inner, r * outer});
    };
    v3 = family(*z1, 1.0);
    v4 = family(*z2, -1.0);
  } else {
    // Dx = 0: the zeta parameterisation is singular. Diagonalise H' inside the
    // span of (-|00>+|11>)/sqrt2 and i(|01>-|10>)/sqrt2 instead.
    const ComplexMatrix h = hamiltonian_x(p);
    const std::array<Vec4, 2> basis{Vec4{-r, 0.0, 0.0, r}, Vec4{0.0, Complex(0, r), Complex(0, -r), 0.0}};
    ComplexMatrix block(2);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
          for (std::size_t k = 0; k < 4; ++k) s += std::conj(basis[a][i]) * h(i, k) * basis[b][k];
        block(a, b) = s;
      }
    const EigenDecomposition eig = hermitian_eigendecomposition(0.5 * (block + block.adjoint()));
    auto lift = [&](std::size_t col) {
      Vec4 v{};
      for (std::size_t i = 0; i < 4; ++i)
        v[i] = eig.eigenvectors(0, col) * basis[0][i] + eig.eigenvectors(1, col) * basis[1][i];
      return detail::normalized(v);
    };
    v4 = lift(0);
    v3 = lift(1);
  }

  return Spectrum{{
      detail::make_level(1, j * (1.0 + p.delta()), {0.0, r, r, 0.0}),
      detail::make_level(2, j * (1.0 - p.delta()), {r, 0.0, 0.0, r}),
      detail::make_level(3, e3, v3),
      detail::make_level(4, e4, v4),
  }};
}

/// Reduced state of qubit A for a pure two-qubit state.
inline ComplexMatrix reduced_a(const Vec4& v) {
  ComplexMatrix r(2);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t k = 0; k < 2; ++k) r(a, b) += v[2 * a + k] * std::conj(v[2 * b + k]);
  return r;
}

/// Minimum-energy level by direct comparison. Exact ties resolve to the
/// higher-numbered level.
inline GroundStateReport ground_state(const Spectrum& s) {
  std::size_t best = 3;
  for (std::size_t k = 4; k-- > 0;) {
    if (s.levels[k].energy < s.levels[best].energy) best = k;
  }
  double second = INFINITY;
  for (std::size_t k = 0; k < 4; ++k)
    if (k != best) second = std::min(second, s.levels[k].energy);

  const Level& g = s.levels[best];
  const ComplexMatrix mixed = 0.5 * identity2();
  return GroundStateReport{
      g.label,
      g.index,
      g.energy,
      second - g.energy < kDegeneracyGap,
      max_abs_diff(reduced_a(g.vector), mixed) <= 1e-10,
  };
}

}  // namespace dmlqu
