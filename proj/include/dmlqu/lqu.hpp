#pragma once

// Local quantum uncertainty of two-qubit states, three ways:
//   * closed form for X states from the Fano-Bloch coefficients,
//   * 1 - largest eigenvalue of the 3x3 W matrix for any state,
//   * direct minimisation of skew information over unit Bloch vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "linalg.hpp"
#include "models.hpp"
#include "thermal.hpp"

namespace dmlqu {

struct FanoBloch {
  double r00, r11, r22, r33, r03, r30;
};

struct OmegaTriple {
  double omega1, omega2, omega3;
  double t1, t2, d1, d2;
};

enum class Branch { omega1, omega3, none };
enum class Method { closed_form, w_matrix, brute_force };

inline std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::omega1: return "omega1";
    case Branch::omega3: return "omega3";
    case Branch::none: break;
  }
  return "none";
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::w_matrix: return "w-matrix";
    case Method::brute_force: break;
  }
  return "brute-force";
}

/// value = 1 - max(omega1, omega3). For the W route on a state whose W matrix
/// does not split into an xy block and a z entry, and for the brute-force
/// route, omega1 = omega3 = 1 - value and branch is none.
struct LquResult {
  double value;
  double omega1;
  double omega3;
  Branch branch;
  Method method;
};

/// Unit Bloch vector n, standing for the observable (n . sigma) (x) 1.
class LocalObservable {
public:
  LocalObservable(double nx, double ny, double nz) : n_{nx, ny, nz} {
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (!(std::abs(norm - 1.0) <= 1e-12)) {
      throw ValidationError("local observable needs a unit Bloch vector, norm is " + std::to_string(norm));
    }
  }

  static LocalObservable from_direction(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("direction must be nonzero and finite");
    return LocalObservable(x / norm, y / norm, z / norm);
  }

  double nx() const noexcept { return n_[0]; }
  double ny() const noexcept { return n_[1]; }
  double nz() const noexcept { return n_[2]; }

  ComplexMatrix matrix() const {
    return kron(n_[0] * pauli_x() + n_[1] * pauli_y() + n_[2] * pauli_z(), identity2());
  }

private:
  std::array<double, 3> n_;
};

// ---------------------------------------------------------------------------
// Closed form for X states

inline FanoBloch fano_bloch(const XState& x) {
  const double a14 = std::abs(x.r14());
  const double a23 = std::abs(x.r23());
  return FanoBloch{
      1.0,
      2.0 * (a23 + a14),
      2.0 * (a23 - a14),
      1.0 - 2.0 * (x.p22() + x.p33()),
      1.0 - 2.0 * (x.p22() + x.p44()),
      1.0 - 2.0 * (x.p33() + x.p44()),
  };
}

inline constexpr double kClosedFormDenominatorFloor = 1e-9;

/// Eigenvalues of the W matrix of an X state. The omega3 numerator pairs
/// (R03 + R30)^2 with (R03 - R30)^2. Throws RankDeficiencyError when
/// 2 sqrt(d) + t < 1e-9 for either block.
inline OmegaTriple omega_eigenvalues(const XState& x) {
  const FanoBloch r = fano_bloch(x);
  // d = rho_ii rho_jj - |rho_ij|^2, factored so that a nearly singular block
  // keeps its small determinant.
  auto det = [](double pa, double pb, double coh) {
    const double g = std::sqrt(std::max(pa, 0.0) * std::max(pb, 0.0));
    return std::max((g - coh) * (g + coh), 0.0);
  };
  OmegaTriple w{};
  w.t1 = x.p11() + x.p44();
  w.t2 = x.p22() + x.p33();
  w.d1 = det(x.p11(), x.p44(), std::abs(x.r14()));
  w.d2 = det(x.p22(), x.p33(), std::abs(x.r23()));

  const double a = 2.0 * std::sqrt(w.d1) + w.t1;
  const double b = 2.0 * std::sqrt(w.d2) + w.t2;
  if (a < kClosedFormDenominatorFloor) {
    throw RankDeficiencyError("closed-form LQU: the {|00>,|11>} block vanishes (2 sqrt(d1) + t1 = " +
                                  std::to_string(a) + "); use lqu_w",
                              1);
  }
  if (b < kClosedFormDenominatorFloor) {
    throw RankDeficiencyError("closed-form LQU: the {|01>,|10>} block vanishes (2 sqrt(d2) + t2 = " +
                                  std::to_string(b) + "); use lqu_w",
                              2);
  }

  const double s = std::sqrt(a * b);
  const double r03_sq_minus_r30_sq = (r.r03 - r.r30) * (r.r03 + r.r30);
  const double r11_sq_minus_r22_sq = (r.r11 - r.r22) * (r.r11 + r.r22);
  w.omega1 = s + (r03_sq_minus_r30_sq + r11_sq_minus_r22_sq) / (4.0 * s);
  w.omega2 = s + (r03_sq_minus_r30_sq - r11_sq_minus_r22_sq) / (4.0 * s);

  const double sum03 = r.r03 + r.r30;
  const double dif03 = r.r03 - r.r30;
  const double dif12 = r.r22 - r.r11;
  const double sum12 = r.r11 + r.r22;
  w.omega3 = 0.5 * (2.0 * (std::sqrt(w.d1) + std::sqrt(w.d2)) + 1.0) +
             0.125 * ((sum03 * sum03 - dif12 * dif12) / a + (dif03 * dif03 - sum12 * sum12) / b);
  return w;
}

// ---------------------------------------------------------------------------
// Skew information and variance

/// -1/2 Tr([S, K]^2) for S = sqrt(rho) already computed; equals 1/2 ||[S, K]||_F^2.
inline double skew_information_from_sqrt(const ComplexMatrix& sqrt_rho, const ComplexMatrix& k) {
  const ComplexMatrix c = sqrt_rho * k - k * sqrt_rho;
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) s += std::norm(c(i, j));
  return 0.5 * s;
}

inline double skew_information(const DensityMatrix4& rho, const LocalObservable& obs) {
  return skew_information_from_sqrt(matrix_sqrt_psd(rho.matrix()), obs.matrix());
}

/// Tr(rho K^2) - Tr(rho K)^2.
inline double variance_observable(const DensityMatrix4& rho, const LocalObservable& obs) {
  const ComplexMatrix k = obs.matrix();
  const ComplexMatrix rk = rho.matrix() * k;
  const double mean = rk.trace().real();
  const double second = (rk * k).trace().real();
  return std::max(second - mean * mean, 0.0);
}

// ---------------------------------------------------------------------------
// W matrix route

/// W_lk = Tr(sqrt(rho) (s_l (x) 1) sqrt(rho) (s_k (x) 1)), symmetrised.
inline RealMatrix3 w_matrix(const DensityMatrix4& rho) {
  const ComplexMatrix s = matrix_sqrt_psd(rho.matrix());
  std::array<ComplexMatrix, 3> sk{s * kron(pauli_x(), identity2()), s * kron(pauli_y(), identity2()),
                                  s * kron(pauli_z(), identity2())};
  RealMatrix3 w{};
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t k = 0; k < 3; ++k) {
      Complex t = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) t += sk[l](i, j) * sk[k](j, i);
      w[l][k] = t.real();
    }
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t k = l + 1; k < 3; ++k) {
      const double avg = 0.5 * (w[l][k] + w[k][l]);
      w[l][k] = w[k][l] = avg;
    }
  return w;
}

inline double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

inline LquResult lqu_w(const DensityMatrix4& rho) {
  const RealMatrix3 w = w_matrix(rho);
  constexpr double kSplitTol = 1e-12;
  if (std::abs(w[0][2]) <= kSplitTol && std::abs(w[1][2]) <= kSplitTol) {
    // X-like state: report the xy-block maximum and the zz entry separately.
    const double mean = 0.5 * (w[0][0] + w[1][1]);
    const double half = 0.5 * (w[0][0] - w[1][1]);
    const double om1 = mean + std::hypot(half, w[0][1]);
    const double om3 = w[2][2];
    const bool first = om1 >= om3;
    return LquResult{clamp_unit(1.0 - std::max(om1, om3)), om1, om3,
                     first ? Branch::omega1 : Branch::omega3, Method::w_matrix};
  }
  const double top = symmetric_eigenvalues(w)[2];
  return LquResult{clamp_unit(1.0 - top), top, top, Branch::none, Method::w_matrix};
}

/// 1 - max(omega1, omega3); falls back to lqu_w when a block is rank deficient.
inline LquResult lqu_closed(const XState& x) {
  try {
    const OmegaTriple w = omega_eigenvalues(x);
    const bool first = w.omega1 >= w.omega3;
    return LquResult{clamp_unit(1.0 - std::max(w.omega1, w.omega3)), w.omega1, w.omega3,
                     first ? Branch::omega1 : Branch::omega3, Method::closed_form};
  } catch (const RankDeficiencyError&) {
    return lqu_w(DensityMatrix4(x));
  }
}

// ---------------------------------------------------------------------------
// Brute force

namespace detail {

using Vec3 = std::array<double, 3>;

inline Vec3 normalize3(const Vec3& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

inline Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Orthonormal tangent pair at n.
inline std::pair<Vec3, Vec3> tangent_frame(const Vec3& n) {
  const Vec3 axis = std::abs(n[0]) < 0.6 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 e1 = normalize3(cross3(n, axis));
  return {e1, cross3(n, e1)};
}

inline std::vector<Vec3> fibonacci_sphere(int count) {
  std::vector<Vec3> pts(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts[static_cast<std::size_t>(i)] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return pts;
}

}  // namespace detail

inline constexpr int kDefaultCoarseGrid = 4096;
inline constexpr int kDefaultRefineIters = 60;
inline constexpr double kBruteForceTolerance = 1e-7;

/// Minimum of skew information over all local observables on qubit A:
/// Fibonacci-lattice scan, then compass search on the tangent plane of the
/// best few directions, halving the step until it drops below 1e-7 or
/// `refine_iters` halvings are used.
inline LquResult lqu_bruteforce(const DensityMatrix4& rho, int coarse_grid = kDefaultCoarseGrid,
                                int refine_iters = kDefaultRefineIters) {
  using detail::Vec3;
  if (coarse_grid < 8) throw ValidationError("coarse_grid must be at least 8");
  if (refine_iters < 0) throw ValidationError("refine_iters must be nonnegative");

  const ComplexMatrix sqrt_rho = matrix_sqrt_psd(rho.matrix());
  const std::array<ComplexMatrix, 3> basis{kron(pauli_x(), identity2()), kron(pauli_y(), identity2()),
                                           kron(pauli_z(), identity2())};
  auto objective = [&](const Vec3& n) {
    const ComplexMatrix k = n[0] * basis[0] + n[1] * basis[1] + n[2] * basis[2];
    return skew_information_from_sqrt(sqrt_rho, k);
  };

  const std::vector<Vec3> grid = detail::fibonacci_sphere(coarse_grid);
  std::vector<double> values(grid.size());
  std::transform(grid.begin(), grid.end(), values.begin(), objective);

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  constexpr std::size_t kSeeds = 4;
  const std::size_t seeds = std::min(kSeeds, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(seeds), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return values[a] < values[b] || (values[a] == values[b] && a < b);
                    });

  const double start_step = std::sqrt(4.0 * std::numbers::pi / coarse_grid);
  const double diag = 1.0 / std::sqrt(2.0);
  double best = values[order[0]];

  for (std::size_t s = 0; s < seeds; ++s) {
    Vec3 n = grid[order[s]];
    double fn = values[order[s]];
    double step = start_step;
    for (int it = 0; it < refine_iters && step > kBruteForceTolerance; ++it) {
      for (int moves = 0; moves < 64; ++moves) {
        const auto [e1, e2] = detail::tangent_frame(n);
        const std::array<std::pair<double, double>, 8> dirs{
            {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {diag, diag}, {-diag, -diag}, {diag, -diag}, {-diag, diag}}};
        bool moved = false;
        for (const auto& [u, v] : dirs) {
          const Vec3 cand = detail::normalize3({n[0] + step * (u * e1[0] + v * e2[0]),
                                                n[1] + step * (u * e1[1] + v * e2[1]),
                                                n[2] + step * (u * e1[2] + v * e2[2])});
          const double fc = objective(cand);
          if (fc < fn) {
            n = cand;
            fn = fc;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      step *= 0.5;
    }
    best = std::min(best, fn);
  }

  const double value = clamp_unit(best);
  return LquResult{value, 1.0 - value, 1.0 - value, Branch::none, Method::brute_force};
}

// ---------------------------------------------------------------------------
// Thermal pipeline

enum class Model { z_dm, x_dm };

inline std::string_view to_string(Model m) { return m == Model::z_dm ? "z-dm" : "x-dm"; }

struct ThermalLqu {
  LquResult lqu;
  Partition partition;
};

/// The X state fed to the closed form: phase-normalised thermal state.
inline XState thermal_x_state(const ZModelParams& p, Temperature temp) {
  return phase_normalize_x(thermal_state_z_closed(p, temp));
}

inline XState thermal_x_state(const XModelParams& p, Temperature temp) {
  return phase_normalize_x(hadamard_x_form(thermal_state_x_closed(p, temp)));
}

inline ThermalLqu thermal_lqu(const ZModelParams& p, Temperature temp) {
  return ThermalLqu{lqu_closed(thermal_x_state(p, temp)), partition_z(p, temp)};
}

inline ThermalLqu thermal_lqu(const XModelParams& p, Temperature temp) {
  return ThermalLqu{lqu_closed(thermal_x_state(p, temp)), partition_x(p, temp)};
}

inline ThermalLqu thermal_lqu(Model model, double j, double delta, double dm, Temperature temp,
                              DomainCheck check = DomainCheck::strict) {
  if (model == Model::z_dm) return thermal_lqu(ZModelParams(j, delta, dm, check), temp);
  return thermal_lqu(XModelParams(j, delta, dm, check), temp);
}

}  // namespace dmlqu
