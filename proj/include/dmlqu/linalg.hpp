#pragma once

// Small dense complex linear algebra for two-qubit work: 2x2 and 4x4
// matrices, Hermitian eigendecomposition by cyclic complex Jacobi,
// PSD square roots, exponentials and Kronecker products.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace dmlqu {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdClamp = 1e-10;
inline constexpr double kSqrtRoundoff = 4.0 * std::numeric_limits<double>::epsilon();

/// Row-major complex matrix of dimension 2 or 4, stored inline.
class ComplexMatrix {
public:
  static constexpr std::size_t kMaxDim = 4;

  ComplexMatrix() : ComplexMatrix(4) {}

  explicit ComplexMatrix(std::size_t dim) : dim_(dim) {
    if (dim != 2 && dim != 4) {
      throw ValidationError("ComplexMatrix dimension must be 2 or 4, got " + std::to_string(dim));
    }
  }

  ComplexMatrix(std::size_t dim, std::initializer_list<Complex> row_major) : ComplexMatrix(dim) {
    if (row_major.size() != dim * dim) {
      throw ValidationError("ComplexMatrix initializer needs " + std::to_string(dim * dim) +
                            " entries, got " + std::to_string(row_major.size()));
    }
    std::copy(row_major.begin(), row_major.end(), data_.begin());
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  Complex trace() const noexcept {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) noexcept {
    for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    ComplexMatrix r(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < a.dim_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

private:
  void require_same_dim(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) {
      throw ValidationError("dimension mismatch: " + std::to_string(dim_) + " vs " +
                            std::to_string(o.dim_));
    }
  }

  std::size_t dim_;
  std::array<Complex, kMaxDim * kMaxDim> data_{};
};

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

// Pauli operators and the single-qubit Hadamard.
inline ComplexMatrix identity2() { return ComplexMatrix::identity(2); }
inline ComplexMatrix pauli_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
inline ComplexMatrix pauli_y() { return ComplexMatrix(2, {0.0, Complex(0, -1), Complex(0, 1), 0.0}); }
inline ComplexMatrix pauli_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }
inline ComplexMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return ComplexMatrix(2, {h, h, h, -h});
}

/// Pauli operator by index: 0 = identity, 1 = x, 2 = y, 3 = z.
inline ComplexMatrix pauli(int index) {
  switch (index) {
    case 0: return identity2();
    case 1: return pauli_x();
    case 2: return pauli_y();
    case 3: return pauli_z();
    default: throw ValidationError("pauli index must be in 0..3, got " + std::to_string(index));
  }
}

/// Kronecker product in the |00>,|01>,|10>,|11> ordering.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw ValidationError("kron expects two 2x2 matrices, got " + std::to_string(a.dim()) + "x" +
                          std::to_string(a.dim()) + " and " + std::to_string(b.dim()) + "x" +
                          std::to_string(b.dim()));
  }
  ComplexMatrix r(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

/// Throws ValidationError naming the worst entry pair if |M_ij - conj(M_ji)| > tol.
inline void require_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
  double worst = 0.0;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst) {
        worst = d;
        wi = i;
        wj = j;
      }
    }
  if (worst > tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian: entries (" << wi << "," << wj << ") and (" << wj << "," << wi
       << ") differ from conjugate symmetry by " << worst;
    throw ValidationError(os.str());
  }
}

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]

  ComplexMatrix reconstruct() const {
    const std::size_t n = eigenvectors.dim();
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          s += eigenvectors(i, k) * eigenvalues[k] * std::conj(eigenvectors(j, k));
        r(i, j) = s;
      }
    return r;
  }

  /// V f(diag(lambda)) V^dagger for a spectral function f.
  template <typename F>
  ComplexMatrix apply(F&& f) const {
    std::vector<double> mapped(eigenvalues.size());
    std::transform(eigenvalues.begin(), eigenvalues.end(), mapped.begin(), f);
    return EigenDecomposition{std::move(mapped), eigenvectors}.reconstruct();
  }
};

namespace detail {

// Cyclic Jacobi on an n x n Hermitian matrix (n <= 4), row-major in `a`.
// On return the diagonal of `a` holds eigenvalues and the columns of `v`
// the corresponding eigenvectors (unsorted).
inline void jacobi_hermitian(std::span<Complex> a, std::span<Complex> v, std::size_t n) {
  auto at = [n](std::span<Complex> m, std::size_t i, std::size_t j) -> Complex& { return m[i * n + j]; };

  std::fill(v.begin(), v.end(), Complex{});
  for (std::size_t i = 0; i < n; ++i) at(v, i, i) = 1.0;
  for (std::size_t i = 0; i < n; ++i) at(a, i, i) = at(a, i, i).real();

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(at(a, p, q));
    if (off == 0.0) return;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(at(a, p, q));
        if (r == 0.0) continue;
        const double app = at(a, p, p).real();
        const double aqq = at(a, q, q).real();
        const double g = 100.0 * r;
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          at(a, p, q) = 0.0;
          at(a, q, p) = 0.0;
          continue;
        }
        const double h = aqq - app;
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = r / h;
        } else {
          const double theta = 0.5 * h / r;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unit phase that makes the (p,q) entry real before the real rotation.
        const Complex e = at(a, p, q) / r;
        const Complex gpp = c, gpq = s, gqp = -s * std::conj(e), gqq = c * std::conj(e);

        // a <- a G (columns p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = at(a, k, p), akq = at(a, k, q);
          at(a, k, p) = akp * gpp + akq * gqp;
          at(a, k, q) = akp * gpq + akq * gqq;
        }
        // a <- G^dagger a (rows p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = at(a, p, k), aqk = at(a, q, k);
          at(a, p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          at(a, q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        at(a, p, q) = 0.0;
        at(a, q, p) = 0.0;
        at(a, p, p) = at(a, p, p).real();
        at(a, q, q) = at(a, q, q).real();
        // v <- v G
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = at(v, k, p), vkq = at(v, k, q);
          at(v, k, p) = vkp * gpp + vkq * gqp;
          at(v, k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }
}

// Ascending order, then each column rotated so its first non-negligible
// component is real and positive.
inline void sort_and_fix_phases(std::vector<double>& values, std::span<Complex> v, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> sorted_values(n);
  std::vector<Complex> sorted(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted_values[k] = values[order[k]];
    for (std::size_t i = 0; i < n; ++i) sorted[i * n + k] = v[i * n + order[k]];
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex c = sorted[i * n + k];
      if (std::abs(c) > 1e-12) {
        const Complex phase = std::conj(c) / std::abs(c);
        for (std::size_t r = 0; r < n; ++r) sorted[r * n + k] *= phase;
        sorted[i * n + k] = std::abs(c);
        break;
      }
    }
  }
  values = std::move(sorted_values);
  std::copy(sorted.begin(), sorted.end(), v.begin());
}

}  // namespace detail

/// Eigenvalues ascending, orthonormal eigenvectors with a deterministic phase.
inline EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix& m) {
  require_hermitian(m);
  const std::size_t n = m.dim();
  std::array<Complex, 16> a{};
  std::array<Complex, 16> v{};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);

  detail::jacobi_hermitian(std::span(a).first(n * n), std::span(v).first(n * n), n);

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i].real();
  detail::sort_and_fix_phases(values, std::span(v).first(n * n), n);

  EigenDecomposition out{std::move(values), ComplexMatrix(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.eigenvectors(i, j) = v[i * n + j];
  return out;
}

using RealMatrix3 = std::array<std::array<double, 3>, 3>;

/// Eigenvalues (ascending) of a real symmetric 3x3 matrix.
inline std::array<double, 3> symmetric_eigenvalues(const RealMatrix3& m) {
  std::array<Complex, 9> a{};
  std::array<Complex, 9> v{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a[i * 3 + j] = 0.5 * (m[i][j] + m[j][i]);
  detail::jacobi_hermitian(a, v, 3);
  std::array<double, 3> ev{a[0].real(), a[4].real(), a[8].real()};
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Principal square root of a PSD matrix; eigenvalues in [-1e-10, 0) are clamped to 0.
/// Throws NotPsdError below -1e-10.
inline ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  const EigenDecomposition eig = hermitian_eigendecomposition(m);
  if (eig.eigenvalues.front() < -kPsdClamp) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite: eigenvalue " << eig.eigenvalues.front();
    throw NotPsdError(os.str(), eig.eigenvalues.front());
  }
  // Eigenvalues at roundoff level relative to the largest are treated as zero.
  const double floor = kSqrtRoundoff * std::max(eig.eigenvalues.back(), 0.0);
  ComplexMatrix r = eig.apply([floor](double x) { return x <= floor ? 0.0 : std::sqrt(x); });
  return 0.5 * (r + r.adjoint());
}

/// e^{s M} for Hermitian M. Throws OverflowError when s * lambda exceeds 700.
inline ComplexMatrix matrix_exp_scaled(const ComplexMatrix& m, double s) {
  require_hermitian(m);
  if (s == 0.0) return ComplexMatrix::identity(m.dim());
  const EigenDecomposition eig = hermitian_eigendecomposition(m);
  for (double lambda : eig.eigenvalues) {
    if (s * lambda > 700.0) {
      std::ostringstream os;
      os << "matrix exponential overflows (s*lambda = " << s * lambda
         << "); use the exponent-shifted thermal state routines instead";
      throw OverflowError(os.str());
    }
  }
  return eig.apply([s](double x) { return std::exp(s * x); });
}

}  // namespace dmlqu
