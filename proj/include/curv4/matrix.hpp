#pragma once

// Small fixed-size dense kernels: N x N row-major matrices, a symmetric
// 3 x 3 type with packed storage, cyclic Jacobi eigensolver, one-sided
// Jacobi singular values, and singular-safe adjugates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>

namespace curv4 {

template <std::size_t N>
struct Matrix {
  std::array<double, N * N> data{};

  static constexpr std::size_t rows = N;

  constexpr double& operator()(std::size_t i, std::size_t j) { return data[i * N + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return data[i * N + j]; }

  static constexpr Matrix zero() { return Matrix{}; }

  static constexpr Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static constexpr Matrix diagonal(const std::array<double, N>& d) {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data[k] += o.data[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data[k] -= o.data[k];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (auto& x : data) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const double aik = a(i, k);
        for (std::size_t j = 0; j < N; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

using Mat3 = Matrix<3>;
using Mat4 = Matrix<4>;
using Mat6 = Matrix<6>;

template <std::size_t N>
Matrix<N> transpose(const Matrix<N>& m) {
  Matrix<N> t;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) t(j, i) = m(i, j);
  return t;
}

template <std::size_t N>
double trace(const Matrix<N>& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += m(i, i);
  return s;
}

/// Frobenius pairing sum_ij a_ij b_ij.
template <std::size_t N>
double dot(const Matrix<N>& a, const Matrix<N>& b) {
  return std::inner_product(a.data.begin(), a.data.end(), b.data.begin(), 0.0);
}

template <std::size_t N>
double norm_sq(const Matrix<N>& m) {
  return dot(m, m);
}

template <std::size_t N>
double norm(const Matrix<N>& m) {
  return std::sqrt(norm_sq(m));
}

template <std::size_t N>
double max_abs(const Matrix<N>& m) {
  double r = 0.0;
  for (double x : m.data) r = std::max(r, std::abs(x));
  return r;
}

template <std::size_t N>
bool all_finite(const Matrix<N>& m) {
  return std::all_of(m.data.begin(), m.data.end(), [](double x) { return std::isfinite(x); });
}

inline double det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

/// Transposed cofactor matrix. adjugate3(m) * m == det(m) * id holds for
/// singular m as well, so no inverse is ever formed.
inline Mat3 adjugate3(const Mat3& m) {
  Mat3 a;
  a(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  a(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  a(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  a(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  a(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  a(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  a(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  a(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  a(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return a;
}

/// Symmetric 3 x 3 matrix. Only the upper triangle is stored, so
/// (i,j) and (j,i) always read the same value.
class Sym3 {
 public:
  constexpr Sym3() = default;

  /// Upper-triangle entries in order (00, 01, 02, 11, 12, 22).
  constexpr Sym3(double a00, double a01, double a02, double a11, double a12, double a22)
      : v_{a00, a01, a02, a11, a12, a22} {}

  /// Takes the symmetric part of `m`.
  static Sym3 symmetric_part(const Mat3& m) {
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
            m(1, 1), 0.5 * (m(1, 2) + m(2, 1)), m(2, 2)};
  }

  static constexpr Sym3 diagonal(double d0, double d1, double d2) {
    return {d0, 0.0, 0.0, d1, 0.0, d2};
  }
  static constexpr Sym3 diagonal(const std::array<double, 3>& d) {
    return diagonal(d[0], d[1], d[2]);
  }
  static constexpr Sym3 identity() { return diagonal(1.0, 1.0, 1.0); }

  constexpr double operator()(std::size_t i, std::size_t j) const { return v_[index(i, j)]; }

  constexpr void set(std::size_t i, std::size_t j, double x) { v_[index(i, j)] = x; }

  Mat3 full() const {
    Mat3 m;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  double trace() const { return v_[0] + v_[3] + v_[5]; }

  Sym3& operator+=(const Sym3& o) {
    for (std::size_t k = 0; k < 6; ++k) v_[k] += o.v_[k];
    return *this;
  }
  Sym3& operator-=(const Sym3& o) {
    for (std::size_t k = 0; k < 6; ++k) v_[k] -= o.v_[k];
    return *this;
  }
  Sym3& operator*=(double s) {
    for (auto& x : v_) x *= s;
    return *this;
  }
  friend Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
  friend Sym3 operator-(Sym3 a, const Sym3& b) { return a -= b; }
  friend Sym3 operator*(Sym3 a, double s) { return a *= s; }
  friend Sym3 operator*(double s, Sym3 a) { return a *= s; }
  friend bool operator==(const Sym3&, const Sym3&) = default;

 private:
  static constexpr std::size_t index(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    // rows start at 0, 3, 5 in packed upper storage
    constexpr std::size_t row_start[3] = {0, 3, 5};
    return row_start[i] + (j - i);
  }

  std::array<double, 6> v_{};
};

template <std::size_t N>
struct SymEigen {
  std::array<double, N> values{};  // ascending
  Matrix<N> vectors;               // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi rotations on a symmetric N x N matrix. Stops once the
/// off-diagonal Frobenius norm is <= 1e-14 * ||m|| or after 50 sweeps.
/// Only the upper triangle of `m` is read.
template <std::size_t N>
SymEigen<N> jacobi_eigen(const Matrix<N>& input) {
  Matrix<N> a = input;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
  Matrix<N> v = Matrix<N>::identity();

  const double scale = norm(a);
  const double target = 1e-14 * scale;

  auto off_norm = [&a] {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 50 && scale > 0.0; ++sweep) {
    if (off_norm() <= target) break;
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SymEigen<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < N; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

template <std::size_t N>
std::array<double, N> eigenvalues(const Matrix<N>& m) {
  return jacobi_eigen(m).values;
}

struct Eigen3 {
  std::array<double, 3> values{};  // ascending
  Mat3 frame;                      // special orthogonal, columns are eigenvectors
};

/// Eigen-decomposition of a symmetric 3 x 3 matrix with a rotation frame:
/// frame^T m frame = diag(values), values ascending, det(frame) = +1.
inline Eigen3 eigen_sym3(const Sym3& m) {
  auto e = jacobi_eigen(m.full());
  if (det(e.vectors) < 0.0)
    for (std::size_t r = 0; r < 3; ++r) e.vectors(r, 0) = -e.vectors(r, 0);
  return {e.values, e.vectors};
}

/// Singular values, ascending, by one-sided (Hestenes) Jacobi on the columns.
inline std::array<double, 3> singular_values3(const Mat3& m) {
  Mat3 u = m;
  const double scale = norm_sq(m);
  for (int sweep = 0; sweep < 60 && scale > 0.0; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t q = p + 1; q < 3; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
          alpha += u(k, p) * u(k, p);
          beta += u(k, q) * u(k, q);
          gamma += u(k, p) * u(k, q);
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < 3; ++k) {
          const double up = u(k, p);
          const double uq = u(k, q);
          u(k, p) = c * up - s * uq;
          u(k, q) = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }
  std::array<double, 3> sv;
  for (std::size_t j = 0; j < 3; ++j)
    sv[j] = std::sqrt(u(0, j) * u(0, j) + u(1, j) * u(1, j) + u(2, j) * u(2, j));
  std::sort(sv.begin(), sv.end());
  return sv;
}

/// Largest absolute eigenvalue of a symmetric matrix.
template <std::size_t N>
double operator_norm_sym(const Matrix<N>& m) {
  const auto ev = eigenvalues(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

/// Rotation by `angle` about coordinate axis `axis` (0, 1, 2).
inline Mat3 axis_rotation(std::size_t axis, double angle) {
  Mat3 r = Mat3::identity();
  const std::size_t i = (axis + 1) % 3;
  const std::size_t j = (axis + 2) % 3;
  const double c = std::cos(angle), s = std::sin(angle);
  r(i, i) = c;
  r(i, j) = -s;
  r(j, i) = s;
  r(j, j) = c;
  return r;
}

}  // namespace curv4
