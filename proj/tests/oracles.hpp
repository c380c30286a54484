#pragma once

// Reference computations for the test suite. Nothing here calls into the
// library's block algebra: tensors are plain 4-index arrays, 2-forms are
// antisymmetric 4x4 arrays, and the sharp operator uses det * inverse.

#include <array>
#include <cmath>
#include <random>

#include "curv4/curvature.hpp"

namespace oracle {

using M3 = std::array<std::array<double, 3>, 3>;
using M4 = std::array<std::array<double, 4>, 4>;
using M6 = std::array<std::array<double, 6>, 6>;

struct Tensor {
  double v[4][4][4][4] = {};
  double& operator()(int i, int j, int k, int l) { return v[i][j][k][l]; }
  double operator()(int i, int j, int k, int l) const { return v[i][j][k][l]; }
};

inline Tensor operator+(Tensor a, const Tensor& b) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) a(i, j, k, l) += b(i, j, k, l);
  return a;
}

// (h ⊙ k)_ijkl = h_ik k_jl + h_jl k_ik − h_il k_jk − h_jk k_il
inline Tensor kulkarni_nomizu(const M4& h, const M4& k) {
  Tensor t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          t(i, j, a, b) = h[i][a] * k[j][b] + h[j][b] * k[i][a] - h[i][b] * k[j][a] - h[j][a] * k[i][b];
  return t;
}

inline M4 random_sym4(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  M4 m{};
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) m[i][j] = m[j][i] = n(rng);
  return m;
}

/// Sums of Kulkarni–Nomizu products of symmetric matrices span the algebraic
/// curvature tensors.
inline Tensor random_curvature_tensor(std::mt19937_64& rng, double scale = 1.0) {
  Tensor t;
  for (int r = 0; r < 4; ++r) t = t + kulkarni_nomizu(random_sym4(rng, scale), random_sym4(rng, 1.0));
  return t;
}

inline Tensor constant_curvature(double k) {
  M4 g{};
  for (int i = 0; i < 4; ++i) g[i][i] = 1.0;
  Tensor t = kulkarni_nomizu(g, g);
  for (auto& a : t.v)
    for (auto& b : a)
      for (auto& c : b)
        for (auto& x : c) x *= 0.5 * k;
  return t;
}

/// Unit S³ × ℝ: sectional curvature 1 on planes inside span(e1,e2,e3), 0 on planes containing e4.
inline Tensor unit_s3xr() {
  M4 g{};
  for (int i = 0; i < 3; ++i) g[i][i] = 1.0;
  Tensor t = kulkarni_nomizu(g, g);
  for (auto& a : t.v)
    for (auto& b : a)
      for (auto& c : b)
        for (auto& x : c) x *= 0.5;
  return t;
}

inline double symmetry_defect(const Tensor& t) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          d = std::max(d, std::abs(t(i, j, k, l) + t(j, i, k, l)));
          d = std::max(d, std::abs(t(i, j, k, l) - t(k, l, i, j)));
          d = std::max(d, std::abs(t(i, j, k, l) + t(i, k, l, j) + t(i, l, j, k)));
        }
  return d;
}

inline curv4::RiemannTensor to_library(const Tensor& t) {
  curv4::RiemannTensor r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t l = 0; l < 4; ++l) r.set_raw(i, j, k, l, t(int(i), int(j), int(k), int(l)));
  return r;
}

inline Tensor from_library(const curv4::RiemannTensor& r) {
  Tensor t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t l = 0; l < 4; ++l) t(int(i), int(j), int(k), int(l)) = r(i, j, k, l);
  return t;
}

// ---- 2-forms ------------------------------------------------------------

/// Antisymmetric 4x4 array of c·(e_i∧e_j).
inline M4 wedge(int i, int j, double c) {
  M4 w{};
  w[i][j] += c;
  w[j][i] -= c;
  return w;
}

inline M4 add(const M4& a, const M4& b) {
  M4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}

/// φ₁..φ₃ followed by ψ₁..ψ₃ (0-based indices; e42 = −e24).
inline std::array<M4, 6> bivector_frame() {
  const double s = 1.0 / std::sqrt(2.0);
  return {add(wedge(0, 1, s), wedge(2, 3, s)),  add(wedge(0, 2, s), wedge(3, 1, s)),
          add(wedge(0, 3, s), wedge(1, 2, s)),  add(wedge(0, 1, s), wedge(2, 3, -s)),
          add(wedge(0, 2, s), wedge(3, 1, -s)), add(wedge(0, 3, s), wedge(1, 2, -s))};
}

/// ⟨ω, R η⟩ with {e_i∧e_j}_{i<j} orthonormal: ¼ Σ ω_ij R_ijkl η_kl.
inline double pairing(const M4& w, const Tensor& t, const M4& e) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += w[i][j] * t(i, j, k, l) * e[k][l];
  return 0.25 * s;
}

/// Operator matrix in the (φ, ψ) frame.
inline M6 operator_matrix(const Tensor& t) {
  const auto f = bivector_frame();
  M6 m{};
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) m[a][b] = pairing(f[a], t, f[b]);
  return m;
}

struct Blocks {
  M3 A{}, B{}, C{};
};

inline Blocks split(const M6& m) {
  Blocks b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      b.A[i][j] = m[i][j];
      b.B[i][j] = m[i][j + 3];
      b.C[i][j] = m[i + 3][j + 3];
    }
  return b;
}

inline Blocks blocks_of(const Tensor& t) { return split(operator_matrix(t)); }

// ---- Ricci --------------------------------------------------------------

/// Ric_jl = Σ_i R_ijil.
inline M4 ricci(const Tensor& t) {
  M4 r{};
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 4; ++i) r[j][l] += t(i, j, i, l);
  return r;
}

inline double scalar(const Tensor& t) {
  const M4 r = ricci(t);
  return r[0][0] + r[1][1] + r[2][2] + r[3][3];
}

inline M4 traceless_ricci(const Tensor& t) {
  M4 r = ricci(t);
  const double q = scalar(t) / 4.0;
  for (int i = 0; i < 4; ++i) r[i][i] -= q;
  return r;
}

/// B written through Riemann and Ricci components (1-based names in comments).
inline M3 component_B(const Tensor& t) {
  const M4 R = ricci(t);
  auto r = [&](int i, int j, int k, int l) { return t(i - 1, j - 1, k - 1, l - 1); };
  auto ric = [&](int i, int j) { return R[i - 1][j - 1]; };
  return {{{0.5 * (r(1, 2, 1, 2) - r(3, 4, 3, 4)), 0.5 * (ric(2, 3) - ric(1, 4)), 0.5 * (ric(2, 4) + ric(1, 3))},
           {0.5 * (ric(2, 3) + ric(1, 4)), 0.5 * (r(1, 3, 1, 3) - r(2, 4, 2, 4)), 0.5 * (ric(3, 4) - ric(1, 2))},
           {0.5 * (ric(2, 4) - ric(1, 3)), 0.5 * (ric(3, 4) + ric(1, 2)), 0.5 * (r(1, 4, 1, 4) - r(2, 3, 2, 3))}}};
}

/// Ric₀ written through the entries of B.
inline M4 closed_form_ric0(const M3& b) {
  auto B = [&](int i, int j) { return b[i - 1][j - 1]; };
  return {{{B(1, 1) + B(2, 2) + B(3, 3), B(3, 2) - B(2, 3), B(1, 3) - B(3, 1), B(2, 1) - B(1, 2)},
           {B(3, 2) - B(2, 3), B(1, 1) - B(2, 2) - B(3, 3), B(2, 1) + B(1, 2), B(1, 3) + B(3, 1)},
           {B(1, 3) - B(3, 1), B(2, 1) + B(1, 2), B(2, 2) - B(1, 1) - B(3, 3), B(2, 3) + B(3, 2)},
           {B(2, 1) - B(1, 2), B(1, 3) + B(3, 1), B(2, 3) + B(3, 2), B(3, 3) - B(1, 1) - B(2, 2)}}};
}

// ---- small dense helpers -------------------------------------------------

inline double det3(const M3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline M3 transpose3(const M3& m) {
  M3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return t;
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
inline M3 inverse3(M3 m) {
  M3 inv{};
  for (int i = 0; i < 3; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    std::swap(inv[col], inv[piv]);
    const double p = m[col][col];
    for (int j = 0; j < 3; ++j) {
      m[col][j] /= p;
      inv[col][j] /= p;
    }
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      for (int j = 0; j < 3; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline M3 scale3(const M3& m, double s) {
  M3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j] * s;
  return r;
}

/// A# = det(A)(Aᵗ)⁻¹; B# = −det(B)(Bᵗ)⁻¹. Needs invertible input.
inline M3 sharp_sym(const M3& a) { return scale3(inverse3(transpose3(a)), det3(a)); }
inline M3 sharp_off(const M3& b) { return scale3(inverse3(transpose3(b)), -det3(b)); }

inline M6 assemble(const Blocks& b) {
  M6 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      m[i][j] = b.A[i][j];
      m[i][j + 3] = b.B[i][j];
      m[i + 3][j] = b.B[j][i];
      m[i + 3][j + 3] = b.C[i][j];
    }
  return m;
}

inline M6 mul6(const M6& a, const M6& b) {
  M6 r{};
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k)
      for (int j = 0; j < 6; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline double frob6(const M6& a, const M6& b) {
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) s += a[i][j] * b[i][j];
  return s;
}

/// R# = 2[[A#, B#], [(Bᵗ)#, C#]] by det * inverse.
inline M6 sharp(const Blocks& b) {
  Blocks s;
  s.A = scale3(sharp_sym(b.A), 2.0);
  s.B = scale3(sharp_off(b.B), 2.0);
  s.C = scale3(sharp_sym(b.C), 2.0);
  return assemble(s);
}

/// 2·tri(R)·S − σ²·|R_ijkl|² with every factor taken from the tensor itself.
inline double brute_force_P(const Tensor& t) {
  const M6 r = operator_matrix(t);
  const M6 q = mul6(r, r);
  const M6 sh = sharp(split(r));
  M6 sum{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) sum[i][j] = q[i][j] + sh[i][j];
  const double tri = 2.0 * frob6(sum, r);
  const M4 ric = ricci(t);
  double sigma2 = 0.0;
  for (auto& row : ric)
    for (double x : row) sigma2 += x * x;
  double rsq = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) rsq += t(i, j, k, l) * t(i, j, k, l);
  return 2.0 * tri * scalar(t) - sigma2 * rsq;
}

/// Tensor whose operator in the (φ, ψ) frame is `m`: R_ijkl = Σ_ab m_ab f_a(ij) f_b(kl).
inline Tensor tensor_from_operator(const M6& m) {
  const auto f = bivector_frame();
  Tensor t;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) t(i, j, k, l) += m[a][b] * f[a][i][j] * f[b][k][l];
  return t;
}

// ---- closed forms ---------------------------------------------------------

/// P on A = C = (S/12)·id, B = b·diag(1,1,−1).
inline double P_conformally_flat_family(double S, double b) {
  const double d = S * b - 12.0 * b * b;
  return -2.0 * d * d;
}

/// tr(M^k) for k = 1..4; equal power traces mean equal spectra.
inline std::array<double, 4> power_traces(const M4& m) {
  M4 p = m;
  std::array<double, 4> tr{};
  for (int k = 0; k < 4; ++k) {
    tr[k] = p[0][0] + p[1][1] + p[2][2] + p[3][3];
    M4 n{};
    for (int i = 0; i < 4; ++i)
      for (int l = 0; l < 4; ++l)
        for (int j = 0; j < 4; ++j) n[i][j] += p[i][l] * m[l][j];
    p = n;
  }
  return tr;
}

}  // namespace oracle
