#pragma once

// Curvature operators of a 4-dimensional inner product space, stored either
// as a Riemann component array or as the blocks (A, B, C) of the operator
// on Λ² = Λ₊ ⊕ Λ₋.
//
// Conventions:
//  * R_{1212} = +1 for the unit round sphere, and ⟨R(e_i∧e_j), e_k∧e_l⟩ = R_{ijkl}
//    with {e_i∧e_j : i<j} orthonormal.
//  * Λ₊ basis φ₁ = (e₁₂+e₃₄)/√2, φ₂ = (e₁₃+e₄₂)/√2, φ₃ = (e₁₄+e₂₃)/√2,
//    Λ₋ basis ψ₁ = (e₁₂−e₃₄)/√2, ψ₂ = (e₁₃−e₄₂)/√2, ψ₃ = (e₁₄−e₂₃)/√2.
//  * A = ⟨φ, Rφ⟩, B = ⟨φ, Rψ⟩, C = ⟨ψ, Rψ⟩.
// Indices in code are 0-based.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "curv4/errors.hpp"
#include "curv4/matrix.hpp"

namespace curv4 {

inline constexpr double kInputTolerance = 1e-9;

/// Bivector index of e_i ∧ e_j for i < j, ordered 01, 02, 03, 12, 13, 23.
inline constexpr std::size_t bivector_index(std::size_t i, std::size_t j) {
  constexpr std::size_t table[4][4] = {
      {6, 0, 1, 2}, {0, 6, 3, 4}, {1, 3, 6, 5}, {2, 4, 5, 6}};
  return table[i][j];
}

inline constexpr std::array<std::array<std::size_t, 2>, 6> kBivectorPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Rows are φ₁, φ₂, φ₃, ψ₁, ψ₂, ψ₃ expressed in the e_i∧e_j basis.
inline Mat6 self_dual_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat6 u;
  u(0, 0) = s;  u(0, 5) = s;   // φ₁ = e01 + e23
  u(1, 1) = s;  u(1, 4) = -s;  // φ₂ = e02 + e31 = e02 - e13
  u(2, 2) = s;  u(2, 3) = s;   // φ₃ = e03 + e12
  u(3, 0) = s;  u(3, 5) = -s;  // ψ₁
  u(4, 1) = s;  u(4, 4) = s;   // ψ₂
  u(5, 2) = s;  u(5, 3) = -s;  // ψ₃
  return u;
}

class RiemannTensor {
 public:
  struct Component {
    std::array<std::size_t, 4> ijkl{};  // 0-based
    double value = 0.0;
  };

  RiemannTensor() = default;

  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return c_[flat(i, j, k, l)];
  }

  /// Writes `value` into R_{ijkl} and every slot related to it by the
  /// antisymmetries and pair symmetry.
  void set_symmetric(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double value) {
    for (const auto& [slot, sign] : orbit(i, j, k, l)) c_[slot] = sign * value;
  }

  /// Raw write into a single slot; used to build deliberately invalid
  /// tensors in tests.
  void set_raw(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double value) {
    c_[flat(i, j, k, l)] = value;
  }

  /// Builds a tensor from a sparse list, completing every component by
  /// symmetry. Conflicting duplicates and nonzero values on slots that the
  /// antisymmetries force to zero are rejected.
  static RiemannTensor from_components(std::span<const Component> components) {
    RiemannTensor t;
    std::array<bool, 256> assigned{};
    for (const auto& comp : components) {
      const auto [i, j, k, l] = comp.ijkl;
      if (i > 3 || j > 3 || k > 3 || l > 3)
        throw InvalidInput("riemann component index out of range 1..4");
      if (!std::isfinite(comp.value)) throw InvalidInput("riemann component is not finite");
      const double tol = 1e-12 * (1.0 + std::abs(comp.value));
      if ((i == j || k == l) && std::abs(comp.value) > tol) {
        std::ostringstream os;
        os << "component R_" << i + 1 << j + 1 << k + 1 << l + 1
           << " must vanish by antisymmetry";
        throw InvalidInput(os.str());
      }
      for (const auto& [slot, sign] : orbit(i, j, k, l)) {
        const double v = sign * comp.value;
        if (assigned[slot] && std::abs(t.c_[slot] - v) > tol) {
          std::ostringstream os;
          os << "conflicting duplicate for component R_" << i + 1 << j + 1 << k + 1 << l + 1;
          throw InvalidInput(os.str());
        }
        assigned[slot] = true;
        t.c_[slot] = v;
      }
    }
    return t;
  }

  /// Nonzero components with i<j, k<l and (ij) <= (kl).
  std::vector<Component> independent_components() const {
    std::vector<Component> out;
    for (std::size_t p = 0; p < 6; ++p)
      for (std::size_t q = p; q < 6; ++q) {
        const auto [i, j] = kBivectorPairs[p];
        const auto [k, l] = kBivectorPairs[q];
        const double v = (*this)(i, j, k, l);
        if (v != 0.0) out.push_back({{i, j, k, l}, v});
      }
    return out;
  }

  /// Largest violation of antisymmetry, pair symmetry and first Bianchi.
  double symmetry_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k)
          for (std::size_t l = 0; l < 4; ++l) {
            const double r = (*this)(i, j, k, l);
            d = std::max(d, std::abs(r + (*this)(j, i, k, l)));
            d = std::max(d, std::abs(r + (*this)(i, j, l, k)));
            d = std::max(d, std::abs(r - (*this)(k, l, i, j)));
            d = std::max(d, std::abs(r + (*this)(i, k, l, j) + (*this)(i, l, j, k)));
          }
    return d;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : c_) m = std::max(m, std::abs(x));
    return m;
  }

  bool finite() const {
    return std::all_of(c_.begin(), c_.end(), [](double x) { return std::isfinite(x); });
  }

  /// Σ R_{ijkl}² over all 256 index combinations.
  double norm_sq() const {
    double s = 0.0;
    for (double x : c_) s += x * x;
    return s;
  }

  /// R_{jl} = Σ_i R_{ijil}.
  Mat4 ricci() const {
    Mat4 r;
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t l = 0; l < 4; ++l)
        for (std::size_t i = 0; i < 4; ++i) r(j, l) += (*this)(i, j, i, l);
    return r;
  }

  /// Matrix of R on Λ² in the orthonormal basis e_i∧e_j, i<j.
  Mat6 bivector_matrix() const {
    Mat6 m;
    for (std::size_t p = 0; p < 6; ++p)
      for (std::size_t q = 0; q < 6; ++q)
        m(p, q) = (*this)(kBivectorPairs[p][0], kBivectorPairs[p][1], kBivectorPairs[q][0],
                          kBivectorPairs[q][1]);
    return m;
  }

  static RiemannTensor from_bivector_matrix(const Mat6& m) {
    RiemannTensor t;
    for (std::size_t p = 0; p < 6; ++p)
      for (std::size_t q = 0; q < 6; ++q) {
        const auto [i, j] = kBivectorPairs[p];
        const auto [k, l] = kBivectorPairs[q];
        const double v = 0.5 * (m(p, q) + m(q, p));
        t.c_[flat(i, j, k, l)] = v;
        t.c_[flat(j, i, k, l)] = -v;
        t.c_[flat(i, j, l, k)] = -v;
        t.c_[flat(j, i, l, k)] = v;
      }
    return t;
  }

 private:
  static constexpr std::size_t flat(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return ((i * 4 + j) * 4 + k) * 4 + l;
  }

  static std::array<std::pair<std::size_t, double>, 8> orbit(std::size_t i, std::size_t j,
                                                             std::size_t k, std::size_t l) {
    return {{{flat(i, j, k, l), 1.0},
             {flat(j, i, k, l), -1.0},
             {flat(i, j, l, k), -1.0},
             {flat(j, i, l, k), 1.0},
             {flat(k, l, i, j), 1.0},
             {flat(l, k, i, j), -1.0},
             {flat(k, l, j, i), -1.0},
             {flat(l, k, j, i), 1.0}}};
  }

  std::array<double, 256> c_{};
};

/// R_{ijkl} = δ_ik δ_jl − δ_il δ_jk scaled by `k`.
inline RiemannTensor constant_curvature_tensor(double k = 1.0) {
  RiemannTensor t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) t.set_symmetric(i, j, i, j, k);
  return t;
}

/// The operator R on Λ₊ ⊕ Λ₋ as [[A, B], [Bᵗ, C]].
struct CurvatureBlocks {
  Sym3 A;
  Mat3 B;
  Sym3 C;

  /// 6 x 6 matrix in the (φ₁, φ₂, φ₃, ψ₁, ψ₂, ψ₃) basis.
  Mat6 assemble() const {
    Mat6 m;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        m(i, j) = A(i, j);
        m(i, j + 3) = B(i, j);
        m(i + 3, j) = B(j, i);
        m(i + 3, j + 3) = C(i, j);
      }
    return m;
  }

  /// Reads blocks back from a 6 x 6 matrix; diagonal blocks are symmetrized
  /// and B is taken from the upper-right block.
  static CurvatureBlocks from_matrix(const Mat6& m) {
    CurvatureBlocks b;
    Mat3 a, c;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        a(i, j) = m(i, j);
        b.B(i, j) = m(i, j + 3);
        c(i, j) = m(i + 3, j + 3);
      }
    b.A = Sym3::symmetric_part(a);
    b.C = Sym3::symmetric_part(c);
    return b;
  }

  double scalar_curvature() const { return 4.0 * A.trace(); }

  /// ⟨R, R⟩ = tr A² + tr C² + 2|B|².
  double norm_sq() const { return curv4::norm_sq(assemble()); }
  double norm() const { return std::sqrt(norm_sq()); }

  bool finite() const {
    return all_finite(A.full()) && all_finite(B) && all_finite(C.full());
  }

  CurvatureBlocks& operator+=(const CurvatureBlocks& o) {
    A += o.A;
    B += o.B;
    C += o.C;
    return *this;
  }
  CurvatureBlocks& operator*=(double s) {
    A *= s;
    B *= s;
    C *= s;
    return *this;
  }
  friend CurvatureBlocks operator+(CurvatureBlocks a, const CurvatureBlocks& b) { return a += b; }
  friend CurvatureBlocks operator-(CurvatureBlocks a, const CurvatureBlocks& b) {
    return a += (b * -1.0);
  }
  friend CurvatureBlocks operator*(CurvatureBlocks a, double s) { return a *= s; }
  friend CurvatureBlocks operator*(double s, CurvatureBlocks a) { return a *= s; }
  friend bool operator==(const CurvatureBlocks&, const CurvatureBlocks&) = default;
};

inline double trace_mismatch(const CurvatureBlocks& b) { return std::abs(b.A.trace() - b.C.trace()); }

/// Throws InvalidInput unless entries are finite and tr A = tr C within
/// `tol`·(1 + |tr A|).
inline void require_valid(const CurvatureBlocks& b, double tol = kInputTolerance) {
  if (!b.finite()) throw InvalidInput("curvature blocks contain non-finite entries");
  const double mismatch = trace_mismatch(b);
  if (mismatch > tol * (1.0 + std::abs(b.A.trace()))) {
    std::ostringstream os;
    os << "trace identity violated: tr(A) - tr(C) = " << b.A.trace() - b.C.trace();
    throw InvalidInput(os.str());
  }
}

inline CurvatureBlocks blocks_from_riemann(const RiemannTensor& r) {
  if (!r.finite()) throw InvalidInput("riemann tensor contains non-finite entries");
  const double defect = r.symmetry_defect();
  if (defect > kInputTolerance * std::max(1.0, r.max_abs())) {
    std::ostringstream os;
    os << "riemann tensor violates its algebraic symmetries (defect " << defect << ")";
    throw InvalidInput(os.str());
  }
  const Mat6 u = self_dual_basis();
  return CurvatureBlocks::from_matrix(u * r.bivector_matrix() * transpose(u));
}

inline RiemannTensor riemann_from_blocks(const CurvatureBlocks& b) {
  require_valid(b);
  const Mat6 u = self_dual_basis();
  return RiemannTensor::from_bivector_matrix(transpose(u) * b.assemble() * u);
}

/// Traceless Ricci tensor rebuilt from B alone:
///   [ B11+B22+B33  B32-B23      B13-B31      B21-B12     ]
///   [ B32-B23      B11-B22-B33  B21+B12      B13+B31     ]
///   [ B13-B31      B21+B12      B22-B11-B33  B23+B32     ]
///   [ B21-B12      B13+B31      B23+B32      B33-B11-B22 ]
inline Mat4 traceless_ricci(const Mat3& B) {
  auto b = [&B](int i, int j) { return B(i - 1, j - 1); };
  Mat4 r;
  r(0, 0) = b(1, 1) + b(2, 2) + b(3, 3);
  r(1, 1) = b(1, 1) - b(2, 2) - b(3, 3);
  r(2, 2) = b(2, 2) - b(1, 1) - b(3, 3);
  r(3, 3) = b(3, 3) - b(1, 1) - b(2, 2);
  r(0, 1) = r(1, 0) = b(3, 2) - b(2, 3);
  r(0, 2) = r(2, 0) = b(1, 3) - b(3, 1);
  r(0, 3) = r(3, 0) = b(2, 1) - b(1, 2);
  r(1, 2) = r(2, 1) = b(2, 1) + b(1, 2);
  r(1, 3) = r(3, 1) = b(1, 3) + b(3, 1);
  r(2, 3) = r(3, 2) = b(2, 3) + b(3, 2);
  return r;
}

struct SpectralData {
  std::array<double, 3> A_eigs{};  // ascending
  std::array<double, 3> C_eigs{};  // ascending
  std::array<double, 3> B_sv{};    // ascending, >= 0
  double S = 0.0;                  // scalar curvature
  double sigma2 = 0.0;             // |Ric|²
  double tsigma2 = 0.0;            // |Ric₀|²
  std::array<double, 4> lambda{};  // eigenvalues of Ric₀, ascending
};

inline SpectralData ricci_data(const CurvatureBlocks& b) {
  require_valid(b);
  SpectralData d;
  d.A_eigs = eigen_sym3(b.A).values;
  d.C_eigs = eigen_sym3(b.C).values;
  d.B_sv = singular_values3(b.B);
  d.S = b.scalar_curvature();
  const Mat4 ric0 = traceless_ricci(b.B);
  d.lambda = eigenvalues(ric0);
  d.tsigma2 = norm_sq(ric0);
  d.sigma2 = d.S * d.S / 4.0 + d.tsigma2;
  return d;
}

struct WeylParts {
  Sym3 plus;
  Sym3 minus;
};

inline WeylParts weyl_parts(const CurvatureBlocks& b) {
  require_valid(b);
  return {b.A - Sym3::identity() * (b.A.trace() / 3.0),
          b.C - Sym3::identity() * (b.C.trace() / 3.0)};
}

/// Frame change (O₊, O₋) ∈ SO(3)×SO(3): A → O₊ᵀAO₊, B → O₊ᵀBO₋, C → O₋ᵀCO₋.
inline CurvatureBlocks rotate(const CurvatureBlocks& b, const Mat3& frame_plus,
                              const Mat3& frame_minus) {
  return {Sym3::symmetric_part(transpose(frame_plus) * b.A.full() * frame_plus),
          transpose(frame_plus) * b.B * frame_minus,
          Sym3::symmetric_part(transpose(frame_minus) * b.C.full() * frame_minus)};
}

struct Diagonalization {
  CurvatureBlocks blocks;  // A, C diagonal ascending
  Mat3 frame_plus;
  Mat3 frame_minus;
};

inline Diagonalization diagonalize(const CurvatureBlocks& b) {
  require_valid(b);
  const Eigen3 ea = eigen_sym3(b.A);
  const Eigen3 ec = eigen_sym3(b.C);
  Diagonalization d;
  d.frame_plus = ea.frame;
  d.frame_minus = ec.frame;
  d.blocks.A = Sym3::diagonal(ea.values);
  d.blocks.C = Sym3::diagonal(ec.values);
  d.blocks.B = transpose(ea.frame) * b.B * ec.frame;
  return d;
}

/// Blocks of the same operator seen from the opposite orientation, realized
/// by the reflection e₄ → −e₄: A' = DCD, B' = DBᵗD, C' = DAD, D = diag(1,1,−1).
inline CurvatureBlocks flip_orientation(const CurvatureBlocks& b) {
  const Mat3 d = Mat3::diagonal({1.0, 1.0, -1.0});
  return {Sym3::symmetric_part(d * b.C.full() * d), d * transpose(b.B) * d,
          Sym3::symmetric_part(d * b.A.full() * d)};
}

}  // namespace curv4
