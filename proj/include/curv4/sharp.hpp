#pragma once

// The quadratic sharp operation R# on Λ², the trilinear invariant
// tri(R) = 2⟨R² + R#, R⟩, and the quartic quantity
//   P = 2 tri(R) S − σ² |R_ijkl|² = 4⟨S(R² + R#) − (S²/4 + σ̃²) R, R⟩
// evaluated two ways: from the assembled 6 x 6 operator, and from the
// expansion in the diagonalizing frame of A and C.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "curv4/curvature.hpp"
#include "curv4/errors.hpp"
#include "curv4/matrix.hpp"

namespace curv4 {

/// R# = 2 [[A#, B#], [(Bᵗ)#, C#]] with A# = adj(A)ᵀ, B# = −adj(Bᵗ).
/// The result need not satisfy the trace identity.
inline CurvatureBlocks sharp_operator(const CurvatureBlocks& b) {
  CurvatureBlocks s;
  s.A = Sym3::symmetric_part(adjugate3(b.A.full())) * 2.0;
  s.B = adjugate3(transpose(b.B)) * -2.0;
  s.C = Sym3::symmetric_part(adjugate3(b.C.full())) * 2.0;
  return s;
}

/// R² + R#, the reaction term of the curvature ODE.
inline Mat6 square_plus_sharp(const CurvatureBlocks& b) {
  const Mat6 r = b.assemble();
  return r * r + sharp_operator(b).assemble();
}

inline double tri(const CurvatureBlocks& b) {
  require_valid(b);
  return 2.0 * dot(square_plus_sharp(b), b.assemble());
}

/// |Ric₀|² computed from the traceless Ricci matrix built out of B.
inline double traceless_ricci_norm_sq(const CurvatureBlocks& b) {
  return norm_sq(traceless_ricci(b.B));
}

inline double p_direct(const CurvatureBlocks& b) {
  require_valid(b);
  const Mat6 r = b.assemble();
  const double S = b.scalar_curvature();
  const double tsigma2 = traceless_ricci_norm_sq(b);
  const Mat6 q = square_plus_sharp(b);
  return 4.0 * (S * dot(q, r) - (S * S / 4.0 + tsigma2) * dot(r, r));
}

/// Data of the diagonal-frame expansion of P.
struct ExpansionInput {
  double S = 0.0;
  std::array<double, 3> a{};          // diagonal of A minus S/12
  std::array<double, 3> c{};          // diagonal of C minus S/12
  std::array<double, 4> lambda{};     // eigenvalues of Ric₀
  std::array<double, 3> b_sq{};       // row norms² of B
  std::array<double, 3> btilde_sq{};  // column norms² of B
  std::optional<double> top_singular_sq;  // B₃², when known
};

/// Reads the expansion data off blocks whose A and C are already diagonal
/// (the output of diagonalize()). Off-diagonal entries of A, C are ignored.
inline ExpansionInput expansion_input(const CurvatureBlocks& diagonal_blocks) {
  const auto& d = diagonal_blocks;
  ExpansionInput e;
  e.S = d.scalar_curvature();
  const double base = e.S / 12.0;
  for (std::size_t i = 0; i < 3; ++i) {
    e.a[i] = d.A(i, i) - base;
    e.c[i] = d.C(i, i) - base;
    for (std::size_t j = 0; j < 3; ++j) {
      e.b_sq[i] += d.B(i, j) * d.B(i, j);
      e.btilde_sq[i] += d.B(j, i) * d.B(j, i);
    }
  }
  e.lambda = eigenvalues(traceless_ricci(d.B));
  const double b3 = singular_values3(d.B)[2];
  e.top_singular_sq = b3 * b3;
  return e;
}

inline void require_valid(const ExpansionInput& e, double tol = 1e-8) {
  auto sum = [](const auto& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  auto sum_sq = [](const auto& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
  };
  const double scale = 1.0 + std::abs(e.S) + std::sqrt(sum_sq(e.a) + sum_sq(e.c) + sum_sq(e.lambda));
  auto fail = [](const char* what, double residual) {
    std::ostringstream os;
    os << "expansion input violates " << what << " (residual " << residual << ")";
    throw InvalidInput(os.str());
  };
  if (std::abs(sum(e.a)) > tol * scale) fail("sum(a) = 0", sum(e.a));
  if (std::abs(sum(e.c)) > tol * scale) fail("sum(c) = 0", sum(e.c));
  if (std::abs(sum(e.lambda)) > tol * scale) fail("sum(lambda) = 0", sum(e.lambda));
  const double quarter = 0.25 * sum_sq(e.lambda);
  const double sq_scale = scale * scale;
  for (double x : e.b_sq)
    if (x < 0.0) fail("b_sq >= 0", x);
  for (double x : e.btilde_sq)
    if (x < 0.0) fail("btilde_sq >= 0", x);
  if (std::abs(sum(e.b_sq) - quarter) > tol * sq_scale)
    fail("sum(b_sq) = sum(lambda^2)/4", sum(e.b_sq) - quarter);
  if (std::abs(sum(e.btilde_sq) - quarter) > tol * sq_scale)
    fail("sum(btilde_sq) = sum(lambda^2)/4", sum(e.btilde_sq) - quarter);
  if (e.top_singular_sq) {
    const double mx = std::max(*std::max_element(e.b_sq.begin(), e.b_sq.end()),
                               *std::max_element(e.btilde_sq.begin(), e.btilde_sq.end()));
    if (mx > *e.top_singular_sq + tol * sq_scale) fail("max(b_sq, btilde_sq) <= B3^2", mx);
  }
}

/// P from the diagonal-frame expansion
///   −S²(Σλ²/6 + Σa² + Σc²) + 4S(Σ(a³+c³) + 6a₁a₂a₃ + 6c₁c₂c₃ − ½Σλ³)
///   + 12S Σ(aᵢbᵢ² + cᵢb̃ᵢ²) − 2(Σλ²)² − 4Σλ² Σ(a²+c²).
/// This sum equals P itself; aᵢ is paired with bᵢ² by basis index.
inline double p_expansion(const ExpansionInput& e) {
  require_valid(e);
  const auto& a = e.a;
  const auto& c = e.c;
  double sa2 = 0, sc2 = 0, sa3 = 0, sc3 = 0, l2 = 0, l3 = 0, mixed = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sa2 += a[i] * a[i];
    sc2 += c[i] * c[i];
    sa3 += a[i] * a[i] * a[i];
    sc3 += c[i] * c[i] * c[i];
    mixed += a[i] * e.b_sq[i] + c[i] * e.btilde_sq[i];
  }
  for (double l : e.lambda) {
    l2 += l * l;
    l3 += l * l * l;
  }
  const double S = e.S;
  return -S * S * (l2 / 6.0 + sa2 + sc2) +
         4.0 * S * (sa3 + sc3 + 6.0 * a[0] * a[1] * a[2] + 6.0 * c[0] * c[1] * c[2] - 0.5 * l3) +
         12.0 * S * mixed - 2.0 * l2 * l2 - 4.0 * l2 * (sa2 + sc2);
}

/// Convenience: diagonalize, then expand.
inline double p_expansion(const CurvatureBlocks& b) {
  return p_expansion(expansion_input(diagonalize(b).blocks));
}

struct TraceIdentityReport {
  double tsigma2 = 0.0;         // Σλ²
  double four_B_sq = 0.0;       // 4|B|²
  double lambda_cubed = 0.0;    // Σλ³
  double minus8_trace = 0.0;    // −8 tr(B# Bᵗ), B# = −adj(Bᵗ)
  double sigma_residual = 0.0;  // |Σλ² − 4|B|²| / |B|²
  double cubic_residual = 0.0;  // |Σλ³ + 8tr(B#Bᵗ)| / |B|³
};

/// Checks σ̃² = 4|B|² and Σλ³ = −8 tr(B#Bᵗ) using eigenvalues of the
/// traceless Ricci matrix. Residuals are relative to the matching power of |B|.
inline TraceIdentityReport trace_identities(const CurvatureBlocks& b) {
  require_valid(b);
  TraceIdentityReport r;
  const auto lambda = eigenvalues(traceless_ricci(b.B));
  for (double l : lambda) {
    r.tsigma2 += l * l;
    r.lambda_cubed += l * l * l;
  }
  const double bsq = norm_sq(b.B);
  r.four_B_sq = 4.0 * bsq;
  const Mat3 b_sharp = adjugate3(transpose(b.B)) * -1.0;
  r.minus8_trace = -8.0 * trace(b_sharp * transpose(b.B));
  if (bsq > 0.0) {
    r.sigma_residual = std::abs(r.tsigma2 - r.four_B_sq) / bsq;
    r.cubic_residual = std::abs(r.lambda_cubed - r.minus8_trace) / (bsq * std::sqrt(bsq));
  }
  return r;
}

}  // namespace curv4
