#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>

#include "curv4/curvature.hpp"
#include "curv4/errors.hpp"
#include "curv4/sharp.hpp"

namespace curv4 {

/// Pointwise pinching data. Absent optionals mean the quantity is not
/// defined at this operator; they are never encoded as NaN or 0.
struct PinchingReport {
  bool pic = false;                 // A₁+A₂ > 0 and C₁+C₂ > 0
  std::optional<double> upic_delta; // min(A₁/A₃, C₁/C₃) when A₃, C₃ > 0
  double upic_margin = 0.0;         // A₁C₁ − B₃²
  std::optional<double> wpic_ratio; // B₃² / ((A₁+A₂)(C₁+C₂))
  std::optional<double> E;          // drop term, defined on the pic cone
  double P = 0.0;
};

namespace detail {

struct SortedSpectra {
  std::array<double, 3> a, c, b;
};

inline SortedSpectra sorted_spectra(const CurvatureBlocks& blocks) {
  return {eigen_sym3(blocks.A).values, eigen_sym3(blocks.C).values, singular_values3(blocks.B)};
}

inline double e_from_spectra(const SortedSpectra& s) {
  const auto& [A, C, B] = s;
  const double first = B[2] > 0.0 ? 2.0 * B[0] * (B[2] - B[1]) / B[2] : 0.0;
  auto quotient = [&B](const std::array<double, 3>& X) {
    const double num = (X[0] - B[0]) * (X[0] - B[0]) + (X[1] - B[1]) * (X[1] - B[1]) +
                       2.0 * X[1] * (B[1] - B[0]);
    return num / (X[0] + X[1]);
  };
  return first + quotient(A) + quotient(C);
}

}  // namespace detail

/// E = 2B₁(B₃−B₂)/B₃ + [(A₁−B₁)² + (A₂−B₂)² + 2A₂(B₂−B₁)]/(A₁+A₂) + (same with C).
/// The first term is taken as 0 when B₃ = 0. Throws DomainError outside the
/// pic cone.
inline double e_functional(const CurvatureBlocks& b) {
  require_valid(b);
  const auto s = detail::sorted_spectra(b);
  if (!(s.a[0] + s.a[1] > 0.0) || !(s.c[0] + s.c[1] > 0.0)) {
    std::ostringstream os;
    os << "E is defined only on the pic cone (A1+A2 = " << s.a[0] + s.a[1]
       << ", C1+C2 = " << s.c[0] + s.c[1] << ")";
    throw DomainError(os.str());
  }
  return detail::e_from_spectra(s);
}

inline PinchingReport report(const CurvatureBlocks& b) {
  require_valid(b);
  const auto s = detail::sorted_spectra(b);
  const auto& [A, C, B] = s;
  PinchingReport r;
  const double psi1 = A[0] + A[1];
  const double psi2 = C[0] + C[1];
  r.pic = psi1 > 0.0 && psi2 > 0.0;
  if (A[2] > 0.0 && C[2] > 0.0) r.upic_delta = std::min(A[0] / A[2], C[0] / C[2]);
  r.upic_margin = A[0] * C[0] - B[2] * B[2];
  if (psi1 * psi2 > 0.0) r.wpic_ratio = B[2] * B[2] / (psi1 * psi2);
  if (r.pic) r.E = detail::e_from_spectra(s);
  r.P = p_direct(b);
  return r;
}

/// |first − last| for the rewriting of the gradient terms
///   4|u|² − 2|v|² − 2|w|² − 4|2u−v−w|²
///   = −2|(u−v)+(u−w)|² − 2|u−v|² − 2|u−w|² + 2⟨2u−v−w, v+w⟩.
inline double gradient_identity_residual(std::span<const double> u, std::span<const double> v,
                                         std::span<const double> w) {
  if (u.size() != v.size() || u.size() != w.size())
    throw InvalidInput("gradient identity needs vectors of equal length");
  if (u.empty()) throw InvalidInput("gradient identity needs vectors of length >= 1");
  double first = 0.0, last = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double x = u[k], y = v[k], z = w[k];
    const double d = 2.0 * x - y - z;
    first += 4.0 * x * x - 2.0 * y * y - 2.0 * z * z - 4.0 * d * d;
    last += -2.0 * d * d - 2.0 * (x - y) * (x - y) - 2.0 * (x - z) * (x - z) + 2.0 * d * (y + z);
  }
  return std::abs(first - last);
}

}  // namespace curv4
