#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "curv4/extremal.hpp"
#include "curv4/parallel.hpp"
#include "curv4/pinching.hpp"
#include "curv4/sharp.hpp"

namespace curv4 {

/// Worst residuals of the algebraic identities over seeded random inputs.
struct IdentityReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double sigma_tilde = 0.0;        // |σ̃² − 4|B|²| / |B|²
  double lambda_cubed = 0.0;       // |Σλ³ + 8tr(B#Bᵗ)| / |B|³
  double route_equivalence = 0.0;  // |P_direct − P_expansion| / (1 + ‖R‖⁴)
  double gradient = 0.0;           // gradient identity residual / (1 + |u|² + |v|² + |w|²)
};

inline IdentityReport identities_check(std::uint64_t samples, std::uint64_t seed, std::size_t workers = 1) {
  if (samples < 1) throw InvalidInput("identities: samples must be >= 1");
  struct Row {
    double sigma, cubic, route, grad;
  };
  std::vector<Row> rows(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    auto rng = substream(seed, stream::misc, i);
    const CurvatureBlocks b = random_blocks(rng, 10.0);
    const auto tr = trace_identities(b);
    const double n2 = b.norm_sq();
    const double route = std::abs(p_direct(b) - p_expansion(b)) / (1.0 + n2 * n2);

    const std::size_t dim = 1 + i % 8;
    std::normal_distribution<double> normal;
    std::vector<double> u(dim), v(dim), w(dim);
    double scale = 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
      u[k] = normal(rng);
      v[k] = normal(rng);
      w[k] = normal(rng);
      scale += u[k] * u[k] + v[k] * v[k] + w[k] * w[k];
    }
    rows[i] = {tr.sigma_residual, tr.cubic_residual, route, gradient_identity_residual(u, v, w) / scale};
  });
  IdentityReport r;
  r.samples = samples;
  r.seed = seed;
  for (const auto& row : rows) {
    r.sigma_tilde = std::max(r.sigma_tilde, row.sigma);
    r.lambda_cubed = std::max(r.lambda_cubed, row.cubic);
    r.route_equivalence = std::max(r.route_equivalence, row.route);
    r.gradient = std::max(r.gradient, row.grad);
  }
  return r;
}

}  // namespace curv4
