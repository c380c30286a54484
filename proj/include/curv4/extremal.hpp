#pragma once

// Brute-force checks of the extremal constants behind P <= 0 on the cone
// {BBᵗ = b² id, A ≥ 0, C ≥ 0}, and seeded samplers for the curvature cones.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curv4/curvature.hpp"
#include "curv4/errors.hpp"
#include "curv4/flow.hpp"
#include "curv4/parallel.hpp"
#include "curv4/pinching.hpp"
#include "curv4/sharp.hpp"

namespace curv4 {

using Vec3 = std::array<double, 3>;

inline double sum_squares(const Vec3& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }
inline double sum_cubes(const Vec3& a) {
  return a[0] * a[0] * a[0] + a[1] * a[1] * a[1] + a[2] * a[2] * a[2];
}

// ---------------------------------------------------------------------------
// Σaᵢ³ on the circle {Σa = 0, Σa² = 1}

struct CubicExtremum {
  double value = 0.0;     // after local refinement
  Vec3 argmax{};
  double grid_value = 0.0;  // best raw grid value
};

/// Unit point of the circle {Σa = 0, Σa² = 1} at angle θ; Σa³ = cos(3θ)/√6 there.
inline Vec3 circle_point(double theta) {
  const double r = std::sqrt(2.0 / 3.0);
  constexpr double third = 2.0 * std::numbers::pi / 3.0;
  return {r * std::cos(theta), r * std::cos(theta - third), r * std::cos(theta + third)};
}

namespace detail {

inline CubicExtremum extremize_cubic(int grid, double sign) {
  if (grid < 100) throw InvalidInput("cubic sum search needs grid >= 100");
  const double step = 2.0 * std::numbers::pi / grid;
  auto f = [sign](double theta) { return sign * sum_cubes(circle_point(theta)); };

  // half-offset grid so no node sits on an extremum by construction
  double best_theta = 0.5 * step;
  double best = f(best_theta);
  for (int k = 1; k < grid; ++k) {
    const double theta = (k + 0.5) * step;
    const double v = f(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }

  // golden-section search on the bracketing cell pair
  double lo = best_theta - step, hi = best_theta + step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  const double theta = 0.5 * (lo + hi);
  CubicExtremum out;
  out.argmax = circle_point(theta);
  out.value = sum_cubes(out.argmax);
  out.grid_value = sign * best;
  if (sign * out.value < best) {  // refinement never loses ground
    out.argmax = circle_point(best_theta);
    out.value = sign * best;
  }
  return out;
}

}  // namespace detail

inline CubicExtremum max_cubic_sum(int grid) { return detail::extremize_cubic(grid, 1.0); }

/// Minimum of Σa³ over the same circle; `argmax` holds the minimizer.
inline CubicExtremum min_cubic_sum(int grid) { return detail::extremize_cubic(grid, -1.0); }

// ---------------------------------------------------------------------------
// Σaᵢ² on the simplex {aᵢ >= −S/12, Σa = 0}

struct SquareExtremum {
  double value = 0.0;
  Vec3 argmax{};
};

/// Vertices of {aᵢ >= −S/12, Σa = 0}: two constraints active at a time.
inline std::array<Vec3, 3> simplex_vertices(double S) {
  const double lo = -S / 12.0, hi = S / 6.0;
  return {{{hi, lo, lo}, {lo, hi, lo}, {lo, lo, hi}}};
}

/// A convex function attains its maximum over a polytope at a vertex, so
/// enumerating the three vertices is exact.
inline SquareExtremum max_square_sum(double S) {
  if (!(S > 0.0)) throw DomainError("max_square_sum needs S > 0");
  SquareExtremum best{-1.0, {}};
  for (const auto& v : simplex_vertices(S)) {
    const double val = sum_squares(v);
    if (val > best.value) best = {val, v};
  }
  return best;
}

/// Euclidean projection of a onto {aᵢ >= −S/12, Σa = 0}.
inline Vec3 project_to_simplex(const Vec3& a, double S) {
  // shift to x = a + S/12 and project onto {x >= 0, Σx = S/4}
  const double base = S / 12.0, total = S / 4.0;
  Vec3 x{a[0] + base, a[1] + base, a[2] + base};
  Vec3 u = x;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    cumulative += u[k];
    const double t = (cumulative - total) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  Vec3 out;
  for (std::size_t k = 0; k < 3; ++k) out[k] = std::max(x[k] - tau, 0.0) - base;
  return out;
}

/// −S²Σa² + 12SΣa³ − 48b²Σa², the one-block form that must be <= 0.
inline double reduced_prop22_form(double S, const Vec3& a, double b) {
  return -S * S * sum_squares(a) + 12.0 * S * sum_cubes(a) - 48.0 * b * b * sum_squares(a);
}

// ---------------------------------------------------------------------------
// Random orthogonal matrices

inline Mat3 random_orthogonal(std::mt19937_64& rng, double det_sign) {
  std::normal_distribution<double> normal;
  Mat3 q;
  for (;;) {
    Mat3 g;
    for (auto& x : g.data) x = normal(rng);
    // Gram-Schmidt on columns, projections applied twice
    bool degenerate = false;
    for (std::size_t j = 0; j < 3; ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < j; ++k) {
          double proj = 0.0;
          for (std::size_t r = 0; r < 3; ++r) proj += g(r, j) * q(r, k);
          for (std::size_t r = 0; r < 3; ++r) g(r, j) -= proj * q(r, k);
        }
      double n = 0.0;
      for (std::size_t r = 0; r < 3; ++r) n += g(r, j) * g(r, j);
      n = std::sqrt(n);
      if (n < 1e-8) {
        degenerate = true;
        break;
      }
      for (std::size_t r = 0; r < 3; ++r) q(r, j) = g(r, j) / n;
    }
    if (!degenerate) break;
  }
  if ((det(q) < 0.0) != (det_sign < 0.0))
    for (std::size_t r = 0; r < 3; ++r) q(r, 2) = -q(r, 2);
  return q;
}

// ---------------------------------------------------------------------------
// Points of the cone {BBᵗ = b² id, A, C >= 0} with A, C diagonal

struct Prop22Point {
  double S = 12.0;
  Vec3 a{};  // A = diag(S/12 + a)
  Vec3 c{};  // C = diag(S/12 + c)
  double b = 0.0;
  Mat3 O = Mat3::identity();  // B = b·O, O orthogonal

  CurvatureBlocks blocks() const {
    const double base = S / 12.0;
    return {Sym3::diagonal(base + a[0], base + a[1], base + a[2]), O * b,
            Sym3::diagonal(base + c[0], base + c[1], base + c[2])};
  }

  double P() const { return p_direct(blocks()); }
};

inline Vec3 random_simplex_point(std::mt19937_64& rng, double S) {
  std::exponential_distribution<double> expo(1.0);
  Vec3 w{expo(rng), expo(rng), expo(rng)};
  const double total = w[0] + w[1] + w[2];
  const double base = S / 12.0;
  Vec3 a;
  for (std::size_t k = 0; k < 3; ++k) a[k] = (S / 4.0) * w[k] / total - base;
  // exact Σa = 0 and feasibility after rounding
  return project_to_simplex(a, S);
}

/// det(O) sign alternates with the index so both branches are equally covered.
inline Prop22Point random_prop22_point(std::mt19937_64& rng, double S, std::uint64_t index) {
  Prop22Point p;
  p.S = S;
  p.a = random_simplex_point(rng, S);
  p.c = random_simplex_point(rng, S);
  std::uniform_real_distribution<double> ub(0.0, S / 6.0);
  p.b = ub(rng);
  p.O = random_orthogonal(rng, index % 2 == 0 ? 1.0 : -1.0);
  return p;
}

/// Projected coordinate ascent on P: eight coordinates (two in-plane
/// directions each for a and c, b, three rotation angles for O). Each round
/// repeats sweeps at a fixed step until nothing improves, then halves it.
inline Prop22Point refine_prop22(Prop22Point p, int rounds, double initial_step = 0.5) {
  const double s2 = 1.0 / std::sqrt(2.0), s6 = 1.0 / std::sqrt(6.0);
  const std::array<Vec3, 2> plane = {{{s2, -s2, 0.0}, {s6, s6, -2.0 * s6}}};
  double best = p.P();
  double step = initial_step * p.S / 12.0;

  auto candidate = [&](const Prop22Point& base, int coord, double delta) {
    Prop22Point q = base;
    if (coord < 2) {
      Vec3 a = q.a;
      for (std::size_t k = 0; k < 3; ++k) a[k] += delta * plane[coord][k];
      q.a = project_to_simplex(a, q.S);
    } else if (coord < 4) {
      Vec3 c = q.c;
      for (std::size_t k = 0; k < 3; ++k) c[k] += delta * plane[coord - 2][k];
      q.c = project_to_simplex(c, q.S);
    } else if (coord == 4) {
      q.b = std::max(0.0, q.b + delta);
    } else {
      q.O = q.O * axis_rotation(static_cast<std::size_t>(coord - 5), delta / std::max(1.0, q.S / 12.0));
    }
    return q;
  };

  for (int round = 0; round < rounds; ++round) {
    for (int pass = 0; pass < 32; ++pass) {
      bool improved = false;
      for (int coord = 0; coord < 8; ++coord)
        for (double sgn : {1.0, -1.0}) {
          const Prop22Point q = candidate(p, coord, sgn * step);
          const double v = q.P();
          if (v > best) {
            best = v;
            p = q;
            improved = true;
          }
        }
      if (!improved) break;
    }
    step *= 0.5;
  }
  return p;
}

enum class EqualityFamily {
  vertex_b0,          // b = 0, a and c at the vertex (-S/12, -S/12, S/6)
  conformally_flat,   // a = c = 0
  cp2_type,           // b = 0, one of a, c zero and the other at the vertex
  none,
};

inline std::string_view to_string(EqualityFamily f) {
  switch (f) {
    case EqualityFamily::vertex_b0:
      return "vertex-b0";
    case EqualityFamily::conformally_flat:
      return "conformally-flat";
    case EqualityFamily::cp2_type:
      return "cp2-type";
    case EqualityFamily::none:
      return "none";
  }
  return "none";
}

struct FamilyDistance {
  EqualityFamily family = EqualityFamily::none;
  double distance = 0.0;  // in units of S/12, max-norm
};

/// Distance of a point to each equality family (vertex-b0, conformally-flat,
/// cp2-type, in that order), in units of S/12, max-norm.
inline std::array<FamilyDistance, 3> family_distances(const Prop22Point& p) {
  const double unit = p.S / 12.0;
  auto inf_norm = [unit](const Vec3& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}) / unit;
  };
  auto to_vertex = [&](const Vec3& v) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& vx : simplex_vertices(p.S))
      d = std::min(d, inf_norm({v[0] - vx[0], v[1] - vx[1], v[2] - vx[2]}));
    return d;
  };
  const double b = p.b / unit;
  const double a0 = inf_norm(p.a), c0 = inf_norm(p.c);
  const double av = to_vertex(p.a), cv = to_vertex(p.c);
  return {{
      {EqualityFamily::vertex_b0, std::max({b, av, cv})},
      {EqualityFamily::conformally_flat, std::max(a0, c0)},
      {EqualityFamily::cp2_type, std::max(b, std::min(std::max(a0, cv), std::max(av, c0)))},
  }};
}

inline FamilyDistance nearest_equality_family(const Prop22Point& p) {
  const auto options = family_distances(p);
  return *std::min_element(options.begin(), options.end(),
                           [](const auto& x, const auto& y) { return x.distance < y.distance; });
}

struct SweepConfig {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int refine_steps = 50;
  double S_fixed = 12.0;
  std::size_t workers = 1;
  std::size_t refine_top = 256;    // best raw samples that get local ascent
  double hit_tolerance = 1e-6;     // P >= -hit_tolerance counts as an equality hit
  double family_tolerance = 1e-3;  // distance to a family, units of S/12
  double soundness_tolerance = 1e-9;
};

inline void require_valid(const SweepConfig& cfg) {
  if (cfg.samples < 1) throw InvalidInput("sweep: samples must be >= 1");
  if (cfg.refine_steps < 0) throw InvalidInput("sweep: refine_steps must be >= 0");
  if (!(cfg.S_fixed > 0.0)) throw InvalidInput("sweep: S_fixed must be > 0");
}

struct EqualityHit {
  std::uint64_t index = 0;  // raw sample index the ascent started from
  Prop22Point point;
  double P = 0.0;
  FamilyDistance nearest;
};

struct SweepResult {
  SweepConfig config;
  double max_P = -std::numeric_limits<double>::infinity();
  Prop22Point argmax;
  std::uint64_t argmax_index = 0;
  double max_raw_P = -std::numeric_limits<double>::infinity();
  std::vector<EqualityHit> hits;
  bool sound = false;         // max_P <= soundness_tolerance
  bool hits_classified = false;  // every hit within family_tolerance of a family
};

namespace stream {
inline constexpr std::uint64_t prop22 = 0x70726f7032320000ULL;
inline constexpr std::uint64_t pic = 0x7069630000000000ULL;
inline constexpr std::uint64_t nonneg = 0x6e6f6e6e65670000ULL;
inline constexpr std::uint64_t misc = 0x6d69736300000000ULL;
}  // namespace stream

inline SweepResult prop22_sweep(const SweepConfig& cfg) {
  require_valid(cfg);
  const std::size_t n = cfg.samples;
  std::vector<double> values(n);
  parallel_for(n, cfg.workers, [&](std::size_t i) {
    auto rng = substream(cfg.seed, stream::prop22, i);
    values[i] = random_prop22_point(rng, cfg.S_fixed, i).P();
  });

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t top = std::min<std::size_t>(cfg.refine_top, n);
  auto better = [&values](std::size_t x, std::size_t y) {
    return values[x] > values[y] || (values[x] == values[y] && x < y);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(), better);

  std::vector<Prop22Point> refined(top);
  std::vector<double> refined_P(top);
  parallel_for(top, cfg.workers, [&](std::size_t k) {
    const std::size_t i = order[k];
    auto rng = substream(cfg.seed, stream::prop22, i);
    refined[k] = refine_prop22(random_prop22_point(rng, cfg.S_fixed, i), cfg.refine_steps);
    refined_P[k] = refined[k].P();
  });

  SweepResult res;
  res.config = cfg;
  res.max_raw_P = values[order[0]];
  {
    auto rng = substream(cfg.seed, stream::prop22, order[0]);
    res.argmax = random_prop22_point(rng, cfg.S_fixed, order[0]);
    res.max_P = res.max_raw_P;
    res.argmax_index = order[0];
  }
  res.hits_classified = true;
  for (std::size_t k = 0; k < top; ++k) {
    if (refined_P[k] > res.max_P) {
      res.max_P = refined_P[k];
      res.argmax = refined[k];
      res.argmax_index = order[k];
    }
    if (refined_P[k] >= -cfg.hit_tolerance) {
      EqualityHit hit{order[k], refined[k], refined_P[k], nearest_equality_family(refined[k])};
      if (hit.nearest.distance > cfg.family_tolerance) res.hits_classified = false;
      res.hits.push_back(hit);
    }
  }
  res.sound = res.max_P <= cfg.soundness_tolerance;
  return res;
}

// ---------------------------------------------------------------------------
// Cone samplers

enum class ConeKind { pic, nonneg, prop22 };

inline std::string_view to_string(ConeKind k) {
  switch (k) {
    case ConeKind::pic:
      return "pic";
    case ConeKind::nonneg:
      return "nonneg";
    case ConeKind::prop22:
      return "prop22";
  }
  return "pic";
}

inline ConeKind parse_cone(std::string_view s) {
  if (s == "pic") return ConeKind::pic;
  if (s == "nonneg") return ConeKind::nonneg;
  if (s == "prop22") return ConeKind::prop22;
  throw InvalidInput("unknown cone '" + std::string(s) + "' (expected pic, nonneg or prop22)");
}

namespace detail {

inline Sym3 random_traceless(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat3 g;
  for (auto& x : g.data) x = normal(rng);
  Sym3 s = Sym3::symmetric_part(g);
  return s - Sym3::identity() * (s.trace() / 3.0);
}

inline CurvatureBlocks sample_pic(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo(1.0);
  for (;;) {
    const Sym3 wp = random_traceless(rng);
    const Sym3 wm = random_traceless(rng);
    Mat3 B;
    for (auto& x : B.data) x = normal(rng);
    const auto ep = eigen_sym3(wp).values;
    const auto em = eigen_sym3(wm).values;
    // A₁+A₂ = w₁+w₂+2s, so s above both thresholds puts the sample in the cone
    const double need = std::max(-(ep[0] + ep[1]), -(em[0] + em[1])) / 2.0;
    const double s = need + 0.05 + expo(rng);
    CurvatureBlocks b{wp + Sym3::identity() * s, B, wm + Sym3::identity() * s};
    const auto ea = eigen_sym3(b.A).values;
    const auto ec = eigen_sym3(b.C).values;
    if (ea[0] + ea[1] > 0.0 && ec[0] + ec[1] > 0.0) return b;
  }
}

inline CurvatureBlocks sample_nonneg(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    Matrix<6> g;
    for (auto& x : g.data) x = normal(rng);
    CurvatureBlocks b = CurvatureBlocks::from_matrix(g * transpose(g) * (1.0 / 6.0));
    // adding a positive multiple of id to the smaller-trace block keeps R >= 0
    const double diff = b.A.trace() - b.C.trace();
    if (diff > 0.0) b.C += Sym3::identity() * (diff / 3.0);
    else b.A += Sym3::identity() * (-diff / 3.0);
    if (eigenvalues(b.assemble())[0] >= 0.0) return b;
  }
}

}  // namespace detail

/// Generic valid blocks with Frobenius norm uniform in (0, max_norm].
inline CurvatureBlocks random_blocks(std::mt19937_64& rng, double max_norm = 10.0) {
  std::normal_distribution<double> normal;
  Mat3 a, c, B;
  for (auto& x : a.data) x = normal(rng);
  for (auto& x : c.data) x = normal(rng);
  for (auto& x : B.data) x = normal(rng);
  CurvatureBlocks b{Sym3::symmetric_part(a), B, Sym3::symmetric_part(c)};
  b.C += Sym3::identity() * ((b.A.trace() - b.C.trace()) / 3.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double target = max_norm * (1.0 - u(rng));
  return b * (target / b.norm());
}

/// Deterministic batch of `count` operators in the named cone; sample i is
/// drawn from its own substream.
inline std::vector<CurvatureBlocks> sample_cone(ConeKind kind, std::uint64_t seed, std::size_t count,
                                                std::size_t workers = 1) {
  std::vector<CurvatureBlocks> out(count);
  parallel_for(count, workers, [&](std::size_t i) {
    switch (kind) {
      case ConeKind::pic: {
        auto rng = substream(seed, stream::pic, i);
        out[i] = detail::sample_pic(rng);
        break;
      }
      case ConeKind::nonneg: {
        auto rng = substream(seed, stream::nonneg, i);
        out[i] = detail::sample_nonneg(rng);
        break;
      }
      case ConeKind::prop22: {
        auto rng = substream(seed, stream::prop22, i);
        out[i] = random_prop22_point(rng, 12.0, i).blocks();
        break;
      }
    }
  });
  return out;
}

/// Worst-case values of the pointwise inequalities over a cone batch.
struct ConeSweepSummary {
  ConeKind kind = ConeKind::pic;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t pic_count = 0;
  std::optional<double> min_E;
  double min_prop31 = std::numeric_limits<double>::infinity();  // min r / (1+‖R‖²)
  double max_P = -std::numeric_limits<double>::infinity();
  std::optional<double> max_wpic_ratio;
};

inline ConeSweepSummary cone_sweep(ConeKind kind, std::uint64_t seed, std::size_t count,
                                   std::size_t workers = 1) {
  const auto batch = sample_cone(kind, seed, count, workers);
  struct Row {
    bool pic;
    std::optional<double> E, ratio;
    double prop31, P;
  };
  std::vector<Row> rows(count);
  parallel_for(count, workers, [&](std::size_t i) {
    const auto& b = batch[i];
    const auto rep = report(b);
    const auto r = prop31_residuals(b);
    const double scale = 1.0 + b.norm_sq();
    rows[i] = {rep.pic, rep.E, rep.wpic_ratio, std::min({r.r_A, r.r_C, r.r_B}) / scale, rep.P};
  });
  ConeSweepSummary s;
  s.kind = kind;
  s.samples = count;
  s.seed = seed;
  for (const auto& r : rows) {
    if (r.pic) ++s.pic_count;
    if (r.E) s.min_E = s.min_E ? std::min(*s.min_E, *r.E) : *r.E;
    if (r.ratio) s.max_wpic_ratio = s.max_wpic_ratio ? std::max(*s.max_wpic_ratio, *r.ratio) : *r.ratio;
    s.min_prop31 = std::min(s.min_prop31, r.prop31);
    s.max_P = std::max(s.max_P, r.P);
  }
  return s;
}

}  // namespace curv4
