#pragma once

// Model curvature operators, in the scaled normalizations
//   S⁴: (id, 0, id)    S³×ℝ: (id, F, id)    S²×S²: (E, 0, E)
//   S²×ℝ²: (E, E, E)   CP²: (id, 0, 3E)
// with F = diag(1, 1, −1), E = diag(1, 0, 0). P vanishes on all of them.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "curv4/curvature.hpp"
#include "curv4/errors.hpp"
#include "curv4/pinching.hpp"

namespace curv4 {

struct ModelEntry {
  std::string name;
  CurvatureBlocks blocks;
  double expected_P = 0.0;
  bool pic = false;
  std::string notes;
};

inline constexpr std::array<std::string_view, 5> kModelNames = {"s4", "s3xr", "s2xs2", "s2xr2", "cp2"};

namespace detail {

inline std::vector<ModelEntry> build_catalog() {
  const Sym3 id = Sym3::identity();
  const Sym3 e = Sym3::diagonal(1.0, 0.0, 0.0);
  const Mat3 F = Mat3::diagonal({1.0, 1.0, -1.0});
  const Mat3 E = Mat3::diagonal({1.0, 0.0, 0.0});
  return {
      {"s4", {id, Mat3::zero(), id}, 0.0, true, "round sphere S^4"},
      {"s3xr", {id, F, id}, 0.0, true, "cylinder S^3 x R; unit metric is half this operator"},
      {"s2xs2", {e, Mat3::zero(), e}, 0.0, false, "product S^2 x S^2"},
      {"s2xr2", {e, E, e}, 0.0, false, "cylinder S^2 x R^2"},
      {"cp2", {id, Mat3::zero(), e * 3.0}, 0.0, false, "complex projective plane, Fubini-Study"},
  };
}

}  // namespace detail

inline const std::vector<ModelEntry>& catalog_entries() {
  static const std::vector<ModelEntry> entries = detail::build_catalog();
  return entries;
}

inline const ModelEntry& model(std::string_view name) {
  for (const auto& m : catalog_entries())
    if (m.name == name) return m;
  std::string valid;
  for (auto n : kModelNames) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw NotFound("unknown model '" + std::string(name) + "'; valid names: " + valid);
}

struct CatalogListing {
  ModelEntry entry;
  PinchingReport report;
};

inline std::vector<CatalogListing> list_catalog() {
  std::vector<CatalogListing> out;
  for (const auto& m : catalog_entries()) out.push_back({m, report(m.blocks)});
  return out;
}

}  // namespace curv4
