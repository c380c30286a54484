#pragma once

// JSON schemas:
//   curv4.blocks.v1   {"format", "A": 3x3, "B": 3x3, "C": 3x3}, row-major
//   curv4.riemann.v1  {"format", "components": [{"ijkl": [1,2,1,2], "value": 1.0}, ...]}
//   curv4.report.v1   pinching report; undefined fields are null
//   curv4.sweep.v1    sweep config echo, maximum, argmax blocks, equality hits

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "curv4/catalog.hpp"
#include "curv4/curvature.hpp"
#include "curv4/errors.hpp"
#include "curv4/extremal.hpp"
#include "curv4/flow.hpp"
#include "curv4/pinching.hpp"
#include "curv4/sharp.hpp"

namespace curv4::io {

using nlohmann::json;

inline constexpr const char* kBlocksFormat = "curv4.blocks.v1";
inline constexpr const char* kRiemannFormat = "curv4.riemann.v1";
inline constexpr const char* kReportFormat = "curv4.report.v1";
inline constexpr const char* kSweepFormat = "curv4.sweep.v1";

template <std::size_t N>
json matrix_json(const Matrix<N>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < N; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < N; ++j) row.push_back(m(i, j) + 0.0);  // no -0 in output
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Array>
json array_json(const Array& a) {
  json out = json::array();
  for (double x : a) out.push_back(x);
  return out;
}

inline json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

inline json to_json(const CurvatureBlocks& b) {
  return {{"format", kBlocksFormat},
          {"A", matrix_json(b.A.full())},
          {"B", matrix_json(b.B)},
          {"C", matrix_json(b.C.full())}};
}

namespace detail {

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidInput(where + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InvalidInput(where + " must be finite");
  return x;
}

inline Mat3 mat3(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 3) throw InvalidInput(name + " must be a 3x3 array");
  Mat3 m;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_array() || j[i].size() != 3) throw InvalidInput(name + " must be a 3x3 array");
    for (std::size_t k = 0; k < 3; ++k)
      m(i, k) = number(j[i][k], name + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  return m;
}

inline Sym3 sym3(const json& j, const std::string& name) {
  const Mat3 m = mat3(j, name);
  const double tol = kInputTolerance * std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = i + 1; k < 3; ++k)
      if (std::abs(m(i, k) - m(k, i)) > tol) throw InvalidInput(name + " must be symmetric");
  return Sym3::symmetric_part(m);
}

inline void expect_format(const json& j, const char* format) {
  if (!j.is_object()) throw InvalidInput("expected a JSON object");
  if (!j.contains("format") || !j["format"].is_string() || j["format"].get<std::string>() != format)
    throw InvalidInput(std::string("expected \"format\": \"") + format + "\"");
}

}  // namespace detail

inline CurvatureBlocks blocks_from_json(const json& j) {
  detail::expect_format(j, kBlocksFormat);
  for (const char* key : {"A", "B", "C"})
    if (!j.contains(key)) throw InvalidInput(std::string("missing field ") + key);
  CurvatureBlocks b{detail::sym3(j["A"], "A"), detail::mat3(j["B"], "B"), detail::sym3(j["C"], "C")};
  require_valid(b);
  return b;
}

inline json to_json(const RiemannTensor& r) {
  json comps = json::array();
  for (const auto& c : r.independent_components())
    comps.push_back({{"ijkl", {c.ijkl[0] + 1, c.ijkl[1] + 1, c.ijkl[2] + 1, c.ijkl[3] + 1}},
                     {"value", c.value}});
  return {{"format", kRiemannFormat}, {"components", std::move(comps)}};
}

inline RiemannTensor riemann_from_json(const json& j) {
  detail::expect_format(j, kRiemannFormat);
  if (!j.contains("components") || !j["components"].is_array())
    throw InvalidInput("components must be an array");
  std::vector<RiemannTensor::Component> comps;
  for (const auto& c : j["components"]) {
    if (!c.is_object() || !c.contains("ijkl") || !c.contains("value"))
      throw InvalidInput("each component needs \"ijkl\" and \"value\"");
    const auto& idx = c["ijkl"];
    if (!idx.is_array() || idx.size() != 4) throw InvalidInput("ijkl must hold four indices");
    RiemannTensor::Component comp;
    for (std::size_t k = 0; k < 4; ++k) {
      if (!idx[k].is_number_integer()) throw InvalidInput("ijkl entries must be integers");
      const long v = idx[k].get<long>();
      if (v < 1 || v > 4) throw InvalidInput("ijkl entries must lie in 1..4");
      comp.ijkl[k] = static_cast<std::size_t>(v - 1);
    }
    comp.value = detail::number(c["value"], "value");
    comps.push_back(comp);
  }
  return RiemannTensor::from_components(comps);
}

/// Accepts either a blocks or a riemann document.
inline CurvatureBlocks operator_from_json(const json& j) {
  if (!j.is_object() || !j.contains("format") || !j["format"].is_string())
    throw InvalidInput("input must be a JSON object with a \"format\" field");
  const auto fmt = j["format"].get<std::string>();
  if (fmt == kBlocksFormat) return blocks_from_json(j);
  if (fmt == kRiemannFormat) return blocks_from_riemann(riemann_from_json(j));
  throw InvalidInput("unsupported format \"" + fmt + "\"");
}

inline json to_json(const PinchingReport& r) {
  return {{"format", kReportFormat},
          {"pic", r.pic},
          {"upic_delta", optional_json(r.upic_delta)},
          {"upic_margin", r.upic_margin},
          {"wpic_ratio", optional_json(r.wpic_ratio)},
          {"E", optional_json(r.E)},
          {"P", r.P}};
}

inline PinchingReport report_from_json(const json& j) {
  detail::expect_format(j, kReportFormat);
  auto opt = [&j](const char* k) -> std::optional<double> {
    if (!j.contains(k) || j[k].is_null()) return std::nullopt;
    return detail::number(j[k], k);
  };
  PinchingReport r;
  if (!j.contains("pic") || !j["pic"].is_boolean()) throw InvalidInput("pic must be a boolean");
  r.pic = j["pic"].get<bool>();
  r.upic_delta = opt("upic_delta");
  r.upic_margin = detail::number(j.value("upic_margin", json()), "upic_margin");
  r.wpic_ratio = opt("wpic_ratio");
  r.E = opt("E");
  r.P = detail::number(j.value("P", json()), "P");
  return r;
}

inline json to_json(const SpectralData& d) {
  return {{"A_eigs", array_json(d.A_eigs)}, {"C_eigs", array_json(d.C_eigs)},
          {"B_sv", array_json(d.B_sv)},     {"S", d.S},
          {"sigma2", d.sigma2},             {"tsigma2", d.tsigma2},
          {"lambda", array_json(d.lambda)}};
}

inline json to_json(const Prop22Point& p) {
  return {{"S", p.S}, {"a", array_json(p.a)}, {"c", array_json(p.c)}, {"b", p.b},
          {"O", matrix_json(p.O)}, {"det_O", det(p.O)}};
}

inline json to_json(const SweepResult& r) {
  const auto& c = r.config;
  json hits = json::array();
  for (const auto& h : r.hits)
    hits.push_back({{"index", h.index},
                    {"P", h.P},
                    {"family", std::string(to_string(h.nearest.family))},
                    {"distance", h.nearest.distance},
                    {"point", to_json(h.point)}});
  return {{"format", kSweepFormat},
          {"kind", "prop22"},
          {"config",
           {{"samples", c.samples},
            {"seed", c.seed},
            {"refine_steps", c.refine_steps},
            {"S_fixed", c.S_fixed},
            {"refine_top", c.refine_top},
            {"hit_tolerance", c.hit_tolerance},
            {"family_tolerance", c.family_tolerance},
            {"soundness_tolerance", c.soundness_tolerance}}},
          {"max_P", r.max_P},
          {"max_raw_P", r.max_raw_P},
          {"argmax_index", r.argmax_index},
          {"argmax", to_json(r.argmax)},
          {"argmax_blocks", to_json(r.argmax.blocks())},
          {"sound", r.sound},
          {"hits_classified", r.hits_classified},
          {"equality_hits", std::move(hits)}};
}

inline json to_json(const ConeSweepSummary& s) {
  return {{"format", kSweepFormat},
          {"kind", std::string(to_string(s.kind))},
          {"config", {{"samples", s.samples}, {"seed", s.seed}}},
          {"pic_count", s.pic_count},
          {"min_E", optional_json(s.min_E)},
          {"min_prop31_scaled", s.min_prop31},
          {"max_P", s.max_P},
          {"max_wpic_ratio", optional_json(s.max_wpic_ratio)}};
}

inline json to_json(const ModelEntry& m) {
  return {{"name", m.name},
          {"blocks", to_json(m.blocks)},
          {"expected_P", m.expected_P},
          {"pic", m.pic},
          {"notes", m.notes}};
}

}  // namespace curv4::io
