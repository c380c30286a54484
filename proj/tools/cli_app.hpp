#pragma once

// curv4 command-line front end. `run` is kept separate from main() so the
// test suite can drive it in-process.
//
// Exit codes: 0 success, 2 input validation failure, 3 domain error.

#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curv4/curv4.hpp"
#include "curv4/json_io.hpp"

namespace curv4::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitDomain = 3;

struct Source {
  std::string in_path;
  std::string model_name;
};

namespace detail {

inline void add_source(CLI::App* cmd, Source& src) {
  auto* in = cmd->add_option("--in", src.in_path, "JSON file (curv4.blocks.v1 or curv4.riemann.v1)");
  auto* mdl = cmd->add_option("--model", src.model_name, "catalog model name");
  in->excludes(mdl);
  mdl->excludes(in);
}

inline CurvatureBlocks load(const Source& src) {
  if (src.in_path.empty() == src.model_name.empty())
    throw InvalidInput("exactly one of --in or --model is required");
  if (!src.model_name.empty()) return model(src.model_name).blocks;
  std::ifstream f(src.in_path);
  if (!f) throw InvalidInput("cannot open " + src.in_path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  return io::operator_from_json(j);
}

inline json sym_json(const Sym3& s) { return io::matrix_json(s.full()); }

inline json monitor_json(const std::optional<Prop31Residuals>& r) {
  if (!r) return nullptr;
  return {{"rA", r->r_A},
          {"rC", r->r_C},
          {"rB", r->r_B},
          {"near_crossing", r->near_crossing},
          {"log_ratio_rate", io::optional_json(r->log_ratio_rate)}};
}

inline int emit_error(std::ostream& out, std::ostream& err, std::string_view kind, const std::string& detail,
                      int code) {
  out << json{{"error", kind}, {"detail", detail}}.dump(2) << '\n';
  err << "curv4: " << kind << ": " << detail << '\n';
  return code;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"curv4: curvature operators of 4-manifolds, the P invariant, pinching and the reaction ODE",
               "curv4"};
  app.require_subcommand(1);

  json result;
  std::function<void()> action;

  // decompose
  Source dec_src;
  auto* dec = app.add_subcommand("decompose", "blocks, Riemann components, Ricci spectrum and Weyl parts");
  detail::add_source(dec, dec_src);
  dec->callback([&] {
    action = [&] {
      const auto b = detail::load(dec_src);
      const auto w = weyl_parts(b);
      result = {{"format", "curv4.decompose.v1"},
                {"blocks", io::to_json(b)},
                {"riemann", io::to_json(riemann_from_blocks(b))},
                {"spectral", io::to_json(ricci_data(b))},
                {"weyl", {{"plus", detail::sym_json(w.plus)}, {"minus", detail::sym_json(w.minus)}}}};
    };
  });

  // invariants
  Source inv_src;
  auto* inv = app.add_subcommand("invariants", "R#, tri(R), P by both routes, trace identities");
  detail::add_source(inv, inv_src);
  inv->callback([&] {
    action = [&] {
      const auto b = detail::load(inv_src);
      const auto s = sharp_operator(b);
      const auto t = trace_identities(b);
      result = {{"format", "curv4.invariants.v1"},
                {"sharp", {{"A", detail::sym_json(s.A)}, {"B", io::matrix_json(s.B)}, {"C", detail::sym_json(s.C)}}},
                {"tri", tri(b)},
                {"P_direct", p_direct(b)},
                {"P_expansion", p_expansion(b)},
                {"trace_identities",
                 {{"tsigma2", t.tsigma2},
                  {"four_B_sq", t.four_B_sq},
                  {"lambda_cubed", t.lambda_cubed},
                  {"minus8_trace", t.minus8_trace},
                  {"sigma_residual", t.sigma_residual},
                  {"cubic_residual", t.cubic_residual}}}};
    };
  });

  // pinch
  Source pin_src;
  auto* pin = app.add_subcommand("pinch", "pinching report (curv4.report.v1)");
  detail::add_source(pin, pin_src);
  pin->callback([&] {
    action = [&] {
      const auto b = detail::load(pin_src);
      result = io::to_json(report(b));
    };
  });

  // flow
  Source flow_src;
  FlowConfig flow_cfg;
  std::string csv_path;
  auto* flw = app.add_subcommand("flow", "integrate dR/dt = R^2 + R#");
  detail::add_source(flw, flow_src);
  flw->add_option("--t-max", flow_cfg.t_max, "final time")->capture_default_str();
  flw->add_option("--dt", flow_cfg.dt_init, "initial step")->capture_default_str();
  flw->add_option("--blowup", flow_cfg.blowup_threshold, "operator-norm blow-up threshold")->capture_default_str();
  flw->add_flag("--normalize", flow_cfg.normalize, "rescale to the initial Frobenius norm after each step");
  flw->add_option("--stride", flow_cfg.monitor_stride, "steps between inequality monitors")->capture_default_str();
  flw->add_option("--step-tol", flow_cfg.step_tolerance, "step-doubling tolerance")->capture_default_str();
  flw->add_option("--csv", csv_path, "write the trajectory as CSV");
  flw->callback([&] {
    action = [&] {
      const auto b = detail::load(flow_src);
      const auto traj = integrate(b, flow_cfg);
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw InvalidInput("cannot write " + csv_path);
        write_csv(f, traj);
      }
      const auto mon = ratio_monitor(traj);
      double min_rA = std::numeric_limits<double>::infinity(), min_rC = min_rA, min_rB = min_rA;
      for (const auto& s : traj.samples)
        if (s.monitor) {
          min_rA = std::min(min_rA, s.monitor->r_A);
          min_rC = std::min(min_rC, s.monitor->r_C);
          min_rB = std::min(min_rB, s.monitor->r_B);
        }
      const auto& last = traj.samples.back();
      result = {{"format", "curv4.flow.v1"},
                {"samples", traj.samples.size()},
                {"t_final", last.t},
                {"blowup_time", traj.blowup_time ? json(*traj.blowup_time) : json(nullptr)},
                {"ratio_monitor",
                 {{"max_jump", mon.max_jump},
                  {"samples_checked", mon.samples_checked},
                  {"cone_exit_time", io::optional_json(mon.cone_exit_time)},
                  {"initial_ratio", io::optional_json(mon.initial_ratio)},
                  {"final_ratio", io::optional_json(mon.final_ratio)}}},
                {"min_residuals", {{"rA", min_rA}, {"rC", min_rC}, {"rB", min_rB}}},
                {"final_blocks", io::to_json(last.blocks)},
                {"final_report", io::to_json(last.report)}};
      if (!csv_path.empty()) result["csv"] = csv_path;
    };
  });

  // extremal
  int grid = 2001;
  double ext_S = 12.0;
  auto* ext = app.add_subcommand("extremal", "extremal constants for sum a^3 and sum a^2");
  ext->add_option("--grid", grid, "angular grid resolution (>= 100)")->capture_default_str();
  ext->add_option("--S", ext_S, "scalar curvature for the square-sum bound")->capture_default_str();
  ext->callback([&] {
    action = [&] {
      const auto mx = max_cubic_sum(grid);
      const auto mn = min_cubic_sum(grid);
      const auto sq = max_square_sum(ext_S);
      result = {{"format", "curv4.extremal.v1"},
                {"grid", grid},
                {"cubic_max",
                 {{"value", mx.value}, {"argmax", io::array_json(mx.argmax)}, {"grid_value", mx.grid_value},
                  {"bound", 1.0 / std::sqrt(6.0)}}},
                {"cubic_min",
                 {{"value", mn.value}, {"argmin", io::array_json(mn.argmax)}, {"grid_value", mn.grid_value}}},
                {"square_max",
                 {{"S", ext_S}, {"value", sq.value}, {"argmax", io::array_json(sq.argmax)},
                  {"bound", ext_S * ext_S / 24.0}}}};
    };
  });

  // catalog
  std::string cat_name;
  auto* cat = app.add_subcommand("catalog", "model-space fixtures with live reports");
  cat->add_option("name", cat_name, "model name (all when omitted)");
  cat->callback([&] {
    action = [&] {
      json entries = json::array();
      for (const auto& l : list_catalog()) {
        if (!cat_name.empty() && l.entry.name != cat_name) continue;
        auto e = io::to_json(l.entry);
        e["report"] = io::to_json(l.report);
        entries.push_back(std::move(e));
      }
      if (!cat_name.empty() && entries.empty()) model(cat_name);  // throws not-found with the valid names
      result = {{"format", "curv4.catalog.v1"}, {"entries", std::move(entries)}};
    };
  });

  // sweep
  SweepConfig sweep_cfg;
  std::string cone = "prop22";
  auto* swp = app.add_subcommand("sweep", "seeded sweeps: P <= 0 on the prop22 cone, or cone property checks");
  swp->add_option("--cone", cone, "pic | nonneg | prop22")->capture_default_str();
  swp->add_option("--samples", sweep_cfg.samples, "number of samples")->capture_default_str();
  swp->add_option("--seed", sweep_cfg.seed, "seed")->capture_default_str();
  swp->add_option("--workers", sweep_cfg.workers, "worker threads")->capture_default_str();
  swp->add_option("--refine", sweep_cfg.refine_steps, "local ascent rounds")->capture_default_str();
  swp->add_option("--refine-top", sweep_cfg.refine_top, "samples refined by local ascent")->capture_default_str();
  swp->add_option("--S", sweep_cfg.S_fixed, "scalar curvature normalization")->capture_default_str();
  swp->add_option("--hit-tol", sweep_cfg.hit_tolerance, "P >= -tol counts as an equality hit")->capture_default_str();
  swp->add_option("--family-tol", sweep_cfg.family_tolerance, "distance to an equality family")->capture_default_str();
  swp->callback([&] {
    action = [&] {
      const ConeKind kind = parse_cone(cone);
      if (kind == ConeKind::prop22) result = io::to_json(prop22_sweep(sweep_cfg));
      else {
        if (sweep_cfg.samples < 1) throw InvalidInput("sweep: samples must be >= 1");
        result = io::to_json(cone_sweep(kind, sweep_cfg.seed, sweep_cfg.samples, sweep_cfg.workers));
      }
    };
  });

  // identities
  std::uint64_t id_samples = 1000, id_seed = 1;
  std::size_t id_workers = 1;
  auto* idn = app.add_subcommand("identities", "worst residuals of the algebraic identities");
  idn->add_option("--samples", id_samples, "number of samples")->capture_default_str();
  idn->add_option("--seed", id_seed, "seed")->capture_default_str();
  idn->add_option("--workers", id_workers, "worker threads")->capture_default_str();
  idn->callback([&] {
    action = [&] {
      const auto r = identities_check(id_samples, id_seed, id_workers);
      result = {{"format", "curv4.identities.v1"},
                {"samples", r.samples},
                {"seed", r.seed},
                {"worst",
                 {{"sigma_tilde", r.sigma_tilde},
                  {"lambda_cubed", r.lambda_cubed},
                  {"route_equivalence", r.route_equivalence},
                  {"gradient", r.gradient}}}};
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return detail::emit_error(out, err, "invalid-input", e.what(), kExitInvalid);
  }

  try {
    if (action) action();
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::invalid_input || e.kind() == ErrorKind::not_found ? kExitInvalid
                                                                                              : kExitDomain;
    return detail::emit_error(out, err, to_string(e.kind()), e.what(), code);
  }
  out << result.dump(2) << '\n';
  return kExitOk;
}

}  // namespace curv4::cli
