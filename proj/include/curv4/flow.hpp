#pragma once

// Pointwise curvature ODE dR/dt = R² + R# with inequality monitors.

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "curv4/curvature.hpp"
#include "curv4/errors.hpp"
#include "curv4/pinching.hpp"
#include "curv4/sharp.hpp"

namespace curv4 {

struct FlowConfig {
  double t_max = 1.0;
  double dt_init = 1e-3;
  double blowup_threshold = 1e6;  // operator norm cutoff
  bool normalize = false;         // rescale each accepted state to the initial ⟨R,R⟩
  std::size_t monitor_stride = 1;
  double step_tolerance = 1e-8;   // two-half-steps vs full-step discrepancy, times (1+‖R‖)
};

inline void require_valid(const FlowConfig& cfg) {
  if (!(cfg.t_max > 0.0)) throw InvalidInput("flow: t_max must be > 0");
  if (!(cfg.dt_init > 0.0)) throw InvalidInput("flow: dt_init must be > 0");
  if (!(cfg.blowup_threshold > 0.0)) throw InvalidInput("flow: blowup_threshold must be > 0");
  if (cfg.monitor_stride == 0) throw InvalidInput("flow: monitor_stride must be >= 1");
  if (!(cfg.step_tolerance > 0.0)) throw InvalidInput("flow: step_tolerance must be > 0");
}

/// Residuals of the three reaction inequalities, r >= 0 when they hold.
struct Prop31Residuals {
  double r_A = 0.0;
  double r_C = 0.0;
  double r_B = 0.0;
  bool near_crossing = false;              // a relevant eigenvalue gap is within the stencil
  std::optional<double> log_ratio_rate;    // d/dt log(wpic ratio)
};

struct FlowSample {
  double t = 0.0;
  CurvatureBlocks blocks;
  PinchingReport report;
  std::optional<Prop31Residuals> monitor;
};

struct FlowTrajectory {
  std::vector<FlowSample> samples;
  std::optional<double> blowup_time;
};

class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& detail, FlowSample last_good)
      : Error(ErrorKind::integration_failure, detail), last_good_(std::move(last_good)) {}

  const FlowSample& last_good() const noexcept { return last_good_; }

 private:
  FlowSample last_good_;
};

/// R² + R# as blocks. The reaction preserves tr A = tr C.
inline CurvatureBlocks rhs(const CurvatureBlocks& b) {
  return CurvatureBlocks::from_matrix(square_plus_sharp(b));
}

inline double operator_norm(const CurvatureBlocks& b) { return operator_norm_sym(b.assemble()); }

namespace detail {

inline CurvatureBlocks rk4_step(const CurvatureBlocks& y, double h) {
  const CurvatureBlocks k1 = rhs(y);
  const CurvatureBlocks k2 = rhs(y + k1 * (0.5 * h));
  const CurvatureBlocks k3 = rhs(y + k2 * (0.5 * h));
  const CurvatureBlocks k4 = rhs(y + k3 * h);
  return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

inline double wpic_ratio_of(const SortedSpectra& s) {
  const double denom = (s.a[0] + s.a[1]) * (s.c[0] + s.c[1]);
  return denom > 0.0 ? s.b[2] * s.b[2] / denom : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

/// Derivatives of A₁+A₂, C₁+C₂ and B₃ along rhs by central differences of
/// step h = 1e-6·(1+‖R‖) on the unit rhs direction, compared against
///   A₁²+A₂²+2(A₁+A₂)A₃+B₁²+B₂²   (lower bound for A₁+A₂)
///   C₁²+C₂²+2(C₁+C₂)C₃+B₁²+B₂²   (lower bound for C₁+C₂)
///   A₃B₃+C₃B₃+2B₁B₂              (upper bound for B₃)
inline Prop31Residuals prop31_residuals(const CurvatureBlocks& b) {
  require_valid(b);
  const CurvatureBlocks v = rhs(b);
  const double speed = v.norm();
  const auto s = detail::sorted_spectra(b);
  const auto& [A, C, B] = s;

  Prop31Residuals r;
  const double boundA = A[0] * A[0] + A[1] * A[1] + 2.0 * (A[0] + A[1]) * A[2] + B[0] * B[0] + B[1] * B[1];
  const double boundC = C[0] * C[0] + C[1] * C[1] + 2.0 * (C[0] + C[1]) * C[2] + B[0] * B[0] + B[1] * B[1];
  const double boundB = A[2] * B[2] + C[2] * B[2] + 2.0 * B[0] * B[1];
  if (speed == 0.0) {
    r.r_A = -boundA;
    r.r_C = -boundC;
    r.r_B = boundB;
    return r;
  }

  const double h = 1e-6 * (1.0 + b.norm());
  const CurvatureBlocks dir = v * (1.0 / speed);
  const auto plus = detail::sorted_spectra(b + dir * h);
  const auto minus = detail::sorted_spectra(b - dir * h);
  const double scale = speed / (2.0 * h);
  const double dA = (plus.a[0] + plus.a[1] - minus.a[0] - minus.a[1]) * scale;
  const double dC = (plus.c[0] + plus.c[1] - minus.c[0] - minus.c[1]) * scale;
  const double dB = (plus.b[2] - minus.b[2]) * scale;
  r.r_A = dA - boundA;
  r.r_C = dC - boundC;
  r.r_B = boundB - dB;

  const double stencil = 4.0 * h;
  r.near_crossing = (A[2] - A[1] < stencil) || (C[2] - C[1] < stencil) || (B[2] - B[1] < stencil);

  const double rp = detail::wpic_ratio_of(plus);
  const double rm = detail::wpic_ratio_of(minus);
  if (rp > 0.0 && rm > 0.0) r.log_ratio_rate = (std::log(rp) - std::log(rm)) * scale;
  return r;
}

/// Classical RK4 with step halving on the two-half-steps vs full-step
/// discrepancy. Steps grow back (doubling, capped at dt_init) when the
/// discrepancy is comfortably small.
inline FlowTrajectory integrate(const CurvatureBlocks& b0, const FlowConfig& cfg) {
  require_valid(b0);
  require_valid(cfg);

  FlowTrajectory traj;
  const double norm0 = b0.norm();
  std::size_t step = 0;

  auto push = [&](double t, const CurvatureBlocks& y) {
    FlowSample s{t, y, report(y), std::nullopt};
    if (step % cfg.monitor_stride == 0) s.monitor = prop31_residuals(y);
    traj.samples.push_back(std::move(s));
  };

  CurvatureBlocks y = b0;
  double t = 0.0;
  push(t, y);
  if (operator_norm(y) >= cfg.blowup_threshold) {
    traj.blowup_time = 0.0;
    return traj;
  }

  double h = cfg.dt_init;
  while (t < cfg.t_max) {
    const bool last = h >= cfg.t_max - t;
    const double dt = last ? cfg.t_max - t : h;
    const CurvatureBlocks full = detail::rk4_step(y, dt);
    const CurvatureBlocks half = detail::rk4_step(detail::rk4_step(y, 0.5 * dt), 0.5 * dt);
    const double err = (full - half).norm();
    const double allowed = cfg.step_tolerance * (1.0 + y.norm());

    if (!half.finite() || !std::isfinite(err) || err > allowed) {
      h = 0.5 * dt;
      if (h <= 1e-15 * std::max(1.0, t) || t + h <= t) {
        std::ostringstream os;
        os << "step size underflow at t = " << t;
        throw IntegrationFailure(os.str(), traj.samples.back());
      }
      continue;
    }

    y = half;
    t = last ? cfg.t_max : t + dt;
    if (cfg.normalize && norm0 > 0.0) y *= norm0 / y.norm();
    if (!y.finite()) throw IntegrationFailure("non-finite state", traj.samples.back());
    ++step;
    push(t, y);

    if (operator_norm(y) >= cfg.blowup_threshold) {
      traj.blowup_time = t;
      break;
    }
    if (err < allowed / 64.0) h = std::min(2.0 * dt, cfg.dt_init);
    else h = dt;
  }
  return traj;
}

struct RatioMonitor {
  double max_jump = 0.0;                  // max over k of ratio(t_{k+1}) − ratio(t_k)
  std::size_t samples_checked = 0;
  std::optional<double> cone_exit_time;   // first sample outside the pic cone
  std::optional<double> initial_ratio;
  std::optional<double> final_ratio;
};

inline RatioMonitor ratio_monitor(const FlowTrajectory& traj) {
  RatioMonitor m;
  m.max_jump = -std::numeric_limits<double>::infinity();
  std::optional<double> prev;
  for (const auto& s : traj.samples) {
    if (!s.report.pic || !s.report.wpic_ratio) {
      m.cone_exit_time = s.t;
      break;
    }
    const double r = *s.report.wpic_ratio;
    if (prev) m.max_jump = std::max(m.max_jump, r - *prev);
    else m.initial_ratio = r;
    prev = r;
    m.final_ratio = r;
    ++m.samples_checked;
  }
  if (m.samples_checked < 2) m.max_jump = 0.0;
  return m;
}

namespace detail {

inline void put_number(std::ostream& os, double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  os.write(buf, res.ptr - buf);
}

inline void put_optional(std::ostream& os, const std::optional<double>& x) {
  if (x) put_number(os, *x);
}

}  // namespace detail

inline constexpr const char* kTrajectoryCsvHeader =
    "t,S,A1,A2,A3,C1,C2,C3,B1,B2,B3,wpic_ratio,E,P,rA,rC,rB";

/// One row per sample, shortest round-trip decimal formatting. Undefined
/// fields are left empty.
inline void write_csv(std::ostream& os, const FlowTrajectory& traj) {
  os << kTrajectoryCsvHeader << '\n';
  for (const auto& s : traj.samples) {
    const auto sp = detail::sorted_spectra(s.blocks);
    detail::put_number(os, s.t);
    os << ',';
    detail::put_number(os, s.blocks.scalar_curvature());
    for (const auto* arr : {&sp.a, &sp.c, &sp.b})
      for (double x : *arr) {
        os << ',';
        detail::put_number(os, x);
      }
    os << ',';
    detail::put_optional(os, s.report.wpic_ratio);
    os << ',';
    detail::put_optional(os, s.report.E);
    os << ',';
    detail::put_number(os, s.report.P);
    for (int k = 0; k < 3; ++k) {
      os << ',';
      if (s.monitor) detail::put_number(os, k == 0 ? s.monitor->r_A : k == 1 ? s.monitor->r_C : s.monitor->r_B);
    }
    os << '\n';
  }
}

}  // namespace curv4
