#include "qfid/xy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qfid/errors.hpp"

namespace qfid {

namespace {

// (h + cos k)^2 + eta^2 sin^2 k, i.e. |d|^2 / 4.
double half_gap_squared(const XYParams& p, double c, double s) {
  const double a = p.h + c;
  const double b = p.eta * s;
  return a * a + b * b;
}

void require_open(double half_gap_sq, double k) {
  if (2.0 * std::sqrt(half_gap_sq) <= kGapTolerance) {
    throw GapClosed("xy k-mode is gapless", k);
  }
}

bool on_line(double value, double line) { return std::abs(value - line) <= kPhaseBoundaryTolerance; }

}  // namespace

XYParams XYParams::from(std::span<const double> params) {
  if (params.size() != 2) throw DomainError("xy model expects parameters (h, eta)");
  return {params[0], params[1]};
}

DVector xy_dvector(const XYParams& p, double k) {
  return {-2.0 * p.h - 2.0 * std::cos(k), -2.0 * p.eta * std::sin(k), 0.0, 0.0};
}

double xy_lbar_closed_form(const XYParams& pi, const XYParams& pf, double k) {
  const double c = std::cos(k);
  const double s = std::sin(k);
  const double gi = half_gap_squared(pi, c, s);
  const double gf = half_gap_squared(pf, c, s);
  require_open(gi, k);
  require_open(gf, k);
  const double num = (pi.h + c) * (pf.h + c) + pi.eta * pf.eta * s * s;
  return num * num / (gi * gf);
}

double xy_fidelity_closed_form(const XYParams& pi, const XYParams& pf, double k) {
  const double c = std::cos(k);
  const double s = std::sin(k);
  const double gi = half_gap_squared(pi, c, s);
  const double gf = half_gap_squared(pf, c, s);
  require_open(gi, k);
  require_open(gf, k);
  const double num = (pi.h + c) * (pf.h + c) + pi.eta * pf.eta * s * s;
  const double root = std::sqrt(gi * gf);
  if (num >= 0.0) return std::min(1.0, std::sqrt(0.5 + num / (2.0 * root)));
  // 1 + g cancels next to antiparallel vectors; rewrite it with
  // gi*gf - num^2 = s^2 (eta_f (h_i + c) - eta_i (h_f + c))^2.
  const double cross = s * (pf.eta * (pi.h + c) - pi.eta * (pf.h + c));
  return std::sqrt(cross * cross / (2.0 * root * (root - num)));
}

BoundaryFidelities xy_boundary_fidelities(const XYParams& pi, const XYParams& pf) {
  for (double h : {pi.h, pf.h}) {
    if (on_line(h, -1.0) || on_line(h, 1.0)) {
      throw CriticalBoundary("boundary-mode occupation undefined at h = " + std::to_string(h));
    }
  }
  const auto same_side = [](double a, double b, double line) { return (a > line) == (b > line); };
  return {same_side(pi.h, pf.h, -1.0) ? 1 : 0, same_side(pi.h, pf.h, 1.0) ? 1 : 0};
}

double xy_winding_integral(const XYParams& p, int samples) {
  const double step = 2.0 * std::numbers::pi / samples;
  double sum = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double k = -std::numbers::pi + j * step;
    const DVector d = xy_dvector(p, k);
    const double r2 = d.x * d.x + d.y * d.y;
    if (std::sqrt(r2) < kGapTolerance) throw GapClosed("winding loop crosses a gapless mode", k);
    const double dx_dk = 2.0 * std::sin(k);
    const double dy_dk = -2.0 * p.eta * std::cos(k);
    sum += (d.x * dy_dk - d.y * dx_dk) / r2;
  }
  return sum * step / (2.0 * std::numbers::pi);
}

int xy_winding_number(const XYParams& p) {
  constexpr int kFirst = 1 << 10;
  constexpr int kLast = 1 << 20;
  constexpr double kSnap = 1e-6;

  double coarse = xy_winding_integral(p, kFirst);
  double extrapolated = coarse;
  for (int n = 2 * kFirst; n <= kLast; n *= 2) {
    const double fine = xy_winding_integral(p, n);
    extrapolated = (4.0 * fine - coarse) / 3.0;
    const double nearest = std::round(extrapolated);
    if (std::abs(extrapolated - nearest) < kSnap && std::abs(fine - coarse) < kSnap) {
      return static_cast<int>(nearest);
    }
    coarse = fine;
  }
  throw NonIntegerResult("winding integral did not converge to an integer", extrapolated);
}

EquilibriumPhase xy_equilibrium_phase(const XYParams& p) {
  if (on_line(p.h, -1.0) || on_line(p.h, 1.0)) return {};
  if (p.h < -1.0) return {0};
  if (p.h > 1.0) return {3};
  if (std::abs(p.eta) <= kPhaseBoundaryTolerance) return {};
  return {p.eta > 0.0 ? 1 : 2};
}

const ModelSpec& xy_model() {
  static const ModelSpec model = [] {
    ModelSpec m;
    m.name = "xy";
    m.parameter_names = {"h", "eta"};
    m.dvector = [](std::span<const double> params, double k) {
      return xy_dvector(XYParams::from(params), k);
    };
    m.boundary_fidelities = [](std::span<const double> gi, std::span<const double> gf) {
      return xy_boundary_fidelities(XYParams::from(gi), XYParams::from(gf));
    };
    m.is_critical = [](std::span<const double> params) {
      return xy_equilibrium_phase(XYParams::from(params)).is_critical();
    };
    m.planar = true;
    return m;
  }();
  return model;
}

std::optional<double> xy_kc_line_eta(const XYParams& pi, double k, double h_f) {
  const double c = std::cos(k);
  const double s = std::sin(k);
  const double denom = pi.eta * s * s;
  if (denom == 0.0) return std::nullopt;
  return -(pi.h + c) * (h_f + c) / denom;
}

// Collinear means (h_i + c) eta_f = eta_i (h_f + c); the sign of g then
// reduces to the sign of (h_i + c)(h_f + c).
std::optional<AlignedPoint> xy_aligned_line_eta(const XYParams& pi, double k, double h_f) {
  const double c = std::cos(k);
  const double a = pi.h + c;
  const double b = h_f + c;
  if (a == 0.0 || b == 0.0) return std::nullopt;
  return AlignedPoint{pi.eta * b / a, a * b > 0.0};
}

}  // namespace qfid
