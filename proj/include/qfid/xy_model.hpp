#pragma once

// Anisotropic XY chain in a transverse field, in its free-fermion k-mode form:
//   d_x = -2h - 2cos k,  d_y = -2 eta sin k,  d_z = d0 = 0.
// Registered as model "xy" with parameters (h, eta).

#include <compare>
#include <optional>
#include <span>

#include "qfid/bloch.hpp"
#include "qfid/model.hpp"

namespace qfid {

struct XYParams {
  double h = 0.0;
  double eta = 0.0;

  Params as_params() const { return {h, eta}; }
  static XYParams from(std::span<const double> params);

  friend bool operator==(const XYParams&, const XYParams&) = default;
};

/// Equilibrium phase as an ordered region index:
///   0: h < -1,  1: |h| < 1 and eta > 0,  2: |h| < 1 and eta < 0,  3: h > 1.
/// Points on h = -1, h = +1 or (eta = 0, |h| < 1) are critical.
struct EquilibriumPhase {
  static constexpr int kCritical = -1;
  int region = kCritical;

  bool is_critical() const { return region == kCritical; }
  friend auto operator<=>(const EquilibriumPhase&, const EquilibriumPhase&) = default;
};

/// Distance in parameter space below which a point counts as on a critical line.
inline constexpr double kPhaseBoundaryTolerance = 1e-12;

DVector xy_dvector(const XYParams& p, double k);

/// Time-minimum of the k-mode echo, written directly in (h, eta, k).
/// Throws GapClosed if either k-mode is gapless.
double xy_lbar_closed_form(const XYParams& pi, const XYParams& pf, double k);

/// k-mode quench fidelity, written directly in (h, eta, k).
double xy_fidelity_closed_form(const XYParams& pi, const XYParams& pf, double k);

/// Fidelities of the decoupled k = 0 and k = pi fermion modes: 1 when the
/// occupation (fixed by the sign of h + 1, resp. h - 1) is the same before and
/// after the quench, 0 otherwise. Throws CriticalBoundary for h = +-1.
BoundaryFidelities xy_boundary_fidelities(const XYParams& pi, const XYParams& pf);

/// Trapezoid estimate of the winding integral with `samples` points on
/// [-pi, pi). Exposed for convergence studies.
double xy_winding_integral(const XYParams& p, int samples);

/// Integer winding number of (d_x, d_y) over the Brillouin zone. Doubles the
/// sample count from 2^10 up to 2^20 with Richardson extrapolation until the
/// estimate is within 1e-6 of an integer. Throws GapClosed at a gapless sample
/// and NonIntegerResult if no snap is reached.
int xy_winding_number(const XYParams& p);

EquilibriumPhase xy_equilibrium_phase(const XYParams& p);

/// The eta_f at which momentum k is a k_c mode for a given h_f, i.e. the
/// curve dhat_i . dhat_f = 0 through the (h_f, eta_f) plane. Empty when
/// eta_i sin k = 0.
std::optional<double> xy_kc_line_eta(const XYParams& pi, double k, double h_f);

struct AlignedPoint {
  double eta_f = 0.0;
  /// true for a k_1 (parallel) mode, false for k_0 (antiparallel).
  bool parallel = false;
};

/// The eta_f at which d_i(k) and d_f(k) are collinear for a given h_f.
/// Empty when h_i + cos k = 0 or when the post-quench mode would be gapless.
std::optional<AlignedPoint> xy_aligned_line_eta(const XYParams& pi, double k, double h_f);

/// The registry entry for the XY model.
const ModelSpec& xy_model();

}  // namespace qfid
