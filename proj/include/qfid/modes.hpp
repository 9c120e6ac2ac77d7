#pragma once

// Special momentum modes of a quench:
//   k_c: dhat_i . dhat_f = 0   (F^q_k = sqrt(2)/2, echo has an exact zero)
//   k_0: dhat_i . dhat_f = -1  (F^q_k = 0)
//   k_1: dhat_i . dhat_f = +1  (F^q_k = 1)
// plus region maps of their counts over a plane of post-quench parameters.

#include <optional>
#include <string>
#include <vector>

#include "qfid/bloch.hpp"
#include "qfid/model.hpp"
#include "qfid/quench.hpp"

namespace qfid {

enum class ModeClass { Kc, K0, K1, Generic };

const char* to_string(ModeClass c);

/// Tolerance for labelling a grid mode's F^q_k as k_c / k_0 / k_1.
inline constexpr double kClassTolerance = 1e-8;
inline constexpr int kDefaultResolution = 4096;

ModeClass classify_fidelity(double fq, double tolerance = kClassTolerance);

/// dhat_i . dhat_f clamped to [-1, 1]. Throws GapClosed.
double alignment(const DVector& d_i, const DVector& d_f);

struct RootList {
  std::vector<double> roots;
  /// Set when a grid cell turned out to hold more than one root.
  bool resolution_warning = false;
};

/// Every k in (0, pi) with alignment 0: sign-change bracketing on a uniform
/// grid of `resolution` points, bisection to |g| < 1e-12, and golden-section
/// refinement of grid minima of |g| to catch even-multiplicity touches.
RootList find_kc_roots(const ModelSpec& model, const Params& gamma_i, const Params& gamma_f,
                       int resolution = kDefaultResolution);

/// Set when alignment is +1 (or -1) for every k, e.g. an identical quench.
enum class Continuum { None, K1, K0 };

const char* to_string(Continuum c);

struct ExtremalModes {
  std::vector<double> k0;
  std::vector<double> k1;
  Continuum continuum = Continuum::None;
  bool resolution_warning = false;
};

/// Interior parallel (k_1) and antiparallel (k_0) modes, found as zeros of
/// the cross product dhat_i x dhat_f and classified by the sign of g.
ExtremalModes find_k0_k1_roots(const ModelSpec& model, const Params& gamma_i,
                               const Params& gamma_f, int resolution = kDefaultResolution);

struct ModeReport {
  std::vector<double> kc_roots;
  std::vector<double> k0_roots;
  std::vector<double> k1_roots;
  int n_kc = 0;
  int n_k0 = 0;
  int n_k1 = 0;
  /// Present when the model has decoupled boundary modes.
  std::optional<BoundaryFidelities> boundary;
  Continuum continuum = Continuum::None;
  bool resolution_warning = false;
  std::vector<std::string> notes;
};

/// Roots plus counts. Boundary modes add to n_k0 / n_k1 according to their
/// fidelity but never to n_kc.
ModeReport analyze_modes(const ModelSpec& model, const Params& gamma_i, const Params& gamma_f,
                         int resolution = kDefaultResolution);

/// True iff at least one k_c mode exists.
bool dqpt_exists(const ModelSpec& model, const Params& gamma_i, const Params& gamma_f,
                 int resolution = kDefaultResolution);

/// n_k0 >= 1 and n_k1 >= 1; by continuity of F^q_k this forces a k_c mode.
bool sufficient_condition_holds(const ModeReport& report);

struct ScanAxis {
  std::size_t parameter = 0;
  double min = 0.0;
  double max = 0.0;
  int samples = 1;

  /// Evenly spaced, endpoints included; a single sample sits at `min`.
  double value(int index) const;
};

enum class CellStatus { Ok, Critical, Failed };

const char* to_string(CellStatus s);

enum class RateMode { None, FiniteSize, Thermodynamic };

struct CellSummary {
  int n_kc = 0;
  int n_k0 = 0;
  int n_k1 = 0;
  bool dqpt_exists = false;
  bool sufficient = false;
  std::optional<RateValue> lbar_rate;
  std::optional<RateValue> alpha_rate;
};

struct ScanCell {
  double value1 = 0.0;
  double value2 = 0.0;
  CellStatus status = CellStatus::Ok;
  std::string message;
  /// Absent for Critical and Failed cells.
  std::optional<CellSummary> summary;
};

struct ScanOptions {
  int resolution = kDefaultResolution;
  RateMode rates = RateMode::None;
  /// Chain length for RateMode::FiniteSize.
  int system_size = 30;
  ThermodynamicOptions thermodynamic{};
  /// Values for parameters not on either axis; defaults to gamma_i.
  std::optional<Params> base_gamma_f;
  unsigned threads = 1;
};

struct ScanResult {
  ScanAxis axis1;
  ScanAxis axis2;
  /// Row-major: cells[i1 * axis2.samples + i2].
  std::vector<ScanCell> cells;

  const ScanCell& at(int i1, int i2) const { return cells[i1 * axis2.samples + i2]; }
};

/// One quench evaluation as a scan cell; never throws for per-cell failures.
ScanCell evaluate_cell(const ModelSpec& model, const Params& gamma_i, const Params& gamma_f,
                       const ScanOptions& options);

ScanResult scan_phase_diagram(const ModelSpec& model, const Params& gamma_i, const ScanAxis& axis1,
                              const ScanAxis& axis2, const ScanOptions& options = {});

}  // namespace qfid
