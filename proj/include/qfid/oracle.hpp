#pragma once

// Brute-force verification layer. Nothing here uses the closed-form echo or
// fidelity expressions: states are evolved with the 2x2 propagator and
// compared with raw inner products and matrix products.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qfid/bloch.hpp"

namespace qfid {

enum class OracleProperty {
  EigenEquation,
  EvolutionUnitary,
  EvolutionComposition,
  FidelityOverlap,
  EchoOracle,
  LbarNumeric,
  LbarIsTimeMinimum,
  EchoAtCriticalTime,
  MinimizerAtCriticalTime,
  RelationIdentity,
  D0Independence,
  XYClosedForms,
  StateMapping,
  Expectations,
  Anticommutator,
  SufficientImpliesDqpt,
  DqptEchoOracle,
  SwapSymmetry,
};

const char* to_string(OracleProperty p);

struct Witness {
  std::optional<double> k;
  std::optional<double> t;
  std::vector<double> parameters;
};

struct OracleReport {
  OracleProperty property{};
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::optional<Witness> witness;
  std::uint64_t seed = 0;
  std::size_t trials = 1;

  /// Folds one observation in, keeping the worst witness.
  void observe(double deviation, const Witness& where);
  /// Re-derives pass from max_deviation <= tolerance.
  void finalize() { pass = max_deviation <= tolerance; }
};

/// Deterministic generator for randomized property runs. Doubles are built
/// from the raw 64-bit stream so sequences match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Components uniform in [-scale, scale]; d0 uniform in [-d0_scale, d0_scale].
  /// Redraws until |d| > 1e-3 * scale.
  DVector dvector(double scale = 3.0, double d0_scale = 0.0);

  SpinorState spinor();

  /// A random pair with dhat_i . dhat_f = 0 (to rounding) and d0 = 0.
  std::pair<DVector, DVector> perpendicular_pair(double scale = 3.0);

 private:
  std::mt19937_64 engine_;
};

struct LbarMinimum {
  double value = 1.0;
  double time = 0.0;
};

/// Evolves gs(d_i) under d_f over one half-period [0, pi/|d_f|] on
/// `time_samples` points, then refines the smallest sample by golden section
/// and by bisection on the sign of d/dt |<psi|U(t)|psi>|^2.
LbarMinimum numeric_lbar_minimum(const DVector& d_i, const DVector& d_f, int time_samples = 1024);

/// Value part of numeric_lbar_minimum. Requires time_samples >= 256.
double numeric_lbar(const DVector& d_i, const DVector& d_f, int time_samples = 1024);

/// H_f|0_i> is parallel to |1_i> with modulus |d_f|. Deviations are relative
/// to |d_f|. Requires fidelity sqrt(2)/2 (within 1e-8) and d0_f = 0; throws
/// PreconditionFailed otherwise.
OracleReport check_state_mapping(const DVector& d_i, const DVector& d_f);

/// <0_i|H_f|0_i> = 0 (absolute) and <0_i|H_f^2|0_i> = |d_f|^2 (relative).
OracleReport check_expectations(const DVector& d_i, const DVector& d_f);

/// {H_i, H_f} = 0; tolerance 1e-10 |d_i||d_f|. Needs d0 = 0 on both sides.
OracleReport check_anticommutator(const DVector& d_i, const DVector& d_f);

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  /// Base trial count; properties stated over 10^4 samples use 10x this.
  std::size_t trials = 1000;
  /// Test hook: adds 1e-6 to the fidelity-to-echo relation so the suite
  /// must fail.
  bool inject_fault = false;
  int resolution = 4096;
};

/// Runs every oracle property. Each property draws from its own generator
/// seeded from `seed`, so reports are reproducible property by property.
std::vector<OracleReport> run_property_suite(const SuiteOptions& options = {});

}  // namespace qfid
