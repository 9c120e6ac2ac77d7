#pragma once

// Loschmidt echoes, quench fidelities and their rate functions for a sudden
// quench gamma_i -> gamma_f of a two-band model.

#include <limits>
#include <span>
#include <vector>

#include "qfid/bloch.hpp"
#include "qfid/model.hpp"

namespace qfid {

/// Momenta k_m = 2 pi m / L for m = 1 .. L/2 - 1, i.e. every interior mode of
/// an even periodic chain. k = 0 and k = pi are handled as boundary modes.
class KGrid {
 public:
  /// Throws DomainError unless L is even and positive.
  static KGrid periodic(int system_size);

  /// A custom grid normalized by `system_size`; momenta must be strictly
  /// increasing and lie in (0, pi).
  static KGrid from_momenta(int system_size, std::vector<double> momenta);

  int system_size() const { return system_size_; }
  const std::vector<double>& momenta() const { return momenta_; }
  std::size_t size() const { return momenta_.size(); }

 private:
  KGrid(int system_size, std::vector<double> momenta)
      : system_size_(system_size), momenta_(std::move(momenta)) {}

  int system_size_;
  std::vector<double> momenta_;
};

class QuenchSpec {
 public:
  /// Throws DomainError if either parameter vector has the wrong arity.
  QuenchSpec(const ModelSpec& model, Params gamma_i, Params gamma_f, KGrid kgrid);

  const ModelSpec& model() const { return *model_; }
  const Params& gamma_i() const { return gamma_i_; }
  const Params& gamma_f() const { return gamma_f_; }
  const KGrid& kgrid() const { return kgrid_; }

  DVector d_initial(double k) const { return model_->at(gamma_i_, k); }
  DVector d_final(double k) const { return model_->at(gamma_f_, k); }

 private:
  const ModelSpec* model_;
  Params gamma_i_;
  Params gamma_f_;
  KGrid kgrid_;
};

/// A rate function value that may be exactly +infinity (an exact zero of the
/// underlying echo or fidelity), tagged rather than overflowed.
struct RateValue {
  double value = 0.0;
  bool infinite = false;

  static RateValue finite(double v) { return {v, false}; }
  static RateValue infinity() { return {0.0, true}; }

  double as_double() const {
    return infinite ? std::numeric_limits<double>::infinity() : value;
  }
  friend bool operator==(const RateValue&, const RateValue&) = default;
};

struct LoschmidtSeries {
  std::vector<double> times;
  /// values_per_k[t][m] = L_{k_m}(times[t]).
  std::vector<std::vector<double>> values_per_k;
  /// ln of the product over k, accumulated in k-ascending order.
  std::vector<double> log_total;
  std::vector<double> total;
  std::vector<RateValue> rate;
  /// True when some time hit an exact zero of the echo.
  bool rate_infinite = false;
};

/// Single-mode echo 1 - [1 - (dhat_i . dhat_f)^2] sin^2(|d_f| t).
double loschmidt_k(const DVector& d_i, const DVector& d_f, double t);

/// Time-minimum of loschmidt_k: (dhat_i . dhat_f)^2.
double lbar_k(const DVector& d_i, const DVector& d_f);

/// t_n = (2n - 1) pi / (2 |d_f|) for n = 1 .. n_max.
std::vector<double> critical_times(const DVector& d_f, int n_max);

/// |<gs(d_i)|gs(d_f)>| = sqrt((1 + dhat_i . dhat_f) / 2).
double quench_fidelity_k(const DVector& d_i, const DVector& d_f);

/// (2 fq^2 - 1)^2. Throws DomainError outside [0, 1] (slack 1e-12).
double relation_lbar_from_fidelity(double fq);

/// Per-mode echoes over the interior grid, their product (in log space) and
/// the rate -ln(L(t)) / L. Boundary modes only contribute a phase and are left
/// out. Throws GapClosed carrying the offending k.
LoschmidtSeries loschmidt_total(const QuenchSpec& q, std::span<const double> times);

/// -(1/L) sum_k ln lbar_k over the interior grid.
RateValue lbar_rate_function(const QuenchSpec& q);

/// -(1/L) ln F^q, with F^q the product of interior k-mode fidelities and the
/// boundary-mode factors (0 or 1) when the model has them.
RateValue fidelity_decay_rate(const QuenchSpec& q);

struct ThermodynamicOptions {
  double tolerance = 1e-9;
  /// k-samples used to locate the log singularities before integrating.
  int resolution = 4096;
};

/// Continuum limits (1/2pi) int_0^pi (-ln X_k) dk of the rate functions above.
/// Log singularities (k_c for echoes, k_0 for the fidelity) are located first
/// and used as breakpoints.
double lbar_rate_thermodynamic(const ModelSpec& model, const Params& gamma_i,
                               const Params& gamma_f, const ThermodynamicOptions& options = {});
double fidelity_decay_rate_thermodynamic(const ModelSpec& model, const Params& gamma_i,
                                         const Params& gamma_f,
                                         const ThermodynamicOptions& options = {});
double loschmidt_rate_thermodynamic(const ModelSpec& model, const Params& gamma_i,
                                    const Params& gamma_f, double t,
                                    const ThermodynamicOptions& options = {});

}  // namespace qfid
