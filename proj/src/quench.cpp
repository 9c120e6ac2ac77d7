#include "qfid/quench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qfid/errors.hpp"
#include "qfid/modes.hpp"
#include "qfid/quadrature.hpp"

namespace qfid {

namespace {

constexpr double kPi = std::numbers::pi;

// F = cos(theta / 2) with theta the angle between d_i and d_f. Taking theta
// from atan2(|d_i x d_f|, d_i . d_f), and switching to sin((pi - theta) / 2)
// on the antiparallel side, keeps relative precision as F -> 0, where
// |dhat_i + dhat_f| / 2 bottoms out at rounding level.
double half_sum_norm(const DVector& d_i, const DVector& d_f) {
  const double cx = d_i.y * d_f.z - d_i.z * d_f.y;
  const double cy = d_i.z * d_f.x - d_i.x * d_f.z;
  const double cz = d_i.x * d_f.y - d_i.y * d_f.x;
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double dot = d_i.x * d_f.x + d_i.y * d_f.y + d_i.z * d_f.z;
  if (dot < 0.0) return std::sin(0.5 * std::atan2(cross, -dot));
  return std::cos(0.5 * std::atan2(cross, dot));
}

void require_gaps(const DVector& d_i, const DVector& d_f) {
  if (d_i.is_gapless()) throw GapClosed("pre-quench k-mode is gapless");
  if (d_f.is_gapless()) throw GapClosed("post-quench k-mode is gapless");
}

template <class Fn>
auto with_momentum(double k, Fn&& fn) {
  try {
    return fn();
  } catch (const GapClosed& e) {
    if (e.momentum()) throw;
    throw GapClosed(std::string(e.what()) + " at k = " + std::to_string(k), k);
  }
}

double checked_rate(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw Error(std::string(what) + ": quadrature did not produce a finite value");
  }
  return value;
}

}  // namespace

KGrid KGrid::periodic(int system_size) {
  if (system_size <= 0 || system_size % 2 != 0) {
    throw DomainError("system size must be even and positive, got " + std::to_string(system_size));
  }
  std::vector<double> momenta;
  for (int m = 1; m < system_size / 2; ++m) momenta.push_back(2.0 * kPi * m / system_size);
  return {system_size, std::move(momenta)};
}

KGrid KGrid::from_momenta(int system_size, std::vector<double> momenta) {
  if (system_size <= 0) throw DomainError("system size must be positive");
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    if (!(momenta[i] > 0.0 && momenta[i] < kPi)) throw DomainError("momenta must lie in (0, pi)");
    if (i > 0 && !(momenta[i] > momenta[i - 1])) {
      throw DomainError("momenta must be strictly increasing");
    }
  }
  return {system_size, std::move(momenta)};
}

QuenchSpec::QuenchSpec(const ModelSpec& model, Params gamma_i, Params gamma_f, KGrid kgrid)
    : model_(&model),
      gamma_i_(std::move(gamma_i)),
      gamma_f_(std::move(gamma_f)),
      kgrid_(std::move(kgrid)) {
  model.check_arity(gamma_i_, "gamma_i");
  model.check_arity(gamma_f_, "gamma_f");
}

double loschmidt_k(const DVector& d_i, const DVector& d_f, double t) {
  const double g = alignment(d_i, d_f);
  // 1 - g^2 loses its digits next to parallel vectors; there the squared
  // cross product gives the same quantity accurately.
  double sin2 = 1.0 - g * g;
  if (g * g > 0.5) {
    const double cx = d_i.y * d_f.z - d_i.z * d_f.y;
    const double cy = d_i.z * d_f.x - d_i.x * d_f.z;
    const double cz = d_i.x * d_f.y - d_i.y * d_f.x;
    const double norms = d_i.norm() * d_f.norm();
    sin2 = (cx * cx + cy * cy + cz * cz) / (norms * norms);
  }
  const double s = std::sin(d_f.norm() * t);
  return std::clamp(1.0 - sin2 * s * s, 0.0, 1.0);
}

double lbar_k(const DVector& d_i, const DVector& d_f) {
  const double g = alignment(d_i, d_f);
  return g * g;
}

std::vector<double> critical_times(const DVector& d_f, int n_max) {
  if (d_f.is_gapless()) throw GapClosed("post-quench k-mode is gapless");
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  std::vector<double> times;
  times.reserve(n_max);
  const double n = d_f.norm();
  for (int j = 1; j <= n_max; ++j) times.push_back((2.0 * j - 1.0) * kPi / (2.0 * n));
  return times;
}

double quench_fidelity_k(const DVector& d_i, const DVector& d_f) {
  require_gaps(d_i, d_f);
  return half_sum_norm(d_i, d_f);
}

double relation_lbar_from_fidelity(double fq) {
  constexpr double kSlack = 1e-12;
  if (!(fq >= -kSlack && fq <= 1.0 + kSlack)) {
    throw DomainError("quench fidelity outside [0, 1]: " + std::to_string(fq));
  }
  const double x = 2.0 * fq * fq - 1.0;
  return x * x;
}

LoschmidtSeries loschmidt_total(const QuenchSpec& q, std::span<const double> times) {
  const auto& ks = q.kgrid().momenta();
  std::vector<DVector> di;
  std::vector<DVector> df;
  di.reserve(ks.size());
  df.reserve(ks.size());
  for (double k : ks) {
    di.push_back(q.d_initial(k));
    df.push_back(q.d_final(k));
    with_momentum(k, [&] { require_gaps(di.back(), df.back()); return 0; });
  }

  LoschmidtSeries out;
  out.times.assign(times.begin(), times.end());
  const double size = q.kgrid().system_size();
  for (double t : times) {
    std::vector<double> row(ks.size());
    double log_sum = 0.0;
    bool zero = false;
    for (std::size_t m = 0; m < ks.size(); ++m) {
      row[m] = loschmidt_k(di[m], df[m], t);
      if (row[m] == 0.0) {
        zero = true;
      } else {
        log_sum += std::log(row[m]);
      }
    }
    out.values_per_k.push_back(std::move(row));
    if (zero) {
      out.log_total.push_back(-std::numeric_limits<double>::infinity());
      out.total.push_back(0.0);
      out.rate.push_back(RateValue::infinity());
      out.rate_infinite = true;
    } else {
      out.log_total.push_back(log_sum);
      out.total.push_back(std::exp(log_sum));
      out.rate.push_back(RateValue::finite(log_sum == 0.0 ? 0.0 : -log_sum / size));
    }
  }
  return out;
}

RateValue lbar_rate_function(const QuenchSpec& q) {
  double sum = 0.0;
  for (double k : q.kgrid().momenta()) {
    const double value =
        with_momentum(k, [&] { return lbar_k(q.d_initial(k), q.d_final(k)); });
    if (value == 0.0) return RateValue::infinity();
    sum += std::log(value);
  }
  return RateValue::finite(sum == 0.0 ? 0.0 : -sum / q.kgrid().system_size());
}

RateValue fidelity_decay_rate(const QuenchSpec& q) {
  double sum = 0.0;
  for (double k : q.kgrid().momenta()) {
    const double value =
        with_momentum(k, [&] { return quench_fidelity_k(q.d_initial(k), q.d_final(k)); });
    if (value == 0.0) return RateValue::infinity();
    sum += std::log(value);
  }
  if (q.model().boundary_fidelities) {
    const auto b = q.model().boundary_fidelities(q.gamma_i(), q.gamma_f());
    if (b.f0 == 0 || b.fpi == 0) return RateValue::infinity();
  }
  return RateValue::finite(sum == 0.0 ? 0.0 : -sum / q.kgrid().system_size());
}

double lbar_rate_thermodynamic(const ModelSpec& model, const Params& gamma_i,
                               const Params& gamma_f, const ThermodynamicOptions& options) {
  model.check_arity(gamma_i, "gamma_i");
  model.check_arity(gamma_f, "gamma_f");
  const auto roots = find_kc_roots(model, gamma_i, gamma_f, options.resolution).roots;
  const Integrand f = [&](double k) {
    const double g = alignment(model.at(gamma_i, k), model.at(gamma_f, k));
    return -std::log(std::abs(g)) / kPi;
  };
  return checked_rate(integrate_piecewise(f, 0.0, kPi, roots, options.tolerance),
                      "thermodynamic lbar rate");
}

double fidelity_decay_rate_thermodynamic(const ModelSpec& model, const Params& gamma_i,
                                         const Params& gamma_f,
                                         const ThermodynamicOptions& options) {
  model.check_arity(gamma_i, "gamma_i");
  model.check_arity(gamma_f, "gamma_f");
  const auto extremal = find_k0_k1_roots(model, gamma_i, gamma_f, options.resolution);
  if (extremal.continuum == Continuum::K1) return 0.0;
  if (extremal.continuum == Continuum::K0) return std::numeric_limits<double>::infinity();
  const Integrand f = [&](double k) {
    const DVector di = model.at(gamma_i, k);
    const DVector df = model.at(gamma_f, k);
    require_gaps(di, df);
    return -std::log(half_sum_norm(di, df)) / (2.0 * kPi);
  };
  return checked_rate(integrate_piecewise(f, 0.0, kPi, extremal.k0, options.tolerance),
                      "thermodynamic decay rate");
}

double loschmidt_rate_thermodynamic(const ModelSpec& model, const Params& gamma_i,
                                    const Params& gamma_f, double t,
                                    const ThermodynamicOptions& options) {
  model.check_arity(gamma_i, "gamma_i");
  model.check_arity(gamma_f, "gamma_f");
  const auto roots = find_kc_roots(model, gamma_i, gamma_f, options.resolution).roots;
  const Integrand f = [&](double k) {
    return -std::log(loschmidt_k(model.at(gamma_i, k), model.at(gamma_f, k), t)) / (2.0 * kPi);
  };
  return checked_rate(integrate_piecewise(f, 0.0, kPi, roots, options.tolerance),
                      "thermodynamic Loschmidt rate");
}

}  // namespace qfid
