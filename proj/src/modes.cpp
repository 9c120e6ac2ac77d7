#include "qfid/modes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <thread>

#include "qfid/errors.hpp"

namespace qfid {

namespace {

constexpr double kPi = std::numbers::pi;
// Sampled values this small at k = 0 or pi carry no sign information.
constexpr double kEndpointNoise = 1e-12;
// Largest |f| accepted at the end of a bisection; anything bigger means the
// bracket straddled a jump, i.e. a gap closing.
constexpr double kJumpThreshold = 1e-8;
constexpr double kTouchThreshold = 1e-8;
constexpr double kDuplicateRoot = 1e-10;
constexpr double kBoundaryNote = 1e-6;

using PairFn = std::function<double(const DVector&, const DVector&)>;

struct Sample {
  double k;
  double v;
};

class ZeroFinder {
 public:
  ZeroFinder(const ModelSpec& model, const Params& gi, const Params& gf, PairFn value)
      : model_(model), gi_(gi), gf_(gf), value_(std::move(value)) {}

  double operator()(double k) const {
    const DVector di = model_.at(gi_, k);
    const DVector df = model_.at(gf_, k);
    if (di.is_gapless() || df.is_gapless()) {
      throw GapClosed("gapless k-mode at k = " + std::to_string(k), k);
    }
    return value_(di, df);
  }

  // Closed uniform grid on [0, pi]. Endpoint samples are dropped when the
  // mode is gapless there or the value is at rounding level.
  std::vector<Sample> sample(int resolution) const {
    std::vector<Sample> out;
    out.reserve(resolution);
    for (int j = 0; j < resolution; ++j) {
      const double k = kPi * j / (resolution - 1);
      const bool endpoint = j == 0 || j == resolution - 1;
      if (endpoint) {
        const DVector di = model_.at(gi_, k);
        const DVector df = model_.at(gf_, k);
        if (di.is_gapless() || df.is_gapless()) continue;
        const double v = value_(di, df);
        if (std::abs(v) <= kEndpointNoise) continue;
        out.push_back({k, v});
      } else {
        out.push_back({k, (*this)(k)});
      }
    }
    return out;
  }

  double bisect(Sample lo, Sample hi) const {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo.k + hi.k);
      if (mid <= lo.k || mid >= hi.k) break;
      const double fm = (*this)(mid);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (lo.v < 0.0)) {
        lo = {mid, fm};
      } else {
        hi = {mid, fm};
      }
    }
    const Sample best = std::abs(lo.v) <= std::abs(hi.v) ? lo : hi;
    if (std::abs(best.v) > kJumpThreshold) {
      throw GapClosed("value jumps across k = " + std::to_string(best.k) + " (gap closes)", best.k);
    }
    return best.k;
  }

  // Golden-section minimization of |f| on [a, b].
  Sample golden_min(double a, double b) const {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = (*this)(x1);
    double f2 = (*this)(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
      if (std::abs(f1) < std::abs(f2)) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = (*this)(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = (*this)(x2);
      }
    }
    return std::abs(f1) < std::abs(f2) ? Sample{x1, f1} : Sample{x2, f2};
  }

  std::vector<double> fine_crossings(const Sample& l, const Sample& r) const {
    constexpr int kSubsamples = 256;
    std::vector<double> roots;
    Sample prev = l;
    for (int j = 1; j <= kSubsamples; ++j) {
      const double k = l.k + (r.k - l.k) * j / kSubsamples;
      const Sample cur = j == kSubsamples ? r : Sample{k, (*this)(k)};
      if (cur.v != 0.0 && prev.v != 0.0 && (cur.v < 0.0) != (prev.v < 0.0)) {
        roots.push_back(bisect(prev, cur));
      }
      prev = cur;
    }
    return roots;
  }

  RootList zeros(const std::vector<Sample>& s) const {
    RootList out;
    const auto interior = [](double k) { return k > kEndpointNoise && k < kPi - kEndpointNoise; };
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i].v == 0.0) {
        if (interior(s[i].k)) out.roots.push_back(s[i].k);
        continue;
      }
      if (i + 1 < s.size() && s[i + 1].v != 0.0 && (s[i].v < 0.0) != (s[i + 1].v < 0.0)) {
        const double k = bisect(s[i], s[i + 1]);
        if (interior(k)) out.roots.push_back(k);
      }
    }
    // Even-multiplicity zeros: grid minima of |f| with no sign change nearby.
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      const Sample& l = s[i - 1];
      const Sample& c = s[i];
      const Sample& r = s[i + 1];
      if (c.v == 0.0 || l.v == 0.0 || r.v == 0.0) continue;
      if ((l.v < 0.0) != (c.v < 0.0) || (r.v < 0.0) != (c.v < 0.0)) continue;
      if (std::abs(c.v) > std::abs(l.v) || std::abs(c.v) > std::abs(r.v)) continue;
      const Sample m = golden_min(l.k, r.k);
      if (m.v != 0.0 && (m.v < 0.0) != (c.v < 0.0)) {
        // Two sign changes inside one grid cell pair.
        out.resolution_warning = true;
        out.roots.push_back(bisect(l, m));
        out.roots.push_back(bisect(m, r));
      } else if (std::abs(m.v) < kTouchThreshold && interior(m.k)) {
        // Golden section may have landed on one of two nearby simple roots
        // from the outside; a fine resample tells a touch from a pair.
        const auto crossings = fine_crossings(l, r);
        if (crossings.empty()) {
          out.roots.push_back(m.k);
        } else {
          out.resolution_warning = true;
          out.roots.insert(out.roots.end(), crossings.begin(), crossings.end());
        }
      }
    }
    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                                [](double a, double b) { return b - a < kDuplicateRoot; }),
                    out.roots.end());
    return out;
  }

 private:
  const ModelSpec& model_;
  const Params& gi_;
  const Params& gf_;
  PairFn value_;
};

void check_inputs(const ModelSpec& model, const Params& gi, const Params& gf, int resolution) {
  model.check_arity(gi, "gamma_i");
  model.check_arity(gf, "gamma_f");
  if (resolution < 64) throw DomainError("root-scan resolution must be at least 64");
}

double raw_alignment(const DVector& d_i, const DVector& d_f) {
  const auto u = d_i.unit();
  const auto v = d_f.unit();
  return std::clamp(u[0] * v[0] + u[1] * v[1] + u[2] * v[2], -1.0, 1.0);
}

double planar_cross(const DVector& d_i, const DVector& d_f) {
  const auto u = d_i.unit();
  const auto v = d_f.unit();
  return u[0] * v[1] - u[1] * v[0];
}

double cross_norm(const DVector& d_i, const DVector& d_f) {
  const auto u = d_i.unit();
  const auto v = d_f.unit();
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  return std::sqrt(cx * cx + cy * cy + cz * cz);
}

}  // namespace

const char* to_string(ModeClass c) {
  switch (c) {
    case ModeClass::Kc: return "kc";
    case ModeClass::K0: return "k0";
    case ModeClass::K1: return "k1";
    case ModeClass::Generic: return "generic";
  }
  return "generic";
}

const char* to_string(Continuum c) {
  switch (c) {
    case Continuum::None: return "none";
    case Continuum::K1: return "k1";
    case Continuum::K0: return "k0";
  }
  return "none";
}

const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Critical: return "critical";
    case CellStatus::Failed: return "failed";
  }
  return "failed";
}

ModeClass classify_fidelity(double fq, double tolerance) {
  if (std::abs(fq - std::numbers::sqrt2 / 2.0) <= tolerance) return ModeClass::Kc;
  if (std::abs(fq) <= tolerance) return ModeClass::K0;
  if (std::abs(fq - 1.0) <= tolerance) return ModeClass::K1;
  return ModeClass::Generic;
}

double alignment(const DVector& d_i, const DVector& d_f) {
  if (d_i.is_gapless()) throw GapClosed("pre-quench k-mode is gapless");
  if (d_f.is_gapless()) throw GapClosed("post-quench k-mode is gapless");
  return raw_alignment(d_i, d_f);
}

RootList find_kc_roots(const ModelSpec& model, const Params& gamma_i, const Params& gamma_f,
                       int resolution) {
  check_inputs(model, gamma_i, gamma_f, resolution);
  const ZeroFinder finder(model, gamma_i, gamma_f, raw_alignment);
  return finder.zeros(finder.sample(resolution));
}

ExtremalModes find_k0_k1_roots(const ModelSpec& model, const Params& gamma_i,
                               const Params& gamma_f, int resolution) {
  check_inputs(model, gamma_i, gamma_f, resolution);
  const ZeroFinder cross(model, gamma_i, gamma_f, model.planar ? planar_cross : cross_norm);
  const auto samples = cross.sample(resolution);

  ExtremalModes out;
  const bool flat = std::all_of(samples.begin(), samples.end(),
                                [](const Sample& s) { return std::abs(s.v) < kTouchThreshold; });
  if (flat) {
    // Parallel or antiparallel at every k: the sign of g must not change,
    // or the gap closes somewhere in between.
    const ZeroFinder align(model, gamma_i, gamma_f, raw_alignment);
    const auto g = align.sample(resolution);
    const bool all_pos = std::all_of(g.begin(), g.end(), [](const Sample& s) { return s.v > 0.0; });
    const bool all_neg = std::all_of(g.begin(), g.end(), [](const Sample& s) { return s.v < 0.0; });
    if (!all_pos && !all_neg) throw GapClosed("alignment flips between +1 and -1 (gap closes)");
    out.continuum = all_pos ? Continuum::K1 : Continuum::K0;
    return out;
  }

  const RootList roots = cross.zeros(samples);
  out.resolution_warning = roots.resolution_warning;
  for (double k : roots.roots) {
    const double g = raw_alignment(model.at(gamma_i, k), model.at(gamma_f, k));
    (g < 0.0 ? out.k0 : out.k1).push_back(k);
  }
  return out;
}

ModeReport analyze_modes(const ModelSpec& model, const Params& gamma_i, const Params& gamma_f,
                         int resolution) {
  ModeReport report;
  const RootList kc = find_kc_roots(model, gamma_i, gamma_f, resolution);
  const ExtremalModes ext = find_k0_k1_roots(model, gamma_i, gamma_f, resolution);
  report.kc_roots = kc.roots;
  report.k0_roots = ext.k0;
  report.k1_roots = ext.k1;
  report.continuum = ext.continuum;
  report.resolution_warning = kc.resolution_warning || ext.resolution_warning;
  report.n_kc = static_cast<int>(kc.roots.size());
  report.n_k0 = static_cast<int>(ext.k0.size());
  report.n_k1 = static_cast<int>(ext.k1.size());
  if (model.boundary_fidelities) {
    const BoundaryFidelities b = model.boundary_fidelities(gamma_i, gamma_f);
    report.boundary = b;
    for (int f : {b.f0, b.fpi}) {
      if (f == 0) ++report.n_k0;
      if (f == 1) ++report.n_k1;
    }
  }
  for (const auto* list : {&report.k0_roots, &report.k1_roots}) {
    for (double k : *list) {
      if (k < kBoundaryNote || k > kPi - kBoundaryNote) {
        report.notes.push_back("interior root at k = " + std::to_string(k) +
                               " is merging with a boundary mode");
      }
    }
  }
  return report;
}

bool dqpt_exists(const ModelSpec& model, const Params& gamma_i, const Params& gamma_f,
                 int resolution) {
  return !find_kc_roots(model, gamma_i, gamma_f, resolution).roots.empty();
}

bool sufficient_condition_holds(const ModeReport& report) {
  return report.n_k0 >= 1 && report.n_k1 >= 1;
}

double ScanAxis::value(int index) const {
  if (samples <= 1) return min;
  return min + (max - min) * static_cast<double>(index) / static_cast<double>(samples - 1);
}

ScanCell evaluate_cell(const ModelSpec& model, const Params& gamma_i, const Params& gamma_f,
                       const ScanOptions& options) {
  ScanCell cell;
  if (model.is_critical) {
    if (model.is_critical(gamma_f)) {
      cell.status = CellStatus::Critical;
      cell.message = "post-quench parameters on a critical line";
      return cell;
    }
    if (model.is_critical(gamma_i)) {
      cell.status = CellStatus::Critical;
      cell.message = "pre-quench parameters on a critical line";
      return cell;
    }
  }
  try {
    const ModeReport report = analyze_modes(model, gamma_i, gamma_f, options.resolution);
    CellSummary summary;
    summary.n_kc = report.n_kc;
    summary.n_k0 = report.n_k0;
    summary.n_k1 = report.n_k1;
    summary.dqpt_exists = report.n_kc > 0;
    summary.sufficient = sufficient_condition_holds(report);
    switch (options.rates) {
      case RateMode::None:
        break;
      case RateMode::FiniteSize: {
        const QuenchSpec q(model, gamma_i, gamma_f, KGrid::periodic(options.system_size));
        summary.lbar_rate = lbar_rate_function(q);
        summary.alpha_rate = fidelity_decay_rate(q);
        break;
      }
      case RateMode::Thermodynamic: {
        ThermodynamicOptions tl = options.thermodynamic;
        tl.resolution = options.resolution;
        summary.lbar_rate = RateValue::finite(lbar_rate_thermodynamic(model, gamma_i, gamma_f, tl));
        const double alpha = fidelity_decay_rate_thermodynamic(model, gamma_i, gamma_f, tl);
        summary.alpha_rate = std::isinf(alpha) ? RateValue::infinity() : RateValue::finite(alpha);
        break;
      }
    }
    cell.summary = summary;
    if (!report.notes.empty()) cell.message = report.notes.front();
  } catch (const GapClosed& e) {
    cell.status = CellStatus::Critical;
    cell.message = e.what();
  } catch (const CriticalBoundary& e) {
    cell.status = CellStatus::Critical;
    cell.message = e.what();
  } catch (const std::exception& e) {
    cell.status = CellStatus::Failed;
    cell.message = e.what();
  }
  return cell;
}

ScanResult scan_phase_diagram(const ModelSpec& model, const Params& gamma_i, const ScanAxis& axis1,
                              const ScanAxis& axis2, const ScanOptions& options) {
  model.check_arity(gamma_i, "gamma_i");
  if (axis1.samples < 1 || axis2.samples < 1) throw DomainError("scan axes need at least one sample");
  for (const auto* axis : {&axis1, &axis2}) {
    if (axis->parameter >= model.arity()) throw DomainError("scan axis parameter out of range");
    if (!std::isfinite(axis->min) || !std::isfinite(axis->max)) {
      throw DomainError("scan ranges must be finite");
    }
  }
  const Params base = options.base_gamma_f.value_or(gamma_i);
  model.check_arity(base, "base gamma_f");

  ScanResult result{axis1, axis2, {}};
  result.cells.resize(static_cast<std::size_t>(axis1.samples) * axis2.samples);

  std::atomic<int> next_row{0};
  const auto worker = [&] {
    for (int i1 = next_row++; i1 < axis1.samples; i1 = next_row++) {
      for (int i2 = 0; i2 < axis2.samples; ++i2) {
        Params gf = base;
        gf[axis1.parameter] = axis1.value(i1);
        gf[axis2.parameter] = axis2.value(i2);
        ScanCell cell = evaluate_cell(model, gamma_i, gf, options);
        cell.value1 = gf[axis1.parameter];
        cell.value2 = gf[axis2.parameter];
        result.cells[static_cast<std::size_t>(i1) * axis2.samples + i2] = std::move(cell);
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, axis1.samples));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return result;
}

}  // namespace qfid
