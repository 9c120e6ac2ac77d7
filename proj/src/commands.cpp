#include "qfid/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <thread>

#include "qfid/errors.hpp"
#include "qfid/modes.hpp"
#include "qfid/oracle.hpp"
#include "qfid/quench.hpp"
#include "qfid/xy_model.hpp"

namespace qfid {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double start, double stop, int samples) {
  std::vector<double> out(samples);
  for (int i = 0; i < samples; ++i) {
    out[i] = samples == 1 ? start : start + (stop - start) * i / (samples - 1);
  }
  return out;
}

// Midpoints of `samples` equal cells of (0, pi); never hits k = 0 or pi.
std::vector<double> open_momenta(int samples) {
  std::vector<double> out(samples);
  for (int i = 0; i < samples; ++i) out[i] = kPi * (i + 0.5) / samples;
  return out;
}

TableValue rate_value(const std::optional<RateValue>& r) {
  if (!r) return std::monostate{};
  return r->as_double();
}

TableValue optional_value(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

TableValue integer(std::int64_t v) { return v; }

RateMode rate_mode_for(const RunConfig& c) {
  if (c.thermodynamic_limit) return RateMode::Thermodynamic;
  if (c.system_size) return RateMode::FiniteSize;
  return RateMode::None;
}

ScanOptions scan_options_for(const RunConfig& c, unsigned threads) {
  ScanOptions o;
  o.resolution = c.k_samples;
  o.rates = rate_mode_for(c);
  o.system_size = c.system_size.value_or(o.system_size);
  o.threads = threads;
  return o;
}

const std::vector<std::string> kCellColumns = {"status", "n_kc",     "n_k0",       "n_k1",
                                               "dqpt_exists", "lbar_rate", "alpha_rate",
                                               "message"};

std::vector<TableValue> cell_fields(const ScanCell& cell) {
  std::vector<TableValue> row{std::string(to_string(cell.status))};
  if (cell.summary) {
    const CellSummary& s = *cell.summary;
    row.insert(row.end(), {integer(s.n_kc), integer(s.n_k0), integer(s.n_k1), s.dqpt_exists,
                           rate_value(s.lbar_rate), rate_value(s.alpha_rate)});
  } else {
    row.insert(row.end(), 6, std::monostate{});
  }
  row.push_back(cell.message);
  return row;
}

std::string join_params(const Params& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += format_double(p[i]);
  }
  return out;
}

const ModelSpec& model_of(const RunConfig& c) { return find_model(c.model); }

// Values of a line series that may have holes; the derivative uses central
// differences where both neighbours exist and one-sided ones otherwise.
std::vector<std::optional<double>> line_derivative(const std::vector<double>& x,
                                                   const std::vector<std::optional<double>>& y) {
  std::vector<std::optional<double>> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!y[i] || !std::isfinite(*y[i])) continue;
    const bool left = i > 0 && y[i - 1] && std::isfinite(*y[i - 1]);
    const bool right = i + 1 < y.size() && y[i + 1] && std::isfinite(*y[i + 1]);
    if (left && right) {
      out[i] = (*y[i + 1] - *y[i - 1]) / (x[i + 1] - x[i - 1]);
    } else if (right) {
      out[i] = (*y[i + 1] - *y[i]) / (x[i + 1] - x[i]);
    } else if (left) {
      out[i] = (*y[i] - *y[i - 1]) / (x[i] - x[i - 1]);
    }
  }
  return out;
}

}  // namespace

std::vector<NamedTable> quench_tables(const RunConfig& c) {
  validate(c, RunKind::SingleQuench);
  if (!c.system_size) throw ConfigError("system.size", "missing required field");
  const ModelSpec& model = model_of(c);
  const Params& gi = *c.gamma_i;
  const Params& gf = *c.gamma_f;
  const QuenchSpec q(model, gi, gf, KGrid::periodic(*c.system_size));

  const auto times = linspace(c.time.start, c.time.stop, c.time.samples);
  const LoschmidtSeries series = loschmidt_total(q, times);
  Table echo{{"t", "echo", "lambda"}, {}};
  if (c.thermodynamic_limit) echo.columns.push_back("lambda_thermodynamic");
  ThermodynamicOptions tl;
  tl.resolution = c.k_samples;
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::vector<TableValue> row{times[j], series.total[j], series.rate[j].as_double()};
    if (c.thermodynamic_limit) {
      row.push_back(loschmidt_rate_thermodynamic(model, gi, gf, times[j], tl));
    }
    echo.add_row(std::move(row));
  }

  struct ModeRow {
    double k;
    int order;
    std::string source;
    double lbar;
    double fq;
    std::string cls;
  };
  std::vector<ModeRow> rows;
  for (double k : q.kgrid().momenta()) {
    const DVector di = q.d_initial(k);
    const DVector df = q.d_final(k);
    const double fq = quench_fidelity_k(di, df);
    rows.push_back({k, 1, "grid", lbar_k(di, df), fq, to_string(classify_fidelity(fq))});
  }
  const ModeReport report = analyze_modes(model, gi, gf, c.k_samples);
  const auto add_roots = [&](const std::vector<double>& roots, ModeClass cls) {
    for (double k : roots) {
      const DVector di = model.at(gi, k);
      const DVector df = model.at(gf, k);
      rows.push_back({k, 2, "root", lbar_k(di, df), quench_fidelity_k(di, df), to_string(cls)});
    }
  };
  add_roots(report.kc_roots, ModeClass::Kc);
  add_roots(report.k0_roots, ModeClass::K0);
  add_roots(report.k1_roots, ModeClass::K1);
  if (report.boundary) {
    for (const auto& [k, f] : {std::pair{0.0, report.boundary->f0},
                               std::pair{kPi, report.boundary->fpi}}) {
      const double fq = f;
      rows.push_back({k, 0, "boundary", relation_lbar_from_fidelity(fq), fq,
                      to_string(f ? ModeClass::K1 : ModeClass::K0)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ModeRow& a, const ModeRow& b) {
    return a.k != b.k ? a.k < b.k : a.order < b.order;
  });
  Table modes{{"k", "source", "lbar", "fq", "class"}, {}};
  for (const auto& r : rows) modes.add_row({r.k, r.source, r.lbar, r.fq, r.cls});

  Table summary{{"model", "gamma_i", "gamma_f", "system_size", "rate_mode"}, {}};
  summary.columns.insert(summary.columns.end(), kCellColumns.begin(), kCellColumns.end());
  const ScanCell cell = evaluate_cell(model, gi, gf, scan_options_for(c, 1));
  std::vector<TableValue> srow{c.model, join_params(gi), join_params(gf),
                               integer(*c.system_size),
                               std::string(c.thermodynamic_limit ? "thermodynamic" : "finite")};
  const auto fields = cell_fields(cell);
  srow.insert(srow.end(), fields.begin(), fields.end());
  summary.add_row(std::move(srow));

  return {{"loschmidt", std::move(echo)}, {"modes", std::move(modes)},
          {"summary", std::move(summary)}};
}

std::vector<NamedTable> scan_tables(const RunConfig& c, unsigned threads) {
  validate(c, RunKind::Scan);
  const ModelSpec& model = model_of(c);
  const auto axis = [&](const AxisConfig& a) {
    return ScanAxis{model.parameter_index(a.parameter), a.min, a.max, a.samples};
  };
  const ScanResult result =
      scan_phase_diagram(model, *c.gamma_i, axis(*c.axis1), axis(*c.axis2),
                         scan_options_for(c, threads));

  Table scan{{"param1", "param2"}, {}};
  scan.columns.insert(scan.columns.end(), kCellColumns.begin(), kCellColumns.end());
  for (const ScanCell& cell : result.cells) {
    std::vector<TableValue> row{cell.value1, cell.value2};
    const auto fields = cell_fields(cell);
    row.insert(row.end(), fields.begin(), fields.end());
    scan.add_row(std::move(row));
  }
  Table axes{{"axis", "param", "min", "max", "samples"}, {}};
  axes.add_row({std::string("param1"), c.axis1->parameter, c.axis1->min, c.axis1->max,
                integer(c.axis1->samples)});
  axes.add_row({std::string("param2"), c.axis2->parameter, c.axis2->min, c.axis2->max,
                integer(c.axis2->samples)});
  return {{"scan", std::move(scan)}, {"scan_axes", std::move(axes)}};
}

std::vector<NamedTable> modes_tables(const RunConfig& c) {
  validate(c, RunKind::SingleQuench);
  const ModelSpec& model = model_of(c);
  const Params& gi = *c.gamma_i;
  const Params& gf = *c.gamma_f;
  const ModeReport report = analyze_modes(model, gi, gf, c.k_samples);

  Table roots{{"kind", "k", "fq", "lbar"}, {}};
  const auto add = [&](const std::vector<double>& ks, const char* kind) {
    for (double k : ks) {
      const DVector di = model.at(gi, k);
      const DVector df = model.at(gf, k);
      roots.add_row({std::string(kind), k, quench_fidelity_k(di, df), lbar_k(di, df)});
    }
  };
  add(report.kc_roots, "kc");
  add(report.k0_roots, "k0");
  add(report.k1_roots, "k1");
  if (report.boundary) {
    const double f0 = report.boundary->f0;
    const double fpi = report.boundary->fpi;
    roots.add_row({std::string("boundary"), 0.0, f0, relation_lbar_from_fidelity(f0)});
    roots.add_row({std::string("boundary"), kPi, fpi, relation_lbar_from_fidelity(fpi)});
  }

  Table counts{{"n_kc", "n_k0", "n_k1", "dqpt_exists", "sufficient", "continuum",
                "resolution_warning", "notes"},
               {}};
  std::string notes;
  for (const auto& n : report.notes) notes += (notes.empty() ? "" : "; ") + n;
  counts.add_row({integer(report.n_kc), integer(report.n_k0), integer(report.n_k1),
                  report.n_kc > 0, sufficient_condition_holds(report),
                  std::string(to_string(report.continuum)), report.resolution_warning, notes});
  return {{"roots", std::move(roots)}, {"mode_counts", std::move(counts)}};
}

VerifyOutcome verify_tables(const RunConfig& c) {
  SuiteOptions options;
  options.seed = c.seed;
  options.trials = c.trials;
  options.inject_fault = c.inject_fault;
  options.resolution = c.k_samples;
  const auto reports = run_property_suite(options);

  Table t{{"property", "pass", "max_deviation", "tolerance", "trials", "seed", "witness_k",
           "witness_t", "witness_parameters"},
          {}};
  VerifyOutcome outcome;
  outcome.pass = true;
  for (const auto& r : reports) {
    outcome.pass = outcome.pass && r.pass;
    TableValue wk = std::monostate{};
    TableValue wt = std::monostate{};
    TableValue wp = std::monostate{};
    if (r.witness) {
      wk = optional_value(r.witness->k);
      wt = optional_value(r.witness->t);
      wp = join_params(r.witness->parameters);
    }
    t.add_row({std::string(to_string(r.property)), r.pass, r.max_deviation, r.tolerance,
               integer(static_cast<std::int64_t>(r.trials)), std::to_string(r.seed), wk, wt, wp});
  }
  outcome.tables.push_back({"verify_report", std::move(t)});
  return outcome;
}

std::vector<NamedTable> xy_demo_tables(const DemoOptions& o, unsigned threads) {
  if (o.system_size <= 0 || o.system_size % 2 != 0) {
    throw ConfigError("size", "must be even and positive");
  }
  for (const auto& [value, name] : {std::pair{o.grid, "grid"}, std::pair{o.line_samples, "line"},
                                    std::pair{o.k_samples, "k_samples"}}) {
    if (value < 2) throw ConfigError(name, "needs at least 2 samples");
  }
  const ModelSpec& model = xy_model();
  const XYParams pi{-2.0, 0.8};
  const double eta_line = -2.0;
  const KGrid grid = KGrid::periodic(o.system_size);
  std::vector<NamedTable> out;

  // Equilibrium phases and winding numbers over the parameter plane.
  {
    Table t{{"h", "eta", "region", "winding"}, {}};
    for (double h : linspace(-3.0, 3.0, o.grid)) {
      for (double eta : linspace(-3.0, 3.0, o.grid)) {
        const XYParams p{h, eta};
        const EquilibriumPhase phase = xy_equilibrium_phase(p);
        TableValue w = std::monostate{};
        if (!phase.is_critical()) {
          try {
            w = integer(xy_winding_number(p));
          } catch (const Error&) {
          }
        }
        t.add_row({h, eta, integer(phase.region), w});
      }
    }
    out.push_back({"fig1_equilibrium_phases", std::move(t)});
  }

  // k_c lines of the finite chain, then the k_0 / k_1 lines.
  {
    Table kc{{"m", "k", "h_f", "eta_f"}, {}};
    Table aligned{{"m", "k", "h_f", "eta_f", "class"}, {}};
    const auto hs = linspace(-3.0, 3.0, o.line_samples);
    for (std::size_t m = 0; m < grid.momenta().size(); ++m) {
      const double k = grid.momenta()[m];
      for (double hf : hs) {
        if (const auto eta = xy_kc_line_eta(pi, k, hf); eta && std::abs(*eta) <= 3.0) {
          kc.add_row({integer(static_cast<std::int64_t>(m + 1)), k, hf, *eta});
        }
        if (const auto a = xy_aligned_line_eta(pi, k, hf); a && std::abs(a->eta_f) <= 3.0) {
          aligned.add_row({integer(static_cast<std::int64_t>(m + 1)), k, hf, a->eta_f,
                           std::string(a->parallel ? "k1" : "k0")});
        }
      }
    }
    out.push_back({"fig2a_kc_lines", std::move(kc)});
    out.push_back({"fig4a_aligned_lines", std::move(aligned)});

    Table boundary{{"h_f", "f0", "fpi"}, {}};
    for (double hf : hs) {
      try {
        const auto b = xy_boundary_fidelities(pi, {hf, eta_line});
        boundary.add_row({hf, integer(b.f0), integer(b.fpi)});
      } catch (const CriticalBoundary&) {
        boundary.add_row({hf, std::monostate{}, std::monostate{}});
      }
    }
    out.push_back({"fig4a_boundary_fidelities", std::move(boundary)});
  }

  // Region maps of n_kc, n_k0 and n_k1.
  {
    ScanOptions so;
    so.resolution = o.resolution;
    so.threads = threads;
    const ScanResult r = scan_phase_diagram(model, pi.as_params(), {0, -3.0, 3.0, o.grid},
                                            {1, -3.0, 3.0, o.grid}, so);
    Table t{{"h_f", "eta_f", "status", "n_kc", "n_k0", "n_k1", "dqpt_exists"}, {}};
    for (const ScanCell& cell : r.cells) {
      std::vector<TableValue> row{cell.value1, cell.value2, std::string(to_string(cell.status))};
      if (cell.summary) {
        row.insert(row.end(), {integer(cell.summary->n_kc), integer(cell.summary->n_k0),
                               integer(cell.summary->n_k1), cell.summary->dqpt_exists});
      } else {
        row.insert(row.end(), 4, std::monostate{});
      }
      t.add_row(std::move(row));
    }
    out.push_back({"fig2b_fig4bc_region_map", std::move(t)});
  }

  // lbar_k and F^q_k over (h_f, k) on the eta_f = -2 line.
  {
    Table t{{"h_f", "k", "lbar", "fq"}, {}};
    for (double hf : linspace(-3.0, 3.0, o.k_samples)) {
      const XYParams pf{hf, eta_line};
      for (double k : open_momenta(o.k_samples)) {
        const DVector di = xy_dvector(pi, k);
        const DVector df = xy_dvector(pf, k);
        t.add_row({hf, k, lbar_k(di, df), quench_fidelity_k(di, df)});
      }
    }
    out.push_back({"fig3a_fig5a_density", std::move(t)});
  }

  // Rates and their h_f derivatives along the line.
  {
    const auto hs = linspace(-3.0, 3.0, o.line_samples);
    std::vector<std::optional<double>> lbar(hs.size());
    std::vector<std::optional<double>> alpha(hs.size());
    std::vector<TableValue> lbar_l(hs.size());
    std::vector<TableValue> alpha_l(hs.size());
    std::vector<ModeReport> reports(hs.size());
    std::vector<bool> critical(hs.size());
    ThermodynamicOptions tl;
    tl.resolution = o.resolution;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const Params gf{hs[i], eta_line};
      critical[i] = model.is_critical(gf);
      if (critical[i]) continue;
      reports[i] = analyze_modes(model, pi.as_params(), gf, o.resolution);
      lbar[i] = lbar_rate_thermodynamic(model, pi.as_params(), gf, tl);
      alpha[i] = fidelity_decay_rate_thermodynamic(model, pi.as_params(), gf, tl);
      const QuenchSpec q(model, pi.as_params(), gf, grid);
      lbar_l[i] = lbar_rate_function(q).as_double();
      alpha_l[i] = fidelity_decay_rate(q).as_double();
    }
    const auto dlbar = line_derivative(hs, lbar);
    const auto dalpha = line_derivative(hs, alpha);
    Table t3{{"h_f", "status", "n_kc", "lbar_rate", "lbar_rate_derivative", "lbar_rate_L"}, {}};
    Table t5{{"h_f", "status", "n_k0", "n_k1", "alpha_rate", "alpha_rate_derivative",
              "alpha_rate_L"},
             {}};
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (critical[i]) {
        const TableValue e = std::monostate{};
        t3.add_row({hs[i], std::string("critical"), e, e, e, e});
        t5.add_row({hs[i], std::string("critical"), e, e, e, e, e});
        continue;
      }
      t3.add_row({hs[i], std::string("ok"), integer(reports[i].n_kc), optional_value(lbar[i]),
                  optional_value(dlbar[i]), lbar_l[i]});
      t5.add_row({hs[i], std::string("ok"), integer(reports[i].n_k0), integer(reports[i].n_k1),
                  optional_value(alpha[i]), optional_value(dalpha[i]), alpha_l[i]});
    }
    out.push_back({"fig3bc_lbar_rate", std::move(t3)});
    out.push_back({"fig5bc_alpha_rate", std::move(t5)});
  }

  // The fidelity-to-echo relation and the four reference quenches on the line.
  {
    Table rel{{"fq", "lbar"}, {}};
    for (double f : linspace(0.0, 1.0, 201)) rel.add_row({f, relation_lbar_from_fidelity(f)});
    out.push_back({"fig6a_relation", std::move(rel)});

    Table curves{{"case", "h_f", "k", "fq", "lbar"}, {}};
    Table roots{{"case", "h_f", "k_c", "cos_k_c"}, {}};
    const std::pair<const char*, double> cases[] = {{"b", -2.0}, {"c", -1.1}, {"d", 0.0},
                                                    {"e", 2.0}};
    for (const auto& [label, hf] : cases) {
      const XYParams pf{hf, eta_line};
      for (double k : linspace(0.0, kPi, o.k_samples)) {
        const DVector di = xy_dvector(pi, k);
        const DVector df = xy_dvector(pf, k);
        curves.add_row({std::string(label), hf, k, quench_fidelity_k(di, df), lbar_k(di, df)});
      }
      for (double k : find_kc_roots(model, pi.as_params(), pf.as_params(), o.resolution).roots) {
        roots.add_row({std::string(label), hf, k, std::cos(k)});
      }
    }
    out.push_back({"fig6be_cases", std::move(curves)});
    out.push_back({"fig6be_kc_roots", std::move(roots)});
  }
  return out;
}

void write_tables(const std::vector<NamedTable>& tables, const std::filesystem::path& directory,
                  OutputFormat format) {
  std::filesystem::create_directories(directory);
  for (const auto& t : tables) write_table(t.table, directory, t.stem, format);
}

unsigned thread_count_from_env() {
  const char* raw = std::getenv("QFID_THREADS");
  if (raw == nullptr || *raw == '\0') return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096) {
    throw ConfigError("QFID_THREADS", std::string("expected a positive integer, got '") + raw + "'");
  }
  return static_cast<unsigned>(v);
}

}  // namespace qfid
