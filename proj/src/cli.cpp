#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

#include "qfid/commands.hpp"
#include "qfid/errors.hpp"

namespace qfid {

namespace {

struct Overrides {
  std::string config;
  std::string model;
  std::string gamma_i;
  std::string gamma_f;
  std::optional<int> size;
  bool thermodynamic = false;
  std::optional<double> t_start;
  std::optional<double> t_stop;
  std::optional<int> t_samples;
  std::optional<int> k_samples;
  std::string axis1;
  std::string axis2;
  std::string output;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  bool inject_fault = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "YAML run configuration");
  cmd->add_option("--model", o.model, "Registered model name");
  cmd->add_option("--gamma-i", o.gamma_i, "Pre-quench parameters, e.g. -2,0.8 or h=-2,eta=0.8");
  cmd->add_option("--k-samples", o.k_samples, "Root-search grid resolution");
  cmd->add_option("-o,--output", o.output, "Output directory");
  cmd->add_option("--format", o.format, "csv, json or both");
}

RunConfig build_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.model.empty()) {
    c.model = o.model;
    try {
      find_model(c.model);
    } catch (const DomainError&) {
      throw ConfigError("model", "unknown model '" + c.model + "'");
    }
  }
  const ModelSpec& model = find_model(c.model);
  if (!o.gamma_i.empty()) c.gamma_i = parse_parameter_list(o.gamma_i, model, "gamma_i");
  if (!o.gamma_f.empty()) c.gamma_f = parse_parameter_list(o.gamma_f, model, "gamma_f");
  if (o.size) c.system_size = *o.size;
  if (o.thermodynamic) c.thermodynamic_limit = true;
  if (o.t_start) c.time.start = *o.t_start;
  if (o.t_stop) c.time.stop = *o.t_stop;
  if (o.t_samples) c.time.samples = *o.t_samples;
  if (o.k_samples) c.k_samples = *o.k_samples;
  if (!o.axis1.empty()) c.axis1 = parse_axis(o.axis1, "scan.axis1");
  if (!o.axis2.empty()) c.axis2 = parse_axis(o.axis2, "scan.axis2");
  if (!o.output.empty()) c.output_path = o.output;
  if (!o.format.empty()) c.format = parse_format(o.format, "output.format");
  if (o.seed) c.seed = *o.seed;
  if (o.trials) {
    if (*o.trials < 1) throw ConfigError("verify.trials", "must be positive");
    c.trials = *o.trials;
  }
  if (o.inject_fault) c.inject_fault = true;
  return c;
}

void report_written(const std::vector<NamedTable>& tables, const RunConfig& c, std::ostream& out) {
  for (const auto& t : tables) {
    out << "wrote " << (c.output_path / t.stem).string() << " (" << t.table.rows.size()
        << " rows)\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quench fidelity and dynamical phase transitions in two-band models", "qfid"};
  app.require_subcommand(1);
  Overrides o;
  DemoOptions demo;

  auto* quench = app.add_subcommand("quench", "Loschmidt echo and per-mode table of one quench");
  add_common(quench, o);
  quench->add_option("--gamma-f", o.gamma_f, "Post-quench parameters");
  quench->add_option("-L,--size", o.size, "Chain length (even)");
  quench->add_flag("--thermodynamic", o.thermodynamic, "Add thermodynamic-limit rates");
  quench->add_option("--t-start", o.t_start);
  quench->add_option("--t-stop", o.t_stop);
  quench->add_option("--t-samples", o.t_samples);

  auto* scan = app.add_subcommand("scan", "Mode counts and rates over a post-quench plane");
  add_common(scan, o);
  scan->add_option("--axis1", o.axis1, "param:min:max:samples");
  scan->add_option("--axis2", o.axis2, "param:min:max:samples");
  scan->add_option("-L,--size", o.size, "Chain length for finite-size rates");
  scan->add_flag("--thermodynamic", o.thermodynamic, "Thermodynamic-limit rates");

  auto* modes = app.add_subcommand("modes", "Located k_c, k_0 and k_1 modes of one quench");
  add_common(modes, o);
  modes->add_option("--gamma-f", o.gamma_f, "Post-quench parameters");

  auto* verify = app.add_subcommand("verify", "Run the oracle property suite");
  verify->add_option("-c,--config", o.config, "YAML run configuration");
  verify->add_option("--seed", o.seed, "Generator seed");
  verify->add_option("--trials", o.trials, "Base trial count per property");
  verify->add_option("--k-samples", o.k_samples, "Root-search grid resolution");
  verify->add_flag("--inject-fault", o.inject_fault, "Perturb the echo relation (test hook)");
  verify->add_option("-o,--output", o.output, "Output directory");
  verify->add_option("--format", o.format, "csv, json or both");

  auto* xy_demo = app.add_subcommand("xy-demo", "Datasets behind the XY-chain figures");
  xy_demo->add_option("-o,--output", o.output, "Output directory");
  xy_demo->add_option("--format", o.format, "csv, json or both");
  xy_demo->add_option("-L,--size", demo.system_size, "Chain length for the finite-size data");
  xy_demo->add_option("--grid", demo.grid, "Samples per axis of the 2D maps");
  xy_demo->add_option("--line-samples", demo.line_samples, "Samples along eta_f = -2");
  xy_demo->add_option("--k-samples", demo.k_samples, "Momentum samples of the density maps");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  RunConfig config;
  unsigned threads = 1;
  try {
    config = build_config(o);
    threads = thread_count_from_env();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    std::vector<NamedTable> tables;
    int code = kExitOk;
    if (quench->parsed()) {
      tables = quench_tables(config);
    } else if (scan->parsed()) {
      tables = scan_tables(config, threads);
    } else if (modes->parsed()) {
      tables = modes_tables(config);
    } else if (verify->parsed()) {
      VerifyOutcome v = verify_tables(config);
      for (const auto& row : v.tables.front().table.rows) {
        out << (std::get<bool>(row[1]) ? "PASS " : "FAIL ") << std::get<std::string>(row[0])
            << "  max_deviation=" << format_double(std::get<double>(row[2]))
            << "  tolerance=" << format_double(std::get<double>(row[3])) << "\n";
      }
      out << (v.pass ? "all properties passed\n" : "property suite FAILED\n");
      tables = std::move(v.tables);
      code = v.pass ? kExitOk : kExitComputation;
    } else if (xy_demo->parsed()) {
      tables = xy_demo_tables(demo, threads);
    }
    write_tables(tables, config.output_path, config.format);
    report_written(tables, config, out);
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace qfid
