#pragma once

// Run configuration for the command-line front end. A run is described by
// one YAML file; command-line flags are applied on top of it before
// validation.
//
//   model: xy
//   gamma_i: {h: -2, eta: 0.8}      # or a list in parameter order
//   gamma_f: [0, -2]                # single quench, or ...
//   scan:                           # ... a parameter plane
//     axis1: {param: h, min: -3, max: 3, samples: 201}
//     axis2: {param: eta, min: -3, max: 3, samples: 201}
//   system: {size: 30, thermodynamic_limit: false}
//   time: {start: 0, stop: 5, samples: 201}
//   resolution: {k_samples: 4096}
//   output: {path: out, format: csv}   # csv | json | both
//   verify: {seed: 20240601, trials: 1000}

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qfid/model.hpp"

namespace qfid {

enum class OutputFormat { Csv, Json, Both };

struct AxisConfig {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int samples = 1;
};

struct TimeConfig {
  double start = 0.0;
  double stop = 5.0;
  int samples = 201;
};

struct RunConfig {
  std::string model = "xy";
  std::optional<Params> gamma_i;
  std::optional<Params> gamma_f;
  std::optional<AxisConfig> axis1;
  std::optional<AxisConfig> axis2;
  std::optional<int> system_size;
  bool thermodynamic_limit = false;
  TimeConfig time;
  int k_samples = 4096;
  std::filesystem::path output_path = ".";
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 20240601;
  std::size_t trials = 1000;
  bool inject_fault = false;

  bool is_scan() const { return axis1.has_value() || axis2.has_value(); }
  bool is_single_quench() const { return gamma_f.has_value(); }
};

/// Parses YAML text. Unknown keys, wrong types and malformed values throw
/// ConfigError naming the field and its line. Parameter vectors given as
/// maps are resolved against the model named in the same document.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Parses "x,y,..." or "name=x,name=y" against `model`.
Params parse_parameter_list(const std::string& text, const ModelSpec& model,
                            const std::string& field);

/// Parses "param:min:max:samples".
AxisConfig parse_axis(const std::string& text, const std::string& field);

OutputFormat parse_format(const std::string& text, const std::string& field);

enum class RunKind { SingleQuench, Scan, Any };

/// Checks the invariants that do not depend on the command (finite numbers,
/// even L, known model and parameters, exactly one of quench or scan when
/// `kind` asks for it). Throws ConfigError.
void validate(const RunConfig& config, RunKind kind);

}  // namespace qfid
