#include "qfid/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qfid/errors.hpp"

namespace qfid {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line; }

void reject_unknown(const YAML::Node& node, const std::string& prefix,
                    const std::set<std::string>& allowed) {
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    if (!allowed.contains(key)) {
      throw ConfigError(prefix + key, "unknown key", line_of(entry.first));
    }
  }
}

YAML::Node require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) throw ConfigError(field, "expected a mapping", line_of(node));
  return node;
}

double read_double(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field, "expected a number", line_of(node));
  const std::string raw = node.Scalar();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
    throw ConfigError(field, "expected a number, got '" + raw + "'", line_of(node));
  }
  if (!std::isfinite(value)) throw ConfigError(field, "must be finite", line_of(node));
  return value;
}

long long read_integer(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field, "expected an integer", line_of(node));
  const std::string raw = node.Scalar();
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
    throw ConfigError(field, "expected an integer, got '" + raw + "'", line_of(node));
  }
  return value;
}

int read_int(const YAML::Node& node, const std::string& field) {
  const long long v = read_integer(node, field);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(field, "integer out of range", line_of(node));
  }
  return static_cast<int>(v);
}

bool read_bool(const YAML::Node& node, const std::string& field) {
  if (node.IsScalar()) {
    const std::string& raw = node.Scalar();
    if (raw == "true") return true;
    if (raw == "false") return false;
  }
  throw ConfigError(field, "expected true or false", line_of(node));
}

std::string read_string(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field, "expected a string", line_of(node));
  return node.Scalar();
}

Params read_params(const YAML::Node& node, const ModelSpec& model, const std::string& field) {
  Params out;
  if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(read_double(node[i], field + "[" + std::to_string(i) + "]"));
    }
    if (out.size() != model.arity()) {
      throw ConfigError(field,
                        "model '" + model.name + "' takes " + std::to_string(model.arity()) +
                            " parameters, got " + std::to_string(out.size()),
                        line_of(node));
    }
    return out;
  }
  if (node.IsMap()) {
    out.assign(model.arity(), 0.0);
    std::vector<bool> seen(model.arity(), false);
    for (const auto& entry : node) {
      const auto name = entry.first.as<std::string>();
      std::size_t index = 0;
      try {
        index = model.parameter_index(name);
      } catch (const DomainError&) {
        throw ConfigError(field + "." + name,
                          "model '" + model.name + "' has no such parameter",
                          line_of(entry.first));
      }
      out[index] = read_double(entry.second, field + "." + name);
      seen[index] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) {
        throw ConfigError(field + "." + model.parameter_names[i], "missing", line_of(node));
      }
    }
    return out;
  }
  throw ConfigError(field, "expected a list or a mapping of parameters", line_of(node));
}

AxisConfig read_axis(const YAML::Node& node, const std::string& field) {
  require_map(node, field);
  reject_unknown(node, field + ".", {"param", "min", "max", "samples"});
  for (const char* key : {"param", "min", "max", "samples"}) {
    if (!node[key]) throw ConfigError(field + "." + key, "missing", line_of(node));
  }
  return {read_string(node["param"], field + ".param"), read_double(node["min"], field + ".min"),
          read_double(node["max"], field + ".max"), read_int(node["samples"], field + ".samples")};
}

const ModelSpec& model_for(const std::string& name, const std::string& field, int line) {
  try {
    return find_model(name);
  } catch (const DomainError&) {
    throw ConfigError(field, "unknown model '" + name + "'", line);
  }
}

void check_arity(const ModelSpec& model, const Params& p, const std::string& field) {
  if (p.size() != model.arity()) {
    throw ConfigError(field, "model '" + model.name + "' takes " + std::to_string(model.arity()) +
                                 " parameters, got " + std::to_string(p.size()));
  }
  for (double v : p) {
    if (!std::isfinite(v)) throw ConfigError(field, "values must be finite");
  }
}

void check_finite(double v, const std::string& field) {
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("<document>", e.msg, e.mark.line);
  }
  RunConfig c;
  if (root.IsNull()) return c;
  require_map(root, "<document>");
  reject_unknown(root, "", {"model", "gamma_i", "gamma_f", "scan", "system", "time", "resolution",
                            "output", "verify"});

  if (root["model"]) c.model = read_string(root["model"], "model");
  const ModelSpec& model =
      model_for(c.model, "model", root["model"] ? line_of(root["model"]) : -1);

  if (root["gamma_i"]) c.gamma_i = read_params(root["gamma_i"], model, "gamma_i");
  if (root["gamma_f"]) c.gamma_f = read_params(root["gamma_f"], model, "gamma_f");

  if (const auto scan = root["scan"]) {
    require_map(scan, "scan");
    reject_unknown(scan, "scan.", {"axis1", "axis2"});
    if (scan["axis1"]) c.axis1 = read_axis(scan["axis1"], "scan.axis1");
    if (scan["axis2"]) c.axis2 = read_axis(scan["axis2"], "scan.axis2");
  }
  if (const auto sys = root["system"]) {
    require_map(sys, "system");
    reject_unknown(sys, "system.", {"size", "thermodynamic_limit"});
    if (sys["size"]) c.system_size = read_int(sys["size"], "system.size");
    if (sys["thermodynamic_limit"]) {
      c.thermodynamic_limit = read_bool(sys["thermodynamic_limit"], "system.thermodynamic_limit");
    }
  }
  if (const auto time = root["time"]) {
    require_map(time, "time");
    reject_unknown(time, "time.", {"start", "stop", "samples"});
    if (time["start"]) c.time.start = read_double(time["start"], "time.start");
    if (time["stop"]) c.time.stop = read_double(time["stop"], "time.stop");
    if (time["samples"]) c.time.samples = read_int(time["samples"], "time.samples");
  }
  if (const auto res = root["resolution"]) {
    require_map(res, "resolution");
    reject_unknown(res, "resolution.", {"k_samples"});
    if (res["k_samples"]) c.k_samples = read_int(res["k_samples"], "resolution.k_samples");
  }
  if (const auto out = root["output"]) {
    require_map(out, "output");
    reject_unknown(out, "output.", {"path", "format"});
    if (out["path"]) c.output_path = read_string(out["path"], "output.path");
    if (out["format"]) c.format = parse_format(read_string(out["format"], "output.format"),
                                               "output.format");
  }
  if (const auto v = root["verify"]) {
    require_map(v, "verify");
    reject_unknown(v, "verify.", {"seed", "trials"});
    if (v["seed"]) {
      const long long seed = read_integer(v["seed"], "verify.seed");
      if (seed < 0) throw ConfigError("verify.seed", "must be non-negative", line_of(v["seed"]));
      c.seed = static_cast<std::uint64_t>(seed);
    }
    if (v["trials"]) {
      const int trials = read_int(v["trials"], "verify.trials");
      if (trials < 1) throw ConfigError("verify.trials", "must be positive", line_of(v["trials"]));
      c.trials = static_cast<std::size_t>(trials);
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

Params parse_parameter_list(const std::string& text, const ModelSpec& model,
                            const std::string& field) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) items.push_back(item);
  const bool named = !items.empty() && items.front().find('=') != std::string::npos;
  YAML::Node node;
  for (const auto& item : items) {
    if (named) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError(field, "mixes named and positional values");
      node[item.substr(0, eq)] = item.substr(eq + 1);
    } else {
      node.push_back(item);
    }
  }
  return read_params(node, model, field);
}

AxisConfig parse_axis(const std::string& text, const std::string& field) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 4) throw ConfigError(field, "expected param:min:max:samples");
  return {parts[0], read_double(YAML::Node(parts[1]), field + ".min"),
          read_double(YAML::Node(parts[2]), field + ".max"),
          read_int(YAML::Node(parts[3]), field + ".samples")};
}

OutputFormat parse_format(const std::string& text, const std::string& field) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  if (text == "both") return OutputFormat::Both;
  throw ConfigError(field, "expected csv, json or both, got '" + text + "'");
}

void validate(const RunConfig& c, RunKind kind) {
  const ModelSpec& model = model_for(c.model, "model", -1);
  if (!c.gamma_i) throw ConfigError("gamma_i", "missing required field");
  check_arity(model, *c.gamma_i, "gamma_i");

  if (kind != RunKind::Any) {
    if (c.is_single_quench() && c.is_scan()) {
      throw ConfigError("gamma_f", "give either gamma_f or scan, not both");
    }
    if (kind == RunKind::SingleQuench && !c.is_single_quench()) {
      throw ConfigError("gamma_f", "missing required field");
    }
    if (kind == RunKind::Scan && !c.is_scan()) {
      throw ConfigError("scan", "missing required field");
    }
  }
  if (kind == RunKind::Scan) {
    if (!c.axis1) throw ConfigError("scan.axis1", "missing required field");
    if (!c.axis2) throw ConfigError("scan.axis2", "missing required field");
    const std::pair<const AxisConfig*, const char*> axes[] = {{&*c.axis1, "scan.axis1"},
                                                              {&*c.axis2, "scan.axis2"}};
    for (const auto& [axis, name] : axes) {
      try {
        model.parameter_index(axis->parameter);
      } catch (const DomainError&) {
        throw ConfigError(std::string(name) + ".param",
                          "model '" + model.name + "' has no parameter '" + axis->parameter + "'");
      }
      check_finite(axis->min, std::string(name) + ".min");
      check_finite(axis->max, std::string(name) + ".max");
      if (axis->samples < 1) throw ConfigError(std::string(name) + ".samples", "must be positive");
      if (axis->max < axis->min) throw ConfigError(std::string(name) + ".max", "below min");
    }
    if (c.axis1->parameter == c.axis2->parameter) {
      throw ConfigError("scan.axis2.param", "both axes scan the same parameter");
    }
  }
  if (c.gamma_f) check_arity(model, *c.gamma_f, "gamma_f");
  if (c.system_size) {
    if (*c.system_size <= 0 || *c.system_size % 2 != 0) {
      throw ConfigError("system.size", "must be even and positive");
    }
  }
  check_finite(c.time.start, "time.start");
  check_finite(c.time.stop, "time.stop");
  if (c.time.samples < 1) throw ConfigError("time.samples", "must be positive");
  if (c.time.stop < c.time.start) throw ConfigError("time.stop", "below time.start");
  if (c.k_samples < 16) throw ConfigError("resolution.k_samples", "must be at least 16");
}

}  // namespace qfid
