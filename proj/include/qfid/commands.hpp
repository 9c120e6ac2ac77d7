#pragma once

// Subcommands of the qfid tool. Each command first builds every output table
// in memory and only then writes files, so a failing run leaves no partial
// output behind.

#include <iosfwd>
#include <string>
#include <vector>

#include "qfid/config.hpp"
#include "qfid/table.hpp"

namespace qfid {

enum ExitCode : int { kExitOk = 0, kExitComputation = 1, kExitValidation = 2 };

struct NamedTable {
  std::string stem;
  Table table;
};

/// `loschmidt` (t, echo, lambda), `modes` (k, source, lbar, fq, class) and
/// `summary`. Needs gamma_f and system.size.
std::vector<NamedTable> quench_tables(const RunConfig& config);

/// `scan` with one record per cell, plus `scan_axes` naming the parameters
/// behind param1 / param2.
std::vector<NamedTable> scan_tables(const RunConfig& config, unsigned threads);

/// `roots` (kind, k, fq, lbar) and `mode_counts`.
std::vector<NamedTable> modes_tables(const RunConfig& config);

struct VerifyOutcome {
  std::vector<NamedTable> tables;
  bool pass = false;
};

VerifyOutcome verify_tables(const RunConfig& config);

struct DemoOptions {
  int system_size = 30;
  /// Samples per axis of the 2D maps.
  int grid = 201;
  /// Samples along the eta_f = -2 line.
  int line_samples = 601;
  /// Momentum samples of the density maps and fidelity curves.
  int k_samples = 241;
  int resolution = 4096;
};

/// Data behind the six figures for gamma_i = (-2, 0.8) and the eta_f = -2 line.
std::vector<NamedTable> xy_demo_tables(const DemoOptions& options, unsigned threads);

/// Creates `directory` if needed and writes every table.
void write_tables(const std::vector<NamedTable>& tables, const std::filesystem::path& directory,
                  OutputFormat format);

/// Thread count from QFID_THREADS; falls back to the hardware concurrency.
unsigned thread_count_from_env();

/// Full command-line entry point. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfid
