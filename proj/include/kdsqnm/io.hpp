#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kdsqnm/solver.hpp"

namespace kdsqnm {

enum class OutputFormat { csv, json };

/// Settings of one CLI run: parameters, mode selectors, solver knobs, output.
/// Flags override values read from an optional `key = value` config file.
struct RunConfig {
  double M0 = 1.0;
  double Lambda = 0.03;
  double a = 0.0;
  std::vector<double> a_range;  // sweep grid; empty outside `sweep`
  int m = 0;
  std::vector<int> l_values;    // one or more l
  std::optional<int> k;         // nullopt = all |k| <= l
  int order_J = 4;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;         // empty = stdout
  bool history = false;
  int jobs = 1;
};

/// Parse "start:step:stop" into an inclusive grid (endpoint within half a step).
std::vector<double> parse_range(const std::string& text);

/// Parse "lo:hi" or a single integer.
std::vector<int> parse_int_range(const std::string& text);

/// Stable CSV schema: header plus one row per mode, floats at 17 significant
/// digits so a round-trip read reproduces the values bit for bit.
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const QnmResult& r);

/// Rows sorted by (m, l, k, a); the writer itself is single threaded.
void sort_results(std::vector<QnmResult>& rows);

/// JSON array of mode objects (schema shipped in schemas/qnm_result.schema.json).
std::string results_to_json(const std::vector<QnmResult>& rows);

/// JSON array of branch objects for sweep output.
std::string branches_to_json(const std::vector<ContinuationBranch>& branches);

/// Join flag tokens with ';' for the CSV flags column.
std::string join_flags(const std::vector<std::string>& flags);

}  // namespace kdsqnm
