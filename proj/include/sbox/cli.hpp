#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sbox/field.hpp"
#include "sbox/spectra.hpp"

namespace sbox {

// Everything one CLI invocation needs, independent of how it was spelled on
// the command line. Operation-specific arguments live in `params`.
struct RunConfig {
  std::string operation;  // e.g. "spectra fbct", "verify theorem", "solve affine"
  std::string field;      // canonical field spec, empty when unused
  std::string map;        // "power:<d>" or "table:<path>", empty when unused
  std::string csv_path;
  std::string json_path;
  unsigned threads = 1;
  std::uint64_t max_elements = kDefaultMaxElements;
  std::map<std::string, std::string> params;

  // Stable single-line form; parse_run_config(c.canonical()) == c.
  std::string canonical() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_run_config(const std::string& canonical);

// One element encoding per line, in enumeration order. Blank lines and
// lines starting with '#' are ignored.
TableMap load_table_map(const Field& field, const std::filesystem::path& path);

// Exit codes: 0 success, 1 verification mismatch (the report is written
// first), 2 usage or configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Runs an already parsed configuration.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace sbox
