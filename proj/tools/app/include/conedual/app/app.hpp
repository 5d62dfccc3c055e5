#pragma once

// Batch front-end: JSON run configs in, JSON report and CSV table out.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "conedual/seqcore.hpp"

namespace conedual::app {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfigError = 1, kExitSoundnessFailure = 2 };

// Malformed or schema-invalid configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<double> eps_pd;
  bool dump_lp = false;
};

/// Sequence literal: {"dim": d, "entries": {"0": 1.0, "1": 0.5}} with keys
/// "n1,...,nd"; either n or -n may be given. For d = 1 the shortcut
/// {"coefficients": [f(0), f(1), ...]} is also accepted.
SymmetricSequence parse_sequence(const nlohmann::json& literal);
nlohmann::json sequence_to_json(const SymmetricSequence& s);

// Integer, "1,0" string, or [1, 0] array.
MultiIndex parse_index(const nlohmann::json& j, int dim);

nlohmann::json parse_config_text(const std::string& text);
nlohmann::json load_config(const std::filesystem::path& path);

struct RunOutput {
  nlohmann::json report;  // everything except "timing" is deterministic
  std::string csv;
  int exit_code = kExitOk;
};

/// Runs the command described by `config`. Throws ConfigError for invalid
/// configurations; soundness and solver failures are reported in the
/// returned report with exit code 2.
RunOutput execute(const nlohmann::json& config, const Overrides& overrides,
                  const std::filesystem::path& lp_dump_dir = {});

// The report with the "timing" object removed.
nlohmann::json deterministic_part(const nlohmann::json& report);

/// Loads the config, runs it and writes report.json and bracket.csv into
/// out_dir. Returns the process exit code; config errors write a structured
/// record to stderr and no report.
int run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
        const Overrides& overrides);

// Applies CONEDUAL_LOG (trace, debug, info, warn, error, off).
void configure_logging();

}  // namespace conedual::app
