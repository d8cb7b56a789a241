#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

namespace ltk::cli {

enum class Mode { rational, padic };

struct RunConfig {
  std::string subcommand;
  nlohmann::json input = nlohmann::json::object();
  Mode mode = Mode::rational;
  int precision = 30;
  std::optional<int> trunc;
  int jobs = 1;
};

struct RunResult {
  int exit_code = 0;  // 0 pass, 2 input error, 3 internal consistency failure
  nlohmann::json report;
};

const std::vector<std::string>& subcommands();

RunResult run(const RunConfig& config);

/// Parses text as JSON; a syntax error becomes a schema error report.
RunResult run_text(RunConfig config, const std::string& text);

}  // namespace ltk::cli
