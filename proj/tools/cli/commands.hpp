#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cli/params.hpp"
#include "cli/table.hpp"

namespace noisy_amp::cli {

struct CommandResult {
  Table table;
  /// Points that failed; the table holds NaN there.
  std::vector<std::string> errors;
};

struct Command {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  /// Throws ConfigError for inconsistent parameters before computing anything.
  std::function<CommandResult(const Params&)> run;
};

const std::vector<Command>& commands();

}  // namespace noisy_amp::cli
