#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbbr/scenario.hpp"

namespace rbbr {

enum ExitCode : int { kExitOk = 0, kExitPropertyFailed = 1, kExitConfigError = 2, kExitSolverError = 3 };

/// Exit code for an error raised while running a command.
int exit_code_for(ErrorKind kind);

struct OutputFile {
  std::string name;
  std::string content;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<OutputFile> files;
  std::string summary;
};

/// Round-trippable decimal form (17 significant digits, shortest exponent form).
std::string format_number(double x);
/// RFC-4180 field quoting.
std::string csv_field(const std::string& text);

/// Trajectory CSV: t, residual, [phi_tilde], psi, distance (to the initial state).
CommandResult cmd_simulate(const Scenario& scenario, const std::optional<InitialCondition>& initial = std::nullopt);

/// One record per start plus the deduplicated equilibria (strong distance 1e-4).
CommandResult cmd_equilibrium(const Scenario& scenario, std::optional<std::size_t> starts = std::nullopt);

/// Suites: regularizers, dynamics, potential, nsd, all. Exit 1 on any FAIL.
CommandResult cmd_check(const Scenario& scenario, const std::string& suite);

/// One row per noise level, solved in descending order with warm starts.
CommandResult cmd_sweep(const Scenario& scenario, const std::optional<std::vector<double>>& eps_list = std::nullopt);

inline constexpr double kDedupDistance = 1e-4;

}  // namespace rbbr
