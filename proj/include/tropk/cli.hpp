#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tropk/io.hpp"

namespace tropk::cli {

enum class ExitCode : int { ok = 0, precondition = 1, input = 2 };

const std::vector<std::string>& commands();

struct RunConfig {
  std::string command;
  std::string input_path;
  /// Empty writes JSON to stdout.
  std::string output_path;
  /// Empty skips the CSV artifact.
  std::string csv_path;
  std::uint64_t seed = 0;
  std::optional<double> tol;
};

struct Outcome {
  ExitCode code = ExitCode::ok;
  io::json result;
  /// CSV rendering of the command's grid function, if it has one.
  std::optional<std::string> csv;
};

/// Pure entry point: never throws, maps every failure to an exit code and
/// a JSON diagnosis ({"error", "message", "pointer"?}).
Outcome execute(const std::string& command, const io::json& input, std::uint64_t seed = 0,
                std::optional<double> tol = std::nullopt);

/// Reads the input file, runs the command and writes the artifacts.
int run(const RunConfig& config);

}  // namespace tropk::cli
