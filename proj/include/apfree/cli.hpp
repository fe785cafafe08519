// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace apfree::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kBudget = 3, kInvariant = 4 };

struct OutputFile {
  std::string role;
  std::string path;  // "-" for stdout
  std::string content;
};

/// Everything a command produces, held in memory until it is written.
struct Outcome {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;
  unsigned threads = 1;
  nlohmann::json timings = nlohmann::json::object();
  nlohmann::json inputs = nlohmann::json::array();
  std::vector<OutputFile> outputs;  // the report is always outputs[0]
  std::string manifest_path;
  int exit_code = kOk;
  bool help_only = false;
};

/// Parses and runs a command without touching the filesystem for outputs.
/// Library errors propagate as apfree::Error.
Outcome execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json manifest_json(const Outcome& outcome);

/// Full CLI: execute, then write outputs and the manifest. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int exit_code_for(const std::exception& e);

}  // namespace apfree::cli
