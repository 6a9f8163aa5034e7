#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace troplift::cli {

using nlohmann::json;

struct Options {
  bool reorient = false;
  std::string vertex;  // empty: command default
  std::string edge;
  std::optional<long> top;
  std::optional<long> times;
  bool negative = false;
  bool critical = false;
  bool reference = false;
  std::optional<long> rank;
  std::string method = "auto";
  std::optional<bool> strongly_bn_general;
  std::optional<long> d_prime;
  std::vector<long> lengths;  // dprime without a bundle
};

struct Outcome {
  json out;
  bool passed = true;  // what --expect compares against
};

const std::vector<std::string>& command_names();

/// Runs one subcommand on a parsed bundle (null for commands that take none).
/// Throws Error or json::exception on bad input.
Outcome run_command(const std::string& cmd, const json& bundle, const Options& opt);

struct FixtureResult {
  std::string name;
  bool ok;
  json diff;  // mismatches as {"path", "expected", "actual"} entries
};

std::vector<FixtureResult> run_fixtures();
/// The bundle files used by the fixtures, by name.
std::vector<std::pair<std::string, json>> fixture_bundles();

json error_json(const std::string& kind, const std::string& message);

}  // namespace troplift::cli
