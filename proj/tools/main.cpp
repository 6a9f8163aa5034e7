#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

using troplift::Error;
using troplift::cli::json;

namespace {

struct Common {
  std::string input;
  bool pretty = false;
  bool as_json = false;
  std::string expect;
  std::string dump_dir;
  std::string lengths;
};

json read_input(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::Malformed, "cannot read " + path);
    ss << in.rdbuf();
  }
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(Error::Kind::Malformed, std::string("invalid JSON: ") + e.what());
  }
}

void emit(const json& j, bool pretty) {
  if (pretty)
    std::cout << troplift::io::render_table(j);
  else
    std::cout << j.dump() << "\n";
}

std::string kind_name(Error::Kind k) {
  switch (k) {
    case Error::Kind::Malformed: return "malformed";
    case Error::Kind::Precondition: return "precondition";
    case Error::Kind::Unsupported: return "unsupported";
  }
  return "malformed";
}

std::vector<long> parse_lengths(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long n = std::stol(item, &used);
      if (used != item.size() || n < 1) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw Error(Error::Kind::Malformed, "--lengths expects positive integers separated by commas");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divisors, limit linear series and lifting on metric graphs with chain structures"};
  app.require_subcommand(1);
  Common common;
  troplift::cli::Options opt;

  for (const auto& name : troplift::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    bool needs_input = name != "fixtures" && name != "dprime";
    auto* in = sub->add_option("input", common.input, "bundle JSON file, or - for stdin");
    if (needs_input) in->required();
    sub->add_flag("--json", common.as_json, "compact JSON output (default)");
    sub->add_flag("--pretty", common.pretty, "indented key: value output");
    sub->add_flag("--reorient", opt.reorient, "flip edges to the canonical direction before reading");
    sub->add_option("--expect", common.expect, "exit 1 unless the check outcome matches")
        ->check(CLI::IsMember({"pass", "fail"}));
    if (name == "reduce" || name == "twist" || name == "twistdiv" || name == "forgetful" || name == "classify")
      sub->add_option("--vertex", opt.vertex, "vertex id");
    if (name == "twist" || name == "twistdiv" || name == "multivanish")
      sub->add_option("--edge", opt.edge, "edge id, or u~v for the merged edge");
    if (name == "twist") {
      sub->add_flag("--negative", opt.negative, "twist at every other vertex");
      sub->add_option("--times", opt.times, "number of twists");
    }
    if (name == "twistdiv") {
      sub->add_option("--top", opt.top, "last index (default 4)");
      sub->add_flag("--critical", opt.critical, "also report the critical indices");
    }
    if (name == "rank") sub->add_flag("--reference", opt.reference, "use the serial reference enumeration");
    if (name == "lift") {
      sub->add_option("--method", opt.method, "auto, rank-one or vertex-avoiding");
      sub->add_option("--rank", opt.rank, "rank for the vertex avoiding construction");
    }
    if (name == "classify") {
      sub->add_option("--strongly-bn-general", opt.strongly_bn_general, "assert the curve is strongly BN general");
      sub->add_option("--d-prime", opt.d_prime, "degree bound d'");
    }
    if (name == "dprime") {
      sub->add_option("--d", opt.d_prime, "also check the edge-length condition at this degree");
      sub->add_option("--lengths", common.lengths, "comma separated lengths of one fiber, no bundle needed");
    }
    if (name == "fixtures") sub->add_option("--dump", common.dump_dir, "write the fixture bundles to a directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit(troplift::cli::error_json("malformed", e.what()), false);
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (!common.lengths.empty()) opt.lengths = parse_lengths(common.lengths);
    if (cmd == "fixtures" && !common.dump_dir.empty()) {
      std::filesystem::create_directories(common.dump_dir);
      json written = json::array();
      for (const auto& [name, bundle] : troplift::cli::fixture_bundles()) {
        auto path = std::filesystem::path(common.dump_dir) / (name + ".json");
        std::ofstream(path) << bundle.dump(2) << "\n";
        written.push_back(path.string());
      }
      emit({{"written", written}}, common.pretty);
      return 0;
    }
    json bundle = common.input.empty() ? json(nullptr) : read_input(common.input);
    auto outcome = troplift::cli::run_command(cmd, bundle, opt);
    emit(outcome.out, common.pretty);
    if (common.expect == "pass" && !outcome.passed) return 1;
    if (common.expect == "fail" && outcome.passed) return 1;
    if (cmd == "fixtures" && !outcome.passed) return 1;
    return 0;
  } catch (const Error& e) {
    emit(troplift::cli::error_json(kind_name(e.kind()), e.what()), common.pretty);
    return 2;
  } catch (const json::exception& e) {
    emit(troplift::cli::error_json("malformed", e.what()), common.pretty);
    return 2;
  }
}
