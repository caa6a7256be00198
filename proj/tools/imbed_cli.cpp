#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "imbed/commands.hpp"
#include "imbed/error.hpp"

namespace {

// Writes next to the destination and renames, so readers never see a partial file.
void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw imbed::Error(imbed::ErrorCode::config, "cannot write '" + tmp + "'");
    out << text;
    if (!out) throw imbed::Error(imbed::ErrorCode::config, "write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw imbed::Error(imbed::ErrorCode::config, "cannot read config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strict measurable imbeddings of graph products, verified at finite scale"};
  app.require_subcommand(1);
  std::string config_path, output_path;
  std::size_t radius = 0, words = 0;
  imbed::RunFlags flags;
  bool print_config = false;

  for (const auto& name : imbed::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--output", output_path, "report path (stdout when omitted)");
    sub->add_option("--radius", radius, "view / ball radius");
    sub->add_option("--words", words, "word-length bound for disjointness sweeps");
    sub->add_option("--ball-cap", flags.ball_cap, "truncation cap on ball sizes")->check(CLI::PositiveNumber);
    sub->add_option("--seed", flags.seed, "seed for randomized property sweeps");
    sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", flags.timing, "include wall-clock timings (reports are then not reproducible)");
    sub->add_flag("--print-config", print_config, "echo the normalized configuration in the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : imbed::exit_usage;
  }

  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  if (sub->count("--radius")) flags.radius = radius;
  if (sub->count("--words")) flags.words = words;

  imbed::RunResult result;
  try {
    auto config = imbed::parse_config(read_file(config_path));
    result = imbed::run_command(command, config, flags);
    if (print_config) result.report["config"] = imbed::serialize_config(config);
  } catch (const imbed::Error& e) {
    result.exit_code = imbed::exit_usage;
    result.report = {{"command", command},
                     {"status", "error"},
                     {"error", {{"code", imbed::to_string(e.code())}, {"message", e.what()}}}};
  }

  const std::string text = result.report.dump(2) + "\n";
  try {
    if (output_path.empty()) std::cout << text;
    else write_atomically(output_path, text);
  } catch (const std::exception& e) {
    std::cerr << "imbed: " << e.what() << "\n";
    return imbed::exit_usage;
  }
  if (result.exit_code != imbed::exit_pass && result.report.contains("error"))
    std::cerr << "imbed: " << result.report["error"]["message"].get<std::string>() << "\n";
  return result.exit_code;
}
