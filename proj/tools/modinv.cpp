// Command-line front end: series, verify and cache subcommands.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "modinv/io.hpp"

using namespace modinv;

namespace {

int finish(const io::CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular invariant theory: graded decompositions and verification suites"};
  app.require_subcommand(1);

  std::string config, format, cache_dir, suite, action;
  std::size_t max_degree = 0, threads = 1;
  std::uint64_t seed = 0;
  bool require_fit = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "job configuration (JSON)")->required();
    sub->add_option("--max-degree", max_degree, "degree cutoff D");
    sub->add_option("--seed", seed, "seed for randomised steps");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "text | json | csv");
    sub->add_option("--cache-dir", cache_dir, "directory of cached decompositions");
  };
  CLI::App* series = app.add_subcommand("series", "multiplicity of every summand class per degree");
  common(series);
  series->add_flag("--require-fit", require_fit, "exit 4 unless every label has a rational series fit");
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "inc | equiv | depth | summand | mackey")->required();
  common(verify);
  CLI::App* cache = app.add_subcommand("cache", "cache maintenance");
  cache->add_option("action", action, "gc | stats")->required();
  cache->add_option("--cache-dir", cache_dir, "cache directory")->required();
  cache->add_option("--format", format, "text | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  io::Overrides o;
  CLI::App* used = app.get_subcommands().front();
  if (!format.empty()) {
    o.format = io::parse_format(format);
    if (!o.format) {
      std::cerr << "error: unknown format '" << format << "'\n";
      return 2;
    }
  }
  if (used == cache) return finish(io::cmd_cache(action, cache_dir, o.format.value_or(io::Format::Text)));

  if (used->count("--max-degree")) o.max_degree = max_degree;
  if (used->count("--seed")) o.seed = seed;
  if (used->count("--threads")) o.threads = threads;
  if (!cache_dir.empty()) o.cache_dir = cache_dir;
  o.require_fit = require_fit;
  auto text = read_file(config);
  if (!text) {
    std::cerr << "error: cannot read config " << config << "\n";
    return 2;
  }
  if (used == series) return finish(io::cmd_series(*text, o));
  return finish(io::cmd_verify(*text, suite, o));
}
