#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ltk/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ltk: Lubin-Tate, Mellin and local-factor computations with JSON I/O"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string input, inline_json, out_path, mode = "rational";
  int precision = 30, jobs = 1, trunc = 0;
  app.add_option("--mode", mode, "coefficient backend")->check(CLI::IsMember({"rational", "padic"}));
  app.add_option("--precision", precision, "p-adic precision N (padic mode)");
  app.add_option("--trunc", trunc, "truncation degree D (overrides the input)");
  app.add_option("--jobs", jobs, "worker threads for batch inputs");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("-i,--input", input, "input JSON file ('-' for stdin)");
  app.add_option("-j,--json", inline_json, "inline input JSON");

  for (const auto& name : ltk::cli::subcommands()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  ltk::cli::RunConfig cfg;
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.mode = mode == "padic" ? ltk::cli::Mode::padic : ltk::cli::Mode::rational;
  cfg.precision = precision;
  cfg.jobs = jobs;
  if (trunc > 0) cfg.trunc = trunc;

  std::string text = inline_json;
  if (!input.empty()) {
    std::stringstream ss;
    if (input == "-") {
      ss << std::cin.rdbuf();
    } else {
      std::ifstream f(input);
      if (!f) {
        std::cerr << "cannot read " << input << "\n";
        return 2;
      }
      ss << f.rdbuf();
    }
    text = ss.str();
  }

  const auto result = ltk::cli::run_text(cfg, text);
  const auto body = result.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(out_path);
    f << body;
  }
  return result.exit_code;
}
