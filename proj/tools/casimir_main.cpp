#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "casimir/cli.hpp"

int main(int argc, char** argv) {
  using namespace casimir;

  CLI::App app{"Casimir force between planar slabs from imaginary-frequency Lifshitz theory"};
  app.set_version_flag("--version", cli::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  cli::Options opt;
  double rel_tol = 0.0;

  for (const auto& [name, help] : {std::pair{"force", "force at a single gap (run.gap)"},
                                   std::pair{"sweep", "force over a gap range, with equilibrium search"},
                                   std::pair{"grid", "F_r over a two-parameter grid"},
                                   std::pair{"dispersion", "eps, mu, Z on the real and imaginary axes"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "scene configuration file")->required();
    sub->add_option("--out", out_path, "write output here instead of stdout");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--rel-tol", rel_tol, "override run.rel_tol");
    sub->add_option("--jobs", opt.jobs, "worker threads for sweeps and grids")->check(CLI::PositiveNumber);
    sub->add_option("--record", opt.record, "also write the JSON run record to this path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kInvalidInput;
  }

  if (format == "text") opt.format = cli::Format::Text;
  if (format == "csv") opt.format = cli::Format::Csv;
  if (format == "json") opt.format = cli::Format::Json;
  if (rel_tol != 0.0) opt.rel_tol = rel_tol;

  config::SceneConfig cfg;
  try {
    cfg = config::load(config_path);
  } catch (const config::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInvalidInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (out_path.empty()) return cli::dispatch(command, cfg, opt, std::cout, std::cerr);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return cli::kInvalidInput;
  }
  return cli::dispatch(command, cfg, opt, out, std::cerr);
}
