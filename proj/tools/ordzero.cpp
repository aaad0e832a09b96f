// ordzero <subcommand> --config <path> [--out <dir>]
//
// Exit status: 0 all checks passed, 1 a check failed, 2 configuration error,
// 3 any other error.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ordzero/ordzero.hpp"

namespace {

int run(const std::string& name, ordzero::StageFn fn, const std::string& config_path, const std::string& out_opt) {
  using namespace ordzero;
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "ordzero: config error: " << e.what() << '\n';
    return 2;
  }
  const fs::path out = out_opt.empty() ? fs::path(cfg.output_dir) : fs::path(out_opt);
  try {
    fs::create_directories(out);
    const auto r = fn(cfg, out);
    if (name == "dispatcher") std::cout << dump(r.report["tables"]);
    for (const auto& a : r.artifacts) std::cerr << "wrote " << (out / a).string() << '\n';
    std::cerr << name << ": " << (r.ok() ? "PASS" : "FAIL") << '\n';
    return r.ok() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "ordzero " << name << ": config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ordzero " << name << ": " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order-zero maps of C^2 with prescribed periodic point counts"};
  app.set_version_flag("--version", std::string(ordzero::version()));
  app.require_subcommand(1, 1);

  std::string config, out;
  std::string chosen;
  ordzero::StageFn fn = nullptr;
  const std::pair<const char*, const char*> help[] = {
      {"build", "construct G, the dispatchers and F; dump evaluator metadata"},
      {"verify", "verify every lattice point as a primitive periodic point"},
      {"growth", "sample max modulus of G and F and fit log^2 envelopes"},
      {"dbar-demo", "solve the weighted dbar problem and emit its certificate"},
      {"puncture-demo", "check the punctured potential and emit a heightfield"},
      {"zeros", "emit the zero lattice of G"},
      {"dispatcher", "print dispatcher node tables and compare with the dbar solution"},
      {"report", "aggregate existing artifacts into run_report.json"}};
  for (const auto& [name, text] : help) {
    auto* sub = app.add_subcommand(name, text);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides output_dir)");
    sub->callback([&chosen, &fn, n = std::string(name)] {
      chosen = n;
      for (const auto& [s, f] : ordzero::stages())
        if (s == n) fn = f;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  return run(chosen, fn, config, out);
}
