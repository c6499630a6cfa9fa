// ulam_lab: runs the lab's experiments and writes JSON or CSV reports.
//
// Exit codes: 0 when every asserted inequality holds, 2 when one fails (the
// offending quantity goes to stderr), 1 for usage and config errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ulam/experiments.hpp"

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "RNG seed (overrides the config)");
  sub->add_option("--out", c.out, "write the report here instead of stdout");
  sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for Ulam stability and amenability"};
  app.set_version_flag("--version", std::string(ulam::kVersion));
  app.require_subcommand(1);

  Common common;
  std::string word;
  const std::vector<std::pair<std::string, std::string>> subs{
      {"stability-demo", "perturb a regular representation and correct it by averaging"},
      {"hull-check", "decide operator hull membership two ways"},
      {"paradox-demo", "invariance LPs on F2 and Z^2 and the Tarski defect sweep"},
      {"folner-demo", "Følner-box averages of a bounded map on Z^d"},
      {"classify-word", "locate a word of F2 in the paradoxical decomposition"}};
  std::vector<CLI::App*> handles;
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, common);
    if (name == "classify-word") sub->add_option("word", word, "reduced word over a, A, b, B (e for the identity)")->required();
    handles.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* chosen = nullptr;
  for (auto* h : handles)
    if (h->parsed()) chosen = h;

  try {
    ulam::ExperimentConfig cfg = common.config.empty() ? ulam::ExperimentConfig{} : ulam::load_config(common.config);
    if (!cfg.subcommand.empty() && cfg.subcommand != chosen->get_name())
      throw ulam::InvalidInput("config is for \"" + cfg.subcommand + "\", not \"" + chosen->get_name() + "\"");
    cfg.subcommand = chosen->get_name();
    if (chosen->count("--seed")) cfg.seed = common.seed;
    if (chosen->count("--out")) cfg.output_path = common.out;
    if (chosen->count("--format")) cfg.output_format = common.format;
    if (cfg.subcommand == "classify-word") cfg.word = word;

    const ulam::Report report = ulam::run_experiment(cfg);
    const std::string text = report.render(cfg.output_format);
    if (cfg.output_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.output_path);
      if (!out) throw ulam::InvalidInput("cannot write " + cfg.output_path);
      out << text;
    }
    for (const auto& f : report.failures) std::cerr << "check failed: " << f << "\n";
    return report.passed() ? 0 : 2;
  } catch (const ulam::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ulam::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed config: " << e.what() << "\n";
    return 1;
  } catch (const ulam::ConvergenceFailure& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
