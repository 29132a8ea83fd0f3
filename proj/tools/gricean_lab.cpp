// gricean-lab: runs the exact-table tests, the corpus and counterexample
// sweeps, the sample-complexity curve, and corpus sampling/statistics.
//
// Exit codes: 0 ok, 1 runtime error, 2 invariant violation, 3 config error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gricean/gricean.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolation = 2;
constexpr int kExitConfig = 3;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<double> budget_seconds;
  std::string out_path;
};

void add_common_flags(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON experiment config (defaults apply when omitted)");
  sub->add_option("--seed", o.seed, "base RNG seed (overrides the config)");
  sub->add_option("--out", o.out_path, "output file (default: stdout)");
  sub->add_option("--tolerance", o.tolerance, "zero tolerance for exact-table tests")->check(CLI::PositiveNumber);
  sub->add_option("--budget-seconds", o.budget_seconds, "wall-clock budget; trims the corpus sweep")->check(CLI::NonNegativeNumber);
}

int run(gricean::ExperimentKind kind, const Options& o) {
  using namespace gricean;
  Json doc = o.config_path.empty() ? Json::object() : read_json_file(o.config_path);
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (doc.contains("experiment") && doc.at("experiment") != to_string(kind)) {
    throw ConfigError("config is for experiment '" + doc.at("experiment").dump() + "' but the subcommand runs '" + to_string(kind) + "'");
  }
  doc["experiment"] = to_string(kind);
  if (o.seed) doc["seed"] = *o.seed;
  if (o.tolerance) doc["tolerance"] = *o.tolerance;
  if (o.budget_seconds) doc["budget_seconds"] = *o.budget_seconds;
  const ExperimentConfig cfg = validate_config(doc);

  const ExperimentOutput result = run_experiment(cfg);
  if (o.out_path.empty()) {
    result.write(std::cout);
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + o.out_path + "'");
    result.write(f);
  }
  if (result.violations > 0) {
    std::cerr << "gricean-lab: " << result.violations << " invariant violation(s)\n";
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributional entailment lab: exact tests, sweeps and bounds for speaker models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gricean::kToolVersion));

  Options opts;
  std::optional<gricean::ExperimentKind> chosen;
  const std::pair<const char*, gricean::ExperimentKind> commands[] = {
      {"test", gricean::ExperimentKind::ExhaustiveTest},
      {"sweep", gricean::ExperimentKind::CorpusSweep},
      {"counterexample", gricean::ExperimentKind::CounterexampleSweep},
      {"complexity", gricean::ExperimentKind::ComplexityCurve},
      {"stats", gricean::ExperimentKind::CorpusStats},
      {"sample", gricean::ExperimentKind::Sample},
  };
  const char* help[] = {
      "exhaustive entailment tests over every ordered utterance pair",
      "estimator sweep over nested corpora of increasing size",
      "g-score of near-contradiction variants over a large world space",
      "sample-complexity curve over sentence lengths",
      "utterance / length / redundancy statistics of a sampled corpus",
      "write a sampled corpus, one text per line",
  };
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    add_common_flags(sub, opts);
    const auto kind = commands[i].second;
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return run(*chosen, opts);
  } catch (const gricean::ConfigError& e) {
    std::cerr << "gricean-lab: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gricean::InternalConsistencyError& e) {
    std::cerr << "gricean-lab: invariant violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const gricean::Error& e) {
    std::cerr << "gricean-lab: " << e.what() << '\n';
    return kExitError;
  }
}
