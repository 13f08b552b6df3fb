#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "realitygame/errors.hpp"
#include "realitygame/experiment.hpp"
#include "realitygame/version.hpp"
#include "verify.hpp"

namespace {

// Built-in demo specs so every subcommand works out of the box; pass --spec
// to replace them. These go through parse_spec like user files.
const char* default_spec_text(const std::string& kind) {
  if (kind == "bias-dynamics") {
    return "kind = bias-dynamics\nmap = self-defeating\nensemble = 5\n";
  }
  if (kind == "wealth-dynamics") {
    return "kind = wealth-dynamics\nmap = arctan\nalpha = 1.5\nhorizon = 2000\n";
  }
  if (kind == "subjective-distribution") {
    return "kind = subjective-distribution\nhorizon = 1000\n";
  }
  if (kind == "rational-curve") {
    return "kind = rational-curve\nmap = arctan\nalpha = 2\n";
  }
  if (kind == "inefficiency") {
    return "kind = inefficiency\nmap = self-defeating\nn_players = 500\nhorizon = 2000\n"
           "ensemble = 64\n";
  }
  // table1, reduced to desk scale; use a spec file for the full-size table.
  return "kind = table1\nn_players = 500\nhorizon = 2000\nensemble = 64\n";
}

struct CommonOpts {
  std::string spec_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
};

int run_kind(const std::string& kind, const CommonOpts& opts) {
  rg::ExperimentSpec spec = opts.spec_path.empty() ? rg::parse_spec(default_spec_text(kind))
                                                   : rg::load_spec(opts.spec_path);
  if (rg::to_string(spec.kind) != kind) {
    throw rg::ValidationError("kind", "spec file says '" + rg::to_string(spec.kind) +
                                          "' but the subcommand is '" + kind + "'");
  }
  if (opts.seed) {
    spec.seed = *opts.seed;
  }
  const std::string out = opts.out_dir.empty() ? "out/" + kind : opts.out_dir;
  const rg::ExperimentOutputs result = rg::run_experiment(spec, out, opts.workers);
  for (const std::string& f : result.files) {
    std::cout << "wrote " << out << "/" << f << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reality-game simulator: evolutionary betting where the crowd moves the odds"};
  app.set_version_flag("--version", std::string(rg::kVersion));
  app.require_subcommand(1);

  const char* kinds[] = {"bias-dynamics",  "wealth-dynamics", "subjective-distribution",
                         "rational-curve", "inefficiency",    "table1"};
  const char* help[] = {
      "coin bias q over time for a few seeds",
      "wealth-vs-strategy snapshots along one run",
      "closed-form heads-count distribution",
      "expected log return of one bettor vs their bet",
      "ensemble mean inefficiency and its power-law fit",
      "exponent table across the canonical reality maps",
  };

  CommonOpts opts;
  std::string verify_out = "out/verify";
  for (std::size_t i = 0; i < std::size(kinds); ++i) {
    CLI::App* sub = app.add_subcommand(kinds[i], help[i]);
    sub->add_option("--spec", opts.spec_path, "experiment spec file (key = value lines)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory (default out/<kind>)");
    sub->add_option("--seed", opts.seed, "master seed, overrides the spec");
    sub->add_option("--workers", opts.workers, "worker threads, 0 = all cores")
        ->envname("REALITYGAME_WORKERS");
  }
  CLI::App* verify = app.add_subcommand("verify", "reduced-scale checks of the headline results");
  verify->add_option("--out", verify_out, "scratch directory");
  verify->add_option("--workers", opts.workers, "worker threads, 0 = all cores")
      ->envname("REALITYGAME_WORKERS");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      return run_verify(opts.workers, verify_out);
    }
    for (const char* kind : kinds) {
      if (app.get_subcommand(kind)->parsed()) {
        return run_kind(kind, opts);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
