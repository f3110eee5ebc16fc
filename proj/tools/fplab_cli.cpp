#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fplab/experiments.hpp"
#include "fplab/io.hpp"
#include "fplab/labels.hpp"

namespace {

std::vector<double> parse_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw fplab::Error(fplab::ErrorKind::InvalidArgument, "--ladder: '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

struct Options {
  std::string scenario;
  std::string out = "runs";
  std::uint64_t seed = 0;
  std::string ladder;
  int grid = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fokker-Planck verification lab"};
  app.set_version_flag("--version", fplab::version());
  app.require_subcommand(1);

  Options opt;
  auto* validate = app.add_subcommand("validate", "Check a scenario file and list the regimes it activates");
  validate->add_option("--scenario", opt.scenario, "scenario JSON")->required();

  const std::vector<std::pair<std::string, fplab::StudyKind>> studies{
      {"solve", fplab::StudyKind::Solve},
      {"commutator-study", fplab::StudyKind::Commutator},
      {"regularity-study", fplab::StudyKind::Regularity},
      {"stability-study", fplab::StudyKind::Stability},
      {"energy-audit", fplab::StudyKind::EnergyAudit},
      {"equivalence-check", fplab::StudyKind::Equivalence},
      {"sde-compare", fplab::StudyKind::SdeCompare},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, kind] : studies) {
    auto* sub = app.add_subcommand(name, std::string("Run the ") + fplab::to_string(kind) + " study");
    sub->add_option("--scenario", opt.scenario, "scenario JSON")->required();
    sub->add_option("--out", opt.out, "output root directory");
    sub->add_option("--seed", opt.seed, "override every scenario seed");
    sub->add_option("--ladder", opt.ladder,
                    "comma-separated ladder: deltas, grid sizes, particle counts or snapshot times");
    sub->add_option("--grid", opt.grid, "points per axis override");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const auto rep = fplab::validate_scenario(std::filesystem::path(opt.scenario));
      std::cout << rep.to_json().dump(2) << '\n';
      for (const auto& id : rep.regimes) {
        std::cout << fplab::result_label(id).title << " [" << id << "]: applies\n";
      }
      return rep.ok() ? 0 : 2;
    }
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (!subs[k]->parsed()) continue;
      fplab::StudySpec spec;
      spec.kind = studies[k].second;
      spec.scenario = opt.scenario;
      spec.out = opt.out;
      if (subs[k]->count("--seed")) spec.seed = opt.seed;
      spec.ladder.values = parse_csv(opt.ladder);
      spec.ladder.grid = opt.grid;
      const auto outcome = fplab::run_study(spec);
      if (outcome.manifest.error) {
        std::cerr << outcome.manifest.error->dump() << '\n';
      } else {
        std::cout << fplab::summary_text(outcome.manifest.verdicts);
      }
      std::cout << "manifest: " << (outcome.directory / "manifest.json").string() << '\n'
                << "hash: " << outcome.manifest.hash << '\n';
      return outcome.exit_status;
    }
  } catch (const fplab::Error& e) {
    std::cerr << fplab::error_record(e, "cli").dump() << '\n';
    return 2;
  }
  return 2;
}
