#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "adbench/harness.hpp"
#include "adbench/report.hpp"
#include "adbench/taxonomy.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitErrorRows = 1;
constexpr int kExitConfig = 2;

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallel;
  bool quiet = false;
};

int cmd_run(const RunArgs& args) {
  auto config = adbench::read_campaign_config(args.config);
  if (args.seed) config.seed = *args.seed;
  if (args.parallel) config.parallel = std::max<std::size_t>(1, *args.parallel);
  adbench::validate_campaign(config);

  std::error_code ec;
  fs::create_directories(args.out, ec);
  if (ec) throw adbench::ConfigError("cannot create output directory " + args.out + ": " + ec.message());

  const auto result = adbench::run_campaign(config, args.quiet ? nullptr : &std::cerr);
  const fs::path out(args.out);
  adbench::write_triples_file((out / "triples.csv").string(), result.rows);
  {
    std::ofstream f(out / "features.csv", std::ios::binary);
    adbench::write_loader_summaries(f, result.loaders);
  }
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << result.rows.size() << " rows (" << result.error_rows() << " errors) written to "
            << (out / "triples.csv").string() << '\n';
  return result.error_rows() > 0 ? kExitErrorRows : kExitOk;
}

int cmd_report(const std::string& triples, const std::string& out, const std::string& taxonomy_csv) {
  auto taxonomy = adbench::AttackTaxonomy::standard();
  if (!taxonomy_csv.empty()) taxonomy.merge_csv(taxonomy_csv);
  const auto rows = adbench::read_triples_file(triples);
  const auto files = adbench::emit_reports(rows, taxonomy, adbench::FamilyRegistry::standard(), out);
  for (const auto& w : files.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : files.written) std::cout << f << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& dir) {
  const auto failures = adbench::validate_loader_dir(dir, std::cout);
  return failures > 0 ? kExitErrorRows : kExitOk;
}

int cmd_selftest(const std::vector<int>& only, const std::string& nsl_kdd, std::size_t parallel) {
  adbench::testing::AcceptanceOptions options;
  options.nsl_kdd = nsl_kdd;
  options.parallel = parallel;
  const int failures = adbench::testing::run_acceptance(std::cout, options, only);
  return failures > 0 ? kExitErrorRows : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anomaly detector benchmark: campaigns, reports and loader checks"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a campaign and write triples.csv and features.csv");
  run_cmd->add_option("--config", run.config, "Campaign file")->required();
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--seed", run.seed, "Override the master seed");
  run_cmd->add_option("--parallel", run.parallel, "Override the worker count");
  run_cmd->add_flag("--quiet", run.quiet, "No progress lines");

  std::string triples, report_out, taxonomy_csv;
  auto* report_cmd = app.add_subcommand("report", "Aggregate a triples CSV into CSV tables and SVG charts");
  report_cmd->add_option("--triples", triples, "Triples CSV written by run")->required();
  report_cmd->add_option("--out", report_out, "Output directory")->required();
  report_cmd->add_option("--taxonomy", taxonomy_csv, "Extra dataset,attack,category mappings");

  std::string loader_dir;
  auto* loaders_cmd = app.add_subcommand("loaders", "Loader utilities");
  loaders_cmd->require_subcommand(1);
  auto* validate_cmd = loaders_cmd->add_subcommand("validate", "Materialize every *.loader file in a directory");
  validate_cmd->add_option("dir", loader_dir, "Directory of loader files")->required();

  std::vector<int> only;
  std::string nsl_kdd;
  std::size_t parallel = 0;
  auto* self_cmd = app.add_subcommand("selftest", "Run the synthetic acceptance suite");
  self_cmd->add_option("--only", only, "Criterion ids to run")->delimiter(',');
  self_cmd->add_option("--nsl-kdd", nsl_kdd, "Headered NSL-KDD CSV for the optional feature-selection check");
  self_cmd->add_option("--parallel", parallel, "Worker count (default: hardware threads)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*report_cmd) return cmd_report(triples, report_out, taxonomy_csv);
    if (*validate_cmd) return cmd_validate(loader_dir);
    if (*self_cmd) return cmd_selftest(only, nsl_kdd, parallel);
  } catch (const adbench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const adbench::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitErrorRows;
  }
  return kExitOk;
}
