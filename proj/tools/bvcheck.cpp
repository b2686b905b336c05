#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bv/report.hpp"
#include "bv/run_config.hpp"
#include "bv/verifier.hpp"

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::optional<std::string> config_file;
  std::optional<std::uint64_t> x_max;
  std::optional<std::string> grid_file;
  std::optional<double> c3;
  std::optional<std::uint64_t> e0_limit;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> jobs;
  std::optional<std::uint64_t> mem_budget;
  bool timings = false;
  std::optional<double> x, Q, Q1;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_file, "JSON config file (flags win over it)");
  cmd->add_option("--x-max", flags.x_max, "table size override");
  cmd->add_option("--grid", flags.grid_file, "grid spec JSON file");
  cmd->add_option("--c3", flags.c3, "override the large-sieve constant c3");
  cmd->add_option("--e0-limit", flags.e0_limit, "prime limit for the E0 product");
  cmd->add_option("--out", flags.out, "output directory (default $BVCHECK_OUT or ./reports)");
  cmd->add_option("--format", flags.format, "json|csv|both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  cmd->add_option("--jobs", flags.jobs, "worker threads (results are thread-count independent)");
  cmd->add_option("--mem-budget", flags.mem_budget, "memory budget in bytes");
  cmd->add_flag("--timings", flags.timings, "include measured wall times in report files");
}

bv::RunConfig build_config(const Flags& flags) {
  bv::RunConfig config;
  if (flags.config_file) config = bv::RunConfig::from_file(*flags.config_file);
  if (flags.grid_file) {
    std::ifstream in(*flags.grid_file);
    if (!in) throw std::invalid_argument("cannot open grid file " + *flags.grid_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    bv::RunConfig grid_holder = bv::RunConfig::from_json("{\"grid\": " + ss.str() + "}");
    config.grid = grid_holder.grid;
  }
  if (flags.x_max) config.x_max = *flags.x_max;
  if (flags.c3) config.c3_override = *flags.c3;
  if (flags.e0_limit) config.e0_prime_limit = *flags.e0_limit;
  if (flags.out) config.out_dir = *flags.out;
  if (flags.format) {
    if (*flags.format == "json") config.format = bv::OutputFormat::Json;
    if (*flags.format == "csv") config.format = bv::OutputFormat::Csv;
    if (*flags.format == "both") config.format = bv::OutputFormat::Both;
  }
  if (flags.jobs) config.jobs = *flags.jobs;
  if (flags.mem_budget) config.mem_budget_bytes = *flags.mem_budget;
  if (flags.timings) config.timings = true;
  if (flags.x || flags.Q || flags.Q1) {
    if (!flags.x || !flags.Q)
      throw std::invalid_argument("single-point mode needs both --x and --Q");
    config.single_point = bv::GridPoint{*flags.x, *flags.Q, flags.Q1.value_or(1.0), false, 0.0};
  }
  return config;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("failed to write " + path.string());
  std::cout << "wrote " << path.string() << "\n";
}

void emit_reports(const bv::RunConfig& config, const std::string& stem,
                  const std::vector<bv::BoundReport>& reports) {
  const bv::ReportOptions options{config.timings};
  const fs::path dir = config.resolved_out_dir();
  if (config.format != bv::OutputFormat::Csv)
    write_file(dir / (stem + ".json"), bv::reports_to_json(reports, options));
  if (config.format != bv::OutputFormat::Json)
    write_file(dir / (stem + ".csv"), bv::reports_to_csv(reports, options));
}

void print_summary(const std::vector<bv::BoundReport>& reports) {
  int strict_fail = 0;
  for (const bv::BoundReport& r : reports) {
    const char* tag = r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL");
    if (!r.informational && !r.pass) ++strict_fail;
    std::string params;
    for (const auto& [k, v] : r.params) {
      if (k != "x" && k != "Q" && k != "Q1" && k != "Y" && k != "V" && k != "M") continue;
      params += " " + k + "=" + bv::format_double(v);
    }
    std::printf("%s %-16s%s lhs=%s rhs=%s ratio=%s (%.3fs)\n", tag, r.name.c_str(),
                params.c_str(), bv::format_double(r.lhs).c_str(),
                bv::format_double(r.rhs).c_str(), bv::format_double(r.ratio()).c_str(),
                r.wall_time);
  }
  std::printf("%zu reports, %d strict failures\n", reports.size(), strict_fail);
}

int cmd_constants(const Flags& flags) {
  const bv::RunConfig config = build_config(flags);
  const bv::LambdaTable table = bv::build_lambda_table(
      std::max<std::uint64_t>(10'000, config.x_max), config.sieve_options());
  bv::ConstantsOptions options;
  options.e0_prime_limit = config.e0_prime_limit;
  options.c3_override = config.c3_override;
  const bv::ExplicitConstants consts = bv::compute_constants(table, options);

  const auto row = [](const char* name, double value, const char* extra = "") {
    std::printf("%-4s = %-16s %s\n", name, bv::format_double(value).c_str(), extra);
  };
  row("A0", consts.A0, ("attained at n = " + std::to_string(consts.A0_argmax)).c_str());
  std::printf("E0   in [%s, %s]  (primes up to %llu)\n",
              bv::format_double(consts.E0_lower).c_str(),
              bv::format_double(consts.E0_upper).c_str(),
              static_cast<unsigned long long>(consts.E0_prime_limit));
  row("c0", consts.c0);
  row("c1", consts.c1);
  row("c2", consts.c2);
  row("c3", consts.c3, consts.c3_overridden ? "(override; c3-sensitive bounds recomputed)" : "");
  row("c4", consts.c4);
  row("L", consts.L);
  row("C", consts.C);

  const fs::path dir = config.resolved_out_dir();
  write_file(dir / "constants.json", bv::constants_to_json(consts));

  // definitional identities, re-evaluated against the stored members
  const double ln2 = std::log(2.0);
  const bool ok =
      std::abs(consts.c1 - (1.25 * consts.E0_lower * consts.c0 + 1.0)) <= 1e-9 * consts.c1 &&
      std::abs(consts.c2 - (1.0 + 2.0 * consts.c1 / ln2)) <= 1e-9 * consts.c2 &&
      std::abs(consts.c4 - consts.c3 / ln2 * std::sqrt(2.0 * consts.A0)) <= 1e-9 * consts.c4 &&
      consts.A0_argmax == 113;
  std::printf("identities: %s\n", ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}

int cmd_verify(const std::string& suite_name, const Flags& flags) {
  const auto suite = bv::parse_suite(suite_name);
  if (!suite) throw std::invalid_argument("unknown suite: " + suite_name);
  const bv::RunConfig config = build_config(flags);
  const bv::SuiteResult result = bv::run_suite(*suite, config);
  emit_reports(config, bv::suite_name(*suite), result.reports);
  print_summary(result.reports);
  if (result.aborted) {
    std::fprintf(stderr, "aborted: %s (partial results written)\n", result.abort_reason.c_str());
    return 3;
  }
  return result.all_strict_pass() ? 0 : 1;
}

int cmd_scan(const Flags& flags) {
  const bv::RunConfig config = build_config(flags);
  bv::GridSpec grid = config.grid;
  if (config.single_point) {
    grid = bv::GridSpec{};
    grid.x_values = {config.single_point->x};
    grid.q_rules = {bv::QRule::number(config.single_point->Q)};
    grid.q1_rules = {bv::Q1Rule::number(config.single_point->Q1)};
  }

  const bv::LambdaTable table =
      bv::build_lambda_table(std::max<std::uint64_t>(config.table_limit(), 10'000),
                             config.sieve_options());
  const bv::MoebiusTable mobius(2048);
  bv::ConstantsOptions coptions;
  coptions.e0_prime_limit = config.e0_prime_limit;
  coptions.c3_override = config.c3_override;
  const bv::ExplicitConstants consts = bv::compute_constants(table, coptions);
  const bv::VerifierContext ctx{table, mobius, consts, config.jobs};

  const auto rows = bv::scan_rows(grid, ctx);
  write_file(fs::path(config.resolved_out_dir()) / "scan.csv", bv::scan_to_csv(rows));

  bool ok = true;
  for (const bv::ScanRow& row : rows) {
    if (row.lhs >= row.rhs_72) ok = false;
    // the 7/2 envelope sits below the 9/2 one as soon as log x > 14/4
    if (row.x >= 55.0 && row.rhs_72 >= row.rhs_92) ok = false;
  }
  std::printf("%zu scan rows, %s\n", rows.size(), ok ? "all checks hold" : "FAILURES present");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checker for an explicit Bombieri-Vinogradov bound"};
  app.require_subcommand(1);

  Flags flags;
  CLI::App* constants = app.add_subcommand("constants", "compute and export the explicit constants");
  add_common_flags(constants, flags);

  CLI::App* verify = app.add_subcommand("verify", "run a check suite");
  std::string suite;
  verify->add_option("suite", suite, "bv|vaughan|sieve|si|bk|section3|oracle|all")->required();
  add_common_flags(verify, flags);
  verify->add_option("--x", flags.x, "single-point x");
  verify->add_option("--Q", flags.Q, "single-point Q");
  verify->add_option("--Q1", flags.Q1, "single-point Q1 (default 1)");

  CLI::App* scan = app.add_subcommand("scan", "emit the (x, Q, Q1, lhs, rhs) plot data");
  add_common_flags(scan, flags);
  scan->add_option("--x", flags.x, "single-point x");
  scan->add_option("--Q", flags.Q, "single-point Q");
  scan->add_option("--Q1", flags.Q1, "single-point Q1 (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(constants)) return cmd_constants(flags);
    if (app.got_subcommand(verify)) return cmd_verify(suite, flags);
    if (app.got_subcommand(scan)) return cmd_scan(flags);
  } catch (const bv::BudgetError& e) {
    std::fprintf(stderr, "aborted: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
