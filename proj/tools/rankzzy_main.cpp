#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rankzzy/errors.hpp"
#include "rankzzy/harness.hpp"
#include "rankzzy/io.hpp"
#include "rankzzy/pipeline.hpp"

namespace {

constexpr int kExitMalformedInput = 2;
constexpr int kExitInfeasibleDomain = 3;
constexpr int kExitNoConvergence = 4;

struct CommonFlags {
  std::optional<double> p;
  std::optional<double> nu;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool strict = false;
};

void add_override_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--p", flags.p, "Override the aggregation power p");
  cmd->add_option("--nu", flags.nu, "Override the stability parameter nu in [0, 1]");
  cmd->add_option("--epsilon", flags.epsilon, "Override the normalization epsilon (> 0)");
  cmd->add_option("--seed", flags.seed, "Override the run seed");
}

void add_thread_flag(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--threads", flags.threads, "Worker threads (0 = machine parallelism)")
      ->envname("RANKZZY_THREADS");
}

rankzzy::DecisionProblem load_with_overrides(const std::string& path, const CommonFlags& flags) {
  rankzzy::DecisionProblem problem = rankzzy::load_problem(path);
  if (flags.p) problem.params.p = *flags.p;
  if (flags.nu) problem.params.nu = *flags.nu;
  if (flags.epsilon) problem.params.epsilon = *flags.epsilon;
  if (flags.seed) problem.seed = *flags.seed;
  return problem;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rankzzy::Error("cannot write to '" + path + "'");
  out << content;
}

std::string default_output(const std::string& input, const std::string& suffix) {
  const auto dot = input.rfind('.');
  const std::string stem = dot == std::string::npos ? input : input.substr(0, dot);
  return stem + suffix;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_schedule(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> schedule;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) {
      throw rankzzy::ParseError("schedule entries look like '5x4', got '" + item + "'");
    }
    schedule.emplace_back(std::stoul(item.substr(0, x)), std::stoul(item.substr(x + 1)));
  }
  if (schedule.empty()) throw rankzzy::ParseError("schedule is empty");
  return schedule;
}

int run_rank(const std::string& input, const CommonFlags& flags, const std::string& output,
             const std::string& format) {
  const rankzzy::DecisionProblem problem = load_with_overrides(input, flags);
  rankzzy::validate(problem.domain);
  rankzzy::RankOptions options;
  options.threads = flags.threads;
  const rankzzy::RankingReport report = rankzzy::rank(problem, options);

  std::ostringstream table;
  table << std::fixed << std::setprecision(3);
  for (std::size_t pos = 0; pos < report.ranking.size(); ++pos) {
    if (pos > 0) table << "  ";
    table << (pos + 1) << ". " << report.action_at_rank(pos) << " ("
          << report.bundles[report.ranking[pos]].aggregated << ")";
  }
  std::cout << table.str() << "\n";

  const std::string path = output.empty() ? default_output(input, "_report.json") : output;
  if (format == "csv") {
    std::ostringstream csv;
    csv.precision(12);
    csv << "rank,action,aggregated,crisp_min,crisp_max\n";
    for (std::size_t pos = 0; pos < report.ranking.size(); ++pos) {
      const rankzzy::ScoreBundle& bundle = report.bundles[report.ranking[pos]];
      csv << (pos + 1) << ',' << report.action_at_rank(pos) << ',' << bundle.aggregated << ','
          << bundle.crisp_min << ',' << bundle.crisp_max << '\n';
    }
    write_text_file(path, csv.str());
  } else {
    write_text_file(path, rankzzy::report_to_json(report).dump(2) + "\n");
  }
  std::cerr << "report written to " << path << "\n";

  if (flags.strict && !report.all_converged) {
    std::cerr << "error: optimizer did not certify convergence for every action\n";
    return kExitNoConvergence;
  }
  return 0;
}

int run_sensitivity(const std::string& input, const CommonFlags& flags, const std::string& output,
                    std::size_t grid, double p_min, double p_max, double nu_min, double nu_max) {
  const rankzzy::DecisionProblem problem = load_with_overrides(input, flags);
  rankzzy::validate(problem.domain);
  rankzzy::RankOptions options;
  options.threads = flags.threads;
  const rankzzy::SensitivityGrid result =
      rankzzy::sensitivity_grid(problem, {p_min, p_max}, {nu_min, nu_max}, grid, options);
  const std::string path = output.empty() ? default_output(input, "_sensitivity.csv") : output;
  std::ostringstream csv;
  rankzzy::write_sensitivity_csv(result, csv);
  write_text_file(path, csv.str());
  std::cerr << "grid written to " << path << "\n";
  return 0;
}

int run_bench_timing(const CommonFlags& flags, const std::string& output, int runs,
                     const std::string& schedule_text) {
  rankzzy::TimingOptions options;
  options.n_runs = runs;
  options.threads = flags.threads;
  if (flags.seed) options.seed = *flags.seed;
  if (!schedule_text.empty()) options.schedule = parse_schedule(schedule_text);
  const std::vector<rankzzy::TimingRecord> records = rankzzy::timing_benchmark(options);
  std::ostringstream csv;
  rankzzy::write_timing_csv(records, csv);
  write_text_file(output, csv.str());
  std::cerr << "timing table written to " << output << "\n";
  return 0;
}

int run_bench_correlation(const CommonFlags& flags, const std::string& prefix, int runs,
                          const std::vector<double>& p_set, double rho, double spread,
                          bool no_noise) {
  rankzzy::CorrelationOptions options;
  options.n_runs = runs;
  if (!p_set.empty()) options.p_set = p_set;
  if (flags.seed) options.seed = *flags.seed;
  options.fuzzify.rho = rho;
  options.fuzzify.spread = spread;
  options.noise = !no_noise;
  options.threads = flags.threads;
  const std::vector<rankzzy::CorrelationRecord> records =
      rankzzy::correlation_experiment(options);
  std::ostringstream csv;
  rankzzy::write_correlation_csv(records, csv);
  write_text_file(prefix + ".csv", csv.str());
  write_text_file(prefix + "_summary.json",
                  rankzzy::correlation_summary(records).dump(2) + "\n");
  std::cerr << "records written to " << prefix << ".csv, summary to " << prefix
            << "_summary.json\n";
  return 0;
}

int run_validate(const std::string& input) {
  const rankzzy::DecisionProblem problem = rankzzy::load_problem(input);
  rankzzy::validate(problem.domain);
  std::cout << "ok: " << problem.actions.size() << " actions, " << problem.values.size()
            << " values, feasible weight domain\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy unweighted value-based decision engine"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input;
  std::string output;
  std::string format = "json";
  std::size_t grid = 25;
  double p_min = 0.05;
  double p_max = 2.0;
  double nu_min = 0.0;
  double nu_max = 1.0;
  int runs = 0;
  std::string schedule_text;
  std::vector<double> p_set;
  double rho = 0.1;
  double spread = 0.1;
  bool no_noise = false;

  CLI::App* rank_cmd = app.add_subcommand("rank", "Rank the actions of a problem file");
  rank_cmd->add_option("input", input, "Problem definition (JSON)")->required();
  rank_cmd->add_option("--output", output, "Report path (default: <input>_report.json)");
  rank_cmd->add_option("--format", format, "Report format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  rank_cmd->add_flag("--strict", flags.strict,
                     "Exit with status 4 unless every optimization converged");
  add_override_flags(rank_cmd, flags);
  add_thread_flag(rank_cmd, flags);

  CLI::App* sens_cmd =
      app.add_subcommand("sensitivity", "Sweep the (p, nu) grid and dump per-cell scores");
  sens_cmd->add_option("input", input, "Problem definition (JSON)")->required();
  sens_cmd->add_option("--output", output, "CSV path (default: <input>_sensitivity.csv)");
  sens_cmd->add_option("--grid", grid, "Grid resolution per axis (default 25)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}));
  sens_cmd->add_option("--p-min", p_min, "Lower end of the p range");
  sens_cmd->add_option("--p-max", p_max, "Upper end of the p range");
  sens_cmd->add_option("--nu-min", nu_min, "Lower end of the nu range");
  sens_cmd->add_option("--nu-max", nu_max, "Upper end of the nu range");
  add_override_flags(sens_cmd, flags);
  add_thread_flag(sens_cmd, flags);

  CLI::App* timing_cmd =
      app.add_subcommand("bench-timing", "Measure ranking wall-clock over growing problem sizes");
  timing_cmd->add_option("--output", output, "CSV path")->default_str("timing.csv");
  timing_cmd->add_option("--runs", runs, "Repetitions per size (default 3)");
  timing_cmd->add_option("--schedule", schedule_text,
                         "Comma-separated sizes like '2x2,10x8,50x40'");
  timing_cmd->add_option("--seed", flags.seed, "Master seed");
  add_thread_flag(timing_cmd, flags);

  CLI::App* corr_cmd = app.add_subcommand(
      "bench-correlation", "Rank-correlation study against the crisp TOPSIS baseline");
  corr_cmd->add_option("--output", output, "Output prefix")->default_str("correlation");
  corr_cmd->add_option("--runs", runs, "Number of experiments (default 50)");
  corr_cmd->add_option("--p-set", p_set, "Aggregation powers to test (default -1 0 1 2)");
  corr_cmd->add_option("--rho", rho, "Relative core half-width used to fuzzify");
  corr_cmd->add_option("--spread", spread, "Relative extra support width used to fuzzify");
  corr_cmd->add_flag("--no-noise", no_noise, "Disable the noise term of the synthetic row");
  corr_cmd->add_option("--seed", flags.seed, "Master seed");
  add_thread_flag(corr_cmd, flags);

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a problem file: schema and domain feasibility");
  validate_cmd->add_option("input", input, "Problem definition (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (rank_cmd->parsed()) return run_rank(input, flags, output, format);
    if (sens_cmd->parsed()) {
      return run_sensitivity(input, flags, output, grid, p_min, p_max, nu_min, nu_max);
    }
    if (timing_cmd->parsed()) {
      return run_bench_timing(flags, output.empty() ? "timing.csv" : output,
                              runs > 0 ? runs : 3, schedule_text);
    }
    if (corr_cmd->parsed()) {
      return run_bench_correlation(flags, output.empty() ? "correlation" : output,
                                   runs > 0 ? runs : 50, p_set, rho, spread, no_noise);
    }
    if (validate_cmd->parsed()) return run_validate(input);
  } catch (const rankzzy::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformedInput;
  } catch (const rankzzy::BoundsOutOfOrder& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasibleDomain;
  } catch (const rankzzy::InfeasibleCoreSum& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasibleDomain;
  } catch (const rankzzy::InfeasibleDomain& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasibleDomain;
  } catch (const rankzzy::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
