#include "rankzzy/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rankzzy/errors.hpp"
#include "rankzzy/parallel.hpp"
#include "rankzzy/pipeline.hpp"

namespace rankzzy {

namespace {

constexpr double kSupportFloor = 1e-6;

std::string synth_action_name(std::size_t i) { return "a" + std::to_string(i); }

std::string synth_value_name(std::size_t j) { return "v" + std::to_string(j); }

/// Wraps a fuzzy matrix (plus an optional extra row) into a ready-to-rank
/// problem with pre-fuzzified assessments.
DecisionProblem problem_from_matrix(const FuzzyDecisionMatrix& matrix,
                                    const std::vector<Trapezoid>* extra_row,
                                    const WeightDomain& domain, const ScoreParams& params,
                                    std::uint64_t seed) {
  DecisionProblem problem;
  problem.values = matrix.values;
  problem.domain = domain;
  problem.params = params;
  problem.seed = seed;
  problem.actions = matrix.actions;
  if (extra_row != nullptr) problem.actions.push_back("z");
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      problem.assessments[DecisionProblem::assessment_key(matrix.actions[i],
                                                          matrix.values[j].name)] =
          Assessment{matrix.at(i, j)};
    }
  }
  if (extra_row != nullptr) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      problem.assessments[DecisionProblem::assessment_key("z", matrix.values[j].name)] =
          Assessment{(*extra_row)[j]};
    }
  }
  return problem;
}

/// 1-based rank of each action given the pipeline report.
std::vector<int> ranks_from_report(const RankingReport& report) {
  std::vector<int> ranks(report.actions.size(), 0);
  for (std::size_t pos = 0; pos < report.ranking.size(); ++pos) {
    ranks[report.ranking[pos]] = static_cast<int>(pos) + 1;
  }
  return ranks;
}

}  // namespace

Trapezoid fuzzify(double value, double rho, double spread, Rng& rng) {
  if (value <= 0.0) throw NonPositiveValue("fuzzify requires a positive crisp value");
  const double core_left = value * (1.0 - rho * rng.uniform());
  const double core_right = value * (1.0 + rho * rng.uniform());
  double support_left = core_left * (1.0 - spread * rng.uniform());
  const double support_right = core_right * (1.0 + spread * rng.uniform());
  support_left = std::max(support_left, kSupportFloor);
  return Trapezoid(support_left, std::max(core_left, support_left), core_right, support_right);
}

SyntheticProblem gen_random_problem(std::size_t n_actions, std::size_t n_values,
                                    std::uint64_t seed, const FuzzifyParams& params) {
  if (n_actions < 2 || n_values < 1) {
    throw Error("synthetic problems need at least 2 actions and 1 value");
  }
  SyntheticProblem problem;
  problem.noise_seed = seed;
  Rng rng(derive_seed(seed, 0xA11CE));

  problem.crisp.resize(static_cast<Eigen::Index>(n_actions), static_cast<Eigen::Index>(n_values));
  for (Eigen::Index i = 0; i < problem.crisp.rows(); ++i) {
    for (Eigen::Index j = 0; j < problem.crisp.cols(); ++j) {
      problem.crisp(i, j) = rng.uniform(0.05, 1.0);
    }
  }

  std::vector<Objective> objectives(n_values, Objective::Maximize);
  for (std::size_t j = 0; j < n_values; ++j) {
    objectives[j] = rng.uniform() < 0.5 ? Objective::Maximize : Objective::Minimize;
  }
  if (n_values >= 2) {
    const bool any_max = std::any_of(objectives.begin(), objectives.end(),
                                     [](Objective o) { return o == Objective::Maximize; });
    const bool any_min = std::any_of(objectives.begin(), objectives.end(),
                                     [](Objective o) { return o == Objective::Minimize; });
    if (!any_max) objectives[rng.below(n_values)] = Objective::Maximize;
    if (!any_min) objectives[rng.below(n_values)] = Objective::Minimize;
  }

  problem.fuzzy.actions.reserve(n_actions);
  for (std::size_t i = 0; i < n_actions; ++i) problem.fuzzy.actions.push_back(synth_action_name(i));
  problem.fuzzy.values.reserve(n_values);
  for (std::size_t j = 0; j < n_values; ++j) {
    ValueSpec spec;
    spec.name = synth_value_name(j);
    spec.kind = ValueKind::Quantitative;
    spec.objective = objectives[j];
    problem.fuzzy.values.push_back(std::move(spec));
  }
  problem.fuzzy.entries.reserve(n_actions * n_values);
  for (Eigen::Index i = 0; i < problem.crisp.rows(); ++i) {
    for (Eigen::Index j = 0; j < problem.crisp.cols(); ++j) {
      problem.fuzzy.entries.push_back(
          fuzzify(problem.crisp(i, j), params.rho, params.spread, rng));
    }
  }
  return problem;
}

std::pair<std::vector<Trapezoid>, std::vector<Trapezoid>> ideal_solutions(
    const FuzzyDecisionMatrix& matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) throw EmptySet("ideal solutions of an empty matrix");
  std::vector<Trapezoid> pis;
  std::vector<Trapezoid> nis;
  pis.reserve(matrix.cols());
  nis.reserve(matrix.cols());
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    std::vector<Trapezoid> column;
    column.reserve(matrix.rows());
    for (std::size_t i = 0; i < matrix.rows(); ++i) column.push_back(matrix.at(i, j));
    const Trapezoid best = envelope_max(std::span<const Trapezoid>(column));
    const Trapezoid worst = envelope_min(std::span<const Trapezoid>(column));
    if (matrix.values[j].objective == Objective::Maximize) {
      pis.push_back(best);
      nis.push_back(worst);
    } else {
      pis.push_back(worst);
      nis.push_back(best);
    }
  }
  return {pis, nis};
}

std::vector<Trapezoid> build_z_lambda(const SyntheticProblem& problem, double lambda, Rng& rng,
                                      bool noise) {
  if (lambda < 0.0 || lambda > 1.0) throw Error("lambda must lie in [0, 1]");
  const auto [pis, nis] = ideal_solutions(problem.fuzzy);
  const double mean = problem.crisp.mean();
  const double stddev =
      std::sqrt((problem.crisp.array() - mean).square().sum() /
                static_cast<double>(problem.crisp.size()));
  std::vector<Trapezoid> row;
  row.reserve(pis.size());
  const double noise_scale = lambda * (1.0 - lambda);
  for (std::size_t j = 0; j < pis.size(); ++j) {
    const double draw = noise ? rng.normal(mean, stddev) : 0.0;
    Eigen::Vector4d v = (1.0 - lambda) * pis[j].vertices() + lambda * nis[j].vertices() +
                        noise_scale * draw * Eigen::Vector4d::Ones();
    v = v.cwiseMax(kSupportFloor);
    row.push_back(Trapezoid::from_sorted(v));
  }
  return row;
}

std::vector<int> topsis_rank(const Eigen::MatrixXd& matrix,
                             const std::vector<Objective>& objectives) {
  const Eigen::Index rows = matrix.rows();
  const Eigen::Index cols = matrix.cols();
  if (rows < 2) throw Error("ranking needs at least two alternatives");
  if (objectives.size() != static_cast<std::size_t>(cols)) {
    throw DimensionMismatch("objectives do not match the matrix columns");
  }

  // Vector normalization with uniform weights; all-zero columns contribute
  // nothing.
  Eigen::MatrixXd weighted(rows, cols);
  const double weight = 1.0 / static_cast<double>(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double denom = matrix.col(j).norm();
    if (denom <= 1e-300) {
      weighted.col(j).setZero();
    } else {
      weighted.col(j) = weight * matrix.col(j) / denom;
    }
  }

  Eigen::VectorXd best(cols);
  Eigen::VectorXd worst(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (objectives[static_cast<std::size_t>(j)] == Objective::Maximize) {
      best[j] = weighted.col(j).maxCoeff();
      worst[j] = weighted.col(j).minCoeff();
    } else {
      best[j] = weighted.col(j).minCoeff();
      worst[j] = weighted.col(j).maxCoeff();
    }
  }

  std::vector<double> closeness(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double d_best = (weighted.row(i).transpose() - best).norm();
    const double d_worst = (weighted.row(i).transpose() - worst).norm();
    const double total = d_best + d_worst;
    closeness[static_cast<std::size_t>(i)] = total <= 0.0 ? 0.5 : d_worst / total;
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    return closeness[lhs] > closeness[rhs];
  });
  std::vector<int> ranks(static_cast<std::size_t>(rows), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    ranks[order[pos]] = static_cast<int>(pos) + 1;
  }
  return ranks;
}

double kendall_tau(const std::vector<int>& r, const std::vector<int>& t) {
  if (r.size() != t.size()) throw LengthMismatch("rankings have different lengths");
  const std::size_t n = r.size();
  if (n < 2) throw LengthMismatch("rank correlation needs at least two items");
  auto sign = [](int v) { return (v > 0) - (v < 0); };
  int sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sum += sign(r[i] - r[j]) * sign(t[i] - t[j]);
    }
  }
  return 2.0 * static_cast<double>(sum) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<CorrelationRecord> correlation_experiment(const CorrelationOptions& options) {
  if (options.n_runs < 1) throw Error("correlation experiment needs at least one run");
  const std::size_t per_run = options.p_set.size();
  std::vector<CorrelationRecord> records(static_cast<std::size_t>(options.n_runs) * per_run);

  parallel_for(static_cast<std::size_t>(options.n_runs), options.threads, [&](std::size_t run) {
    for (std::size_t pi = 0; pi < per_run; ++pi) {
      CorrelationRecord& record = records[run * per_run + pi];
      record.run = static_cast<int>(run);
      record.p = options.p_set[pi];
      record.tau = std::numeric_limits<double>::quiet_NaN();
    }
    try {
      SyntheticProblem problem = gen_random_problem(options.n_actions, options.n_values,
                                                    derive_seed(options.seed, run, 1),
                                                    options.fuzzify);
      Rng run_rng(derive_seed(options.seed, run, 2));
      const double lambda = run_rng.uniform();
      problem.lambda = lambda;
      const std::vector<Trapezoid> z_fuzzy =
          build_z_lambda(problem, lambda, run_rng, options.noise);

      // Crisp projection of the fuzzy z row: vertex mean per value.
      Eigen::MatrixXd crisp_app(problem.crisp.rows() + 1, problem.crisp.cols());
      crisp_app.topRows(problem.crisp.rows()) = problem.crisp;
      for (Eigen::Index j = 0; j < problem.crisp.cols(); ++j) {
        crisp_app(problem.crisp.rows(), j) = z_fuzzy[static_cast<std::size_t>(j)].vertices().mean();
      }
      const std::vector<int> topsis = topsis_rank(crisp_app, problem.objectives());

      const std::vector<double> uniform(options.n_values,
                                        1.0 / static_cast<double>(options.n_values));
      const WeightDomain domain = from_crisp(uniform);

      for (std::size_t pi = 0; pi < per_run; ++pi) {
        CorrelationRecord& record = records[run * per_run + pi];
        record.lambda = lambda;
        try {
          ScoreParams params;
          params.p = options.p_set[pi];
          params.nu = 0.5;
          params.epsilon = 1e-4;
          DecisionProblem decision = problem_from_matrix(problem.fuzzy, &z_fuzzy, domain, params,
                                                         derive_seed(options.seed, run, 3));
          RankOptions rank_options;
          rank_options.threads = 1;  // runs are already parallel
          const RankingReport report = rank(decision, rank_options);
          record.engine_ranks = ranks_from_report(report);
          record.baseline_ranks = topsis;
          record.tau = kendall_tau(record.engine_ranks, record.baseline_ranks);
        } catch (const std::exception& e) {
          record.error = e.what();
        }
      }
    } catch (const std::exception& e) {
      for (std::size_t pi = 0; pi < per_run; ++pi) {
        records[run * per_run + pi].error = e.what();
      }
    }
  });
  return records;
}

std::vector<TimingRecord> timing_benchmark(const TimingOptions& options) {
  if (options.n_runs < 1) throw Error("timing benchmark needs at least one run");
  std::vector<TimingRecord> records;
  records.reserve(options.schedule.size() * static_cast<std::size_t>(options.n_runs));
  for (std::size_t s = 0; s < options.schedule.size(); ++s) {
    const auto [n_actions, n_values] = options.schedule[s];
    for (int run = 0; run < options.n_runs; ++run) {
      const std::uint64_t seed = derive_seed(options.seed, s, static_cast<std::uint64_t>(run));
      const SyntheticProblem problem = gen_random_problem(n_actions, n_values, seed);

      Rng rng(derive_seed(seed, 4));
      std::vector<double> weights(n_values);
      double total = 0.0;
      for (double& w : weights) {
        w = rng.uniform(0.05, 1.0);
        total += w;
      }
      for (double& w : weights) w /= total;
      const WeightDomain domain = from_crisp(weights);

      ScoreParams params;  // p = 1, nu = 0.5, epsilon = 1e-4
      DecisionProblem decision =
          problem_from_matrix(problem.fuzzy, nullptr, domain, params, seed);
      RankOptions rank_options;
      rank_options.threads = options.threads;

      const auto start = std::chrono::steady_clock::now();
      const RankingReport report = rank(decision, rank_options);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      (void)report;
      records.push_back({n_actions, n_values, run, seconds});
    }
  }
  return records;
}

}  // namespace rankzzy
