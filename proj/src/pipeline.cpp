#include "rankzzy/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rankzzy/errors.hpp"
#include "rankzzy/parallel.hpp"
#include "rankzzy/rng.hpp"

namespace rankzzy {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename Fn>
auto tagged(const char* step, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(std::string(step) + ": " + e.what());
  }
}

struct ExtremePair {
  OptimizationResult minimum;
  OptimizationResult maximum;
};

/// The optimization stage at a fixed p: per-action min and max problems
/// dispatched over the worker pool.
std::vector<ExtremePair> optimize_all(const FuzzyDecisionMatrix& normalized,
                                      const WeightDomain& domain, double p, std::uint64_t seed,
                                      const RankOptions& options) {
  const std::size_t n_actions = normalized.rows();
  std::vector<ExtremePair> extremes(n_actions);
  parallel_for(2 * n_actions, options.threads, [&](std::size_t task) {
    const std::size_t action = task / 2;
    const bool maximize = (task % 2) == 1;
    OptimizationSpec spec;
    spec.row = normalized.row(action);
    spec.domain = domain;
    spec.p = p;
    spec.direction = maximize ? Direction::Maximize : Direction::Minimize;
    spec.tolerance = options.opt_tolerance;
    spec.max_iterations = options.max_iterations;
    spec.multistart_points = options.multistart_points;
    spec.seed = derive_seed(seed, action, maximize ? 1 : 0);
    OptimizationResult result = optimize(spec);
    if (maximize) {
      extremes[action].maximum = std::move(result);
    } else {
      extremes[action].minimum = std::move(result);
    }
  });
  return extremes;
}

std::vector<ScoreBundle> bundle_scores(std::vector<ExtremePair>&& extremes, double p, double nu) {
  std::vector<ScoreBundle> bundles(extremes.size());
  for (std::size_t i = 0; i < extremes.size(); ++i) {
    ScoreBundle& bundle = bundles[i];
    bundle.fuzzy_min = extremes[i].minimum.fuzzy_score;
    bundle.fuzzy_max = extremes[i].maximum.fuzzy_score;
    bundle.crisp_min = extremes[i].minimum.objective;
    bundle.crisp_max = extremes[i].maximum.objective;
    bundle.weights_min = std::move(extremes[i].minimum.weights);
    bundle.weights_max = std::move(extremes[i].maximum.weights);
    bundle.converged_min = extremes[i].minimum.converged;
    bundle.converged_max = extremes[i].maximum.converged;
    bundle.aggregated = aggregate_nu(bundle.crisp_min, bundle.crisp_max, p, nu);
  }
  return bundles;
}

std::vector<std::size_t> sort_descending(const std::vector<ScoreBundle>& bundles) {
  std::vector<std::size_t> order(bundles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    return bundles[lhs].aggregated > bundles[rhs].aggregated;
  });
  return order;
}

std::vector<std::vector<std::size_t>> tie_groups(const std::vector<ScoreBundle>& bundles,
                                                 const std::vector<std::size_t>& order,
                                                 double tolerance) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> current;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (!current.empty() &&
        std::abs(bundles[current.back()].aggregated - bundles[order[pos]].aggregated) >=
            tolerance) {
      if (current.size() > 1) groups.push_back(current);
      current.clear();
    }
    current.push_back(order[pos]);
  }
  if (current.size() > 1) groups.push_back(current);
  return groups;
}

std::string stance_label(double nu) {
  if (nu == 0.5) return "balanced";
  return nu < 0.5 ? "pessimistic" : "optimistic";
}

void check_problem(const DecisionProblem& problem) {
  if (problem.actions.empty()) throw Error("problem has no actions");
  if (problem.values.empty()) throw Error("problem has no values");
  if (problem.domain.size() != problem.values.size()) {
    throw DimensionMismatch("weight domain covers " + std::to_string(problem.domain.size()) +
                            " values, problem has " + std::to_string(problem.values.size()));
  }
  if (problem.params.nu < 0.0 || problem.params.nu > 1.0) {
    throw Error("stability parameter nu must lie in [0, 1]");
  }
  if (problem.params.epsilon <= 0.0) throw Error("epsilon must be positive");
}

}  // namespace

RankingReport rank(const DecisionProblem& problem, const RankOptions& options) {
  const auto t_total = std::chrono::steady_clock::now();
  check_problem(problem);
  tagged("validate", [&] { validate(problem.domain); return 0; });

  RankingReport report;
  report.actions = problem.actions;
  report.params = problem.params;
  report.seed = problem.seed;
  report.stance = stance_label(problem.params.nu);

  auto t_phase = std::chrono::steady_clock::now();
  const FuzzyDecisionMatrix matrix = tagged("build-matrix", [&] { return build_matrix(problem); });
  report.timings.build_matrix_s = seconds_since(t_phase);

  t_phase = std::chrono::steady_clock::now();
  report.normalized =
      tagged("normalize", [&] { return normalize(matrix, problem.params.epsilon); });
  report.timings.normalize_s = seconds_since(t_phase);

  t_phase = std::chrono::steady_clock::now();
  std::vector<ExtremePair> extremes = tagged("optimize", [&] {
    return optimize_all(report.normalized, problem.domain, problem.params.p, problem.seed, options);
  });
  report.timings.optimize_s = seconds_since(t_phase);

  t_phase = std::chrono::steady_clock::now();
  report.bundles = bundle_scores(std::move(extremes), problem.params.p, problem.params.nu);
  report.ranking = sort_descending(report.bundles);
  report.ties = tie_groups(report.bundles, report.ranking, options.tie_tolerance);
  report.timings.aggregate_s = seconds_since(t_phase);

  report.all_converged = true;
  for (const ScoreBundle& bundle : report.bundles) {
    report.all_converged = report.all_converged && bundle.converged_min && bundle.converged_max;
  }
  report.timings.total_s = seconds_since(t_total);
  return report;
}

SensitivityGrid sensitivity_grid(const DecisionProblem& problem, std::pair<double, double> p_range,
                                 std::pair<double, double> nu_range, std::size_t resolution,
                                 const RankOptions& options) {
  if (resolution < 2) throw Error("sensitivity grid resolution must be at least 2");
  check_problem(problem);
  validate(problem.domain);

  SensitivityGrid grid;
  grid.actions = problem.actions;
  grid.cells.reserve(resolution * resolution);

  const FuzzyDecisionMatrix matrix = build_matrix(problem);
  const FuzzyDecisionMatrix normalized = normalize(matrix, problem.params.epsilon);

  auto tick = [resolution](std::pair<double, double> range, std::size_t k) {
    return range.first + (range.second - range.first) * static_cast<double>(k) /
                             static_cast<double>(resolution - 1);
  };

  for (std::size_t pi = 0; pi < resolution; ++pi) {
    const double p = tick(p_range, pi);
    // The optimization stage depends on p only; nu enters the aggregation.
    std::vector<ExtremePair> extremes =
        optimize_all(normalized, problem.domain, p, problem.seed, options);
    for (std::size_t ni = 0; ni < resolution; ++ni) {
      const double nu = tick(nu_range, ni);
      SensitivityCell cell;
      cell.p = p;
      cell.nu = nu;
      cell.scores.reserve(problem.actions.size());
      for (const ExtremePair& pair : extremes) {
        cell.scores.push_back(aggregate_nu(pair.minimum.objective, pair.maximum.objective, p, nu));
      }
      cell.top = static_cast<std::size_t>(
          std::max_element(cell.scores.begin(), cell.scores.end()) - cell.scores.begin());
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

}  // namespace rankzzy
