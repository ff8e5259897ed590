#ifndef RANKZZY_PIPELINE_HPP
#define RANKZZY_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rankzzy/matrix.hpp"
#include "rankzzy/optimizer.hpp"
#include "rankzzy/problem.hpp"

namespace rankzzy {

/// Per-action scoring outcome: fuzzy and defuzzified extremes over the
/// weight domain, their nu-aggregate, and the optimal weight certificates.
struct ScoreBundle {
  Trapezoid fuzzy_min;
  Trapezoid fuzzy_max;
  double crisp_min = 0.0;
  double crisp_max = 0.0;
  double aggregated = 0.0;
  WeightScheme weights_min;
  WeightScheme weights_max;
  bool converged_min = false;
  bool converged_max = false;
};

struct PhaseTimings {
  double build_matrix_s = 0.0;
  double normalize_s = 0.0;
  double optimize_s = 0.0;
  double aggregate_s = 0.0;
  double total_s = 0.0;
};

struct RankingReport {
  std::vector<std::string> actions;           // input order
  std::vector<ScoreBundle> bundles;           // aligned with actions
  std::vector<std::size_t> ranking;           // indices, descending aggregated score
  std::vector<std::vector<std::size_t>> ties; // groups of near-equal actions
  FuzzyDecisionMatrix normalized;
  ScoreParams params;
  std::uint64_t seed = 0;
  std::string stance;                          // pessimistic | balanced | optimistic
  PhaseTimings timings;
  bool all_converged = false;

  const std::string& action_at_rank(std::size_t position) const {
    return actions[ranking[position]];
  }
};

struct RankOptions {
  unsigned threads = 0;  // 0 = machine parallelism
  double tie_tolerance = 1e-9;
  double opt_tolerance = 1e-8;
  int max_iterations = 500;
  int multistart_points = 3;
};

/// Full ranking pass: assemble and normalize the matrix, extremize each
/// action's score over the weight domain, defuzzify, aggregate with nu and
/// sort descending. The per-action min/max problems run concurrently.
RankingReport rank(const DecisionProblem& problem, const RankOptions& options = {});

struct SensitivityCell {
  double p = 0.0;
  double nu = 0.0;
  std::vector<double> scores;  // aligned with actions
  std::size_t top = 0;         // index of the best-scoring action
};

struct SensitivityGrid {
  std::vector<std::string> actions;
  std::vector<SensitivityCell> cells;  // row-major: p outer, nu inner
};

/// Reruns the score/aggregate/rank phases over a (p, nu) grid. Normalization
/// is computed once; the optimization stage is shared across nu values, which
/// do not affect it.
SensitivityGrid sensitivity_grid(const DecisionProblem& problem, std::pair<double, double> p_range,
                                 std::pair<double, double> nu_range, std::size_t resolution,
                                 const RankOptions& options = {});

}  // namespace rankzzy

#endif  // RANKZZY_PIPELINE_HPP
