#ifndef RANKZZY_HARNESS_HPP
#define RANKZZY_HARNESS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rankzzy/matrix.hpp"
#include "rankzzy/rng.hpp"

namespace rankzzy {

/// Randomly generated benchmark problem: a crisp matrix plus its fuzzified
/// counterpart; every fuzzy entry's support contains the crisp value.
struct SyntheticProblem {
  Eigen::MatrixXd crisp;       // actions x values
  FuzzyDecisionMatrix fuzzy;   // same shape, objectives carried by the specs
  double lambda = 0.0;
  std::uint64_t noise_seed = 0;

  std::vector<Objective> objectives() const {
    std::vector<Objective> out;
    out.reserve(fuzzy.values.size());
    for (const ValueSpec& spec : fuzzy.values) out.push_back(spec.objective);
    return out;
  }
};

struct FuzzifyParams {
  double rho = 0.1;     // relative core half-width
  double spread = 0.1;  // relative extra support width
};

/// Fuzzifies a positive crisp value with a random core around it and random
/// extra support; the support infimum is floored at a small positive value.
Trapezoid fuzzify(double value, double rho, double spread, Rng& rng);

/// Uniform crisp entries in [0.05, 1] with a random maximize/minimize split
/// (at least one of each when two or more values are present); deterministic
/// under the seed.
SyntheticProblem gen_random_problem(std::size_t n_actions, std::size_t n_values,
                                    std::uint64_t seed, const FuzzifyParams& params = {});

/// Positive and negative ideal rows: the per-value best and worst envelopes
/// with respect to each value's objective.
std::pair<std::vector<Trapezoid>, std::vector<Trapezoid>> ideal_solutions(
    const FuzzyDecisionMatrix& matrix);

/// Noisy convex combination of the ideal rows. The noise is a crisp draw
/// from a normal law matched to the crisp matrix's mean/stddev, scaled by
/// lambda (1 - lambda), so the extremes lambda in {0, 1} are exact.
std::vector<Trapezoid> build_z_lambda(const SyntheticProblem& problem, double lambda, Rng& rng,
                                      bool noise = true);

/// Classic crisp ranking baseline: vector normalization, uniform weights,
/// Euclidean distances to the ideal and anti-ideal, descending closeness.
/// Returns the 1-based rank of each row.
std::vector<int> topsis_rank(const Eigen::MatrixXd& matrix, const std::vector<Objective>& objectives);

/// Pairwise-concordance rank correlation in [-1, 1].
double kendall_tau(const std::vector<int>& r, const std::vector<int>& t);

struct CorrelationRecord {
  int run = 0;
  double p = 0.0;
  double lambda = 0.0;
  double tau = 0.0;  // NaN when the run failed
  std::vector<int> engine_ranks;
  std::vector<int> baseline_ranks;
  std::string error;  // empty on success; failed runs are kept, not dropped
};

struct CorrelationOptions {
  int n_runs = 50;
  std::vector<double> p_set = {-1.0, 0.0, 1.0, 2.0};
  std::uint64_t seed = 20240101;
  std::size_t n_actions = 5;
  std::size_t n_values = 4;
  FuzzifyParams fuzzify;
  bool noise = true;
  unsigned threads = 0;
};

/// Per run: draw a synthetic problem and a lambda, append the z row, rank
/// with both engines and record Kendall's tau for every p. Runs execute in
/// parallel worker slots with per-run derived seeds, so the records are
/// reproducible bit-for-bit under a fixed master seed.
std::vector<CorrelationRecord> correlation_experiment(const CorrelationOptions& options);

struct TimingRecord {
  std::size_t n_actions = 0;
  std::size_t n_values = 0;
  int run = 0;
  double seconds = 0.0;
};

struct TimingOptions {
  std::vector<std::pair<std::size_t, std::size_t>> schedule = {
      {2, 2}, {5, 4}, {10, 8}, {15, 12}, {20, 16}, {30, 24}, {40, 32}, {50, 40}};
  int n_runs = 3;
  std::uint64_t seed = 20240101;
  unsigned threads = 0;  // used inside rank(); the runs themselves are sequential
};

/// Wall-clock of the full ranking pass per problem size. Runs execute
/// sequentially to keep the measurements free of contention.
std::vector<TimingRecord> timing_benchmark(const TimingOptions& options);

}  // namespace rankzzy

#endif  // RANKZZY_HARNESS_HPP
