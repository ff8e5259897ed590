#ifndef RANKZZY_TESTS_FIXTURES_HPP
#define RANKZZY_TESTS_FIXTURES_HPP

#include <vector>

#include "rankzzy/problem.hpp"
#include "rankzzy/rng.hpp"
#include "rankzzy/trapezoid.hpp"
#include "rankzzy/weights.hpp"

namespace fixtures {

using rankzzy::Trapezoid;

// Exam-method selection example: frozen expected values for the end-to-end
// reproduction tests.

inline const Trapezoid kExamFairnessMc{0.132, 0.236, 0.436, 0.622};
inline const Trapezoid kExamFairnessOa{0.510, 0.704, 0.904, 0.946};
inline const Trapezoid kExamCostMc{2.501, 2.808, 3.208, 3.564};
inline const Trapezoid kExamCostOa{0.846, 1.032, 1.266, 1.465};

inline const Trapezoid kExamLowerFairness{0.60, 0.70, 0.80, 0.90};
inline const Trapezoid kExamUpperFairness{0.75, 0.80, 0.90, 1.00};
inline const Trapezoid kExamLowerCost{0.10, 0.15, 0.20, 0.25};
inline const Trapezoid kExamUpperCost{0.15, 0.20, 0.25, 0.30};

// Normalized matrix (epsilon = 1e-4); epsilon-sized vertices are stored as
// 1e-4, well inside the 1e-3 comparison tolerance.
inline const Trapezoid kExamNormFairnessMc{1e-4, 0.128, 0.374, 0.602};
inline const Trapezoid kExamNormFairnessOa{0.464, 0.703, 0.948, 1.000};
inline const Trapezoid kExamNormCostMc{0.609, 0.722, 0.869, 1.000};
inline const Trapezoid kExamNormCostOa{1e-4, 0.068, 0.155, 0.228};

inline const Trapezoid kExamFuzzyMinMc{0.061, 0.198, 0.473, 0.792};
inline const Trapezoid kExamFuzzyMaxMc{0.091, 0.247, 0.553, 0.902};
inline const Trapezoid kExamFuzzyMinOa{0.279, 0.502, 0.790, 0.957};
inline const Trapezoid kExamFuzzyMaxOa{0.348, 0.576, 0.892, 1.068};

inline constexpr double kExamCrispMinMc = 0.945;
inline constexpr double kExamCrispMaxMc = 1.091;
inline constexpr double kExamCrispMinOa = 1.367;
inline constexpr double kExamCrispMaxOa = 1.546;
inline constexpr double kExamAggregatedMc = 1.018;
inline constexpr double kExamAggregatedOa = 1.457;

inline rankzzy::QualitativeScale exam_scale() {
  return {{{"Unfair", Trapezoid(0.0, 0.0, 0.2, 0.4)},
           {"Neutral", Trapezoid(0.2, 0.4, 0.6, 0.8)},
           {"Fair", Trapezoid(0.6, 0.8, 1.0, 1.0)}}};
}

inline rankzzy::WeightDomain exam_domain() {
  rankzzy::WeightDomain domain;
  domain.lower = {kExamLowerFairness, kExamLowerCost};
  domain.upper = {kExamUpperFairness, kExamUpperCost};
  return domain;
}

/// The full running example; cost is declared a benefit criterion so both
/// columns normalize with the same formula, matching the frozen tables.
inline rankzzy::DecisionProblem exam_problem() {
  rankzzy::DecisionProblem problem;
  problem.actions = {"MC", "OA"};

  rankzzy::ValueSpec fairness;
  fairness.name = "fairness";
  fairness.kind = rankzzy::ValueKind::Qualitative;
  fairness.objective = rankzzy::Objective::Maximize;
  fairness.scale = exam_scale();
  problem.values.push_back(fairness);

  rankzzy::ValueSpec cost;
  cost.name = "cost";
  cost.kind = rankzzy::ValueKind::Quantitative;
  cost.objective = rankzzy::Objective::Maximize;
  cost.unit = "hours";
  problem.values.push_back(cost);

  problem.assessments["MC/fairness"] = rankzzy::Assessment{
      rankzzy::Assessment::Proportions{{{"Fair", 0.07}, {"Neutral", 0.45}, {"Unfair", 0.48}}}};
  problem.assessments["OA/fairness"] = rankzzy::Assessment{
      rankzzy::Assessment::Proportions{{{"Fair", 0.79}, {"Neutral", 0.18}, {"Unfair", 0.03}}}};
  problem.assessments["MC/cost"] = rankzzy::Assessment{kExamCostMc};
  problem.assessments["OA/cost"] = rankzzy::Assessment{kExamCostOa};

  problem.domain = exam_domain();
  problem.params = {1.0, 0.5, 1e-4};
  problem.seed = 42;
  return problem;
}

// -- randomized-input helpers ------------------------------------------------

/// Random aggregation power outside the near-zero band, where the finite-p
/// formula with unnormalized fuzzy weights degenerates; exact zero remains
/// reachable through the geometric branch.
inline double random_power(rankzzy::Rng& rng, double lo, double hi) {
  const double p = rng.uniform(lo, hi);
  return std::abs(p) < 0.05 ? 0.0 : p;
}

/// Trapezoid with all vertices in [lo, hi], strictly positive when lo > 0.
inline Trapezoid random_trapezoid(rankzzy::Rng& rng, double lo, double hi) {
  Eigen::Vector4d v;
  for (int i = 0; i < 4; ++i) v[i] = rng.uniform(lo, hi);
  return Trapezoid::from_sorted(v);
}

inline std::vector<Trapezoid> random_positive_row(rankzzy::Rng& rng, std::size_t n,
                                                  double lo = 0.05, double hi = 1.0) {
  std::vector<Trapezoid> row;
  row.reserve(n);
  for (std::size_t j = 0; j < n; ++j) row.push_back(random_trapezoid(rng, lo, hi));
  return row;
}

/// Crisp scheme summing to 1; the setting in which the power mean keeps its
/// min/max envelope bounds and its monotonicity in p.
inline rankzzy::WeightScheme random_normalized_crisp_weights(rankzzy::Rng& rng, std::size_t n) {
  std::vector<double> raw(n);
  double total = 0.0;
  for (double& w : raw) {
    w = rng.uniform(0.05, 1.0);
    total += w;
  }
  rankzzy::WeightScheme scheme;
  for (double w : raw) scheme.weights.push_back(Trapezoid::crisp(w / total));
  return scheme;
}

/// General fuzzy weights inside [0, 1].
inline rankzzy::WeightScheme random_fuzzy_weights(rankzzy::Rng& rng, std::size_t n) {
  rankzzy::WeightScheme scheme;
  for (std::size_t j = 0; j < n; ++j) scheme.weights.push_back(random_trapezoid(rng, 0.01, 1.0));
  return scheme;
}

/// Valid weight domain with overlapping vertex ranges, feasible by
/// construction: per-value trapezoid bounds with bounded widths, resampled
/// until the core-sum window straddles 1.
inline rankzzy::WeightDomain random_domain(rankzzy::Rng& rng, std::size_t n) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    rankzzy::WeightDomain domain;
    for (std::size_t j = 0; j < n; ++j) {
      const double base = rng.uniform(0.05, 0.55);
      Eigen::Vector4d lo;
      lo[0] = base;
      for (int v = 1; v < 4; ++v) lo[v] = lo[v - 1] + rng.uniform(0.0, 0.04);
      Eigen::Vector4d hi = lo;
      const double width = rng.uniform(0.06, 0.2);
      for (int v = 0; v < 4; ++v) hi[v] = std::min(lo[v] + width * rng.uniform(0.5, 1.0), 1.0);
      domain.lower.push_back(Trapezoid(lo.cwiseMin(1.0)));
      domain.upper.push_back(Trapezoid::from_sorted(hi));
    }
    double sum_lower_b = 0.0;
    double sum_upper_c = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum_lower_b += domain.lower[j].b();
      sum_upper_c += domain.upper[j].c();
    }
    if (sum_lower_b <= 1.0 && sum_upper_c >= 1.0) return domain;
  }
  // Uniform fallback; reached only for pathological dimension choices.
  rankzzy::WeightDomain domain;
  const double w = 1.0 / static_cast<double>(n);
  domain.lower.assign(n, Trapezoid::crisp(w * 0.8));
  domain.upper.assign(n, Trapezoid::crisp(std::min(1.0, w * 1.5)));
  return domain;
}

}  // namespace fixtures

#endif  // RANKZZY_TESTS_FIXTURES_HPP
