#include "rankzzy/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rankzzy/errors.hpp"

namespace rankzzy {

Trapezoid transform_quantitative(const std::vector<double>& samples) {
  if (samples.empty()) throw EmptySamples("quantitative transform needs at least one sample");
  // Accumulate in sorted order so the result depends only on the multiset of
  // samples, not on agent enumeration.
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  const double n = static_cast<double>(sorted.size());
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : sorted) sq += (v - mean) * (v - mean);
  const double sigma = std::sqrt(sq / n);
  const double core_left = std::max(mean - sigma, lo);
  const double core_right = std::min(mean + sigma, hi);
  return Trapezoid(lo, core_left, core_right, hi);
}

Trapezoid transform_qualitative(const std::map<std::string, double>& proportions,
                                const QualitativeScale& scale) {
  double total = 0.0;
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (const auto& [label, share] : proportions) {
    const Trapezoid* correspondence = scale.find(label);
    if (correspondence == nullptr) {
      throw UnknownLabel("label '" + label + "' is not part of the qualitative scale");
    }
    if (share < 0.0) throw ProportionsNotNormalized("proportion for '" + label + "' is negative");
    total += share;
    acc += share * correspondence->vertices();
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ProportionsNotNormalized("proportions must sum to 1, got " + std::to_string(total));
  }
  return Trapezoid(acc);
}

std::map<std::string, double> votes_to_proportions(const std::vector<std::string>& votes,
                                                   const QualitativeScale& scale) {
  if (votes.empty()) throw EmptySamples("vote list is empty");
  std::map<std::string, double> proportions;
  const double share = 1.0 / static_cast<double>(votes.size());
  for (const std::string& vote : votes) {
    if (scale.find(vote) == nullptr) {
      throw UnknownLabel("vote '" + vote + "' is not part of the qualitative scale");
    }
    proportions[vote] += share;
  }
  return proportions;
}

FuzzyDecisionMatrix build_matrix(const DecisionProblem& problem) {
  FuzzyDecisionMatrix matrix;
  matrix.actions = problem.actions;
  matrix.values = problem.values;
  matrix.entries.reserve(problem.actions.size() * problem.values.size());

  for (const std::string& action : problem.actions) {
    for (const ValueSpec& value : problem.values) {
      const auto key = DecisionProblem::assessment_key(action, value.name);
      const auto it = problem.assessments.find(key);
      if (it == problem.assessments.end()) {
        throw MissingAssessment("no assessment for '" + key + "'");
      }
      const Assessment& assessment = it->second;
      matrix.entries.push_back(std::visit(
          [&](const auto& payload) -> Trapezoid {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, Assessment::Samples>) {
              if (value.kind != ValueKind::Quantitative) {
                throw KindMismatch("'" + key + "' supplies samples for a qualitative value");
              }
              return transform_quantitative(payload.values);
            } else if constexpr (std::is_same_v<T, Assessment::Proportions>) {
              if (value.kind != ValueKind::Qualitative || !value.scale) {
                throw KindMismatch("'" + key + "' supplies proportions for a quantitative value");
              }
              return transform_qualitative(payload.by_label, *value.scale);
            } else if constexpr (std::is_same_v<T, Assessment::Votes>) {
              if (value.kind != ValueKind::Qualitative || !value.scale) {
                throw KindMismatch("'" + key + "' supplies votes for a quantitative value");
              }
              return transform_qualitative(votes_to_proportions(payload.labels, *value.scale),
                                           *value.scale);
            } else {
              return payload;  // pre-fuzzified entry, ingest unchanged
            }
          },
          assessment.payload));
    }
  }
  return matrix;
}

FuzzyDecisionMatrix normalize(const FuzzyDecisionMatrix& matrix, double epsilon) {
  if (epsilon <= 0.0) throw Error("normalization epsilon must be positive");
  FuzzyDecisionMatrix out = matrix;
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      lo = std::min(lo, matrix.at(i, j).a());
      hi = std::max(hi, matrix.at(i, j).d());
    }
    const double denom = hi - lo + epsilon;
    const bool maximize = matrix.values[j].objective == Objective::Maximize;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      const Eigen::Vector4d& v = matrix.at(i, j).vertices();
      if (maximize) {
        out.at(i, j) = Trapezoid(Eigen::Vector4d((v.array() - lo + epsilon) / denom));
      } else {
        // The flip t -> hi - t + epsilon reverses the vertex order.
        out.at(i, j) = Trapezoid(Eigen::Vector4d((hi - v.reverse().array() + epsilon) / denom));
      }
    }
  }
  return out;
}

}  // namespace rankzzy
