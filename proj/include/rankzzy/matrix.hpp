#ifndef RANKZZY_MATRIX_HPP
#define RANKZZY_MATRIX_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rankzzy/problem.hpp"
#include "rankzzy/trapezoid.hpp"

namespace rankzzy {

/// Rectangular grid of fuzzy entries, one row per action and one column per
/// value, stored row-major.
struct FuzzyDecisionMatrix {
  std::vector<std::string> actions;
  std::vector<ValueSpec> values;
  std::vector<Trapezoid> entries;

  std::size_t rows() const { return actions.size(); }
  std::size_t cols() const { return values.size(); }

  const Trapezoid& at(std::size_t i, std::size_t j) const { return entries[i * cols() + j]; }
  Trapezoid& at(std::size_t i, std::size_t j) { return entries[i * cols() + j]; }

  std::vector<Trapezoid> row(std::size_t i) const {
    return {entries.begin() + static_cast<std::ptrdiff_t>(i * cols()),
            entries.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols())};
  }
};

/// Fuzzifies per-agent quantitative samples as (min, mean - sigma,
/// mean + sigma, max) with the population standard deviation; the core is
/// clamped into [min, max] so skewed samples keep the vertex order.
Trapezoid transform_quantitative(const std::vector<double>& samples);

/// Convex combination of the scale correspondences weighted by the per-label
/// proportions.
Trapezoid transform_qualitative(const std::map<std::string, double>& proportions,
                                const QualitativeScale& scale);

/// Per-agent raw votes folded into label frequencies.
std::map<std::string, double> votes_to_proportions(const std::vector<std::string>& votes,
                                                   const QualitativeScale& scale);

/// Assembles the fuzzy decision matrix, dispatching the quantitative or
/// qualitative transform per entry; pre-fuzzified entries pass through.
FuzzyDecisionMatrix build_matrix(const DecisionProblem& problem);

/// Min-max normalization against the per-value crisp support envelopes,
/// shifted by epsilon so every output vertex is strictly positive. Minimize
/// values are flipped so that larger always means better.
FuzzyDecisionMatrix normalize(const FuzzyDecisionMatrix& matrix, double epsilon);

}  // namespace rankzzy

#endif  // RANKZZY_MATRIX_HPP
