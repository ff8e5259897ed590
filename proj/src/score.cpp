#include "rankzzy/score.hpp"

#include <cmath>
#include <limits>

#include "rankzzy/errors.hpp"

namespace rankzzy {

namespace {

void check_row(std::span<const Trapezoid> row, const WeightScheme& weights) {
  if (row.empty()) throw EmptyRow("score of an empty row");
  if (row.size() != weights.size()) {
    throw DimensionMismatch("row and weight scheme have different value counts");
  }
  for (const Trapezoid& entry : row) {
    if (entry.a() <= 0.0) {
      throw NonPositiveEntry("p-mean score requires strictly positive entries");
    }
  }
}

}  // namespace

Trapezoid fuzzy_p_score(std::span<const Trapezoid> row, const WeightScheme& weights, double p) {
  check_row(row, weights);

  if (std::isinf(p)) {
    return p > 0 ? envelope_max(row) : envelope_min(row);
  }

  if (std::abs(p) < kZeroPowerThreshold) {
    // Weighted geometric product; matching-vertex exponents can cross for
    // wide fuzzy weights, so the result is re-sorted.
    Eigen::Vector4d acc = Eigen::Vector4d::Ones();
    for (std::size_t j = 0; j < row.size(); ++j) {
      acc = acc.cwiseProduct(
          Eigen::Vector4d(row[j].vertices().array().pow(weights[j].vertices().array())));
    }
    return Trapezoid::from_sorted(acc);
  }

  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (std::size_t j = 0; j < row.size(); ++j) {
    acc += mul(weights[j], pow(row[j], p)).vertices();
  }
  return pow(Trapezoid(acc), 1.0 / p);
}

double aggregate_nu(double crisp_min, double crisp_max, double p, double nu) {
  if (std::isinf(p)) {
    // True limits of the convex p-mean: the larger extreme wins for p -> +inf
    // unless its weight vanishes, and symmetrically for p -> -inf.
    if (p > 0) return nu > 0.0 ? crisp_max : crisp_min;
    return nu < 1.0 ? crisp_min : crisp_max;
  }
  if (std::abs(p) < kZeroPowerThreshold) {
    return std::pow(crisp_min, 1.0 - nu) * std::pow(crisp_max, nu);
  }
  return std::pow((1.0 - nu) * std::pow(crisp_min, p) + nu * std::pow(crisp_max, p), 1.0 / p);
}

}  // namespace rankzzy
