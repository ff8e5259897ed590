#include "rankzzy/weights.hpp"

#include <cmath>
#include <string>

#include "rankzzy/errors.hpp"

namespace rankzzy {

void validate(const WeightDomain& domain) {
  if (domain.lower.size() != domain.upper.size()) {
    throw DimensionMismatch("weight domain has mismatched lower/upper bound counts");
  }
  const Trapezoid zero = Trapezoid::crisp(0.0);
  const Trapezoid one = Trapezoid::crisp(1.0);
  for (std::size_t j = 0; j < domain.size(); ++j) {
    const Trapezoid& lo = domain.lower[j];
    const Trapezoid& hi = domain.upper[j];
    if (!leq_pointwise(zero, lo) || !leq_pointwise(lo, hi) || !leq_pointwise(hi, one)) {
      throw BoundsOutOfOrder("weight bounds for value " + std::to_string(j) +
                             " violate 0 <= lower <= upper <= 1");
    }
  }
  double sum_lower_b = 0.0;
  double sum_upper_c = 0.0;
  for (std::size_t j = 0; j < domain.size(); ++j) {
    sum_lower_b += domain.lower[j].b();
    sum_upper_c += domain.upper[j].c();
  }
  if (sum_lower_b > 1.0 || sum_upper_c < 1.0) {
    throw InfeasibleCoreSum("core-sum window excludes 1: sum of lower core-left vertices is " +
                                std::to_string(sum_lower_b) +
                                ", sum of upper core-right vertices is " +
                                std::to_string(sum_upper_c),
                            sum_lower_b, sum_upper_c);
  }
}

bool member_of(const WeightScheme& scheme, const WeightDomain& domain, double tol) {
  if (scheme.size() != domain.size()) {
    throw DimensionMismatch("weight scheme and domain have different value counts");
  }
  double sum_b = 0.0;
  double sum_c = 0.0;
  for (std::size_t j = 0; j < domain.size(); ++j) {
    const Eigen::Vector4d& w = scheme[j].vertices();
    const Eigen::Vector4d& lo = domain.lower[j].vertices();
    const Eigen::Vector4d& hi = domain.upper[j].vertices();
    if (((w - lo).array() < -tol).any() || ((hi - w).array() < -tol).any()) return false;
    sum_b += w[1];
    sum_c += w[2];
  }
  return sum_b <= 1.0 + tol && sum_c >= 1.0 - tol;
}

WeightDomain from_crisp(const std::vector<double>& weights) {
  if (weights.empty()) throw NotNormalized("crisp weight vector is empty");
  double sum = 0.0;
  double lo = weights.front();
  double hi = weights.front();
  for (double w : weights) {
    if (w < 0.0) throw NotNormalized("crisp weights must be nonnegative");
    sum += w;
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw NotNormalized("crisp weights must sum to 1, got " + std::to_string(sum));
  }
  WeightDomain domain;
  domain.lower.assign(weights.size(), Trapezoid::crisp(lo));
  domain.upper.assign(weights.size(), Trapezoid::crisp(hi));
  return domain;
}

WeightDomain from_fuzzy(const std::vector<Trapezoid>& weights) {
  if (weights.empty()) throw NotNormalized("fuzzy weight vector is empty");
  const Trapezoid lo = envelope_min(std::span<const Trapezoid>(weights));
  const Trapezoid hi = envelope_max(std::span<const Trapezoid>(weights));
  WeightDomain domain;
  domain.lower.assign(weights.size(), lo);
  domain.upper.assign(weights.size(), hi);
  return domain;
}

WeightScheme domain_midpoint(const WeightDomain& domain) {
  WeightScheme scheme;
  scheme.weights.reserve(domain.size());
  for (std::size_t j = 0; j < domain.size(); ++j) {
    scheme.weights.push_back(
        Trapezoid(Eigen::Vector4d(0.5 * (domain.lower[j].vertices() + domain.upper[j].vertices()))));
  }
  return scheme;
}

}  // namespace rankzzy
