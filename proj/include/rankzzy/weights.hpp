#ifndef RANKZZY_WEIGHTS_HPP
#define RANKZZY_WEIGHTS_HPP

#include <cstddef>
#include <vector>

#include "rankzzy/trapezoid.hpp"

namespace rankzzy {

/// One fuzzy weight per value, aligned with the problem's value order.
struct WeightScheme {
  std::vector<Trapezoid> weights;

  std::size_t size() const { return weights.size(); }
  const Trapezoid& operator[](std::size_t j) const { return weights[j]; }
};

/**
 * Domain of bounded fuzzy weight schemes: per value a fuzzy lower and upper
 * bound with 0 <= lower <= upper <= 1 vertex-wise, plus the core-sum window
 * sum_j b(lower_j) <= 1 <= sum_j c(upper_j) that keeps at least one
 * normalizable scheme inside.
 */
struct WeightDomain {
  std::vector<Trapezoid> lower;
  std::vector<Trapezoid> upper;

  std::size_t size() const { return lower.size(); }
};

/// Throws BoundsOutOfOrder or InfeasibleCoreSum naming the offending value.
void validate(const WeightDomain& domain);

/// Membership test: vertex-wise within bounds and core sums straddling 1.
/// The tolerance absorbs floating-point drift on knife-edge sums.
bool member_of(const WeightScheme& scheme, const WeightDomain& domain, double tol = 1e-12);

/// Domain generated from a crisp normalized weight vector: the min and max
/// components become the common crisp bounds of every value.
WeightDomain from_crisp(const std::vector<double>& weights);

/// Domain generated from fuzzy weights: vertex-wise min/max envelopes become
/// the common bounds of every value.
WeightDomain from_fuzzy(const std::vector<Trapezoid>& weights);

/// Per-value midpoint (lower + upper) / 2; a convenient interior candidate.
WeightScheme domain_midpoint(const WeightDomain& domain);

}  // namespace rankzzy

#endif  // RANKZZY_WEIGHTS_HPP
