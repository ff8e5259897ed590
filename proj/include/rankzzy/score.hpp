#ifndef RANKZZY_SCORE_HPP
#define RANKZZY_SCORE_HPP

#include <span>

#include "rankzzy/trapezoid.hpp"
#include "rankzzy/weights.hpp"

namespace rankzzy {

/// Powers with |p| below this threshold are routed to the geometric branch.
inline constexpr double kZeroPowerThreshold = 1e-9;

/**
 * Generalized fuzzy p-mean of one matrix row, computed vertex-wise:
 *   finite p != 0:  [sum_j w_j * r_j^p]^(1/p)
 *   p ~ 0:          prod_j r_j^(w_j)   (vertex-by-matching-vertex exponents)
 *   p = -inf/+inf:  vertex-wise min/max envelope of the row (weights drop out)
 * Row entries must be strictly positive.
 */
Trapezoid fuzzy_p_score(std::span<const Trapezoid> row, const WeightScheme& weights, double p);

/// Crisp value of a fuzzy score: vertex-method distance to crisp zero.
inline double defuzzify(const Trapezoid& x) { return vertex_norm(x); }

/// Convex p-mean mix of the defuzzified extremes controlled by the stability
/// parameter nu in [0, 1].
double aggregate_nu(double crisp_min, double crisp_max, double p, double nu);

}  // namespace rankzzy

#endif  // RANKZZY_SCORE_HPP
