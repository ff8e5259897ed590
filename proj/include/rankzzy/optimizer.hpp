#ifndef RANKZZY_OPTIMIZER_HPP
#define RANKZZY_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "rankzzy/score.hpp"
#include "rankzzy/trapezoid.hpp"
#include "rankzzy/weights.hpp"

namespace rankzzy {

enum class Direction { Minimize, Maximize };

/// One constrained score-extremization problem for a single action row.
struct OptimizationSpec {
  std::vector<Trapezoid> row;  // normalized entries, strictly positive
  WeightDomain domain;
  double p = 1.0;
  Direction direction = Direction::Minimize;
  double tolerance = 1e-8;
  int max_iterations = 500;
  int multistart_points = 3;  // lower corner, upper corner, midpoint
  std::uint64_t seed = 0;
};

struct OptimizationResult {
  double objective = 0.0;
  Trapezoid fuzzy_score;
  WeightScheme weights;  // arg-min / arg-max certificate, member of the domain
  int iterations = 0;
  bool converged = false;
  // Set for the infinite powers, where the score ignores the weights and the
  // certificate is the (repaired) domain midpoint rather than an optimum.
  bool weights_nominal = false;
};

/**
 * Extremizes the defuzzified p-mean score over the weight domain.
 *
 * The decision variables are the 4|V| weight vertices, constrained by the
 * per-weight vertex chains, the vertex-wise domain box and the core-sum
 * window. All constraints are linear, so the solver runs a feasible-point
 * sequential quadratic programming loop: finite-difference gradients, a
 * damped BFGS model, and an active-set QP for the step, preceded by a short
 * projected-gradient phase that locates the active face cheaply. Multi-start
 * from the domain corners and midpoint; deterministic given the seed.
 */
OptimizationResult optimize(const OptimizationSpec& spec);

/// Exhaustive reference: evaluates every chain-ordered vertex quadruple on a
/// regular per-coordinate grid, filtered by domain membership, and returns
/// the grid optimum. Limited to small problems; used by tests.
OptimizationResult brute_force_oracle(const OptimizationSpec& spec, int grid_resolution);

}  // namespace rankzzy

#endif  // RANKZZY_OPTIMIZER_HPP
