#include "rankzzy/optimizer.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "rankzzy/errors.hpp"
#include "rankzzy/rng.hpp"

namespace rankzzy {

namespace {

constexpr double kFeasTol = 1e-10;
constexpr double kFixedWidth = 1e-12;

// ---------------------------------------------------------------------------
// Flat objective evaluation. The decision vector stacks the four vertices of
// every weight; the objective is the signed vertex norm of the p-mean score.
// The norm is invariant under the vertex reorderings that negative powers
// introduce, so it can be evaluated without materializing sorted trapezoids.
// ---------------------------------------------------------------------------

class ScoreObjective {
 public:
  ScoreObjective(const std::vector<Trapezoid>& row, double p, Direction direction)
      : p_(p), sign_(direction == Direction::Minimize ? 1.0 : -1.0), values_(row.size()) {
    table_.resize(4, static_cast<Eigen::Index>(row.size()));
    geometric_ = std::abs(p) < kZeroPowerThreshold;
    exponent_ = geometric_ ? 0.0 : 2.0 / p;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const Eigen::Vector4d& v = row[j].vertices();
      if (geometric_) {
        table_.col(static_cast<Eigen::Index>(j)) = v.array().log();
      } else if (p > 0.0) {
        table_.col(static_cast<Eigen::Index>(j)) = v.array().pow(p);
      } else {
        // t^p reverses the vertex order for p < 0; pair weight vertex v with
        // entry vertex 3 - v.
        table_.col(static_cast<Eigen::Index>(j)) = v.reverse().array().pow(p);
      }
    }
  }

  double operator()(const Eigen::VectorXd& x) const {
    const Eigen::Vector4d acc = accumulate(x);
    double norm_sq = 0.0;
    for (int v = 0; v < 4; ++v) norm_sq += term(acc[v]);
    return sign_ * std::sqrt(norm_sq);
  }

  /// Central differences; a one-coordinate probe shifts exactly one
  /// accumulator component, so each partial costs O(1).
  void gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad,
                const std::vector<char>& fixed) const {
    const Eigen::Vector4d acc = accumulate(x);
    Eigen::Vector4d terms;
    double norm_sq = 0.0;
    for (int v = 0; v < 4; ++v) {
      terms[v] = term(acc[v]);
      norm_sq += terms[v];
    }
    for (std::size_t j = 0; j < values_; ++j) {
      for (int v = 0; v < 4; ++v) {
        const Eigen::Index i = static_cast<Eigen::Index>(4 * j) + v;
        if (fixed[static_cast<std::size_t>(i)]) {
          grad[i] = 0.0;
          continue;
        }
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        const double t = table_(v, static_cast<Eigen::Index>(j));
        const double base = norm_sq - terms[v];
        const double up = std::sqrt(base + term(acc[v] + h * t));
        const double down = std::sqrt(base + term(acc[v] - h * t));
        grad[i] = sign_ * (up - down) / (2.0 * h);
      }
    }
  }

 private:
  Eigen::Vector4d accumulate(const Eigen::VectorXd& x) const {
    Eigen::Vector4d acc = Eigen::Vector4d::Zero();
    for (std::size_t j = 0; j < values_; ++j) {
      acc += x.segment<4>(static_cast<Eigen::Index>(4 * j))
                 .cwiseProduct(table_.col(static_cast<Eigen::Index>(j)));
    }
    return acc;
  }

  double term(double s) const {
    if (geometric_) return std::exp(2.0 * s);
    s = std::max(s, 0.0);
    if (exponent_ == 2.0) return s * s;
    if (exponent_ == 1.0) return s;
    if (exponent_ == -2.0) {
      const double sq = s * s;
      return sq > 0.0 ? 1.0 / sq : std::numeric_limits<double>::infinity();
    }
    return std::pow(s, exponent_);
  }

  double p_;
  double sign_;
  std::size_t values_;
  bool geometric_;
  double exponent_;
  Eigen::Matrix<double, 4, Eigen::Dynamic> table_;
};

// ---------------------------------------------------------------------------
// Feasible set: per-value vertex chains, the domain box, and the core-sum
// window over the b and c vertex positions.
// ---------------------------------------------------------------------------

struct Polytope {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  std::size_t values = 0;

  std::size_t dim() const { return 4 * values; }

  // Constraint ids, all expressed as a^T x >= beta:
  //   [0, n)          x_i >= lo_i
  //   [n, 2n)        -x_i >= -hi_i
  //   [2n, 2n + 3V)   x_{4j+k+1} - x_{4j+k} >= 0
  //   2n + 3V        -sum_j x_{4j+1} >= -1
  //   2n + 3V + 1     sum_j x_{4j+2} >= 1
  std::size_t count() const { return 2 * dim() + 3 * values + 2; }

  double slack(std::size_t id, const Eigen::VectorXd& x) const {
    const std::size_t n = dim();
    if (id < n) return x[static_cast<Eigen::Index>(id)] - lo[static_cast<Eigen::Index>(id)];
    if (id < 2 * n) {
      const std::size_t i = id - n;
      return hi[static_cast<Eigen::Index>(i)] - x[static_cast<Eigen::Index>(i)];
    }
    if (id < 2 * n + 3 * values) {
      const std::size_t t = id - 2 * n;
      const std::size_t base = 4 * (t / 3) + (t % 3);
      return x[static_cast<Eigen::Index>(base + 1)] - x[static_cast<Eigen::Index>(base)];
    }
    double sum = 0.0;
    if (id == 2 * n + 3 * values) {
      for (std::size_t j = 0; j < values; ++j) sum += x[static_cast<Eigen::Index>(4 * j + 1)];
      return 1.0 - sum;
    }
    for (std::size_t j = 0; j < values; ++j) sum += x[static_cast<Eigen::Index>(4 * j + 2)];
    return sum - 1.0;
  }

};

/// Projection of four values onto the ascending chain intersected with the
/// box [lo, hi]: pool-adjacent-violators followed by clipping against the
/// (monotone) bounds.
void project_chain_box(Eigen::Ref<Eigen::Vector4d> v, const Eigen::Vector4d& lo,
                       const Eigen::Vector4d& hi) {
  double mean[4];
  int count[4];
  int blocks = 0;
  for (int i = 0; i < 4; ++i) {
    mean[blocks] = v[i];
    count[blocks] = 1;
    ++blocks;
    while (blocks > 1 && mean[blocks - 2] > mean[blocks - 1]) {
      const int total = count[blocks - 2] + count[blocks - 1];
      mean[blocks - 2] =
          (mean[blocks - 2] * count[blocks - 2] + mean[blocks - 1] * count[blocks - 1]) / total;
      count[blocks - 2] = total;
      --blocks;
    }
  }
  int pos = 0;
  for (int blk = 0; blk < blocks; ++blk) {
    for (int r = 0; r < count[blk]; ++r, ++pos) {
      v[pos] = std::clamp(mean[blk], lo[pos], hi[pos]);
    }
  }
}

/// Exact feasibility repair: chain-box projection per value, then the core
/// sums are pulled back into the window by redistributing the available
/// per-value slack proportionally. Lowering a core-left vertex drags the
/// support infimum with it (and symmetrically on the right), so the full
/// bound range is reachable.
void snap_into(const Polytope& poly, Eigen::VectorXd& x) {
  for (std::size_t j = 0; j < poly.values; ++j) {
    const Eigen::Index base = static_cast<Eigen::Index>(4 * j);
    project_chain_box(x.segment<4>(base), poly.lo.segment<4>(base), poly.hi.segment<4>(base));
  }
  for (int pass = 0; pass < 8; ++pass) {
    double sum_b = 0.0;
    for (std::size_t j = 0; j < poly.values; ++j) sum_b += x[static_cast<Eigen::Index>(4 * j + 1)];
    if (sum_b <= 1.0) break;
    const double excess = sum_b - 1.0;
    double slack_total = 0.0;
    for (std::size_t j = 0; j < poly.values; ++j) {
      const Eigen::Index i = static_cast<Eigen::Index>(4 * j + 1);
      slack_total += x[i] - poly.lo[i];
    }
    if (slack_total <= 0.0) break;
    const double ratio = std::min(1.0, excess / slack_total);
    for (std::size_t j = 0; j < poly.values; ++j) {
      const Eigen::Index i = static_cast<Eigen::Index>(4 * j + 1);
      x[i] -= ratio * (x[i] - poly.lo[i]);
      x[i - 1] = std::min(x[i - 1], x[i]);
    }
  }
  for (int pass = 0; pass < 8; ++pass) {
    double sum_c = 0.0;
    for (std::size_t j = 0; j < poly.values; ++j) sum_c += x[static_cast<Eigen::Index>(4 * j + 2)];
    if (sum_c >= 1.0) break;
    const double deficit = 1.0 - sum_c;
    double slack_total = 0.0;
    for (std::size_t j = 0; j < poly.values; ++j) {
      const Eigen::Index i = static_cast<Eigen::Index>(4 * j + 2);
      slack_total += poly.hi[i] - x[i];
    }
    if (slack_total <= 0.0) break;
    const double ratio = std::min(1.0, deficit / slack_total);
    for (std::size_t j = 0; j < poly.values; ++j) {
      const Eigen::Index i = static_cast<Eigen::Index>(4 * j + 2);
      x[i] += ratio * (poly.hi[i] - x[i]);
      x[i + 1] = std::max(x[i + 1], x[i]);
    }
  }
}

/// Largest step along `dir` that keeps x + alpha * dir feasible; the
/// constraints are linear, so a single ratio test suffices.
double max_feasible_step(const Polytope& poly, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& dir, double cap) {
  double alpha = cap;
  const std::size_t n = poly.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index idx = static_cast<Eigen::Index>(i);
    if (dir[idx] < -1e-15) alpha = std::min(alpha, (poly.lo[idx] - x[idx]) / dir[idx]);
    if (dir[idx] > 1e-15) alpha = std::min(alpha, (poly.hi[idx] - x[idx]) / dir[idx]);
  }
  for (std::size_t j = 0; j < poly.values; ++j) {
    for (int k = 0; k < 3; ++k) {
      const Eigen::Index a = static_cast<Eigen::Index>(4 * j + k);
      const double rate = dir[a + 1] - dir[a];
      if (rate < -1e-15) alpha = std::min(alpha, (x[a] - x[a + 1]) / rate);
    }
  }
  double rate_b = 0.0;
  double rate_c = 0.0;
  double sum_b = 0.0;
  double sum_c = 0.0;
  for (std::size_t j = 0; j < poly.values; ++j) {
    rate_b += dir[static_cast<Eigen::Index>(4 * j + 1)];
    rate_c += dir[static_cast<Eigen::Index>(4 * j + 2)];
    sum_b += x[static_cast<Eigen::Index>(4 * j + 1)];
    sum_c += x[static_cast<Eigen::Index>(4 * j + 2)];
  }
  if (rate_b > 1e-15) alpha = std::min(alpha, (1.0 - sum_b) / rate_b);
  if (rate_c < -1e-15) alpha = std::min(alpha, (1.0 - sum_c) / rate_c);
  return std::max(alpha, 0.0);
}

/// Armijo backtracking from `start_alpha`, then doubling expansion toward
/// `alpha_max` while the objective keeps improving; the norm objective is
/// concave along many boundary rays, where the best step is the full ray.
double expanding_line_search(const ScoreObjective& objective, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& dir, double f, double descent,
                             double alpha_max, double& f_out) {
  double alpha = std::min(1.0, alpha_max);
  double f_trial = objective(x + alpha * dir);
  int backtracks = 0;
  while ((!std::isfinite(f_trial) || f_trial > f + 1e-4 * alpha * descent) && backtracks < 30) {
    alpha *= 0.5;
    f_trial = objective(x + alpha * dir);
    ++backtracks;
  }
  if (backtracks == 0 && alpha < alpha_max) {
    double best_alpha = alpha;
    double best_f = f_trial;
    double probe = alpha;
    for (int grow = 0; grow < 30 && probe < alpha_max; ++grow) {
      probe = std::min(2.0 * probe, alpha_max);
      const double f_probe = objective(x + probe * dir);
      if (!std::isfinite(f_probe) || f_probe >= best_f) break;
      best_alpha = probe;
      best_f = f_probe;
    }
    alpha = best_alpha;
    f_trial = best_f;
  }
  f_out = f_trial;
  return alpha;
}

/// Dykstra alternating projections onto the chain-box sets and the two
/// core-sum half-spaces; converges to the Euclidean projection.
Eigen::VectorXd dykstra_project(const Polytope& poly, Eigen::VectorXd x) {
  const std::size_t sets = poly.values + 2;
  std::vector<Eigen::VectorXd> corrections(sets, Eigen::VectorXd::Zero(x.size()));
  const double v_count = static_cast<double>(poly.values);
  for (int sweep = 0; sweep < 400; ++sweep) {
    double shift = 0.0;
    for (std::size_t s = 0; s < sets; ++s) {
      Eigen::VectorXd y = x + corrections[s];
      if (s < poly.values) {
        const Eigen::Index base = static_cast<Eigen::Index>(4 * s);
        project_chain_box(y.segment<4>(base), poly.lo.segment<4>(base), poly.hi.segment<4>(base));
      } else if (s == poly.values) {
        double sum_b = 0.0;
        for (std::size_t j = 0; j < poly.values; ++j) sum_b += y[static_cast<Eigen::Index>(4 * j + 1)];
        if (sum_b > 1.0) {
          const double step = (sum_b - 1.0) / v_count;
          for (std::size_t j = 0; j < poly.values; ++j) y[static_cast<Eigen::Index>(4 * j + 1)] -= step;
        }
      } else {
        double sum_c = 0.0;
        for (std::size_t j = 0; j < poly.values; ++j) sum_c += y[static_cast<Eigen::Index>(4 * j + 2)];
        if (sum_c < 1.0) {
          const double step = (1.0 - sum_c) / v_count;
          for (std::size_t j = 0; j < poly.values; ++j) y[static_cast<Eigen::Index>(4 * j + 2)] += step;
        }
      }
      corrections[s] = x + corrections[s] - y;
      shift = std::max(shift, (y - x).lpNorm<Eigen::Infinity>());
      x = std::move(y);
    }
    if (shift < 1e-13) break;
  }
  snap_into(poly, x);
  return x;
}

// ---------------------------------------------------------------------------
// Active-set QP for the step subproblem: min g.d + (gamma/2)|d|^2 subject to
// the linearized (here: exact) feasible set around x. Returns the step and
// whether the KKT conditions were certified.
// ---------------------------------------------------------------------------

struct QpOutcome {
  Eigen::VectorXd d;
  bool kkt = false;
};

using SparseRow = std::vector<std::pair<Eigen::Index, double>>;

SparseRow make_sparse_row(const Polytope& poly, std::size_t id, const std::vector<char>& fixed) {
  SparseRow row;
  const std::size_t n = poly.dim();
  auto put = [&](std::size_t i, double v) {
    if (!fixed[i]) row.emplace_back(static_cast<Eigen::Index>(i), v);
  };
  if (id < n) {
    put(id, 1.0);
  } else if (id < 2 * n) {
    put(id - n, -1.0);
  } else if (id < 2 * n + 3 * poly.values) {
    const std::size_t t = id - 2 * n;
    const std::size_t base = 4 * (t / 3) + (t % 3);
    put(base, -1.0);
    put(base + 1, 1.0);
  } else if (id == 2 * n + 3 * poly.values) {
    for (std::size_t j = 0; j < poly.values; ++j) put(4 * j + 1, -1.0);
  } else {
    for (std::size_t j = 0; j < poly.values; ++j) put(4 * j + 2, 1.0);
  }
  return row;
}

double sparse_dot(const SparseRow& row, const Eigen::VectorXd& v) {
  double acc = 0.0;
  for (const auto& [i, coeff] : row) acc += coeff * v[i];
  return acc;
}

QpOutcome solve_qp(const Polytope& poly, const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                   const Eigen::MatrixXd& h_inv, const std::vector<char>& fixed,
                   std::vector<std::size_t>& working) {
  const Eigen::Index n = x.size();
  QpOutcome out;
  out.d = Eigen::VectorXd::Zero(n);

  const Eigen::VectorXd hg = h_inv * g;

  std::vector<char> in_working(poly.count(), 0);
  std::vector<SparseRow> rows;
  std::vector<Eigen::VectorXd> h_cols;  // h_inv * a_k per working row
  auto h_times = [&](const SparseRow& row) {
    Eigen::VectorXd out_col = Eigen::VectorXd::Zero(n);
    for (const auto& [i, coeff] : row) out_col += coeff * h_inv.col(i);
    return out_col;
  };
  {
    std::vector<std::size_t> kept;
    for (std::size_t id : working) {
      if (poly.slack(id, x) <= 1e-7 && !in_working[id] &&
          kept.size() < static_cast<std::size_t>(n)) {
        kept.push_back(id);
        in_working[id] = 1;
        rows.push_back(make_sparse_row(poly, id, fixed));
        h_cols.push_back(h_times(rows.back()));
      }
    }
    working = std::move(kept);
  }

  const double g_scale = std::max(1.0, g.lpNorm<Eigen::Infinity>());
  const int max_iter = static_cast<int>(3 * poly.count() + 10);
  for (int iter = 0; iter < max_iter; ++iter) {
    const std::size_t m = working.size();

    // Equality-constrained minimizer over the current working set: the rows
    // in the set are driven to zero slack at x + d.
    Eigen::VectorXd target = -hg;
    Eigen::VectorXd lambda;
    if (m > 0) {
      Eigen::MatrixXd schur(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l <= k; ++l) {
          const double dot = sparse_dot(rows[l], h_cols[k]);
          schur(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = dot;
          schur(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = dot;
        }
        rhs[static_cast<Eigen::Index>(k)] =
            sparse_dot(rows[k], hg) - poly.slack(working[k], x);
      }
      schur.diagonal().array() += 1e-12;
      lambda = schur.ldlt().solve(rhs);
      for (std::size_t k = 0; k < m; ++k) {
        target += lambda[static_cast<Eigen::Index>(k)] * h_cols[k];
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fixed[static_cast<std::size_t>(i)]) target[i] = 0.0;
    }

    const Eigen::VectorXd q = target - out.d;
    if (q.lpNorm<Eigen::Infinity>() <= 1e-11 * std::max(1.0, g_scale)) {
      int worst = -1;
      double most_negative = -1e-9 * g_scale;
      for (std::size_t k = 0; k < m; ++k) {
        if (lambda[static_cast<Eigen::Index>(k)] < most_negative) {
          most_negative = lambda[static_cast<Eigen::Index>(k)];
          worst = static_cast<int>(k);
        }
      }
      if (worst < 0) {
        out.kkt = true;
        return out;
      }
      in_working[working[static_cast<std::size_t>(worst)]] = 0;
      working.erase(working.begin() + worst);
      rows.erase(rows.begin() + worst);
      h_cols.erase(h_cols.begin() + worst);
      continue;
    }

    // Ratio test against the non-working constraints.
    double alpha = 1.0;
    std::size_t blocking = poly.count();
    for (std::size_t id = 0; id < poly.count(); ++id) {
      if (in_working[id]) continue;
      const SparseRow candidate = make_sparse_row(poly, id, fixed);
      const double rate = sparse_dot(candidate, q);
      if (rate >= -1e-13) continue;
      const double room = std::max(poly.slack(id, x) + sparse_dot(candidate, out.d), 0.0);
      const double limit = room / (-rate);
      if (limit < alpha) {
        alpha = limit;
        blocking = id;
      }
    }
    out.d += alpha * q;
    if (blocking == poly.count()) continue;  // full step to the subspace optimum
    if (working.size() >= static_cast<std::size_t>(n)) {
      return out;  // cannot hold more rows than variables
    }
    working.push_back(blocking);
    in_working[blocking] = 1;
    rows.push_back(make_sparse_row(poly, blocking, fixed));
    h_cols.push_back(h_times(rows.back()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SQP driver: short projected-gradient phase to find the active face, then
// QP-driven steps with a spectral model scale until the KKT point is
// certified.
// ---------------------------------------------------------------------------

struct SqpOutcome {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

SqpOutcome run_sqp(const ScoreObjective& objective, const Polytope& poly, Eigen::VectorXd x,
                   const std::vector<char>& fixed, double tolerance, int max_iterations) {
  SqpOutcome out;
  const Eigen::Index n = x.size();
  snap_into(poly, x);
  double f = objective(x);

  bool all_fixed = true;
  for (char fl : fixed) all_fixed = all_fixed && fl;
  if (all_fixed) {
    out.x = std::move(x);
    out.f = f;
    out.converged = true;
    return out;
  }
  if (!std::isfinite(f)) {
    // Degenerate power regime (the objective overflows at this start); hand
    // the feasible start back as best effort.
    out.x = std::move(x);
    out.f = f;
    return out;
  }
  Eigen::VectorXd g(n);
  objective.gradient(x, g, fixed);
  if (!g.allFinite()) {
    out.x = std::move(x);
    out.f = f;
    return out;
  }

  double gamma = std::max(1.0, g.norm());
  const double step_tol = tolerance;

  // Phase 1: a few projected-gradient sweeps to land on the active face.
  const int phase1 = 10;
  for (int it = 0; it < phase1 && out.iterations < max_iterations; ++it, ++out.iterations) {
    Eigen::VectorXd trial = dykstra_project(poly, x - g / gamma);
    Eigen::VectorXd step = trial - x;
    const double descent = g.dot(step);
    if (step.lpNorm<Eigen::Infinity>() <= step_tol * (1.0 + x.lpNorm<Eigen::Infinity>())) break;
    const double alpha_max = max_feasible_step(poly, x, step, 64.0);
    double f_trial = 0.0;
    const double alpha = expanding_line_search(objective, x, step, f, descent, alpha_max, f_trial);
    trial = x + alpha * step;
    if (!std::isfinite(f_trial) || f_trial >= f) break;
    Eigen::VectorXd g_new(n);
    objective.gradient(trial, g_new, fixed);
    if (!g_new.allFinite()) break;
    const Eigen::VectorXd s = trial - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    const double ss = s.squaredNorm();
    if (sy > 1e-14 && ss > 0.0) gamma = std::clamp(sy / ss, 1e-8, 1e10);
    x = std::move(trial);
    f = f_trial;
    g = std::move(g_new);
  }

  // Phase 2: active-set QP steps on an inverse-BFGS model.
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n) / gamma;
  std::vector<std::size_t> working;
  for (std::size_t id = 0; id < poly.count(); ++id) {
    if (poly.slack(id, x) <= 1e-9 && working.size() < static_cast<std::size_t>(n)) {
      working.push_back(id);
    }
  }
  int stalls = 0;
  while (out.iterations < max_iterations) {
    ++out.iterations;
    QpOutcome qp = solve_qp(poly, x, g, h_inv, fixed, working);
    const double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
    if (qp.d.lpNorm<Eigen::Infinity>() <= step_tol * scale) {
      if (qp.kkt) {
        out.converged = true;
        break;
      }
      // No certified multipliers; fall back to the projected-gradient
      // residual as the first-order test.
      Eigen::VectorXd probe = dykstra_project(poly, x - g / std::max(gamma, 1.0));
      if ((probe - x).lpNorm<Eigen::Infinity>() <= 10.0 * step_tol * scale) {
        out.converged = true;
        break;
      }
      qp.d = probe - x;
    }
    double descent = g.dot(qp.d);
    if (descent > -1e-14 * (1.0 + std::abs(f))) {
      Eigen::VectorXd probe = dykstra_project(poly, x - g / std::max(gamma, 1.0));
      qp.d = probe - x;
      descent = g.dot(qp.d);
      if (descent > -1e-14 * (1.0 + std::abs(f)) ||
          qp.d.lpNorm<Eigen::Infinity>() <= step_tol * scale) {
        out.converged = true;
        break;
      }
    }
    const double alpha_max = max_feasible_step(poly, x, qp.d, 64.0);
    double f_trial = 0.0;
    const double alpha = expanding_line_search(objective, x, qp.d, f, descent, alpha_max, f_trial);
    const Eigen::VectorXd trial = x + alpha * qp.d;
    if (!std::isfinite(f_trial) || f_trial >= f - 1e-16 * (1.0 + std::abs(f))) {
      if (++stalls >= 2) break;
      continue;
    }
    stalls = 0;
    Eigen::VectorXd g_new(n);
    objective.gradient(trial, g_new, fixed);
    if (!g_new.allFinite()) break;
    const Eigen::VectorXd s = trial - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      // Inverse BFGS update; skipped when the curvature test fails, which
      // keeps the model positive definite.
      const Eigen::VectorXd hy = h_inv * y;
      const double yhy = y.dot(hy);
      const double rho = 1.0 / sy;
      h_inv.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
      h_inv.noalias() -= rho * (hy * s.transpose() + s * hy.transpose());
      const double ss = s.squaredNorm();
      if (ss > 0.0) gamma = std::clamp(sy / ss, 1e-8, 1e10);
    }
    x = std::move(trial);
    f = f_trial;
    g = std::move(g_new);
    if (out.iterations % 16 == 0) {
      snap_into(poly, x);
      f = objective(x);
    }
  }

  snap_into(poly, x);
  out.x = std::move(x);
  out.f = objective(out.x);
  return out;
}

// ---------------------------------------------------------------------------

Polytope make_polytope(const WeightDomain& domain) {
  Polytope poly;
  poly.values = domain.size();
  poly.lo.resize(static_cast<Eigen::Index>(poly.dim()));
  poly.hi.resize(static_cast<Eigen::Index>(poly.dim()));
  for (std::size_t j = 0; j < domain.size(); ++j) {
    poly.lo.segment<4>(static_cast<Eigen::Index>(4 * j)) = domain.lower[j].vertices();
    poly.hi.segment<4>(static_cast<Eigen::Index>(4 * j)) = domain.upper[j].vertices();
  }
  return poly;
}

WeightScheme scheme_from_vector(const Eigen::VectorXd& x, std::size_t values) {
  WeightScheme scheme;
  scheme.weights.reserve(values);
  for (std::size_t j = 0; j < values; ++j) {
    scheme.weights.push_back(
        Trapezoid::from_sorted(x.segment<4>(static_cast<Eigen::Index>(4 * j))));
  }
  return scheme;
}

void check_spec(const OptimizationSpec& spec) {
  if (spec.row.empty()) throw EmptyRow("optimization row is empty");
  if (spec.row.size() != spec.domain.size()) {
    throw DimensionMismatch("row and weight domain have different value counts");
  }
  for (const Trapezoid& entry : spec.row) {
    if (entry.a() <= 0.0) throw NonPositiveRow("optimization row must be strictly positive");
  }
  try {
    validate(spec.domain);
  } catch (const Error& e) {
    throw InfeasibleDomain(std::string("weight domain is not usable: ") + e.what());
  }
}

OptimizationResult finish(const OptimizationSpec& spec, const Eigen::VectorXd& x, int iterations,
                          bool converged) {
  OptimizationResult result;
  result.weights = scheme_from_vector(x, spec.domain.size());
  result.fuzzy_score = fuzzy_p_score(spec.row, result.weights, spec.p);
  result.objective = defuzzify(result.fuzzy_score);
  result.iterations = iterations;
  result.converged = converged;
  return result;
}

}  // namespace

OptimizationResult optimize(const OptimizationSpec& spec) {
  check_spec(spec);
  const Polytope poly = make_polytope(spec.domain);
  const Eigen::Index n = static_cast<Eigen::Index>(poly.dim());

  // Weight-free limit cases: the score is constant over the domain; report
  // the domain midpoint as the certificate.
  if (std::isinf(spec.p)) {
    Eigen::VectorXd mid = 0.5 * (poly.lo + poly.hi);
    snap_into(poly, mid);
    OptimizationResult result = finish(spec, mid, 0, true);
    result.weights_nominal = true;
    return result;
  }

  std::vector<char> fixed(poly.dim(), 0);
  bool all_fixed = true;
  for (std::size_t i = 0; i < poly.dim(); ++i) {
    fixed[i] = (poly.hi[static_cast<Eigen::Index>(i)] - poly.lo[static_cast<Eigen::Index>(i)]) <=
               kFixedWidth;
    all_fixed = all_fixed && fixed[i];
  }

  const ScoreObjective objective(spec.row, spec.p, spec.direction);

  std::vector<Eigen::VectorXd> starts;
  auto push_start = [&](Eigen::VectorXd candidate) {
    snap_into(poly, candidate);
    for (const Eigen::VectorXd& existing : starts) {
      if ((existing - candidate).lpNorm<Eigen::Infinity>() < 1e-12) return false;
    }
    starts.push_back(std::move(candidate));
    return true;
  };

  Eigen::VectorXd lower_corner = poly.lo;
  Eigen::VectorXd upper_corner = poly.hi;
  Eigen::VectorXd midpoint = 0.5 * (poly.lo + poly.hi);
  const bool lower_moved = [&] {
    Eigen::VectorXd snapped = lower_corner;
    snap_into(poly, snapped);
    return (snapped - lower_corner).lpNorm<Eigen::Infinity>() > 1e-9;
  }();
  const bool upper_moved = [&] {
    Eigen::VectorXd snapped = upper_corner;
    snap_into(poly, snapped);
    return (snapped - upper_corner).lpNorm<Eigen::Infinity>() > 1e-9;
  }();

  push_start(lower_corner);
  push_start(upper_corner);
  push_start(midpoint);

  int extra = std::max(0, spec.multistart_points - 3) + (lower_moved ? 1 : 0) +
              (upper_moved ? 1 : 0);
  Rng rng(derive_seed(spec.seed, 0x5157u));
  for (int k = 0; k < extra && !all_fixed; ++k) {
    Eigen::VectorXd candidate(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      candidate[i] = rng.uniform(poly.lo[i], poly.hi[i]);
    }
    push_start(std::move(candidate));
  }

  SqpOutcome best;
  best.f = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  for (Eigen::VectorXd& start : starts) {
    SqpOutcome outcome =
        run_sqp(objective, poly, std::move(start), fixed, spec.tolerance, spec.max_iterations);
    total_iterations += outcome.iterations;
    const bool better = std::isfinite(outcome.f)
                            ? (!std::isfinite(best.f) || outcome.f < best.f)
                            : best.x.size() == 0;
    if (better || best.x.size() == 0) {
      best = std::move(outcome);
    }
  }

  return finish(spec, best.x, total_iterations, best.converged);
}

OptimizationResult brute_force_oracle(const OptimizationSpec& spec, int grid_resolution) {
  if (spec.domain.size() > 3 || grid_resolution > 11 || grid_resolution < 2) {
    throw GridTooLarge("brute-force oracle limited to at most 3 values and resolution 11");
  }
  check_spec(spec);
  const Polytope poly = make_polytope(spec.domain);
  const std::size_t v_count = poly.values;

  // Per value: every chain-ordered vertex quadruple on the per-coordinate grid.
  struct Candidate {
    Eigen::Vector4d w;
    double sum_b;
    double sum_c;
  };
  std::vector<std::vector<Candidate>> candidates(v_count);
  for (std::size_t j = 0; j < v_count; ++j) {
    std::array<std::vector<double>, 4> ticks;
    for (int v = 0; v < 4; ++v) {
      const double lo = poly.lo[static_cast<Eigen::Index>(4 * j + v)];
      const double hi = poly.hi[static_cast<Eigen::Index>(4 * j + v)];
      if (hi - lo <= 1e-15) {
        ticks[v] = {lo};
      } else {
        for (int t = 0; t < grid_resolution; ++t) {
          ticks[v].push_back(lo + (hi - lo) * static_cast<double>(t) /
                                      static_cast<double>(grid_resolution - 1));
        }
      }
    }
    for (double a : ticks[0]) {
      for (double b : ticks[1]) {
        if (b < a) continue;
        for (double c : ticks[2]) {
          if (c < b) continue;
          for (double d : ticks[3]) {
            if (d < c) continue;
            candidates[j].push_back({Eigen::Vector4d(a, b, c, d), b, c});
          }
        }
      }
    }
  }

  const ScoreObjective objective(spec.row, spec.p, spec.direction);

  Eigen::VectorXd point(static_cast<Eigen::Index>(poly.dim()));
  Eigen::VectorXd best_point;
  double best_value = std::numeric_limits<double>::infinity();
  long evaluated = 0;

  std::vector<std::size_t> odometer(v_count, 0);
  while (true) {
    double sum_b = 0.0;
    double sum_c = 0.0;
    for (std::size_t j = 0; j < v_count; ++j) {
      const Candidate& cand = candidates[j][odometer[j]];
      sum_b += cand.sum_b;
      sum_c += cand.sum_c;
      point.segment<4>(static_cast<Eigen::Index>(4 * j)) = cand.w;
    }
    if (sum_b <= 1.0 + kFeasTol && sum_c >= 1.0 - kFeasTol) {
      ++evaluated;
      const double value = objective(point);
      if (value < best_value) {
        best_value = value;
        best_point = point;
      }
    }
    std::size_t j = 0;
    while (j < v_count && ++odometer[j] == candidates[j].size()) {
      odometer[j] = 0;
      ++j;
    }
    if (j == v_count) break;
  }

  if (best_point.size() == 0) {
    throw InfeasibleDomain("no grid point satisfies the core-sum window");
  }
  const long capped = std::min<long>(evaluated, std::numeric_limits<int>::max());
  return finish(spec, best_point, static_cast<int>(capped), true);
}

}  // namespace rankzzy
