#ifndef RANKZZY_TRAPEZOID_HPP
#define RANKZZY_TRAPEZOID_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "rankzzy/errors.hpp"

namespace rankzzy {

/**
 * Trapezoidal fuzzy number with ordered vertices a <= b <= c <= d.
 *
 * The support is [a, d], the core (membership 1) is [b, c], and the
 * membership function ramps linearly on [a, b] and [c, d]. Vertices are
 * stored as an Eigen 4-vector so component-wise arithmetic, envelopes and
 * norms map directly onto Eigen array expressions.
 */
class Trapezoid {
 public:
  Trapezoid() : verts_(Eigen::Vector4d::Zero()) {}

  Trapezoid(double a, double b, double c, double d) : verts_(a, b, c, d) { check_order(); }

  explicit Trapezoid(const Eigen::Vector4d& vertices) : verts_(vertices) { check_order(); }

  /// Crisp real embedded as the degenerate trapezoid (v, v, v, v).
  static Trapezoid crisp(double v) { return Trapezoid(v, v, v, v); }

  /// Builds from possibly unordered vertices by sorting them ascending.
  static Trapezoid from_sorted(Eigen::Vector4d vertices) {
    std::sort(vertices.data(), vertices.data() + 4);
    return Trapezoid(vertices);
  }

  double a() const { return verts_[0]; }
  double b() const { return verts_[1]; }
  double c() const { return verts_[2]; }
  double d() const { return verts_[3]; }

  const Eigen::Vector4d& vertices() const { return verts_; }

  bool operator==(const Trapezoid& other) const { return verts_ == other.verts_; }

 private:
  void check_order() const {
    if (!(verts_[0] <= verts_[1] && verts_[1] <= verts_[2] && verts_[2] <= verts_[3])) {
      throw InvalidTrapezoid("trapezoid vertices must satisfy a <= b <= c <= d");
    }
    if (!verts_.allFinite()) {
      throw InvalidTrapezoid("trapezoid vertices must be finite");
    }
  }

  Eigen::Vector4d verts_;
};

/// Spread form (core_left, core_right, left_spread, right_spread).
struct SpreadQuadruple {
  double core_left;
  double core_right;
  double left_spread;
  double right_spread;
};

inline Trapezoid from_spread(const SpreadQuadruple& q) {
  return Trapezoid(q.core_left - q.left_spread, q.core_left, q.core_right,
                   q.core_right + q.right_spread);
}

inline SpreadQuadruple to_spread(const Trapezoid& x) {
  return {x.b(), x.c(), x.b() - x.a(), x.d() - x.c()};
}

/// Grade of membership of the point t; piecewise linear in [0, 1].
inline double membership(const Trapezoid& x, double t) {
  if (t < x.a() || t > x.d()) return 0.0;
  if (t >= x.b() && t <= x.c()) return 1.0;
  if (t < x.b()) return (t - x.a()) / (x.b() - x.a());
  return (x.d() - t) / (x.d() - x.c());
}

// ---------------------------------------------------------------------------
// Arithmetic. Addition, negation and nonnegative scaling are closed for any
// operands; products, quotients and real powers are vertex-wise and require
// nonnegative (for mul) or strictly positive (for reciprocal/div and
// non-integer or negative powers) supports, where the vertex ordering is
// preserved.
// ---------------------------------------------------------------------------

inline Trapezoid add(const Trapezoid& x, const Trapezoid& y) {
  return Trapezoid(Eigen::Vector4d(x.vertices() + y.vertices()));
}

inline Trapezoid neg(const Trapezoid& x) {
  return Trapezoid(Eigen::Vector4d(-x.vertices().reverse()));
}

inline Trapezoid sub(const Trapezoid& x, const Trapezoid& y) { return add(x, neg(y)); }

inline Trapezoid scale(double factor, const Trapezoid& x) {
  if (factor < 0.0) throw NonPositiveOperand("scale factor must be nonnegative");
  return Trapezoid(Eigen::Vector4d(factor * x.vertices()));
}

inline Trapezoid mul(const Trapezoid& x, const Trapezoid& y) {
  if (x.a() < 0.0 || y.a() < 0.0) {
    throw NonPositiveOperand("mul requires operands with nonnegative support");
  }
  return Trapezoid(Eigen::Vector4d(x.vertices().cwiseProduct(y.vertices())));
}

inline Trapezoid reciprocal(const Trapezoid& x) {
  if (x.a() <= 0.0) throw NonPositiveOperand("reciprocal requires strictly positive support");
  return Trapezoid(Eigen::Vector4d(x.vertices().reverse().cwiseInverse()));
}

inline Trapezoid div(const Trapezoid& x, const Trapezoid& y) { return mul(x, reciprocal(y)); }

/// Vertex-wise power. Results are re-sorted for negative exponents, where
/// t^e reverses the vertex order.
inline Trapezoid pow(const Trapezoid& x, double exponent) {
  if (exponent >= 0.0) {
    if (x.a() < 0.0) throw NonPositiveOperand("pow requires nonnegative support");
  } else if (x.a() <= 0.0) {
    throw NonPositiveOperand("pow with negative exponent requires strictly positive support");
  }
  Eigen::Vector4d v = x.vertices().array().pow(exponent);
  return Trapezoid::from_sorted(v);
}

inline Trapezoid operator+(const Trapezoid& x, const Trapezoid& y) { return add(x, y); }
inline Trapezoid operator-(const Trapezoid& x, const Trapezoid& y) { return sub(x, y); }
inline Trapezoid operator-(const Trapezoid& x) { return neg(x); }
inline Trapezoid operator*(const Trapezoid& x, const Trapezoid& y) { return mul(x, y); }
inline Trapezoid operator*(double factor, const Trapezoid& x) { return scale(factor, x); }

// ---------------------------------------------------------------------------
// Order relations
// ---------------------------------------------------------------------------

/// Pointwise partial order: every alpha-cut bound of x is <= the matching
/// bound of y, which for trapezoids reduces to the four vertex inequalities.
inline bool leq_pointwise(const Trapezoid& x, const Trapezoid& y) {
  return (x.vertices().array() <= y.vertices().array()).all();
}

/// Euclidean norm over the four vertices.
inline double vertex_norm(const Trapezoid& x) { return x.vertices().norm(); }

inline double vertex_distance(const Trapezoid& x, const Trapezoid& y) {
  return (x.vertices() - y.vertices()).norm();
}

/// Total preorder induced by the vertex norm.
inline bool preceq(const Trapezoid& x, const Trapezoid& y) {
  return vertex_norm(x) <= vertex_norm(y);
}

// ---------------------------------------------------------------------------
// Envelopes
// ---------------------------------------------------------------------------

inline Trapezoid envelope_min(std::span<const Trapezoid> set) {
  if (set.empty()) throw EmptySet("envelope_min of an empty set");
  Eigen::Vector4d acc = set.front().vertices();
  for (const Trapezoid& x : set.subspan(1)) acc = acc.cwiseMin(x.vertices());
  return Trapezoid(acc);
}

inline Trapezoid envelope_max(std::span<const Trapezoid> set) {
  if (set.empty()) throw EmptySet("envelope_max of an empty set");
  Eigen::Vector4d acc = set.front().vertices();
  for (const Trapezoid& x : set.subspan(1)) acc = acc.cwiseMax(x.vertices());
  return Trapezoid(acc);
}

inline Trapezoid envelope_min(std::initializer_list<Trapezoid> set) {
  return envelope_min(std::span<const Trapezoid>(set.begin(), set.size()));
}

inline Trapezoid envelope_max(std::initializer_list<Trapezoid> set) {
  return envelope_max(std::span<const Trapezoid>(set.begin(), set.size()));
}

}  // namespace rankzzy

#endif  // RANKZZY_TRAPEZOID_HPP
