#ifndef RANKZZY_PROBLEM_HPP
#define RANKZZY_PROBLEM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rankzzy/trapezoid.hpp"
#include "rankzzy/weights.hpp"

namespace rankzzy {

enum class ValueKind { Quantitative, Qualitative };

enum class Objective { Maximize, Minimize };

/// Ordered categories of a qualitative scale, each mapped to a fuzzy
/// correspondence with support inside [0, 1].
struct QualitativeScale {
  struct Category {
    std::string label;
    Trapezoid correspondence;
  };
  std::vector<Category> categories;

  const Trapezoid* find(const std::string& label) const {
    for (const Category& cat : categories) {
      if (cat.label == label) return &cat.correspondence;
    }
    return nullptr;
  }
};

struct ValueSpec {
  std::string name;
  ValueKind kind = ValueKind::Quantitative;
  Objective objective = Objective::Maximize;
  std::optional<std::string> unit;
  std::optional<QualitativeScale> scale;  // present iff qualitative
};

/// One agent-panel assessment of a single (action, value) cell. Quantitative
/// values carry per-agent samples; qualitative ones carry either per-label
/// proportions or one raw vote per agent. A pre-fuzzified trapezoid bypasses
/// the transforms and is ingested unchanged.
struct Assessment {
  struct Samples {
    std::vector<double> values;
  };
  struct Proportions {
    std::map<std::string, double> by_label;
  };
  struct Votes {
    std::vector<std::string> labels;
  };
  std::variant<Samples, Proportions, Votes, Trapezoid> payload;
};

struct ScoreParams {
  double p = 1.0;  // may be +-infinity
  double nu = 0.5;
  double epsilon = 1e-4;
};

struct DecisionProblem {
  std::vector<std::string> actions;
  std::vector<ValueSpec> values;
  std::map<std::string, Assessment> assessments;  // keyed "action/value"
  WeightDomain domain;
  ScoreParams params;
  std::uint64_t seed = 0;

  static std::string assessment_key(const std::string& action, const std::string& value) {
    return action + "/" + value;
  }
};

}  // namespace rankzzy

#endif  // RANKZZY_PROBLEM_HPP
