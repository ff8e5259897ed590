#include "rankzzy/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "rankzzy/errors.hpp"

namespace rankzzy {

namespace {

using nlohmann::json;

void expect_keys(const json& obj, const std::vector<std::string>& allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing required key '" + key + "'");
  return *it;
}

double number_at(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number");
  return value.get<double>();
}

Trapezoid trapezoid_at(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 4) {
    throw ParseError(where + ": expected a 4-element array [a, b, c, d]");
  }
  double verts[4];
  for (std::size_t i = 0; i < 4; ++i) verts[i] = number_at(value[i], where);
  try {
    return Trapezoid(verts[0], verts[1], verts[2], verts[3]);
  } catch (const InvalidTrapezoid& e) {
    throw ParseError(where + ": " + e.what());
  }
}

json trapezoid_to_json(const Trapezoid& x) {
  return json::array({x.a(), x.b(), x.c(), x.d()});
}

ValueSpec parse_value(const json& doc, const std::string& where) {
  expect_keys(doc, {"name", "kind", "objective", "unit", "scale"}, where);
  ValueSpec spec;
  spec.name = require(doc, "name", where).get<std::string>();
  const std::string kind = require(doc, "kind", where).get<std::string>();
  if (kind == "quantitative") {
    spec.kind = ValueKind::Quantitative;
  } else if (kind == "qualitative") {
    spec.kind = ValueKind::Qualitative;
  } else {
    throw ParseError(where + ": kind must be 'quantitative' or 'qualitative'");
  }
  const std::string objective = require(doc, "objective", where).get<std::string>();
  if (objective == "maximize") {
    spec.objective = Objective::Maximize;
  } else if (objective == "minimize") {
    spec.objective = Objective::Minimize;
  } else {
    throw ParseError(where + ": objective must be 'maximize' or 'minimize'");
  }
  if (doc.contains("unit")) spec.unit = doc["unit"].get<std::string>();
  if (spec.kind == ValueKind::Qualitative) {
    const json& scale = require(doc, "scale", where);
    if (!scale.is_array() || scale.size() < 2) {
      throw ParseError(where + ": qualitative scale needs at least two categories");
    }
    QualitativeScale parsed;
    for (std::size_t k = 0; k < scale.size(); ++k) {
      const std::string cat_where = where + ".scale[" + std::to_string(k) + "]";
      expect_keys(scale[k], {"label", "trapezoid"}, cat_where);
      QualitativeScale::Category category{
          require(scale[k], "label", cat_where).get<std::string>(),
          trapezoid_at(require(scale[k], "trapezoid", cat_where), cat_where)};
      if (parsed.find(category.label) != nullptr) {
        throw ParseError(cat_where + ": duplicate label '" + category.label + "'");
      }
      if (category.correspondence.a() < 0.0 || category.correspondence.d() > 1.0) {
        throw ParseError(cat_where + ": correspondence support must lie in [0, 1]");
      }
      parsed.categories.push_back(std::move(category));
    }
    spec.scale = std::move(parsed);
  } else if (doc.contains("scale")) {
    throw ParseError(where + ": quantitative values take no scale");
  }
  return spec;
}

Assessment parse_assessment(const json& doc, const std::string& where) {
  expect_keys(doc, {"samples", "proportions", "votes", "trapezoid"}, where);
  if (doc.size() != 1) {
    throw ParseError(where +
                     ": exactly one of samples | proportions | votes | trapezoid is required");
  }
  Assessment assessment;
  if (doc.contains("samples")) {
    const json& arr = doc["samples"];
    if (!arr.is_array() || arr.empty()) throw ParseError(where + ": samples must be a nonempty array");
    Assessment::Samples samples;
    for (const json& v : arr) samples.values.push_back(number_at(v, where + ".samples"));
    assessment.payload = std::move(samples);
  } else if (doc.contains("proportions")) {
    const json& obj = doc["proportions"];
    if (!obj.is_object() || obj.empty()) {
      throw ParseError(where + ": proportions must be a nonempty object");
    }
    Assessment::Proportions proportions;
    for (const auto& [label, v] : obj.items()) {
      proportions.by_label[label] = number_at(v, where + ".proportions." + label);
    }
    assessment.payload = std::move(proportions);
  } else if (doc.contains("votes")) {
    const json& arr = doc["votes"];
    if (!arr.is_array() || arr.empty()) throw ParseError(where + ": votes must be a nonempty array");
    Assessment::Votes votes;
    for (const json& v : arr) {
      if (!v.is_string()) throw ParseError(where + ".votes: expected strings");
      votes.labels.push_back(v.get<std::string>());
    }
    assessment.payload = std::move(votes);
  } else {
    assessment.payload = trapezoid_at(doc["trapezoid"], where + ".trapezoid");
  }
  return assessment;
}

json scheme_to_json(const WeightScheme& scheme, const std::vector<ValueSpec>& values) {
  json out = json::object();
  for (std::size_t j = 0; j < scheme.size(); ++j) {
    out[values[j].name] = trapezoid_to_json(scheme[j]);
  }
  return out;
}

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

double parse_power(const json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ParseError(where + ": p must be a number or 'inf' / '+inf' / '-inf'");
}

json power_to_json(double p) {
  if (std::isinf(p)) return p > 0 ? "+inf" : "-inf";
  return p;
}

DecisionProblem parse_problem(const json& doc) {
  expect_keys(doc, {"actions", "values", "assessments", "bounds", "params", "seed"}, "problem");
  DecisionProblem problem;

  const json& actions = require(doc, "actions", "problem");
  if (!actions.is_array() || actions.empty()) {
    throw ParseError("problem.actions: expected a nonempty array of strings");
  }
  for (const json& a : actions) {
    if (!a.is_string()) throw ParseError("problem.actions: expected strings");
    const std::string name = a.get<std::string>();
    if (std::find(problem.actions.begin(), problem.actions.end(), name) != problem.actions.end()) {
      throw ParseError("problem.actions: duplicate action '" + name + "'");
    }
    problem.actions.push_back(name);
  }

  const json& values = require(doc, "values", "problem");
  if (!values.is_array() || values.empty()) {
    throw ParseError("problem.values: expected a nonempty array");
  }
  for (std::size_t j = 0; j < values.size(); ++j) {
    ValueSpec spec = parse_value(values[j], "problem.values[" + std::to_string(j) + "]");
    for (const ValueSpec& existing : problem.values) {
      if (existing.name == spec.name) {
        throw ParseError("problem.values: duplicate value '" + spec.name + "'");
      }
    }
    problem.values.push_back(std::move(spec));
  }

  const json& assessments = require(doc, "assessments", "problem");
  if (!assessments.is_object()) throw ParseError("problem.assessments: expected an object");
  for (const auto& [key, value] : assessments.items()) {
    const auto slash = key.find('/');
    if (slash == std::string::npos) {
      throw ParseError("problem.assessments: key '" + key + "' must look like 'action/value'");
    }
    problem.assessments[key] = parse_assessment(value, "problem.assessments['" + key + "']");
  }

  const json& bounds = require(doc, "bounds", "problem");
  if (!bounds.is_object()) throw ParseError("problem.bounds: expected an object");
  problem.domain.lower.reserve(problem.values.size());
  problem.domain.upper.reserve(problem.values.size());
  for (const ValueSpec& spec : problem.values) {
    const auto it = bounds.find(spec.name);
    if (it == bounds.end()) {
      throw ParseError("problem.bounds: missing bounds for value '" + spec.name + "'");
    }
    const std::string where = "problem.bounds['" + spec.name + "']";
    expect_keys(*it, {"lower", "upper"}, where);
    problem.domain.lower.push_back(trapezoid_at(require(*it, "lower", where), where + ".lower"));
    problem.domain.upper.push_back(trapezoid_at(require(*it, "upper", where), where + ".upper"));
  }
  for (const auto& [key, value] : bounds.items()) {
    const bool known = std::any_of(problem.values.begin(), problem.values.end(),
                                   [&](const ValueSpec& v) { return v.name == key; });
    if (!known) throw ParseError("problem.bounds: unknown value '" + key + "'");
  }

  if (doc.contains("params")) {
    const json& params = doc["params"];
    expect_keys(params, {"p", "nu", "epsilon"}, "problem.params");
    if (params.contains("p")) problem.params.p = parse_power(params["p"], "problem.params.p");
    if (params.contains("nu")) {
      problem.params.nu = number_at(params["nu"], "problem.params.nu");
      if (problem.params.nu < 0.0 || problem.params.nu > 1.0) {
        throw ParseError("problem.params.nu: must lie in [0, 1]");
      }
    }
    if (params.contains("epsilon")) {
      problem.params.epsilon = number_at(params["epsilon"], "problem.params.epsilon");
      if (problem.params.epsilon <= 0.0) throw ParseError("problem.params.epsilon: must be positive");
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ParseError("problem.seed: expected an unsigned integer");
    }
    problem.seed = doc["seed"].get<std::uint64_t>();
  }
  return problem;
}

DecisionProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_problem(doc);
}

json report_to_json(const RankingReport& report) {
  json out;
  out["parameters"] = {{"p", power_to_json(report.params.p)},
                       {"nu", report.params.nu},
                       {"epsilon", report.params.epsilon},
                       {"seed", report.seed}};
  out["stance"] = report.stance;
  out["actions"] = report.actions;

  json norm;
  norm["values"] = json::array();
  for (const ValueSpec& spec : report.normalized.values) norm["values"].push_back(spec.name);
  norm["entries"] = json::object();
  for (std::size_t i = 0; i < report.normalized.rows(); ++i) {
    json row = json::object();
    for (std::size_t j = 0; j < report.normalized.cols(); ++j) {
      row[report.normalized.values[j].name] = trapezoid_to_json(report.normalized.at(i, j));
    }
    norm["entries"][report.normalized.actions[i]] = std::move(row);
  }
  out["normalized_matrix"] = std::move(norm);

  out["scores"] = json::object();
  for (std::size_t i = 0; i < report.actions.size(); ++i) {
    const ScoreBundle& bundle = report.bundles[i];
    out["scores"][report.actions[i]] = {
        {"fuzzy_min", trapezoid_to_json(bundle.fuzzy_min)},
        {"fuzzy_max", trapezoid_to_json(bundle.fuzzy_max)},
        {"crisp_min", bundle.crisp_min},
        {"crisp_max", bundle.crisp_max},
        {"aggregated", bundle.aggregated},
        {"weights_min", scheme_to_json(bundle.weights_min, report.normalized.values)},
        {"weights_max", scheme_to_json(bundle.weights_max, report.normalized.values)},
        {"converged_min", bundle.converged_min},
        {"converged_max", bundle.converged_max},
    };
  }

  out["ranking"] = json::array();
  for (std::size_t index : report.ranking) out["ranking"].push_back(report.actions[index]);
  out["ties"] = json::array();
  for (const auto& group : report.ties) {
    json names = json::array();
    for (std::size_t index : group) names.push_back(report.actions[index]);
    out["ties"].push_back(std::move(names));
  }
  out["timings"] = {{"build_matrix_s", report.timings.build_matrix_s},
                    {"normalize_s", report.timings.normalize_s},
                    {"optimize_s", report.timings.optimize_s},
                    {"aggregate_s", report.timings.aggregate_s},
                    {"total_s", report.timings.total_s}};
  out["all_converged"] = report.all_converged;
  return out;
}

void write_sensitivity_csv(const SensitivityGrid& grid, std::ostream& out) {
  out << "p,nu,action,score,is_top\n";
  std::ostringstream line;
  line.precision(12);
  for (const SensitivityCell& cell : grid.cells) {
    for (std::size_t i = 0; i < grid.actions.size(); ++i) {
      line.str("");
      line << cell.p << ',' << cell.nu << ',' << grid.actions[i] << ',' << cell.scores[i] << ','
           << (cell.top == i ? 1 : 0) << '\n';
      out << line.str();
    }
  }
}

void write_timing_csv(const std::vector<TimingRecord>& records, std::ostream& out) {
  out << "n_actions,n_values,run,seconds\n";
  for (const TimingRecord& record : records) {
    out << record.n_actions << ',' << record.n_values << ',' << record.run << ','
        << record.seconds << '\n';
  }
}

void write_correlation_csv(const std::vector<CorrelationRecord>& records, std::ostream& out) {
  out << "run,p,lambda,tau\n";
  std::ostringstream line;
  line.precision(17);
  for (const CorrelationRecord& record : records) {
    line.str("");
    line << record.run << ',' << record.p << ',' << record.lambda << ',' << record.tau << '\n';
    out << line.str();
  }
}

json correlation_summary(const std::vector<CorrelationRecord>& records) {
  std::map<double, std::vector<double>> taus_by_p;
  std::map<double, int> failures_by_p;
  json failures = json::array();
  for (const CorrelationRecord& record : records) {
    if (record.error.empty() && std::isfinite(record.tau)) {
      taus_by_p[record.p].push_back(record.tau);
    } else {
      failures_by_p[record.p] += 1;
      failures.push_back({{"run", record.run}, {"p", record.p}, {"error", record.error}});
    }
  }
  json out = json::object();
  for (auto& [p, taus] : taus_by_p) {
    std::sort(taus.begin(), taus.end());
    std::ostringstream key;
    key << "p=" << p;
    out[key.str()] = {{"count", taus.size()},
                      {"failed", failures_by_p[p]},
                      {"median", quantile(taus, 0.5)},
                      {"q25", quantile(taus, 0.25)},
                      {"q75", quantile(taus, 0.75)},
                      {"min", taus.front()},
                      {"max", taus.back()}};
  }
  if (!failures.empty()) out["failures"] = std::move(failures);
  return out;
}

}  // namespace rankzzy
