#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "rankzzy/errors.hpp"
#include "rankzzy/matrix.hpp"
#include "rankzzy/rng.hpp"

using namespace rankzzy;

namespace {

bool close(const Trapezoid& x, const Trapezoid& y, double tol) {
  return (x.vertices() - y.vertices()).lpNorm<Eigen::Infinity>() <= tol;
}

// Independent statistics for the quantitative-transform oracle.
std::pair<double, double> mean_and_population_sigma(const std::vector<double>& samples) {
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples.size());
  return {mean, std::sqrt(var)};
}

}  // namespace

TEST_CASE("quantitative transform spans the sample range around mean +- sigma") {
  SUBCASE("equal samples collapse to a crisp number") {
    CHECK(transform_quantitative({0.4, 0.4, 0.4}) == Trapezoid::crisp(0.4));
  }
  SUBCASE("symmetric three-point sample") {
    const std::vector<double> samples = {0.0, 0.5, 1.0};
    const auto [mean, sigma] = mean_and_population_sigma(samples);
    const Trapezoid got = transform_quantitative(samples);
    CHECK(got.a() == 0.0);
    CHECK(got.b() == doctest::Approx(mean - sigma).epsilon(1e-12));
    CHECK(got.c() == doctest::Approx(mean + sigma).epsilon(1e-12));
    CHECK(got.d() == 1.0);
    CHECK(got.b() == doctest::Approx(0.5 - std::sqrt(1.0 / 6.0)));
  }
  SUBCASE("skewed sample clamps the core into the range") {
    const std::vector<double> samples = {0.0, 0.0, 1.0};
    const auto [mean, sigma] = mean_and_population_sigma(samples);
    REQUIRE(mean - sigma < 0.0);
    const Trapezoid got = transform_quantitative(samples);
    CHECK(got.a() == 0.0);
    CHECK(got.b() == 0.0);
    CHECK(got.c() == doctest::Approx(mean + sigma).epsilon(1e-12));
    CHECK(got.c() == doctest::Approx(0.8047).epsilon(1e-3));
    CHECK(got.d() == 1.0);
  }
  SUBCASE("order of samples is irrelevant") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> samples;
      for (int k = 0; k < 9; ++k) samples.push_back(rng.uniform(0.0, 10.0));
      std::vector<double> shuffled = samples;
      std::reverse(shuffled.begin(), shuffled.end());
      CHECK(transform_quantitative(samples) == transform_quantitative(shuffled));
    }
  }
  CHECK_THROWS_AS(transform_quantitative({}), EmptySamples);
}

TEST_CASE("qualitative transform reproduces the survey entries") {
  const QualitativeScale scale = fixtures::exam_scale();
  const Trapezoid mc =
      transform_qualitative({{"Fair", 0.07}, {"Neutral", 0.45}, {"Unfair", 0.48}}, scale);
  CHECK(close(mc, fixtures::kExamFairnessMc, 1e-9));
  const Trapezoid oa =
      transform_qualitative({{"Fair", 0.79}, {"Neutral", 0.18}, {"Unfair", 0.03}}, scale);
  CHECK(close(oa, fixtures::kExamFairnessOa, 1e-9));

  SUBCASE("concentrated proportions select the correspondence") {
    CHECK(close(transform_qualitative({{"Neutral", 1.0}}, scale), Trapezoid(0.2, 0.4, 0.6, 0.8),
                1e-15));
  }
  SUBCASE("support stays in the hull of the correspondences") {
    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
      double x = rng.uniform();
      double y = rng.uniform(0.0, 1.0 - x);
      const Trapezoid out = transform_qualitative(
          {{"Fair", x}, {"Neutral", y}, {"Unfair", 1.0 - x - y}}, scale);
      CHECK(out.a() >= 0.0);
      CHECK(out.d() <= 1.0);
    }
  }
  CHECK_THROWS_AS(transform_qualitative({{"Meh", 1.0}}, scale), UnknownLabel);
  CHECK_THROWS_AS(transform_qualitative({{"Fair", 0.5}, {"Neutral", 0.2}}, scale),
                  ProportionsNotNormalized);
}

TEST_CASE("raw votes fold into frequencies") {
  const QualitativeScale scale = fixtures::exam_scale();
  const auto proportions =
      votes_to_proportions({"Fair", "Fair", "Neutral", "Unfair"}, scale);
  CHECK(proportions.at("Fair") == doctest::Approx(0.5));
  CHECK(proportions.at("Neutral") == doctest::Approx(0.25));
  CHECK(proportions.at("Unfair") == doctest::Approx(0.25));
  CHECK_THROWS_AS(votes_to_proportions({"Nope"}, scale), UnknownLabel);
}

TEST_CASE("build_matrix assembles the example matrix") {
  const FuzzyDecisionMatrix matrix = build_matrix(fixtures::exam_problem());
  REQUIRE(matrix.rows() == 2);
  REQUIRE(matrix.cols() == 2);
  CHECK(close(matrix.at(0, 0), fixtures::kExamFairnessMc, 1e-9));
  CHECK(close(matrix.at(1, 0), fixtures::kExamFairnessOa, 1e-9));
  // Pre-fuzzified cost entries pass through untouched.
  CHECK(matrix.at(0, 1) == fixtures::kExamCostMc);
  CHECK(matrix.at(1, 1) == fixtures::kExamCostOa);
}

TEST_CASE("build_matrix error paths") {
  DecisionProblem problem = fixtures::exam_problem();
  SUBCASE("missing assessment") {
    problem.assessments.erase("OA/cost");
    CHECK_THROWS_AS(build_matrix(problem), MissingAssessment);
  }
  SUBCASE("kind mismatch") {
    problem.assessments["MC/cost"] =
        Assessment{Assessment::Proportions{{{"Fair", 1.0}}}};
    CHECK_THROWS_AS(build_matrix(problem), KindMismatch);
    problem.assessments["MC/cost"] = Assessment{Assessment::Samples{{1.0, 2.0}}};
    problem.assessments["MC/fairness"] = Assessment{Assessment::Samples{{1.0, 2.0}}};
    CHECK_THROWS_AS(build_matrix(problem), KindMismatch);
  }
  SUBCASE("single-cell problem") {
    DecisionProblem tiny;
    tiny.actions = {"A"};
    ValueSpec spec;
    spec.name = "fairness";
    spec.kind = ValueKind::Qualitative;
    spec.scale = fixtures::exam_scale();
    tiny.values = {spec};
    tiny.assessments["A/fairness"] =
        Assessment{Assessment::Proportions{{{"Fair", 0.07}, {"Neutral", 0.45}, {"Unfair", 0.48}}}};
    const FuzzyDecisionMatrix matrix = build_matrix(tiny);
    REQUIRE(matrix.entries.size() == 1);
    CHECK(close(matrix.at(0, 0), fixtures::kExamFairnessMc, 1e-9));
  }
}

TEST_CASE("normalization reproduces the example table") {
  const FuzzyDecisionMatrix matrix = build_matrix(fixtures::exam_problem());
  const FuzzyDecisionMatrix norm = normalize(matrix, 1e-4);
  CHECK(close(norm.at(0, 0), fixtures::kExamNormFairnessMc, 1e-3));
  CHECK(close(norm.at(1, 0), fixtures::kExamNormFairnessOa, 1e-3));
  CHECK(close(norm.at(0, 1), fixtures::kExamNormCostMc, 1e-3));
  CHECK(close(norm.at(1, 1), fixtures::kExamNormCostOa, 1e-3));
}

TEST_CASE("normalizing a single-action matrix applies the formula within the row") {
  FuzzyDecisionMatrix matrix;
  matrix.actions = {"A"};
  ValueSpec spec;
  spec.name = "v";
  matrix.values = {spec};
  matrix.entries = {Trapezoid(2.0, 3.0, 5.0, 6.0)};
  const double eps = 1e-4;
  const FuzzyDecisionMatrix norm = normalize(matrix, eps);
  const double denom = 6.0 - 2.0 + eps;
  CHECK(norm.at(0, 0).a() == doctest::Approx(eps / denom));
  CHECK(norm.at(0, 0).b() == doctest::Approx((1.0 + eps) / denom));
  CHECK(norm.at(0, 0).d() == doctest::Approx(1.0));
}

TEST_CASE("minimize and maximize columns of equal data are mirrors") {
  // Direct evaluation of both formulas: for one shared column the flipped
  // output equals (1 + eps/denominator) minus the reversed benefit output.
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    FuzzyDecisionMatrix matrix;
    matrix.actions = {"A", "B", "C"};
    ValueSpec benefit;
    benefit.name = "up";
    benefit.objective = Objective::Maximize;
    ValueSpec cost;
    cost.name = "down";
    cost.objective = Objective::Minimize;
    matrix.values = {benefit, cost};
    std::vector<Trapezoid> column;
    for (int r = 0; r < 3; ++r) column.push_back(fixtures::random_trapezoid(rng, 0.1, 3.0));
    for (int r = 0; r < 3; ++r) {
      matrix.entries.push_back(column[static_cast<std::size_t>(r)]);
      matrix.entries.push_back(column[static_cast<std::size_t>(r)]);
    }
    const double eps = 1e-4;
    double lo = column[0].a();
    double hi = column[0].d();
    for (const Trapezoid& x : column) {
      lo = std::min(lo, x.a());
      hi = std::max(hi, x.d());
    }
    const double mirror_sum = 1.0 + eps / (hi - lo + eps);
    const FuzzyDecisionMatrix norm = normalize(matrix, eps);
    for (std::size_t r = 0; r < 3; ++r) {
      const Eigen::Vector4d up = norm.at(r, 0).vertices();
      const Eigen::Vector4d down = norm.at(r, 1).vertices();
      for (int v = 0; v < 4; ++v) {
        CHECK(down[v] == doctest::Approx(mirror_sum - up[3 - v]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("normalization is shift-invariant and scale-invariant in the small-epsilon limit") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    FuzzyDecisionMatrix matrix;
    matrix.actions = {"A", "B", "C"};
    ValueSpec spec;
    spec.name = "v";
    spec.objective = Objective::Maximize;
    matrix.values = {spec};
    for (int r = 0; r < 3; ++r) matrix.entries.push_back(fixtures::random_trapezoid(rng, 0.2, 2.0));
    // Keep the column range away from degenerate so the epsilon term is
    // negligible against it.
    matrix.entries[0] = add(matrix.entries[0], Trapezoid(0.0, 0.0, 0.0, 1.0));

    const double shift = rng.uniform(-5.0, 5.0);
    const double scale_factor = rng.uniform(0.2, 5.0);
    FuzzyDecisionMatrix transformed = matrix;
    for (Trapezoid& entry : transformed.entries) {
      entry = add(scale(scale_factor, entry), Trapezoid::crisp(shift));
    }

    const FuzzyDecisionMatrix base = normalize(matrix, 1e-13);
    const FuzzyDecisionMatrix moved = normalize(transformed, 1e-13);
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK((base.at(r, 0).vertices() - moved.at(r, 0).vertices()).lpNorm<Eigen::Infinity>() <=
            1e-12);
    }
  }
}

TEST_CASE("normalized entries are strictly positive and norm-bounded by crisp one") {
  Rng rng(53);
  const double two = vertex_norm(Trapezoid::crisp(1.0));
  for (int i = 0; i < 1000; ++i) {
    const std::size_t rows = 1 + rng.below(5);
    const std::size_t cols = 1 + rng.below(4);
    FuzzyDecisionMatrix matrix;
    for (std::size_t r = 0; r < rows; ++r) matrix.actions.push_back("a" + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) {
      ValueSpec spec;
      spec.name = "v" + std::to_string(c);
      spec.objective = rng.uniform() < 0.5 ? Objective::Maximize : Objective::Minimize;
      matrix.values.push_back(spec);
    }
    for (std::size_t k = 0; k < rows * cols; ++k) {
      matrix.entries.push_back(fixtures::random_trapezoid(rng, -2.0, 6.0));
    }
    const double eps = 1e-4;
    const FuzzyDecisionMatrix norm = normalize(matrix, eps);
    for (std::size_t c = 0; c < cols; ++c) {
      double lo = matrix.at(0, c).a();
      double hi = matrix.at(0, c).d();
      for (std::size_t r = 0; r < rows; ++r) {
        lo = std::min(lo, matrix.at(r, c).a());
        hi = std::max(hi, matrix.at(r, c).d());
      }
      const double floor_norm = vertex_norm(Trapezoid::crisp(eps / (hi - lo + eps)));
      for (std::size_t r = 0; r < rows; ++r) {
        const Trapezoid& entry = norm.at(r, c);
        CHECK(entry.a() > 0.0);
        CHECK(vertex_norm(entry) >= floor_norm - 1e-12);
        CHECK(vertex_norm(entry) <= two + 1e-12);
      }
    }
  }
}
