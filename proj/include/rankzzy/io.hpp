#ifndef RANKZZY_IO_HPP
#define RANKZZY_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankzzy/harness.hpp"
#include "rankzzy/pipeline.hpp"
#include "rankzzy/problem.hpp"

namespace rankzzy {

/// Parses a problem definition. The schema is strict: unknown keys are
/// rejected with a ParseError naming the offending location.
DecisionProblem parse_problem(const nlohmann::json& doc);

DecisionProblem load_problem(const std::string& path);

nlohmann::json report_to_json(const RankingReport& report);

/// Plot-ready grid dump: one line per (cell, action).
void write_sensitivity_csv(const SensitivityGrid& grid, std::ostream& out);

void write_timing_csv(const std::vector<TimingRecord>& records, std::ostream& out);

void write_correlation_csv(const std::vector<CorrelationRecord>& records, std::ostream& out);

/// Median and quartiles of tau per p value.
nlohmann::json correlation_summary(const std::vector<CorrelationRecord>& records);

/// Extended-real p values appear as numbers when finite and as the strings
/// "+inf" / "-inf" otherwise.
double parse_power(const nlohmann::json& value, const std::string& where);
nlohmann::json power_to_json(double p);

}  // namespace rankzzy

#endif  // RANKZZY_IO_HPP
