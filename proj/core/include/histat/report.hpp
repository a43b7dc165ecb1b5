#pragma once

#include <string>
#include <vector>

#include "histat/inference.hpp"
#include "histat/series.hpp"

// Serialization of test results for the CLI and file outputs. JSON output
// carries full precision: finite doubles round-trip exactly, non-finite
// values are encoded as the strings "inf", "-inf", "nan".
namespace histat::report {

/// Shortest decimal form that parses back to the identical double.
std::string round_trip_double(double v);

/// Scientific notation with 3 significant digits, for human tables.
std::string sci3(double v);

/// Rows-of-cells table, the common shape behind the CSV and JSON outputs.
using Table = std::vector<std::vector<std::string>>;

/// RFC-4180-style CSV: cells containing commas, quotes or newlines are
/// double-quoted with "" escapes.
std::string table_to_csv(const Table& rows);
std::string table_to_json(const Table& rows);

std::string test_result_json(const inference::TestResult& r);
std::string cournot_json(const inference::CournotResult& r);

/// Human-readable table: p in 3-digit scientific plus the exact log.
std::string test_result_human(const inference::TestResult& r);
std::string cournot_human(const inference::CournotResult& r);

/// JSON report for a série intersection.
std::string intersection_json(const series::IntersectionResult& r, std::size_t N);

}  // namespace histat::report
