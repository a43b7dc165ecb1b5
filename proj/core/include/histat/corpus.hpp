#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "histat/inference.hpp"

// Dated-archive analytics: annual document-frequency series for search
// patterns, period comparison, correlation, and per-year co-occurrence.
namespace histat::corpus {

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;
};

/// Strict ISO-8601 day parser (YYYY-MM-DD), calendar-validated.
Date parse_date(std::string_view text);

struct IssueRecord {
  std::string id;
  Date date;
  std::string text;
};

/// Reads an archive manifest: either a line-delimited JSON file of
/// {id, date, text} objects, or a directory of UTF-8 text files named
/// YYYY-MM-DD_<id>.txt. Malformed entries raise DataError naming the line
/// or file; a directory mixing both layouts raises DomainError.
std::vector<IssueRecord> ingest_archive(const std::filesystem::path& source);

struct Normalization {
  bool fold_case = true;        // Unicode simple case folding (Latin ranges)
  bool fold_diacritics = false; // é -> e, œ -> oe, ...
};

/// Case/diacritic folding over UTF-8 text; invalid byte sequences pass
/// through untouched.
std::string normalize_text(std::string_view text, const Normalization& norm);

/// Count of non-overlapping occurrences of the pattern in the normalized
/// text; the pattern is normalized with the same profile.
long long match_pattern(std::string_view text, std::string_view pattern,
                        const Normalization& norm = {});

enum class CountMode { DOC_FREQ, OCC_COUNT };

struct YearRecord {
  int year = 0;
  long long issues = 0;
  long long hits = 0;
  double proportion = 0.0;
  bool defined = true;  // false for zero-issue years (proportion is NaN)
};

struct AnnualSeries {
  std::string pattern;
  CountMode mode = CountMode::DOC_FREQ;
  std::vector<YearRecord> years;  // contiguous, sorted by year
};

/// Per-year issue counts, hit counts and proportions for one pattern.
/// DOC_FREQ counts issues containing at least one hit; OCC_COUNT sums
/// occurrences. Output is independent of record order and, when threads>1,
/// of scheduling.
AnnualSeries annual_series(const std::vector<IssueRecord>& archive, std::string_view pattern,
                           CountMode mode = CountMode::DOC_FREQ, const Normalization& norm = {},
                           unsigned threads = 1);

struct YearRange {
  int first = 0;
  int last = 0;  // inclusive
};

YearRange parse_year_range(const std::string& text);  // "1814:1826"

/// Pooled-variance Student test between the defined annual proportions of
/// two disjoint year ranges; positive statistic means period2 > period1.
inference::TestResult compare_periods(const AnnualSeries& series, YearRange period1,
                                      YearRange period2);

/// Pearson correlation between two aligned annual series (same span).
inference::TestResult correlate_series(const AnnualSeries& a, const AnnualSeries& b);

struct CooccurrenceYear {
  int year = 0;
  long long issues = 0;  // N
  long long a_hits = 0;
  long long b_hits = 0;
  long long both = 0;    // overlap x
  inference::TestResult test;
  bool significant = false;
};

/// Per-year overlap of issues containing both patterns, with the Fisher
/// exact GE tail against the independence null. Zero-issue years are
/// skipped. Significance at p <= alpha.
std::vector<CooccurrenceYear> cooccurrence_by_year(const std::vector<IssueRecord>& archive,
                                                   std::string_view pattern_a,
                                                   std::string_view pattern_b, double alpha = 0.05,
                                                   const Normalization& norm = {},
                                                   unsigned threads = 1);

/// CSV writers for the external formats: `year,issues,hits,proportion`
/// and `year,N,a,b,x,p_value,significant`.
std::string annual_series_csv(const AnnualSeries& series);
std::string cooccurrence_csv(const std::vector<CooccurrenceYear>& rows);

}  // namespace histat::corpus
