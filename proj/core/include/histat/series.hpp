#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "histat/inference.hpp"

// Rank-série machinery over a departments x variables table, feeding the
// Fisher intersection test. Tables are immutable after load; every
// derivation returns a new value.
namespace histat::series {

struct Department {
  std::string code;
  std::string name;
};

class DeptTable {
 public:
  /// Validates alignment and code uniqueness; excluded codes are already
  /// removed from both departments and columns.
  static DeptTable from_columns(std::vector<Department> departments,
                                std::map<std::string, std::vector<double>> variables,
                                std::set<std::string> excluded = {});

  std::size_t size() const { return departments_.size(); }
  const std::vector<Department>& departments() const { return departments_; }
  const std::set<std::string>& excluded() const { return excluded_; }

  bool has_variable(const std::string& name) const { return variables_.count(name) > 0; }
  const std::vector<double>& values(const std::string& variable) const;
  std::vector<std::string> variable_names() const;

  /// Copy of this table with one extra (or replaced) variable column.
  DeptTable with_variable(const std::string& name, std::vector<double> values) const;

 private:
  std::vector<Department> departments_;
  std::map<std::string, std::vector<double>> variables_;
  std::set<std::string> excluded_;
};

/// CSV loader: header row names the variables, first two columns are
/// `code` and `name`, the rest numeric. `decimal_comma` accepts 3,14 style
/// numerals from historically transcribed tables.
DeptTable load_dept_table(std::istream& in, const std::set<std::string>& exclusions = {},
                          bool decimal_comma = false);

enum class Direction { TOP, BOTTOM };

inline const char* to_string(Direction d) { return d == Direction::TOP ? "top" : "bottom"; }

struct RankAssignment {
  std::string variable;
  bool ascending = false;
  std::map<std::string, int> ranks;  // department code -> 1..N
};

/// Rank 1 is the smallest value when ascending, the largest otherwise.
/// Ties break by ascending department code, so ranks are a permutation.
RankAssignment rank_variable(const DeptTable& table, const std::string& variable, bool ascending);

/// d'Angeville's série size: the fifth of the department count.
inline int default_serie_k(std::size_t n) { return static_cast<int>(n / 5); }

struct Serie {
  std::string variable;
  Direction direction = Direction::TOP;
  int k = 0;
  std::set<std::string> members;
  std::size_t universe = 0;  // N of the table the série was drawn from
};

/// The k departments at the requested extreme of the variable.
Serie make_serie(const DeptTable& table, const std::string& variable, Direction direction, int k);

struct IntersectionResult {
  int overlap = 0;
  inference::TestResult test;
};

/// Overlap of two séries plus its Fisher exact test against the
/// independent-draws null.
IntersectionResult intersect_series(const Serie& a, const Serie& b, std::size_t N, Tail tail);

/// Departments strictly above the variable's mean (or at-most-mean when
/// `above` is false; the two calls partition the table).
std::set<std::string> above_mean_set(const DeptTable& table, const std::string& variable,
                                     bool above);

/// Bigeon's sentence for an intersection of two above-mean splits:
/// "Of the A departments where X, B are Y, A-B are not."
std::string bigeon_report(std::size_t total, std::size_t in_count, const std::string& where_label,
                          const std::string& yes_label, const std::string& no_label);

/// Bigeon's instruction correction: divides average life span by the
/// schooling figure, adding the quotient as `corrected_instruction`.
DeptTable bigeon_correction(const DeptTable& table, const std::string& schooling_var,
                            const std::string& life_var);

struct RobustMean {
  double value = 0.0;
  bool mad_zero_fallback = false;  // plain mean used because MAD was zero
};

/// Weighted mean where values deviating from the median by more than
/// threshold * MAD are down-weighted by (threshold * MAD) / |deviation|.
RobustMean robust_mean(const std::vector<double>& values, double threshold);

/// The fictitious "département moyen": per-variable arithmetic means.
std::map<std::string, double> mean_department(const DeptTable& table);

/// Partition into 5 contiguous rank bands; sizes differ by at most one,
/// larger bands first. Class 1 is the first série.
std::map<std::string, int> quintile_classes(const DeptTable& table, const std::string& variable,
                                            bool ascending);

}  // namespace histat::series
