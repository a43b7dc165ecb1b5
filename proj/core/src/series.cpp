#include "histat/series.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

namespace histat::series {

namespace {

// Comma separation with double-quote cells; "" inside quotes escapes one.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_cell(std::string cell, bool decimal_comma, std::size_t row, const std::string& col) {
  if (decimal_comma) std::replace(cell.begin(), cell.end(), ',', '.');
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                    ", column " + col);
  }
  if (pos != cell.size() || !std::isfinite(v))
    throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                    ", column " + col);
  return v;
}

}  // namespace

DeptTable DeptTable::from_columns(std::vector<Department> departments,
                                  std::map<std::string, std::vector<double>> variables,
                                  std::set<std::string> excluded) {
  std::set<std::string> codes;
  for (const auto& d : departments)
    if (!codes.insert(d.code).second) throw DataError("duplicate department code: " + d.code);
  for (const auto& [name, vals] : variables)
    if (vals.size() != departments.size())
      throw DataError("variable '" + name + "' has " + std::to_string(vals.size()) +
                      " values for " + std::to_string(departments.size()) + " departments");
  DeptTable t;
  t.departments_ = std::move(departments);
  t.variables_ = std::move(variables);
  t.excluded_ = std::move(excluded);
  return t;
}

const std::vector<double>& DeptTable::values(const std::string& variable) const {
  auto it = variables_.find(variable);
  if (it == variables_.end()) throw DataError("unknown variable: " + variable);
  return it->second;
}

std::vector<std::string> DeptTable::variable_names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& [name, _] : variables_) out.push_back(name);
  return out;
}

DeptTable DeptTable::with_variable(const std::string& name, std::vector<double> values) const {
  if (values.size() != departments_.size())
    throw DataError("variable '" + name + "' has wrong length");
  DeptTable t = *this;
  t.variables_[name] = std::move(values);
  return t;
}

DeptTable load_dept_table(std::istream& in, const std::set<std::string>& exclusions,
                          bool decimal_comma) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty table: missing header row");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3) throw DataError("header must name code, name and at least one variable");
  for (auto& h : header) h = trim(h);

  std::vector<Department> departments;
  std::map<std::string, std::vector<double>> variables;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c].empty()) throw DataError("empty variable name in header column " + std::to_string(c + 1));
    if (variables.count(header[c])) throw DataError("duplicate variable name: " + header[c]);
    variables[header[c]] = {};
  }

  std::set<std::string> seen;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("ragged row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    const std::string code = trim(cells[0]);
    if (code.empty()) throw DataError("empty department code at row " + std::to_string(row));
    if (!seen.insert(code).second)
      throw DataError("duplicate department code '" + code + "' at row " + std::to_string(row));
    if (exclusions.count(code)) continue;
    departments.push_back({code, trim(cells[1])});
    for (std::size_t c = 2; c < cells.size(); ++c)
      variables[header[c]].push_back(parse_cell(trim(cells[c]), decimal_comma, row, header[c]));
  }
  if (departments.empty()) throw DataError("table has no departments after exclusions");
  return DeptTable::from_columns(std::move(departments), std::move(variables), exclusions);
}

RankAssignment rank_variable(const DeptTable& table, const std::string& variable, bool ascending) {
  const std::vector<double>& vals = table.values(variable);
  const auto& depts = table.departments();
  std::vector<std::size_t> order(depts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (vals[i] != vals[j]) return ascending ? vals[i] < vals[j] : vals[i] > vals[j];
    return depts[i].code < depts[j].code;  // deterministic tie policy
  });
  RankAssignment r;
  r.variable = variable;
  r.ascending = ascending;
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    r.ranks[depts[order[pos]].code] = static_cast<int>(pos) + 1;
  return r;
}

Serie make_serie(const DeptTable& table, const std::string& variable, Direction direction,
                 int k) {
  const auto n = table.size();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw DomainError("make_serie: k must be in [1, N], got k=" + std::to_string(k) +
                      " N=" + std::to_string(n));
  // TOP takes the largest values, i.e. the k best ranks of the descending
  // ranking; BOTTOM the smallest.
  RankAssignment ranks = rank_variable(table, variable, direction == Direction::BOTTOM);
  Serie s;
  s.variable = variable;
  s.direction = direction;
  s.k = k;
  s.universe = n;
  for (const auto& [code, rank] : ranks.ranks)
    if (rank <= k) s.members.insert(code);
  return s;
}

IntersectionResult intersect_series(const Serie& a, const Serie& b, std::size_t N, Tail tail) {
  if (a.universe != N || b.universe != N)
    throw DataError("intersect_series: séries drawn from different universes (" +
                    std::to_string(a.universe) + ", " + std::to_string(b.universe) +
                    " vs N=" + std::to_string(N) + ")");
  int overlap = 0;
  for (const auto& code : a.members) overlap += b.members.count(code) ? 1 : 0;
  IntersectionResult r;
  r.overlap = overlap;
  r.test = inference::fisher_intersection_test(static_cast<long long>(N), a.k, b.k, overlap, tail);
  return r;
}

std::set<std::string> above_mean_set(const DeptTable& table, const std::string& variable,
                                     bool above) {
  const std::vector<double>& vals = table.values(variable);
  const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
  std::set<std::string> out;
  const auto& depts = table.departments();
  for (std::size_t i = 0; i < depts.size(); ++i) {
    const bool is_above = vals[i] > mean;  // strict, documented in output metadata
    if (is_above == above) out.insert(depts[i].code);
  }
  return out;
}

std::string bigeon_report(std::size_t total, std::size_t in_count, const std::string& where_label,
                          const std::string& yes_label, const std::string& no_label) {
  if (in_count > total) throw DomainError("bigeon_report: in_count exceeds total");
  std::ostringstream os;
  os << "Of the " << total << " departments where " << where_label << ", " << in_count << " are "
     << yes_label << ", " << (total - in_count) << " are " << no_label << ".";
  return os.str();
}

DeptTable bigeon_correction(const DeptTable& table, const std::string& schooling_var,
                            const std::string& life_var) {
  const std::vector<double>& schooling = table.values(schooling_var);
  const std::vector<double>& life = table.values(life_var);
  std::vector<double> corrected(schooling.size());
  for (std::size_t i = 0; i < schooling.size(); ++i) {
    if (!(schooling[i] > 0.0))
      throw DataError("bigeon_correction: non-positive schooling value for department " +
                      table.departments()[i].code);
    corrected[i] = life[i] / schooling[i];
  }
  return table.with_variable("corrected_instruction", std::move(corrected));
}

RobustMean robust_mean(const std::vector<double>& values, double threshold) {
  if (values.size() < 2) throw DomainError("robust_mean: requires at least 2 values");
  if (!(threshold > 0.0)) throw DomainError("robust_mean: threshold must be > 0");

  auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  const double med = median_of(values);
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::fabs(values[i] - med);
  const double mad = median_of(dev);

  RobustMean r;
  const double cut = threshold * mad;
  if (mad == 0.0) {
    const bool outlier = std::any_of(dev.begin(), dev.end(), [](double d) { return d > 0.0; });
    if (outlier) {
      r.value = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
      r.mad_zero_fallback = true;
      return r;
    }
  }
  double wsum = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = (dev[i] > cut) ? cut / dev[i] : 1.0;
    wsum += w;
    sum += w * values[i];
  }
  r.value = sum / wsum;
  return r;
}

std::map<std::string, double> mean_department(const DeptTable& table) {
  if (table.size() == 0) throw DomainError("mean_department: empty table");
  std::map<std::string, double> out;
  for (const auto& name : table.variable_names()) {
    const auto& vals = table.values(name);
    out[name] = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
  }
  return out;
}

std::map<std::string, int> quintile_classes(const DeptTable& table, const std::string& variable,
                                            bool ascending) {
  const auto n = table.size();
  if (n < 5) throw DomainError("quintile_classes: requires at least 5 departments");
  RankAssignment ranks = rank_variable(table, variable, ascending);
  // Band sizes differ by at most one, remainder to the earliest classes.
  const std::size_t base = n / 5, rem = n % 5;
  int bounds[5];  // inclusive upper rank of each class
  std::size_t acc = 0;
  for (std::size_t c = 0; c < 5; ++c) {
    acc += base + (c < rem ? 1 : 0);
    bounds[c] = static_cast<int>(acc);
  }
  std::map<std::string, int> out;
  for (const auto& [code, rank] : ranks.ranks) {
    int cls = 1;
    while (rank > bounds[cls - 1]) ++cls;
    out[code] = cls;
  }
  return out;
}

}  // namespace histat::series
