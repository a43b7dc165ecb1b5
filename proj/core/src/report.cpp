#include "histat/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace histat::report {

namespace {

// nlohmann serializes NaN/inf as null, which breaks round-trips; carry
// non-finite values as strings instead.
nlohmann::json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string round_trip_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string sci3(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::string table_to_csv(const Table& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      const std::string& cell = row[c];
      if (cell.find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char ch : cell) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      } else {
        out += cell;
      }
    }
    out += '\n';
  }
  return out;
}

std::string table_to_json(const Table& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& cell : row) jr.push_back(cell);
    j.push_back(jr);
  }
  return j.dump();
}

std::string test_result_json(const inference::TestResult& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["statistic"] = json_number(r.statistic);
  j["p_value"] = json_number(r.p_value);
  j["log_p"] = json_number(r.log_p.log());
  j["tail"] = to_string(r.tail);
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.params) params[k] = json_number(v);
  j["params"] = params;
  return j.dump();
}

std::string cournot_json(const inference::CournotResult& r) {
  nlohmann::json j;
  j["method"] = "cournot-deviation";
  j["deviation"] = json_number(r.deviation);
  j["P"] = json_number(r.P);
  j["Pi"] = json_number(r.Pi);
  j["normalization"] = r.normalization;
  return j.dump();
}

std::string test_result_human(const inference::TestResult& r) {
  std::ostringstream os;
  os << "method:    " << r.method << "\n"
     << "statistic: " << round_trip_double(r.statistic) << "\n"
     << "p-value:   " << sci3(r.p_value) << "   (log_p = " << round_trip_double(r.log_p.log())
     << ")\n"
     << "tail:      " << to_string(r.tail) << "\n";
  for (const auto& [k, v] : r.params) os << "  " << k << " = " << round_trip_double(v) << "\n";
  return os.str();
}

std::string cournot_human(const inference::CournotResult& r) {
  std::ostringstream os;
  os << "method:    cournot-deviation (normalization: " << r.normalization << ")\n"
     << "deviation: " << round_trip_double(r.deviation) << "\n"
     << "P:         " << sci3(r.P) << "   (exact " << round_trip_double(r.P) << ")\n"
     << "Pi:        " << sci3(r.Pi) << "   (exact " << round_trip_double(r.Pi) << ")\n";
  return os.str();
}

std::string intersection_json(const series::IntersectionResult& r, std::size_t N) {
  nlohmann::json j;
  j["overlap"] = r.overlap;
  j["N"] = N;
  j["test"] = nlohmann::json::parse(test_result_json(r.test));
  return j.dump();
}

}  // namespace histat::report
