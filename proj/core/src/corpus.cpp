#include "histat/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace histat::corpus {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int d[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return d[m - 1];
}

// --- UTF-8 plumbing -------------------------------------------------------

// Decodes the codepoint starting at i; returns its length in bytes, or 0
// for an invalid sequence (caller passes the byte through untouched).
int decode_utf8(std::string_view s, std::size_t i, uint32_t* cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    *cp = b0;
    return 1;
  }
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    *cp = (uint32_t(b0 & 0x1F) << 6) | (static_cast<unsigned char>(s[i + 1]) & 0x3F);
    return *cp >= 0x80 ? 2 : 0;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    *cp = (uint32_t(b0 & 0x0F) << 12) | (uint32_t(static_cast<unsigned char>(s[i + 1]) & 0x3F) << 6) |
          (static_cast<unsigned char>(s[i + 2]) & 0x3F);
    return *cp >= 0x800 ? 3 : 0;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    *cp = (uint32_t(b0 & 0x07) << 18) | (uint32_t(static_cast<unsigned char>(s[i + 1]) & 0x3F) << 12) |
          (uint32_t(static_cast<unsigned char>(s[i + 2]) & 0x3F) << 6) |
          (static_cast<unsigned char>(s[i + 3]) & 0x3F);
    return *cp >= 0x10000 ? 4 : 0;
  }
  return 0;
}

void encode_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Simple case folding over ASCII, Latin-1 Supplement and Latin Extended-A;
// the ranges the 19th-century French corpus actually uses.
uint32_t fold_case_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x130) return 'i';
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17D) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp == 0x17F) return 's';
  return cp;
}

// Diacritic folding of a case-folded (lowercase) codepoint to ASCII.
// Returns nullptr when the codepoint passes through unchanged.
const char* fold_diacritic_cp(uint32_t cp) {
  switch (cp) {
    case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5:
    case 0x101: case 0x103: case 0x105: return "a";
    case 0xE6: return "ae";
    case 0xE7: case 0x107: case 0x109: case 0x10B: case 0x10D: return "c";
    case 0xF0: case 0x10F: case 0x111: return "d";
    case 0xE8: case 0xE9: case 0xEA: case 0xEB:
    case 0x113: case 0x115: case 0x117: case 0x119: case 0x11B: return "e";
    case 0x11D: case 0x11F: case 0x121: case 0x123: return "g";
    case 0x125: case 0x127: return "h";
    case 0xEC: case 0xED: case 0xEE: case 0xEF:
    case 0x129: case 0x12B: case 0x12D: case 0x12F: case 0x131: return "i";
    case 0x133: return "ij";
    case 0x135: return "j";
    case 0x137: case 0x138: return "k";
    case 0x13A: case 0x13C: case 0x13E: case 0x140: case 0x142: return "l";
    case 0xF1: case 0x144: case 0x146: case 0x148: case 0x149: case 0x14B: return "n";
    case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: case 0xF8:
    case 0x14D: case 0x14F: case 0x151: return "o";
    case 0x153: return "oe";
    case 0x155: case 0x157: case 0x159: return "r";
    case 0xDF: return "ss";
    case 0x15B: case 0x15D: case 0x15F: case 0x161: return "s";
    case 0xFE: return "th";
    case 0x163: case 0x165: case 0x167: return "t";
    case 0xF9: case 0xFA: case 0xFB: case 0xFC:
    case 0x169: case 0x16B: case 0x16D: case 0x16F: case 0x171: case 0x173: return "u";
    case 0x175: return "w";
    case 0xFD: case 0xFF: case 0x177: return "y";
    case 0x17A: case 0x17C: case 0x17E: return "z";
    default: return nullptr;
  }
}

long long count_occurrences(const std::string& text, const std::string& pattern) {
  if (pattern.empty()) return 0;
  long long count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(pattern, pos)) != std::string::npos) {
    ++count;
    pos += pattern.size();
  }
  return count;
}

// Splits [0, n) into contiguous chunks and merges per-chunk results with a
// commutative-associative fold, so counts do not depend on scheduling.
template <typename Acc, typename PerRecord, typename Merge>
Acc parallel_accumulate(std::size_t n, unsigned threads, const PerRecord& per_record,
                        const Merge& merge) {
  if (threads <= 1 || n < 2 * threads) {
    Acc acc{};
    for (std::size_t i = 0; i < n; ++i) per_record(acc, i);
    return acc;
  }
  std::vector<Acc> partial(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) per_record(partial[t], i);
    });
  }
  for (auto& th : pool) th.join();
  Acc acc{};
  for (auto& p : partial) merge(acc, p);
  return acc;
}

}  // namespace

Date parse_date(std::string_view text) {
  auto fail = [&]() -> Date {
    throw DataError("unparseable date: '" + std::string(text) + "' (expected YYYY-MM-DD)");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return fail();
  auto num = [&](std::size_t off, std::size_t len, int* out) {
    auto res = std::from_chars(text.data() + off, text.data() + off + len, *out);
    return res.ec == std::errc{} && res.ptr == text.data() + off + len;
  };
  Date d;
  if (!num(0, 4, &d.year) || !num(5, 2, &d.month) || !num(8, 2, &d.day)) return fail();
  if (d.year < 1 || d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
    return fail();
  return d;
}

std::string normalize_text(std::string_view text, const Normalization& norm) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    uint32_t cp = 0;
    const int len = decode_utf8(text, i, &cp);
    if (len == 0) {  // invalid byte: pass through
      out.push_back(text[i]);
      ++i;
      continue;
    }
    i += len;
    if (norm.fold_case) cp = fold_case_cp(cp);
    if (norm.fold_diacritics) {
      if (const char* rep = fold_diacritic_cp(cp)) {
        out += rep;
        continue;
      }
    }
    encode_utf8(out, cp);
  }
  return out;
}

long long match_pattern(std::string_view text, std::string_view pattern,
                        const Normalization& norm) {
  if (pattern.empty()) throw DomainError("match_pattern: pattern must be nonempty");
  return count_occurrences(normalize_text(text, norm), normalize_text(pattern, norm));
}

namespace {

std::vector<IssueRecord> ingest_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open archive manifest: " + file.string());
  std::vector<IssueRecord> records;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(file.string() + ":" + std::to_string(lineno) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("date") || !j.contains("text") ||
        !j["id"].is_string() || !j["date"].is_string() || !j["text"].is_string())
      throw DataError(file.string() + ":" + std::to_string(lineno) +
                      ": expected object with string id, date, text");
    IssueRecord r;
    r.id = j["id"].get<std::string>();
    try {
      r.date = parse_date(j["date"].get<std::string>());
    } catch (const DataError& e) {
      throw DataError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    r.text = j["text"].get<std::string>();
    if (!ids.insert(r.id).second)
      throw DataError(file.string() + ":" + std::to_string(lineno) + ": duplicate id '" + r.id + "'");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<IssueRecord> ingest_directory(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());  // directory order is not deterministic

  std::vector<IssueRecord> records;
  std::set<std::string> ids;
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    if (f.extension() == ".jsonl")
      throw DomainError("mixed-mode manifest: directory archive contains JSONL file " + name);
    if (f.extension() != ".txt" || name.size() < 16 || name[10] != '_')
      throw DataError("archive file name not in YYYY-MM-DD_<id>.txt form: " + name);
    IssueRecord r;
    try {
      r.date = parse_date(std::string_view(name).substr(0, 10));
    } catch (const DataError& e) {
      throw DataError(name + ": " + e.what());
    }
    r.id = name.substr(11, name.size() - 15);
    if (r.id.empty()) throw DataError("archive file has empty id: " + name);
    if (!ids.insert(r.id).second) throw DataError("duplicate id '" + r.id + "' from file " + name);
    std::ifstream in(f, std::ios::binary);
    if (!in) throw DataError("cannot read archive file: " + f.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    r.text = ss.str();
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

std::vector<IssueRecord> ingest_archive(const std::filesystem::path& source) {
  if (std::filesystem::is_directory(source)) return ingest_directory(source);
  if (std::filesystem::is_regular_file(source)) return ingest_jsonl(source);
  throw DataError("archive not found: " + source.string());
}

AnnualSeries annual_series(const std::vector<IssueRecord>& archive, std::string_view pattern,
                           CountMode mode, const Normalization& norm, unsigned threads) {
  if (archive.empty()) throw DomainError("annual_series: archive is empty");
  if (pattern.empty()) throw DomainError("annual_series: pattern must be nonempty");
  const std::string pat = normalize_text(pattern, norm);

  using YearCounts = std::map<int, std::pair<long long, long long>>;  // year -> issues, hits
  const YearCounts counts = parallel_accumulate<YearCounts>(
      archive.size(), threads,
      [&](YearCounts& acc, std::size_t i) {
        const IssueRecord& rec = archive[i];
        const long long occ = count_occurrences(normalize_text(rec.text, norm), pat);
        auto& [issues, hits] = acc[rec.date.year];
        issues += 1;
        hits += (mode == CountMode::DOC_FREQ) ? (occ > 0 ? 1 : 0) : occ;
      },
      [](YearCounts& acc, const YearCounts& part) {
        for (const auto& [year, ih] : part) {
          auto& [issues, hits] = acc[year];
          issues += ih.first;
          hits += ih.second;
        }
      });

  AnnualSeries out;
  out.pattern = std::string(pattern);
  out.mode = mode;
  const int first = counts.begin()->first, last = counts.rbegin()->first;
  for (int y = first; y <= last; ++y) {
    YearRecord r;
    r.year = y;
    if (auto it = counts.find(y); it != counts.end()) {
      r.issues = it->second.first;
      r.hits = it->second.second;
    }
    r.defined = r.issues > 0;
    r.proportion = r.defined ? static_cast<double>(r.hits) / static_cast<double>(r.issues)
                             : std::numeric_limits<double>::quiet_NaN();
    out.years.push_back(r);
  }
  return out;
}

YearRange parse_year_range(const std::string& text) {
  auto sep = text.find(':');
  if (sep == std::string::npos) sep = text.find('-');
  if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size())
    throw DomainError("year range must look like 1814:1826, got '" + text + "'");
  YearRange r;
  try {
    r.first = std::stoi(text.substr(0, sep));
    r.last = std::stoi(text.substr(sep + 1));
  } catch (const std::exception&) {
    throw DomainError("year range must look like 1814:1826, got '" + text + "'");
  }
  if (r.first > r.last) throw DomainError("year range is reversed: '" + text + "'");
  return r;
}

inference::TestResult compare_periods(const AnnualSeries& series, YearRange period1,
                                      YearRange period2) {
  if (period1.last >= period2.first && period2.last >= period1.first)
    throw DomainError("compare_periods: periods overlap");
  auto collect = [&](YearRange range) {
    std::vector<double> out;
    for (const YearRecord& y : series.years)
      if (y.defined && y.year >= range.first && y.year <= range.last) out.push_back(y.proportion);
    // canonical order: only the multiset of proportions matters
    std::sort(out.begin(), out.end());
    return out;
  };
  const std::vector<double> p1 = collect(period1), p2 = collect(period2);
  if (p1.size() < 2 || p2.size() < 2)
    throw DomainError("compare_periods: each period needs >= 2 years with defined proportions");
  // Positive statistic = increase from period1 to period2.
  inference::TestResult r = inference::student_two_sample(p2, p1);
  r.params["period1_first"] = period1.first;
  r.params["period1_last"] = period1.last;
  r.params["period2_first"] = period2.first;
  r.params["period2_last"] = period2.last;
  r.params["shift"] = r.params["mean1"] - r.params["mean2"];
  return r;
}

inference::TestResult correlate_series(const AnnualSeries& a, const AnnualSeries& b) {
  if (a.years.empty() || b.years.empty() || a.years.front().year != b.years.front().year ||
      a.years.back().year != b.years.back().year)
    throw DataError("correlate_series: year spans differ");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < a.years.size(); ++i) {
    if (a.years[i].defined && b.years[i].defined) {
      xs.push_back(a.years[i].proportion);
      ys.push_back(b.years[i].proportion);
    }
  }
  if (xs.size() < 3) throw DomainError("correlate_series: needs >= 3 common defined years");
  return inference::pearson_test(xs, ys);
}

std::vector<CooccurrenceYear> cooccurrence_by_year(const std::vector<IssueRecord>& archive,
                                                   std::string_view pattern_a,
                                                   std::string_view pattern_b, double alpha,
                                                   const Normalization& norm, unsigned threads) {
  if (archive.empty()) throw DomainError("cooccurrence_by_year: archive is empty");
  if (pattern_a.empty() || pattern_b.empty())
    throw DomainError("cooccurrence_by_year: patterns must be nonempty");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("cooccurrence_by_year: alpha must be in (0,1)");
  const std::string pa = normalize_text(pattern_a, norm);
  const std::string pb = normalize_text(pattern_b, norm);

  struct Cell {
    long long n = 0, a = 0, b = 0, x = 0;
  };
  using YearCells = std::map<int, Cell>;
  const YearCells cells = parallel_accumulate<YearCells>(
      archive.size(), threads,
      [&](YearCells& acc, std::size_t i) {
        const IssueRecord& rec = archive[i];
        const std::string text = normalize_text(rec.text, norm);
        const bool ha = count_occurrences(text, pa) > 0;
        const bool hb = count_occurrences(text, pb) > 0;
        Cell& c = acc[rec.date.year];
        c.n += 1;
        c.a += ha ? 1 : 0;
        c.b += hb ? 1 : 0;
        c.x += (ha && hb) ? 1 : 0;
      },
      [](YearCells& acc, const YearCells& part) {
        for (const auto& [year, c] : part) {
          Cell& t = acc[year];
          t.n += c.n;
          t.a += c.a;
          t.b += c.b;
          t.x += c.x;
        }
      });

  std::vector<CooccurrenceYear> out;
  for (const auto& [year, c] : cells) {
    CooccurrenceYear row;
    row.year = year;
    row.issues = c.n;
    row.a_hits = c.a;
    row.b_hits = c.b;
    row.both = c.x;
    row.test = inference::fisher_intersection_test(c.n, c.a, c.b, c.x, Tail::GE);
    row.significant = row.test.p_value <= alpha;
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string annual_series_csv(const AnnualSeries& series) {
  std::string out = "year,issues,hits,proportion\n";
  for (const YearRecord& y : series.years) {
    out += std::to_string(y.year) + "," + std::to_string(y.issues) + "," + std::to_string(y.hits) +
           "," + fmt_double(y.proportion) + "\n";
  }
  return out;
}

std::string cooccurrence_csv(const std::vector<CooccurrenceYear>& rows) {
  std::string out = "year,N,a,b,x,p_value,significant\n";
  for (const CooccurrenceYear& r : rows) {
    out += std::to_string(r.year) + "," + std::to_string(r.issues) + "," +
           std::to_string(r.a_hits) + "," + std::to_string(r.b_hits) + "," +
           std::to_string(r.both) + "," + fmt_double(r.test.p_value) + "," +
           (r.significant ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace histat::corpus
