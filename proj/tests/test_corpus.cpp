#include "histat/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "histat/chart.hpp"
#include "oracles.hpp"

using namespace histat;
using namespace histat::corpus;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("histat_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// n_issues per year, the first `hits` of them containing the pattern text.
std::vector<IssueRecord> synthetic_year(int year, int n_issues, int hits,
                                        const std::string& marker, int id_base) {
  std::vector<IssueRecord> out;
  for (int i = 0; i < n_issues; ++i) {
    IssueRecord r;
    r.id = std::to_string(id_base + i);
    r.date = {year, 3, 1 + (i % 28)};
    r.text = (i < hits) ? ("Nouvelles du jour. " + marker + " et autres chroniques.")
                        : "Nouvelles du jour sans objet.";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

TEST_CASE("parse_date: calendar validation") {
  const Date d = parse_date("1828-02-29");  // 1828 is a leap year
  CHECK(d.year == 1828);
  CHECK(d.month == 2);
  CHECK(d.day == 29);
  CHECK_THROWS_AS(parse_date("1829-02-29"), DataError);
  CHECK_THROWS_AS(parse_date("1828-13-01"), DataError);
  CHECK_THROWS_AS(parse_date("1828-00-10"), DataError);
  CHECK_THROWS_AS(parse_date("1828-04-31"), DataError);
  CHECK_THROWS_AS(parse_date("28-04-01"), DataError);
  CHECK_THROWS_AS(parse_date("1828/04/01"), DataError);
}

TEST_CASE("ingest_archive: directory of named text files") {
  TempDir dir;
  write_file(dir.path / "1828-01-05_a1.txt", "la statistique est partout");
  write_file(dir.path / "1828-01-06_a2.txt", "rien");
  write_file(dir.path / "1829-07-14_b9.txt", "encore la Statistique");
  const auto records = ingest_archive(dir.path);
  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "a1");
  CHECK(records[0].date.year == 1828);
  CHECK(records[2].id == "b9");
}

TEST_CASE("ingest_archive: directory error paths") {
  {
    TempDir dir;
    write_file(dir.path / "1828-01-05_a1.txt", "x");
    write_file(dir.path / "extra.jsonl", "{}");
    CHECK_THROWS_WITH_AS(ingest_archive(dir.path), doctest::Contains("mixed-mode"), DomainError);
  }
  {
    TempDir dir;
    write_file(dir.path / "notes.txt", "x");
    CHECK_THROWS_AS(ingest_archive(dir.path), DataError);
  }
  {
    TempDir dir;
    write_file(dir.path / "1828-02-30_a1.txt", "x");
    CHECK_THROWS_AS(ingest_archive(dir.path), DataError);
  }
  {
    TempDir dir;
    write_file(dir.path / "1828-01-05_a1.txt", "x");
    write_file(dir.path / "1829-01-05_a1.txt", "y");  // same id, different day
    CHECK_THROWS_WITH_AS(ingest_archive(dir.path), doctest::Contains("duplicate id"), DataError);
  }
  CHECK_THROWS_AS(ingest_archive(fs::path("/nonexistent/archive")), DataError);
}

TEST_CASE("ingest_archive: JSONL manifest") {
  TempDir dir;
  const fs::path f = dir.path / "archive.ndjson";
  write_file(f,
             R"({"id":"n1","date":"1814-05-02","text":"premier numero"})"
             "\n"
             R"({"id":"n2","date":"1814-05-03","text":"second numero"})"
             "\n");
  const auto records = ingest_archive(f);
  REQUIRE(records.size() == 2);
  CHECK(records[1].date.day == 3);

  const fs::path bad = dir.path / "bad.ndjson";
  write_file(bad,
             R"({"id":"n1","date":"1814-05-02","text":"ok"})"
             "\n"
             R"({"id":"n2","date":"1814-99-03","text":"mauvaise date"})"
             "\n");
  CHECK_THROWS_WITH_AS(ingest_archive(bad), doctest::Contains(":2:"), DataError);

  const fs::path dup = dir.path / "dup.ndjson";
  write_file(dup,
             R"({"id":"n1","date":"1814-05-02","text":"a"})"
             "\n"
             R"({"id":"n1","date":"1814-05-03","text":"b"})"
             "\n");
  CHECK_THROWS_WITH_AS(ingest_archive(dup), doctest::Contains("duplicate id"), DataError);

  const fs::path nojson = dir.path / "broken.ndjson";
  write_file(nojson, "not json at all\n");
  CHECK_THROWS_WITH_AS(ingest_archive(nojson), doctest::Contains(":1:"), DataError);
}

TEST_CASE("match_pattern: counting and normalization") {
  CHECK(match_pattern("La Statistique et la statistique", "statistique") == 2);
  CHECK(match_pattern("statisticien", "statistique") == 0);
  // abbreviated forms stay uncounted
  CHECK(match_pattern("Charles Dupin; M. Ch. Dupin", "Charles Dupin") == 1);

  // non-overlapping occurrences
  CHECK(match_pattern("aaaa", "aa") == 2);

  // accented case folding (UTF-8)
  CHECK(match_pattern("ÉCART et écart", "écart") == 2);
  CHECK(match_pattern("Œuvres choisies", "œuvres") == 1);

  // diacritic folding behind the flag
  Normalization folded;
  folded.fold_diacritics = true;
  CHECK(match_pattern("la pénalité", "penalite", folded) == 1);
  CHECK(match_pattern("la pénalité", "penalite") == 0);

  Normalization exact;
  exact.fold_case = false;
  CHECK(match_pattern("La Statistique et la statistique", "statistique", exact) == 1);

  CHECK_THROWS_AS(match_pattern("texte", ""), DomainError);
}

TEST_CASE("annual_series: proportions, gaps, modes") {
  std::vector<IssueRecord> archive;
  auto add = [&](std::vector<IssueRecord> v) {
    archive.insert(archive.end(), v.begin(), v.end());
  };
  add(synthetic_year(1820, 4, 2, "statistique", 0));
  add(synthetic_year(1822, 5, 0, "statistique", 100));  // 1821 missing entirely

  const AnnualSeries s = annual_series(archive, "statistique");
  REQUIRE(s.years.size() == 3);
  CHECK(s.years[0].year == 1820);
  CHECK(s.years[0].issues == 4);
  CHECK(s.years[0].hits == 2);
  CHECK(s.years[0].proportion == 0.5);
  CHECK(s.years[1].year == 1821);
  CHECK(s.years[1].issues == 0);
  CHECK_FALSE(s.years[1].defined);
  CHECK(std::isnan(s.years[1].proportion));
  CHECK(s.years[2].proportion == 0.0);

  // pattern absent everywhere
  const AnnualSeries none = annual_series(archive, "absent du corpus");
  for (const auto& y : none.years)
    if (y.defined) CHECK(y.proportion == 0.0);

  CHECK_THROWS_AS(annual_series({}, "x"), DomainError);
  CHECK_THROWS_AS(annual_series(archive, ""), DomainError);
}

TEST_CASE("annual_series: the 1828 fixture, 110 hit-issues of 320") {
  const auto archive = synthetic_year(1828, 320, 110, "le mot statistique", 0);
  const AnnualSeries s = annual_series(archive, "statistique");
  REQUIRE(s.years.size() == 1);
  CHECK(s.years[0].hits == 110);
  CHECK(s.years[0].proportion == 110.0 / 320.0);
}

TEST_CASE("annual_series: DOC_FREQ <= OCC_COUNT and multiple occurrences") {
  std::vector<IssueRecord> archive = synthetic_year(1830, 6, 3, "statistique", 0);
  archive[0].text += " Encore statistique, et statistique !";
  const AnnualSeries doc = annual_series(archive, "statistique", CountMode::DOC_FREQ);
  const AnnualSeries occ = annual_series(archive, "statistique", CountMode::OCC_COUNT);
  CHECK(doc.years[0].hits == 3);
  CHECK(occ.years[0].hits == 5);
  CHECK(doc.years[0].hits <= occ.years[0].hits);
}

TEST_CASE("annual_series: invariant under input permutation and threading") {
  std::vector<IssueRecord> archive;
  std::mt19937_64 rng(99);
  for (int year = 1814; year <= 1848; ++year) {
    const int issues = 20 + static_cast<int>(rng() % 30);
    const int hits = static_cast<int>(rng() % (issues + 1));
    auto v = synthetic_year(year, issues, hits, "statistique", (year - 1800) * 1000);
    archive.insert(archive.end(), v.begin(), v.end());
  }
  const AnnualSeries base = annual_series(archive, "statistique");

  std::vector<IssueRecord> shuffled = archive;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const AnnualSeries again = annual_series(shuffled, "statistique");
  REQUIRE(base.years.size() == again.years.size());
  for (std::size_t i = 0; i < base.years.size(); ++i) {
    CHECK(base.years[i].issues == again.years[i].issues);
    CHECK(base.years[i].hits == again.years[i].hits);
    CHECK(base.years[i].proportion == again.years[i].proportion);
  }

  const AnnualSeries threaded = annual_series(shuffled, "statistique", CountMode::DOC_FREQ, {}, 4);
  for (std::size_t i = 0; i < base.years.size(); ++i) {
    CHECK(base.years[i].hits == threaded.years[i].hits);
    CHECK(base.years[i].proportion == threaded.years[i].proportion);
  }
}

TEST_CASE("compare_periods: identical, planted step, errors") {
  std::vector<IssueRecord> archive;
  auto add_year = [&](int year, int issues, int hits) {
    auto v = synthetic_year(year, issues, hits, "statistique", (year - 1800) * 1000);
    archive.insert(archive.end(), v.begin(), v.end());
  };
  // identical proportion multisets in both periods
  add_year(1814, 20, 2);
  add_year(1815, 20, 4);
  add_year(1820, 20, 2);
  add_year(1821, 20, 4);
  const AnnualSeries s = annual_series(archive, "statistique");
  const auto eq = compare_periods(s, {1814, 1815}, {1820, 1821});
  CAPTURE(eq.statistic);
  CHECK(eq.statistic == 0.0);
  CHECK(eq.p_value == 1.0);

  CHECK_THROWS_AS(compare_periods(s, {1814, 1820}, {1820, 1821}), DomainError);
  CHECK_THROWS_AS(compare_periods(s, {1814, 1815}, {1830, 1840}), DomainError);  // no years

  // planted noise-free step: 13 years at 0.05, 21 years at 0.25
  std::vector<IssueRecord> step;
  for (int year = 1814; year <= 1826; ++year) {
    auto v = synthetic_year(year, 20, 1, "statistique", (year - 1800) * 1000);
    step.insert(step.end(), v.begin(), v.end());
  }
  for (int year = 1828; year <= 1848; ++year) {
    auto v = synthetic_year(year, 20, 5, "statistique", (year - 1800) * 1000);
    step.insert(step.end(), v.begin(), v.end());
  }
  const AnnualSeries planted = annual_series(step, "statistique");
  const auto jump = compare_periods(planted, {1814, 1826}, {1828, 1848});
  CHECK(jump.statistic > 0);
  CHECK(jump.p_value < 1e-10);
  CHECK(jump.params.at("shift") == doctest::Approx(0.20));
}

TEST_CASE("compare_periods: invariant under relabeling years within a period") {
  // only the multiset of proportions matters
  AnnualSeries a, b;
  a.pattern = b.pattern = "p";
  const double p1[] = {0.1, 0.2, 0.15}, p2[] = {0.4, 0.5, 0.45};
  for (int i = 0; i < 3; ++i) {
    a.years.push_back({1810 + i, 10, static_cast<long long>(p1[i] * 10), p1[i], true});
    b.years.push_back({1810 + i, 10, static_cast<long long>(p1[2 - i] * 10), p1[2 - i], true});
  }
  for (int i = 0; i < 3; ++i) {
    a.years.push_back({1820 + i, 10, static_cast<long long>(p2[i] * 10), p2[i], true});
    b.years.push_back({1820 + i, 10, static_cast<long long>(p2[2 - i] * 10), p2[2 - i], true});
  }
  const auto ra = compare_periods(a, {1810, 1812}, {1820, 1822});
  const auto rb = compare_periods(b, {1810, 1812}, {1820, 1822});
  CHECK(ra.p_value == rb.p_value);
  CHECK(ra.statistic == rb.statistic);
}

TEST_CASE("correlate_series: identity, direct formula, span mismatch") {
  std::vector<IssueRecord> archive;
  std::mt19937_64 rng(7);
  for (int year = 1820; year <= 1830; ++year) {
    const int issues = 10 + static_cast<int>(rng() % 10);
    const int hits = static_cast<int>(rng() % (issues + 1));
    auto v = synthetic_year(year, issues, hits, "statistique", (year - 1800) * 1000);
    // mark a second pattern in a correlated prefix of issues
    for (int i = 0; i < hits / 2; ++i) v[i].text += " Charles Dupin";
    archive.insert(archive.end(), v.begin(), v.end());
  }
  const AnnualSeries a = annual_series(archive, "statistique");
  const AnnualSeries b = annual_series(archive, "Charles Dupin");

  const auto self = correlate_series(a, a);
  CHECK(self.statistic == 1.0);

  // direct covariance formula on the aligned proportions
  const auto r = correlate_series(a, b);
  double ma = 0, mb = 0;
  const std::size_t n = a.years.size();
  for (std::size_t i = 0; i < n; ++i) {
    ma += a.years[i].proportion;
    mb += b.years[i].proportion;
  }
  ma /= n;
  mb /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (a.years[i].proportion - ma) * (b.years[i].proportion - mb);
    sxx += (a.years[i].proportion - ma) * (a.years[i].proportion - ma);
    syy += (b.years[i].proportion - mb) * (b.years[i].proportion - mb);
  }
  CHECK(r.statistic == doctest::Approx(sxy / std::sqrt(sxx * syy)).epsilon(1e-12));

  // span mismatch
  std::vector<IssueRecord> other = synthetic_year(1820, 5, 1, "statistique", 1);
  const AnnualSeries shorter = annual_series(other, "statistique");
  CHECK_THROWS_AS(correlate_series(a, shorter), DataError);
}

TEST_CASE("cooccurrence_by_year: overlap accounting and pipeline consistency") {
  std::vector<IssueRecord> archive;
  // year 1831: A and B present but never together (a*b > 0, x = 0)
  for (int i = 0; i < 10; ++i) {
    IssueRecord r;
    r.id = "x" + std::to_string(i);
    r.date = {1831, 1, i + 1};
    r.text = (i < 3) ? "seulement statistique ici" : (i < 6 ? "seulement Dupin ici" : "rien");
    archive.push_back(r);
  }
  // year 1832: every A-issue is a B-issue
  for (int i = 0; i < 8; ++i) {
    IssueRecord r;
    r.id = "y" + std::to_string(i);
    r.date = {1832, 1, i + 1};
    r.text = (i < 2) ? "statistique et Dupin ensemble" : (i < 5 ? "Dupin seul" : "rien");
    archive.push_back(r);
  }

  const auto rows = cooccurrence_by_year(archive, "statistique", "Dupin");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].year == 1831);
  CHECK(rows[0].a_hits == 3);
  CHECK(rows[0].b_hits == 3);
  CHECK(rows[0].both == 0);
  CHECK(rows[1].both == std::min(rows[1].a_hits, rows[1].b_hits));

  // embedded test equals the direct fisher call bit-identically
  for (const auto& row : rows) {
    const auto direct = inference::fisher_intersection_test(row.issues, row.a_hits, row.b_hits,
                                                            row.both, Tail::GE);
    CHECK(row.test.p_value == direct.p_value);
    CHECK(row.test.log_p.log() == direct.log_p.log());
  }
}

TEST_CASE("cooccurrence_by_year: fixture against the exact rational oracle") {
  // N=320, a=110, b=25, x=10; the 1828-shaped margins
  std::vector<IssueRecord> archive;
  for (int i = 0; i < 320; ++i) {
    IssueRecord r;
    r.id = std::to_string(i);
    r.date = {1828, 1 + (i % 12), 1 + (i % 28)};
    const bool in_a = i < 110;
    const bool in_b = (i < 10) || (i >= 110 && i < 125);  // overlap exactly 10
    r.text = std::string("chronique ") + (in_a ? "statistique " : "") + (in_b ? "Charles Dupin " : "");
    archive.push_back(r);
  }
  const auto rows = cooccurrence_by_year(archive, "statistique", "Charles Dupin");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].issues == 320);
  CHECK(rows[0].a_hits == 110);
  CHECK(rows[0].b_hits == 25);
  CHECK(rows[0].both == 10);
  const double want = oracles::log_mpq(oracles::hyper_ge(320, 110, 25, 10));
  CHECK(std::fabs(rows[0].test.log_p.log() - want) < 1e-10 * std::fabs(want));
}

TEST_CASE("cooccurrence invariant bounds on random archives") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<IssueRecord> archive;
    for (int year = 1820; year <= 1824; ++year) {
      const int n = 5 + static_cast<int>(rng() % 40);
      for (int i = 0; i < n; ++i) {
        IssueRecord r;
        r.id = std::to_string(year * 1000 + i);
        r.date = {year, 1 + static_cast<int>(rng() % 12), 1 + static_cast<int>(rng() % 28)};
        const bool a = rng() % 3 == 0, b = rng() % 4 == 0;
        r.text = std::string(a ? "motA " : "") + (b ? "motB" : "");
        archive.push_back(r);
      }
    }
    for (const auto& row : cooccurrence_by_year(archive, "motA", "motB")) {
      CHECK(row.both <= std::min(row.a_hits, row.b_hits));
      CHECK(row.both >= std::max(0LL, row.a_hits + row.b_hits - row.issues));
    }
  }
}

TEST_CASE("render_chart: polyline counts, markers, determinism") {
  auto count = [](const std::string& hay, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
      ++n;
      pos += needle.size();
    }
    return n;
  };

  AnnualSeries flat;
  flat.pattern = "statistique";
  for (int y = 1814; y <= 1820; ++y) flat.years.push_back({y, 10, 2, 0.2, true});
  const std::string one = render_chart({flat}, {});
  CHECK(count(one, "<polyline") == 1);
  CHECK(count(one, "stroke-dasharray") == 0);

  AnnualSeries second = flat;
  second.pattern = "Charles Dupin & co <test>";
  const std::string two = render_chart({flat, second}, {1816, 1819});
  CHECK(count(two, "<polyline") == 2);
  CHECK(count(two, "stroke-dasharray") == 2);
  CHECK(two.find("Charles Dupin &amp; co &lt;test&gt;") != std::string::npos);

  // byte determinism
  CHECK(render_chart({flat, second}, {1816, 1819}) == two);

  // a zero-issue year splits the polyline
  AnnualSeries gap = flat;
  gap.years[3] = {1817, 0, 0, std::numeric_limits<double>::quiet_NaN(), false};
  CHECK(count(render_chart({gap}, {}), "<polyline") == 2);

  CHECK_THROWS_AS(render_chart({}, {}), DomainError);
}

TEST_CASE("emit_chart: writes the file, rejects unwritable paths") {
  TempDir dir;
  AnnualSeries s;
  s.pattern = "p";
  for (int y = 1900; y <= 1905; ++y) s.years.push_back({y, 4, 1, 0.25, true});
  const fs::path out = dir.path / "chart.svg";
  emit_chart({s}, {1902}, out);
  std::ifstream in(out, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == render_chart({s}, {1902}));

  CHECK_THROWS_AS(emit_chart({s}, {}, dir.path / "no" / "such" / "dir" / "chart.svg"), DataError);
}

TEST_CASE("CSV writers: exact external formats") {
  AnnualSeries s;
  s.pattern = "p";
  s.years.push_back({1814, 4, 2, 0.5, true});
  s.years.push_back({1815, 0, 0, std::numeric_limits<double>::quiet_NaN(), false});
  const std::string csv = annual_series_csv(s);
  CHECK(csv ==
        "year,issues,hits,proportion\n"
        "1814,4,2,0.5\n"
        "1815,0,0,\n");

  CooccurrenceYear row;
  row.year = 1828;
  row.issues = 320;
  row.a_hits = 110;
  row.b_hits = 25;
  row.both = 10;
  row.test = inference::fisher_intersection_test(320, 110, 25, 10, Tail::GE);
  row.significant = row.test.p_value <= 0.05;
  const std::string ccsv = cooccurrence_csv({row});
  CHECK(ccsv.rfind("year,N,a,b,x,p_value,significant\n", 0) == 0);
  CHECK(ccsv.find("1828,320,110,25,10,") != std::string::npos);
}

TEST_CASE("parse_year_range") {
  const YearRange r = parse_year_range("1814:1826");
  CHECK(r.first == 1814);
  CHECK(r.last == 1826);
  const YearRange d = parse_year_range("1828-1848");
  CHECK(d.first == 1828);
  CHECK(d.last == 1848);
  CHECK_THROWS_AS(parse_year_range("1850:1840"), DomainError);
  CHECK_THROWS_AS(parse_year_range("abc"), DomainError);
}
