// histat: command-line front end for the historical-statistics toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
// Error text goes to stderr only; stdout carries data.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "histat/chart.hpp"
#include "histat/corpus.hpp"
#include "histat/inference.hpp"
#include "histat/report.hpp"
#include "histat/series.hpp"
#include "histat/specfun.hpp"
#include "replicate.hpp"

namespace {

using namespace histat;
namespace fs = std::filesystem;

// Relative output paths land in $HISTAT_OUTPUT_DIR when it is set.
fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("HISTAT_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / p;
  }
  return p;
}

void write_output_file(const std::string& path, const std::string& content) {
  const fs::path target = resolve_output(path);
  std::ofstream out(target, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + target.string());
  out << content;
  if (!out) throw DataError("failed while writing output file: " + target.string());
}

struct TestOptions {
  std::string format = "human";
};

void print_test_result(const inference::TestResult& r, const std::string& format,
                       const std::string* output) {
  const std::string json = report::test_result_json(r);
  if (format == "json")
    std::cout << json << "\n";
  else
    std::cout << report::test_result_human(r);
  if (output && !output->empty()) write_output_file(*output, json + "\n");
}

std::set<std::string> to_set(const std::vector<std::string>& v) {
  return std::set<std::string>(v.begin(), v.end());
}

series::DeptTable load_table_file(const std::string& path, const std::vector<std::string>& excl,
                                  bool decimal_comma) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open departments file: " + path);
  return series::load_dept_table(in, to_set(excl), decimal_comma);
}

series::Direction parse_direction(const std::string& s) {
  if (s == "top") return series::Direction::TOP;
  if (s == "bottom") return series::Direction::BOTTOM;
  throw DomainError("direction must be top or bottom, got '" + s + "'");
}

report::Table ranks_table(const series::DeptTable& table, const series::RankAssignment& ranks) {
  report::Table rows = {{"code", "name", "rank"}};
  for (const auto& d : table.departments())
    rows.push_back({d.code, d.name, std::to_string(ranks.ranks.at(d.code))});
  return rows;
}

report::Table classes_table(const series::DeptTable& table, const std::string& variable,
                            bool ascending) {
  const auto ranks = series::rank_variable(table, variable, ascending);
  const auto classes = series::quintile_classes(table, variable, ascending);
  const int k = series::default_serie_k(table.size());
  const auto top = series::make_serie(table, variable, series::Direction::TOP, k);
  const auto bottom = series::make_serie(table, variable, series::Direction::BOTTOM, k);
  report::Table rows = {{"code", "name", "rank", "serie_top", "serie_bottom", "class"}};
  for (const auto& d : table.departments()) {
    rows.push_back({d.code, d.name, std::to_string(ranks.ranks.at(d.code)),
                    top.members.count(d.code) ? "1" : "0",
                    bottom.members.count(d.code) ? "1" : "0",
                    std::to_string(classes.at(d.code))});
  }
  return rows;
}

report::Table dept_table_rows(const series::DeptTable& table) {
  const auto vars = table.variable_names();
  report::Table rows;
  std::vector<std::string> header = {"code", "name"};
  header.insert(header.end(), vars.begin(), vars.end());
  rows.push_back(std::move(header));
  const auto& depts = table.departments();
  for (std::size_t i = 0; i < depts.size(); ++i) {
    std::vector<std::string> row = {depts[i].code, depts[i].name};
    for (const auto& v : vars) row.push_back(report::round_trip_double(table.values(v)[i]));
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_table_output(const report::Table& rows, const std::string& format,
                       const std::string& output) {
  const std::string csv = report::table_to_csv(rows);
  if (format == "json")
    std::cout << report::table_to_json(rows) << "\n";
  else
    std::cout << csv;
  if (!output.empty()) write_output_file(output, csv);
}

// the corpus CSVs are purely numeric; pass their text through unchanged
void emit_csv_output(const std::string& csv, const std::string& format,
                     const std::string& output) {
  if (format == "json") {
    report::Table rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> row;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) row.push_back(cell);
      if (!line.empty() && line.back() == ',') row.emplace_back();
      rows.push_back(std::move(row));
    }
    std::cout << report::table_to_json(rows) << "\n";
  } else {
    std::cout << csv;
  }
  if (!output.empty()) write_output_file(output, csv);
}

corpus::Normalization make_norm(bool fold_diacritics, bool no_fold_case) {
  corpus::Normalization n;
  n.fold_diacritics = fold_diacritics;
  n.fold_case = !no_fold_case;
  return n;
}

corpus::CountMode parse_mode(const std::string& s) {
  if (s == "doc") return corpus::CountMode::DOC_FREQ;
  if (s == "occ") return corpus::CountMode::OCC_COUNT;
  throw DomainError("mode must be doc or occ, got '" + s + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"historical statistical inference and corpus-frequency toolkit"};
  app.require_subcommand(1);

  // ---- test ---------------------------------------------------------------
  CLI::App* test = app.add_subcommand("test", "run one of the historical tests");
  test->require_subcommand(1);

  struct {
    int n_periods = 1;
    std::string format = "human", output;
  } arb;
  CLI::App* c_arb = test->add_subcommand("arbuthnot", "sign test: p = 2^-n");
  c_arb->add_option("--n-periods", arb.n_periods, "number of like-signed periods")->required();
  c_arb->add_option("--format", arb.format, "human or json")->capture_default_str();
  c_arb->add_option("--output", arb.output, "write the JSON result to a file");
  c_arb->callback([&] {
    print_test_result(inference::arbuthnot_sign_test(arb.n_periods), arb.format, &arb.output);
  });

  struct {
    long long successes = 0, failures = 0;
    double threshold = 0.5;
    std::string format = "human", output;
  } lap;
  CLI::App* c_lap = test->add_subcommand("laplace", "posterior proportion test (uniform prior)");
  c_lap->add_option("--successes", lap.successes)->required();
  c_lap->add_option("--failures", lap.failures)->required();
  c_lap->add_option("--threshold", lap.threshold, "tail threshold on the latent proportion")
      ->capture_default_str();
  c_lap->add_option("--format", lap.format, "human or json")->capture_default_str();
  c_lap->add_option("--output", lap.output, "write the JSON result to a file");
  c_lap->callback([&] {
    print_test_result(inference::laplace_proportion_test(lap.successes, lap.failures, lap.threshold),
                      lap.format, &lap.output);
  });

  struct {
    long long s1 = 0, f1 = 0, s2 = 0, f2 = 0;
    std::string format = "human", output;
  } lap2;
  CLI::App* c_lap2 = test->add_subcommand("laplace2", "two-sample proportion comparison");
  c_lap2->add_option("--s1", lap2.s1)->required();
  c_lap2->add_option("--f1", lap2.f1)->required();
  c_lap2->add_option("--s2", lap2.s2)->required();
  c_lap2->add_option("--f2", lap2.f2)->required();
  c_lap2->add_option("--format", lap2.format, "human or json")->capture_default_str();
  c_lap2->add_option("--output", lap2.output, "write the JSON result to a file");
  c_lap2->callback([&] {
    print_test_result(inference::laplace_two_sample(lap2.s1, lap2.f1, lap2.s2, lap2.f2),
                      lap2.format, &lap2.output);
  });

  struct {
    long long x = 0, n = 1;
    double p0 = 0.5;
    std::string format = "human", output;
  } cou;
  CLI::App* c_cou = test->add_subcommand("cournot", "standardized deviation from a reference rate");
  c_cou->add_option("--x", cou.x, "observed count")->required();
  c_cou->add_option("--n", cou.n, "trials")->required();
  c_cou->add_option("--p0", cou.p0, "reference proportion")->capture_default_str();
  c_cou->add_option("--format", cou.format, "human or json")->capture_default_str();
  c_cou->add_option("--output", cou.output, "write the JSON result to a file");
  c_cou->callback([&] {
    const auto r = inference::cournot_deviation_test(cou.x, cou.n, cou.p0);
    const std::string json = report::cournot_json(r);
    if (cou.format == "json")
      std::cout << json << "\n";
    else
      std::cout << report::cournot_human(r);
    if (!cou.output.empty()) write_output_file(cou.output, json + "\n");
  });

  struct {
    long long N = 0, K = 0, n = 0, x = 0;
    std::string tail = "ge", format = "human", output;
  } fis;
  CLI::App* c_fis = test->add_subcommand("fisher", "exact hypergeometric overlap test");
  c_fis->add_option("--N", fis.N, "population size")->required();
  c_fis->add_option("--K", fis.K, "marked in population")->required();
  c_fis->add_option("--n", fis.n, "draw size")->required();
  c_fis->add_option("--x", fis.x, "observed overlap")->required();
  c_fis->add_option("--tail", fis.tail, "ge or le")->capture_default_str();
  c_fis->add_option("--format", fis.format, "human or json")->capture_default_str();
  c_fis->add_option("--output", fis.output, "write the JSON result to a file");
  c_fis->callback([&] {
    print_test_result(
        inference::fisher_intersection_test(fis.N, fis.K, fis.n, fis.x, parse_tail(fis.tail)),
        fis.format, &fis.output);
  });

  struct {
    std::vector<double> xs, ys;
    bool welch = false;
    std::string format = "human", output;
  } stu;
  CLI::App* c_stu = test->add_subcommand("student", "two-sample t test (pooled variance)");
  c_stu->add_option("--xs", stu.xs, "first sample, comma separated")->required()->delimiter(',');
  c_stu->add_option("--ys", stu.ys, "second sample, comma separated")->required()->delimiter(',');
  c_stu->add_flag("--welch", stu.welch, "Welch variant instead of pooled variance");
  c_stu->add_option("--format", stu.format, "human or json")->capture_default_str();
  c_stu->add_option("--output", stu.output, "write the JSON result to a file");
  c_stu->callback([&] {
    print_test_result(
        inference::student_two_sample(stu.xs, stu.ys,
                                      stu.welch ? inference::TVariant::WELCH
                                                : inference::TVariant::POOLED),
        stu.format, &stu.output);
  });

  struct {
    std::vector<double> xs, ys;
    std::string format = "human", output;
  } pea;
  CLI::App* c_pea = test->add_subcommand("pearson", "correlation with t-transform p-value");
  c_pea->add_option("--xs", pea.xs, "first sample, comma separated")->required()->delimiter(',');
  c_pea->add_option("--ys", pea.ys, "second sample, comma separated")->required()->delimiter(',');
  c_pea->add_option("--format", pea.format, "human or json")->capture_default_str();
  c_pea->add_option("--output", pea.output, "write the JSON result to a file");
  c_pea->callback([&] {
    print_test_result(inference::pearson_test(pea.xs, pea.ys), pea.format, &pea.output);
  });

  // ---- series -------------------------------------------------------------
  CLI::App* ser = app.add_subcommand("series", "rank-série analysis of a departments table");
  ser->require_subcommand(1);

  struct {
    std::string input, variable, format = "human", output;
    bool ascending = false, decimal_comma = false;
    std::vector<std::string> exclude;
  } srk;
  CLI::App* c_srk = ser->add_subcommand("rank", "rank departments by one variable");
  c_srk->add_option("--input", srk.input, "departments CSV")->required();
  c_srk->add_option("--variable", srk.variable)->required();
  c_srk->add_flag("--ascending", srk.ascending, "rank 1 = smallest value (default: largest)");
  c_srk->add_option("--exclude", srk.exclude, "department codes to drop")->delimiter(',');
  c_srk->add_flag("--decimal-comma", srk.decimal_comma, "accept 40,5-style numerals");
  c_srk->add_option("--format", srk.format, "human or json")->capture_default_str();
  c_srk->add_option("--output", srk.output, "write the CSV to a file");
  c_srk->callback([&] {
    const auto table = load_table_file(srk.input, srk.exclude, srk.decimal_comma);
    emit_table_output(ranks_table(table, series::rank_variable(table, srk.variable, srk.ascending)),
                      srk.format, srk.output);
  });

  struct {
    std::string input, var_a, var_b, dir_a = "top", dir_b = "top", tail = "ge";
    std::string format = "human", output;
    int k = 0;
    bool decimal_comma = false;
    std::vector<std::string> exclude;
  } sin;
  CLI::App* c_sin = ser->add_subcommand("intersect", "overlap of two séries with its exact test");
  c_sin->add_option("--input", sin.input, "departments CSV")->required();
  c_sin->add_option("--var-a", sin.var_a)->required();
  c_sin->add_option("--var-b", sin.var_b)->required();
  c_sin->add_option("--dir-a", sin.dir_a, "top or bottom")->capture_default_str();
  c_sin->add_option("--dir-b", sin.dir_b, "top or bottom")->capture_default_str();
  c_sin->add_option("--k", sin.k, "série size (0 = floor(N/5))")->capture_default_str();
  c_sin->add_option("--tail", sin.tail, "ge or le")->capture_default_str();
  c_sin->add_option("--exclude", sin.exclude, "department codes to drop")->delimiter(',');
  c_sin->add_flag("--decimal-comma", sin.decimal_comma, "accept 40,5-style numerals");
  c_sin->add_option("--format", sin.format, "human or json")->capture_default_str();
  c_sin->add_option("--output", sin.output, "write the JSON report to a file");
  c_sin->callback([&] {
    const auto table = load_table_file(sin.input, sin.exclude, sin.decimal_comma);
    const int k = sin.k > 0 ? sin.k : series::default_serie_k(table.size());
    const auto a = series::make_serie(table, sin.var_a, parse_direction(sin.dir_a), k);
    const auto b = series::make_serie(table, sin.var_b, parse_direction(sin.dir_b), k);
    const auto r = series::intersect_series(a, b, table.size(), parse_tail(sin.tail));
    const std::string json = report::intersection_json(r, table.size());
    if (sin.format == "json") {
      std::cout << json << "\n";
    } else {
      std::cout << "séries: " << sin.var_a << " (" << sin.dir_a << "), " << sin.var_b << " ("
                << sin.dir_b << "), k = " << k << ", N = " << table.size() << "\n"
                << "overlap: " << r.overlap << "\n"
                << report::test_result_human(r.test);
    }
    if (!sin.output.empty()) write_output_file(sin.output, json + "\n");
  });

  struct {
    std::string input, variable, format = "human", output;
    bool ascending = false, decimal_comma = false;
    std::vector<std::string> exclude;
  } scl;
  CLI::App* c_scl = ser->add_subcommand("classes", "ranks, série flags and quintile classes");
  c_scl->add_option("--input", scl.input, "departments CSV")->required();
  c_scl->add_option("--variable", scl.variable)->required();
  c_scl->add_flag("--ascending", scl.ascending, "rank 1 = smallest value (default: largest)");
  c_scl->add_option("--exclude", scl.exclude, "department codes to drop")->delimiter(',');
  c_scl->add_flag("--decimal-comma", scl.decimal_comma, "accept 40,5-style numerals");
  c_scl->add_option("--format", scl.format, "human or json")->capture_default_str();
  c_scl->add_option("--output", scl.output, "write the CSV to a file");
  c_scl->callback([&] {
    const auto table = load_table_file(scl.input, scl.exclude, scl.decimal_comma);
    emit_table_output(classes_table(table, scl.variable, scl.ascending), scl.format, scl.output);
  });

  struct {
    std::string input, schooling, life, format = "human", output;
    bool decimal_comma = false;
    std::vector<std::string> exclude;
  } sbc;
  CLI::App* c_sbc = ser->add_subcommand("bigeon-correct",
                                        "divide life span by schooling, adding the quotient");
  c_sbc->add_option("--input", sbc.input, "departments CSV")->required();
  c_sbc->add_option("--schooling", sbc.schooling, "schooling variable")->required();
  c_sbc->add_option("--life", sbc.life, "average life-span variable")->required();
  c_sbc->add_option("--exclude", sbc.exclude, "department codes to drop")->delimiter(',');
  c_sbc->add_flag("--decimal-comma", sbc.decimal_comma, "accept 40,5-style numerals");
  c_sbc->add_option("--format", sbc.format, "human or json")->capture_default_str();
  c_sbc->add_option("--output", sbc.output, "write the CSV to a file");
  c_sbc->callback([&] {
    const auto table = load_table_file(sbc.input, sbc.exclude, sbc.decimal_comma);
    const auto corrected = series::bigeon_correction(table, sbc.schooling, sbc.life);
    emit_table_output(dept_table_rows(corrected), sbc.format, sbc.output);
  });

  // ---- corpus -------------------------------------------------------------
  CLI::App* cor = app.add_subcommand("corpus", "dated-archive document-frequency analysis");
  cor->require_subcommand(1);

  struct {
    std::string archive, pattern, mode = "doc", format = "human", output;
    bool fold_diacritics = false, no_fold_case = false;
    unsigned threads = 1;
  } csc;
  CLI::App* c_csc = cor->add_subcommand("scan", "annual proportion series for one pattern");
  c_csc->add_option("--archive", csc.archive, "JSONL manifest or directory of dated .txt files")
      ->required();
  c_csc->add_option("--pattern", csc.pattern, "search string")->required();
  c_csc->add_option("--mode", csc.mode, "doc (issues with a hit) or occ (occurrence totals)")
      ->capture_default_str();
  c_csc->add_flag("--fold-diacritics", csc.fold_diacritics, "treat é and e alike");
  c_csc->add_flag("--no-fold-case", csc.no_fold_case, "match case-sensitively");
  c_csc->add_option("--threads", csc.threads, "parallel scan width")->capture_default_str();
  c_csc->add_option("--format", csc.format, "human or json")->capture_default_str();
  c_csc->add_option("--output", csc.output, "write the CSV to a file");
  c_csc->callback([&] {
    const auto mode = parse_mode(csc.mode);
    const auto archive = corpus::ingest_archive(csc.archive);
    const auto s = corpus::annual_series(archive, csc.pattern, mode,
                                         make_norm(csc.fold_diacritics, csc.no_fold_case),
                                         csc.threads);
    emit_csv_output(corpus::annual_series_csv(s), csc.format, csc.output);
  });

  struct {
    std::string archive, pattern, period1, period2, format = "human", output;
    bool fold_diacritics = false, no_fold_case = false;
    unsigned threads = 1;
  } ccp;
  CLI::App* c_ccp = cor->add_subcommand("compare", "Student test between two year ranges");
  c_ccp->add_option("--archive", ccp.archive)->required();
  c_ccp->add_option("--pattern", ccp.pattern)->required();
  c_ccp->add_option("--period1", ccp.period1, "first year range, e.g. 1814:1826")->required();
  c_ccp->add_option("--period2", ccp.period2, "second year range, e.g. 1828:1848")->required();
  c_ccp->add_flag("--fold-diacritics", ccp.fold_diacritics, "treat é and e alike");
  c_ccp->add_flag("--no-fold-case", ccp.no_fold_case, "match case-sensitively");
  c_ccp->add_option("--threads", ccp.threads)->capture_default_str();
  c_ccp->add_option("--format", ccp.format, "human or json")->capture_default_str();
  c_ccp->add_option("--output", ccp.output, "write the JSON result to a file");
  c_ccp->callback([&] {
    const auto archive = corpus::ingest_archive(ccp.archive);
    const auto s = corpus::annual_series(archive, ccp.pattern, corpus::CountMode::DOC_FREQ,
                                         make_norm(ccp.fold_diacritics, ccp.no_fold_case),
                                         ccp.threads);
    const auto r = corpus::compare_periods(s, corpus::parse_year_range(ccp.period1),
                                           corpus::parse_year_range(ccp.period2));
    print_test_result(r, ccp.format, &ccp.output);
  });

  struct {
    std::string archive, pattern_a, pattern_b, format = "human", output;
    bool fold_diacritics = false, no_fold_case = false;
    unsigned threads = 1;
  } ccr;
  CLI::App* c_ccr = cor->add_subcommand("correlate", "correlation of two annual series");
  c_ccr->add_option("--archive", ccr.archive)->required();
  c_ccr->add_option("--pattern-a", ccr.pattern_a)->required();
  c_ccr->add_option("--pattern-b", ccr.pattern_b)->required();
  c_ccr->add_flag("--fold-diacritics", ccr.fold_diacritics, "treat é and e alike");
  c_ccr->add_flag("--no-fold-case", ccr.no_fold_case, "match case-sensitively");
  c_ccr->add_option("--threads", ccr.threads)->capture_default_str();
  c_ccr->add_option("--format", ccr.format, "human or json")->capture_default_str();
  c_ccr->add_option("--output", ccr.output, "write the JSON result to a file");
  c_ccr->callback([&] {
    const auto archive = corpus::ingest_archive(ccr.archive);
    const auto norm = make_norm(ccr.fold_diacritics, ccr.no_fold_case);
    const auto a = corpus::annual_series(archive, ccr.pattern_a, corpus::CountMode::DOC_FREQ,
                                         norm, ccr.threads);
    const auto b = corpus::annual_series(archive, ccr.pattern_b, corpus::CountMode::DOC_FREQ,
                                         norm, ccr.threads);
    print_test_result(corpus::correlate_series(a, b), ccr.format, &ccr.output);
  });

  struct {
    std::string archive, pattern_a, pattern_b, format = "human", output;
    double alpha = 0.05;
    bool fold_diacritics = false, no_fold_case = false;
    unsigned threads = 1;
  } cco;
  CLI::App* c_cco = cor->add_subcommand("cooccur", "per-year co-occurrence tests");
  c_cco->add_option("--archive", cco.archive)->required();
  c_cco->add_option("--pattern-a", cco.pattern_a)->required();
  c_cco->add_option("--pattern-b", cco.pattern_b)->required();
  c_cco->add_option("--alpha", cco.alpha, "significance level")->capture_default_str();
  c_cco->add_flag("--fold-diacritics", cco.fold_diacritics, "treat é and e alike");
  c_cco->add_flag("--no-fold-case", cco.no_fold_case, "match case-sensitively");
  c_cco->add_option("--threads", cco.threads)->capture_default_str();
  c_cco->add_option("--format", cco.format, "human or json")->capture_default_str();
  c_cco->add_option("--output", cco.output, "write the CSV to a file");
  c_cco->callback([&] {
    const auto archive = corpus::ingest_archive(cco.archive);
    const auto rows = corpus::cooccurrence_by_year(archive, cco.pattern_a, cco.pattern_b,
                                                   cco.alpha,
                                                   make_norm(cco.fold_diacritics, cco.no_fold_case),
                                                   cco.threads);
    emit_csv_output(corpus::cooccurrence_csv(rows), cco.format, cco.output);
  });

  struct {
    std::string archive, output, mode = "doc";
    std::vector<std::string> patterns;
    double alpha = 0.05;
    bool mark_cooccur = false, fold_diacritics = false, no_fold_case = false;
    unsigned threads = 1;
  } cch;
  CLI::App* c_cch = cor->add_subcommand("chart", "SVG trend chart of annual series");
  c_cch->add_option("--archive", cch.archive)->required();
  c_cch->add_option("--pattern", cch.patterns, "search string (repeatable)")->required();
  c_cch->add_flag("--mark-cooccur", cch.mark_cooccur,
                  "with two patterns: add the both-patterns series and mark its significant years");
  c_cch->add_option("--alpha", cch.alpha, "significance level for --mark-cooccur")
      ->capture_default_str();
  c_cch->add_option("--mode", cch.mode, "doc or occ")->capture_default_str();
  c_cch->add_flag("--fold-diacritics", cch.fold_diacritics, "treat é and e alike");
  c_cch->add_flag("--no-fold-case", cch.no_fold_case, "match case-sensitively");
  c_cch->add_option("--threads", cch.threads)->capture_default_str();
  c_cch->add_option("--output", cch.output, "SVG file to write")->required();
  c_cch->callback([&] {
    const auto mode = parse_mode(cch.mode);
    if (cch.mark_cooccur && cch.patterns.size() < 2)
      throw DomainError("--mark-cooccur needs two patterns");
    const auto archive = corpus::ingest_archive(cch.archive);
    const auto norm = make_norm(cch.fold_diacritics, cch.no_fold_case);
    std::vector<corpus::AnnualSeries> all;
    for (const auto& p : cch.patterns)
      all.push_back(corpus::annual_series(archive, p, mode, norm, cch.threads));
    std::vector<int> marks;
    if (cch.mark_cooccur) {
      const auto rows = corpus::cooccurrence_by_year(archive, cch.patterns[0], cch.patterns[1],
                                                     cch.alpha, norm, cch.threads);
      corpus::AnnualSeries both;
      both.pattern = cch.patterns[0] + " & " + cch.patterns[1];
      // contiguous span with gaps at zero-issue years, like annual_series
      for (int year = rows.front().year; year <= rows.back().year; ++year) both.years.push_back(
          {year, 0, 0, std::numeric_limits<double>::quiet_NaN(), false});
      for (const auto& r : rows) {
        both.years[r.year - rows.front().year] =
            {r.year, r.issues, r.both,
             static_cast<double>(r.both) / static_cast<double>(r.issues), true};
        if (r.significant) marks.push_back(r.year);
      }
      all.push_back(std::move(both));
    }
    corpus::emit_chart(all, marks, resolve_output(cch.output));
    std::cout << "wrote " << resolve_output(cch.output).string() << " (" << all.size()
              << " series, " << marks.size() << " marked years)\n";
  });

  // ---- replicate ----------------------------------------------------------
  struct {
    std::string format = "human";
  } rep;
  CLI::App* c_rep = app.add_subcommand("replicate", "run the built-in replication suite");
  c_rep->add_option("--format", rep.format, "human or json")->capture_default_str();
  c_rep->callback([&] {
    if (!tools::run_replication(std::cout, rep.format == "json"))
      throw NumericError("replication suite failed");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help goes to stdout, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // CLI11 prints its own message to stderr
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const histat::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const histat::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const histat::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
