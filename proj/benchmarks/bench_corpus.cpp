#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "histat/chart.hpp"
#include "histat/corpus.hpp"

using namespace histat;

namespace {

// A 12.6k-issue archive shaped like a 35-year daily-paper run.
std::vector<corpus::IssueRecord> make_archive() {
  std::vector<corpus::IssueRecord> archive;
  std::mt19937_64 rng(1814);
  for (int year = 1814; year <= 1848; ++year) {
    for (int i = 0; i < 360; ++i) {
      corpus::IssueRecord r;
      r.id = std::to_string(year) + "_" + std::to_string(i);
      r.date = {year, 1 + (i % 12), 1 + (i % 28)};
      r.text = "Feuilleton du jour. ";
      if (rng() % 5 == 0) r.text += "On y parle de Statistique générale. ";
      if (rng() % 9 == 0) r.text += "M. Charles Dupin a pris la parole. ";
      r.text += "Annonces et faits divers en quantité raisonnable.";
      archive.push_back(std::move(r));
    }
  }
  return archive;
}

}  // namespace

static void BM_AnnualSeries(benchmark::State& state) {
  const auto archive = make_archive();
  const unsigned threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(corpus::annual_series(archive, "statistique",
                                                   corpus::CountMode::DOC_FREQ, {}, threads));
  }
}
BENCHMARK(BM_AnnualSeries)->Arg(1)->Arg(4);

static void BM_CooccurrenceByYear(benchmark::State& state) {
  const auto archive = make_archive();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        corpus::cooccurrence_by_year(archive, "statistique", "Charles Dupin"));
  }
}
BENCHMARK(BM_CooccurrenceByYear);

static void BM_RenderChart(benchmark::State& state) {
  const auto archive = make_archive();
  const auto a = corpus::annual_series(archive, "statistique");
  const auto b = corpus::annual_series(archive, "Charles Dupin");
  for (auto _ : state) benchmark::DoNotOptimize(corpus::render_chart({a, b}, {1828, 1836, 1844}));
}
BENCHMARK(BM_RenderChart);
