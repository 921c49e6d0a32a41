// Serial vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the team size.
#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "claimlab/analysis.hpp"
#include "claimlab/kernels.hpp"
#include "claimlab/log.hpp"
#include "claimlab/pipeline.hpp"

using namespace claimlab;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> make_texts(std::size_t n) {
  std::mt19937_64 rng(1);
  static const std::vector<std::string> words{
      "Was",   "Bill", "O'Reilly", "found", "dead",  "at",    "his",   "Long",   "Island",
      "home?", "not",  "terrible", "good",  "never", "happy", "https://t.co/SGwagACMbW",
      "caf\xC3\xA9", "scam", "hoax", "amazing"};
  std::vector<std::string> out(n);
  for (auto& t : out) {
    const auto len = 8 + rng() % 24;
    for (std::size_t i = 0; i < len; ++i) t += words[rng() % words.size()] + " ";
  }
  return out;
}

std::vector<CrawlEntry> make_pages(std::size_t n) {
  std::vector<std::string> bodies;
  for (const auto& f : fs::directory_iterator(fs::path(CLAIMLAB_SOURCE_DIR) / "fixtures" / "corpus" /
                                              "site" / "html")) {
    std::ifstream in(f.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    bodies.push_back(ss.str());
  }
  std::vector<CrawlEntry> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].url = "https://www.snopes.com/p/" + std::to_string(i);
    out[i].result = CrawlResult{out[i].url, out[i].url, 200, {}, bodies[i % bodies.size()], 0, true};
  }
  return out;
}

std::vector<double> make_samples(std::size_t n) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d(-0.05, 0.25);
  std::vector<double> out(n);
  for (auto& x : out) x = std::clamp(d(rng), -1.0, 1.0);
  return out;
}

const Lexicon& lexicon() {
  static const Lexicon lex = load_lexicon(default_lexicon_path());
  return lex;
}

template <bool Parallel>
void BM_Tokenize(benchmark::State& state) {
  const auto texts = make_texts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? tokenize_all(texts) : serial::tokenize_all(texts));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Score(benchmark::State& state) {
  const auto texts = make_texts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? score_all(texts, lexicon())
                                      : serial::score_all(texts, lexicon()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Parse(benchmark::State& state) {
  const auto pages = make_pages(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? parse_all(pages) : serial::parse_all(pages));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Kde(benchmark::State& state) {
  const auto samples = make_samples(static_cast<std::size_t>(state.range(0)));
  const auto grid = sentiment_grid(512);
  const double h = silverman_bandwidth(samples);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kde(samples, grid, h) : serial::kde(samples, grid, h));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Tokenize<false>)->Name("tokenize/serial")->Arg(20000)->UseRealTime();
BENCHMARK(BM_Tokenize<true>)->Name("tokenize/omp")->Arg(20000)->UseRealTime();
BENCHMARK(BM_Score<false>)->Name("score/serial")->Arg(20000)->UseRealTime();
BENCHMARK(BM_Score<true>)->Name("score/omp")->Arg(20000)->UseRealTime();
BENCHMARK(BM_Parse<false>)->Name("parse/serial")->Arg(2000)->UseRealTime();
BENCHMARK(BM_Parse<true>)->Name("parse/omp")->Arg(2000)->UseRealTime();
BENCHMARK(BM_Kde<false>)->Name("kde/serial")->Arg(20000)->UseRealTime();
BENCHMARK(BM_Kde<true>)->Name("kde/omp")->Arg(20000)->UseRealTime();

int main(int argc, char** argv) {
  log::set_quiet();
  benchmark::AddCustomContext("omp_threads", std::to_string(kernel_threads()));
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
