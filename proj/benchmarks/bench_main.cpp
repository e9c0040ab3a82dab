#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "pararank/experiments.hpp"
#include "pararank/random.hpp"

using namespace pararank;

namespace {

std::string word(std::size_t i) {
  static const char* const kSyllables[] = {"ba", "de", "fi", "go", "ku", "la", "me", "ni", "po", "ru"};
  std::string w;
  do {
    w += kSyllables[i % 10];
    i /= 10;
  } while (i > 0);
  return w + "n";
}

corpus::Corpus make_corpus(std::size_t docs, std::size_t paragraphs, std::size_t words, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<corpus::Judgment> judgments;
  for (std::size_t d = 0; d < docs; ++d) {
    corpus::Judgment j{"J" + std::to_string(1000 + d), {}};
    for (std::size_t p = 0; p < paragraphs; ++p) {
      std::string text;
      for (std::size_t w = 0; w < words; ++w) text += word(uniform_index(rng, 2000)) + ' ';
      j.paragraphs.push_back(text);
    }
    judgments.push_back(std::move(j));
  }
  return corpus::Corpus::from_judgments(std::move(judgments));
}

struct Fixture {
  vecspace::VectorSpaceModel model;
  std::vector<parasim::VectorizedJudgment> vectors;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    const auto corpus = make_corpus(120, 12, 60, 1);
    auto model = vecspace::VectorSpaceModel::tfidf(textprep::build_vocabulary(corpus));
    auto vectors = experiments::vectorize_corpus(corpus, model);
    return Fixture{std::move(model), std::move(vectors)};
  }();
  return f;
}

void BM_SparseCosine(benchmark::State& state) {
  const auto& f = fixture();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = f.vectors[i % f.vectors.size()].paragraphs[0];
    const auto& b = f.vectors[(i + 1) % f.vectors.size()].paragraphs[1];
    benchmark::DoNotOptimize(vecspace::cosine(a, b));
    ++i;
  }
}
BENCHMARK(BM_SparseCosine);

void BM_DenseCosine(benchmark::State& state) {
  auto rng = make_rng(2);
  vecspace::DenseVector u, v;
  for (int i = 0; i < state.range(0); ++i) {
    u.components.push_back(uniform_unit(rng));
    v.components.push_back(uniform_unit(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(vecspace::cosine(u, v));
}
BENCHMARK(BM_DenseCosine)->Arg(100)->Arg(300);

void BM_ParagraphLevelPair(benchmark::State& state) {
  const auto& f = fixture();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto values = parasim::msp(parasim::para_sim_matrix(f.vectors[i % 60], f.vectors[60 + i % 60]));
    benchmark::DoNotOptimize(parasim::pl_f(values, 3));
    ++i;
  }
}
BENCHMARK(BM_ParagraphLevelPair);

void BM_Stem(benchmark::State& state) {
  const std::vector<std::string> words{"conditional", "relational", "generalizations", "hopefulness",
                                       "adjudication", "appellants", "convicted",       "proceedings"};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(textprep::stem(words[i++ % words.size()]));
}
BENCHMARK(BM_Stem);

void BM_Preprocess(benchmark::State& state) {
  const std::string text =
      "The appellant was convicted under Section 302 read with Section 34 (1) of the Penal Code, and the "
      "High Court, after hearing learned counsel at considerable length, confirmed the sentence.";
  for (auto _ : state) benchmark::DoNotOptimize(textprep::preprocess(text));
}
BENCHMARK(BM_Preprocess);

void BM_RankPlF(benchmark::State& state) {
  const auto& f = fixture();
  const std::span<const parasim::VectorizedJudgment> all(f.vectors);
  for (auto _ : state) {
    benchmark::DoNotOptimize(experiments::rank(all.subspan(0, 5), all, {parasim::Method::PlF, 3}));
  }
  state.SetItemsProcessed(state.iterations() * 5 * static_cast<std::int64_t>(all.size()));
}
BENCHMARK(BM_RankPlF)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
