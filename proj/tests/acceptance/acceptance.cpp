// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "pararank/citegraph.hpp"
#include "pararank/corpus.hpp"
#include "pararank/evalanalysis.hpp"
#include "pararank/experiments.hpp"
#include "pararank/parasim.hpp"
#include "pararank/random.hpp"
#include "pararank/textprep.hpp"
#include "pararank/vecspace.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

#ifdef PARARANK_HAVE_CLI
#include "pararank/cli.hpp"
#endif

using namespace pararank;

namespace {

// Tolerances and budgets.
constexpr double kOracleTol = 1e-9;
constexpr double kCosineTol = 1e-12;
constexpr double kGaussianTol = 0.03;
constexpr double kTrendMargin = 0.1;
constexpr double kMspBudgetSeconds = 10.0;
constexpr double kOverlapBudgetSeconds = 5.0;
constexpr double kTrendBudgetSeconds = 60.0;
constexpr double kFireMinMap = 0.40;
constexpr double kFireMinMrr = 0.70;

struct Outcome {
  enum class Status { Pass, Fail, Skip } status = Status::Pass;
  std::string detail;
};

class Check {
 public:
  void expect(bool condition, const std::string& what) {
    if (!condition && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !condition;
  }
  void note(const std::string& text) { notes_.push_back(text); }
  [[nodiscard]] Outcome outcome() const {
    Outcome out;
    out.status = failed_ ? Outcome::Status::Fail : Outcome::Status::Pass;
    const auto& parts = failed_ ? failures_ : notes_;
    for (std::size_t i = 0; i < parts.size(); ++i) out.detail += (i ? "; " : "") + parts[i];
    return out;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double value, int digits = 4) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

std::string sci(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.1e", value);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome msp_oracle() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = testkit::random_corpus(50, 120, 8, 2024);
  const auto pre = textprep::preprocess_corpus(corpus);
  const auto model = vecspace::VectorSpaceModel::tfidf(textprep::build_vocabulary(pre));
  std::vector<parasim::VectorizedJudgment> vectors;
  std::vector<std::vector<oracle::Dense>> dense;
  for (const auto& j : pre) {
    vectors.push_back(parasim::vectorize_judgment(j, model));
    dense.emplace_back();
    for (const auto& p : j.paragraphs) dense.back().push_back(oracle::dense_vector(p.tokens, model.vocabulary(), true));
  }
  auto rng = make_rng(7);
  double worst = 0.0;
  for (int pair = 0; pair < 200; ++pair) {
    const auto a = uniform_index(rng, pre.size());
    auto b = uniform_index(rng, pre.size() - 1);
    if (b >= a) ++b;
    const auto ref = oracle::paragraph_level(pre[a].id, dense[a], pre[b].id, dense[b]);
    const auto values = parasim::msp(parasim::para_sim_matrix(vectors[a], vectors[b]));
    auto sorted = values.values;
    std::sort(sorted.rbegin(), sorted.rend());
    check.expect(sorted.size() == ref.msp_sorted.size(), "msp length " + pre[a].id + "/" + pre[b].id);
    for (std::size_t i = 0; i < std::min(sorted.size(), ref.msp_sorted.size()); ++i) {
      worst = std::max(worst, std::abs(sorted[i] - ref.msp_sorted[i]));
    }
    worst = std::max(worst, std::abs(parasim::pl_m(values) - ref.pl_m));
    for (const std::size_t k : {1, 3, 5}) worst = std::max(worst, std::abs(parasim::pl_f(values, k) - ref.pl_f_at(k)));
  }
  const double elapsed = seconds_since(start);
  check.expect(worst <= kOracleTol, "max deviation " + sci(worst));
  check.expect(elapsed < kMspBudgetSeconds, "runtime " + fmt(elapsed, 2) + " s");
  check.note("200 pairs, max deviation " + sci(worst) + ", " + fmt(elapsed, 2) + " s");
  return check.outcome();
}

Outcome metric_oracle() {
  Check check;
  using evalanalysis::Metric;
  const std::vector<Metric> metrics{Metric::parse("map"), Metric::parse("mrr"), Metric::parse("p10"),
                                    Metric::parse("recall100"), Metric::parse("bpref")};
  double worst = 0.0;
  std::size_t evaluated = 0;
  for (std::uint64_t fixture = 0; fixture < 25; ++fixture) {
    auto rng = make_rng(100 + fixture);
    const std::size_t num_docs = 5 + uniform_index(rng, 96);
    const std::size_t num_queries = 1 + uniform_index(rng, 10);
    std::vector<std::string> docs;
    for (std::size_t d = 0; d < num_docs; ++d) docs.push_back("d" + std::to_string(d));

    std::vector<evalanalysis::RankedList> runs;
    evalanalysis::QRels qrels;
    std::map<std::string, oracle::Judged> judged;
    for (std::size_t q = 0; q < num_queries; ++q) {
      const std::string qid = "q" + std::to_string(q);
      auto ranking = docs;
      for (std::size_t i = ranking.size(); i > 1; --i) std::swap(ranking[i - 1], ranking[uniform_index(rng, i)]);
      ranking.resize(1 + uniform_index(rng, ranking.size()));
      runs.push_back({qid, ranking});
      auto& j = judged[qid];
      for (const auto& d : docs) {
        const double u = uniform_unit(rng);
        if (u < 0.15) {
          qrels.add(qid, d, 1);
          j.relevant.insert(d);
        } else if (u < 0.45) {
          qrels.add(qid, d, 0);
          j.nonrelevant.insert(d);
        }
      }
    }
    // A query judged only non-relevant is skipped by both sides.
    std::vector<std::vector<double>> expected(metrics.size());
    for (const auto& run : runs) {
      const auto& j = judged[run.query_id];
      if (j.relevant.empty()) continue;
      expected[0].push_back(oracle::average_precision(run.ranking, j));
      expected[1].push_back(oracle::reciprocal_rank(run.ranking, j));
      expected[2].push_back(oracle::precision_at(run.ranking, j, 10));
      expected[3].push_back(oracle::recall_at(run.ranking, j, 100));
      expected[4].push_back(oracle::bpref(run.ranking, j));
    }
    if (expected[0].empty()) continue;
    const auto evaluation = evalanalysis::evaluate_run(runs, qrels, metrics);
    check.expect(evaluation.per_query.size() == expected[0].size(), "fixture " + std::to_string(fixture) + " query count");
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      double mean = 0.0;
      for (std::size_t q = 0; q < expected[m].size(); ++q) {
        mean += expected[m][q];
        if (q < evaluation.per_query.size()) {
          worst = std::max(worst, std::abs(evaluation.per_query[q].values[m] - expected[m][q]));
        }
      }
      mean /= static_cast<double>(expected[m].size());
      worst = std::max(worst, std::abs(evaluation.aggregate[m] - mean));
    }
    ++evaluated;
  }
  check.expect(evaluated == 25, std::to_string(evaluated) + " of 25 fixtures evaluable");
  check.expect(worst <= kOracleTol, "max deviation " + sci(worst));
  check.note("25 fixtures, max deviation " + sci(worst));
  return check.outcome();
}

Outcome algebraic_identities() {
  Check check;
  auto rng = make_rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    parasim::MspValues values;
    const std::size_t m = 1 + uniform_index(rng, 20);
    for (std::size_t i = 0; i < m; ++i) {
      // Include exact ties now and then.
      values.values.push_back(uniform_index(rng, 5) == 0 ? 0.5 : uniform_unit(rng));
      values.pair_indices.emplace_back(i, 0);
    }
    check.expect(parasim::pl_f(values, m) == parasim::pl_m(values), "pl_f(m) != pl_m at trial " + std::to_string(trial));
    double previous = parasim::pl_f(values, 1);
    for (std::size_t k = 2; k <= m + 2; ++k) {
      const double current = parasim::pl_f(values, k);
      check.expect(current <= previous, "pl_f increased at k=" + std::to_string(k));
      previous = current;
    }
  }

  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 1 + uniform_index(rng, 30);
    vecspace::DenseVector u, v;
    std::vector<vecspace::SparseEntry> su, sv;
    for (std::size_t i = 0; i < dim; ++i) {
      u.components.push_back(uniform_unit(rng) * 2 - 1);
      v.components.push_back(uniform_unit(rng) * 2 - 1);
      if (uniform_index(rng, 2)) su.push_back({static_cast<std::uint32_t>(i), uniform_unit(rng)});
      if (uniform_index(rng, 2)) sv.push_back({static_cast<std::uint32_t>(i), uniform_unit(rng)});
    }
    const vecspace::SparseVector sparse_u(dim, su), sparse_v(dim, sv);
    worst = std::max(worst, std::abs(vecspace::cosine(u, v) - vecspace::cosine(v, u)));
    worst = std::max(worst, std::abs(vecspace::cosine(sparse_u, sparse_v) - vecspace::cosine(sparse_v, sparse_u)));
    for (const double scale : {1e-3, 0.5, 7.0, 1e4}) {
      auto scaled = u;
      for (auto& x : scaled.components) x *= scale;
      worst = std::max(worst, std::abs(vecspace::cosine(scaled, v) - vecspace::cosine(u, v)));
      auto scaled_entries = su;
      for (auto& e : scaled_entries) e.weight *= scale;
      worst = std::max(worst, std::abs(vecspace::cosine(vecspace::SparseVector(dim, scaled_entries), sparse_v) -
                                       vecspace::cosine(sparse_u, sparse_v)));
    }
  }
  check.expect(worst <= kCosineTol, "cosine deviation " + sci(worst));

  // Every token in every document gives idf exactly 1.
  std::vector<textprep::Vocabulary::Entry> entries;
  for (std::size_t i = 0; i < 40; ++i) entries.push_back({testkit::synthetic_word(i), 12});
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.token < b.token; });
  const textprep::Vocabulary vocabulary(entries, 12, 0.0, 1.0);
  const auto table = vecspace::random_embeddings(vocabulary, 16, 5);
  const auto sum_model = vecspace::VectorSpaceModel::w2v_sum(vocabulary, table);
  const auto idf_model = vecspace::VectorSpaceModel::w2v_idf(vocabulary, table);
  bool bitwise = true;
  for (int trial = 0; trial < 200; ++trial) {
    textprep::TokenStream tokens;
    const std::size_t n = uniform_index(rng, 30);
    for (std::size_t i = 0; i < n; ++i) tokens.tokens.push_back(testkit::synthetic_word(uniform_index(rng, 45)));
    bitwise = bitwise && vecspace::embed_idf_sum(tokens, idf_model) == vecspace::embed_sum(tokens, sum_model);
  }
  check.expect(bitwise, "embed_idf_sum with unit idf differs from embed_sum");
  check.note("1000 MSP vectors, cosine deviation " + sci(worst) + ", unit-idf embedding bitwise equal");
  return check.outcome();
}

Outcome graph_correctness() {
  Check check;
  std::size_t pairs_checked = 0, samples_checked = 0;
  for (std::uint64_t g = 0; g < 20; ++g) {
    auto rng = make_rng(500 + g);
    const std::size_t nodes = 5 + uniform_index(rng, 56);
    const double p = 0.02 + 0.1 * uniform_unit(rng);
    const auto graph = testkit::random_graph(nodes, p, 900 + g);
    const auto distances = oracle::floyd_warshall(graph);
    int max_distance = 0;
    for (std::uint32_t a = 0; a < graph.num_nodes(); ++a) {
      for (std::uint32_t b = 0; b < graph.num_nodes(); ++b) {
        if (a == b) continue;
        const auto got = citegraph::sld(graph, graph.node_id(a), graph.node_id(b));
        const int want = distances[a][b];
        check.expect(want < 0 ? !got : (got && static_cast<int>(*got) == want),
                     "graph " + std::to_string(g) + " pair " + graph.node_id(a) + "-" + graph.node_id(b));
        max_distance = std::max(max_distance, want);
        ++pairs_checked;
      }
    }
    for (int d = 1; d <= max_distance + 1; ++d) {
      const auto sample = citegraph::sample_pairs_at_sld(graph, static_cast<std::uint32_t>(d), 25, g);
      for (const auto& [a, b] : sample.pairs) {
        const auto ia = *graph.node_index(a);
        const auto ib = *graph.node_index(b);
        check.expect(distances[ia][ib] == d, "sample at d=" + std::to_string(d) + " has " + a + "-" + b);
        ++samples_checked;
      }
    }
  }
  check.expect(citegraph::lb_sim(1) == 1.0, "lb_sim(1)");
  check.expect(citegraph::lb_sim(4) == 0.25, "lb_sim(4)");
  check.note(std::to_string(pairs_checked) + " ordered pairs, " + std::to_string(samples_checked) +
             " sampled pairs re-verified");
  return check.outcome();
}

Outcome overlap_statistic() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  auto rng = make_rng(77);
  std::vector<double> sample(997), low(500), high(500);
  for (auto& x : sample) x = uniform_unit(rng);
  for (auto& x : low) x = 0.4 * uniform_unit(rng);
  for (auto& x : high) x = 0.6 + 0.4 * uniform_unit(rng);
  for (const std::size_t bins : {2, 10, 50, 100}) {
    check.expect(evalanalysis::overlap({"a", sample}, {"b", sample}, bins) == 1.0, "overlap(d,d) at bins=" + std::to_string(bins));
    check.expect(evalanalysis::overlap({"a", low}, {"b", high}, bins) == 0.0, "disjoint at bins=" + std::to_string(bins));
  }
  std::vector<double> g1(10000), g2(10000);
  auto r1 = make_rng(11), r2 = make_rng(12);
  for (auto& x : g1) x = standard_normal(r1);
  for (auto& x : g2) x = 1.0 + standard_normal(r2);
  const double expected = std::erfc(0.5 / std::sqrt(2.0));
  const double value = evalanalysis::overlap({"D1", g1}, {"D2", g2}, 100);
  const double elapsed = seconds_since(start);
  check.expect(std::abs(value - expected) <= kGaussianTol, "gaussian overlap " + fmt(value) + " vs " + fmt(expected));
  check.expect(elapsed < kOverlapBudgetSeconds, "runtime " + fmt(elapsed, 2) + " s");
  check.note("gaussian overlap " + fmt(value) + " (closed form " + fmt(expected) + "), " + fmt(elapsed, 2) + " s");
  return check.outcome();
}

double mean_of(const std::vector<double>& v) {
  double total = 0;
  for (const double x : v) total += x;
  return total / static_cast<double>(v.size());
}

Outcome trend() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  double margin_total = 0.0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    testkit::PlantedCorpusOptions options;
    options.num_docs = 200;
    options.num_topics = 10;
    options.seed = seed;
    const auto planted = testkit::planted_topic_corpus(options);
    const auto model = vecspace::VectorSpaceModel::tfidf(textprep::build_vocabulary(planted.corpus));
    const auto vectors = experiments::vectorize_corpus(planted.corpus, model);
    experiments::SldAnalysisConfig config;
    config.d_max = 6;
    config.pairs_per_d = 200;
    config.seed = seed;
    const auto strata = experiments::score_sld_strata(planted.graph, vectors, config);
    std::vector<double> far;
    for (std::size_t d = 2; d < strata.size(); ++d) far.insert(far.end(), strata[d].pl_f.begin(), strata[d].pl_f.end());
    check.expect(!strata[0].pl_f.empty() && !far.empty(), "empty stratum for seed " + std::to_string(seed));
    if (strata[0].pl_f.empty() || far.empty()) continue;
    const double margin = mean_of(strata[0].pl_f) - mean_of(far);
    margin_total += margin;
    per_seed += (per_seed.empty() ? "" : " ") + fmt(margin, 3);
  }
  const double margin = margin_total / 5.0;
  const double elapsed = seconds_since(start);
  check.expect(margin > kTrendMargin, "mean margin " + fmt(margin) + " (per seed " + per_seed + ")");
  check.expect(elapsed < kTrendBudgetSeconds, "runtime " + fmt(elapsed, 2) + " s");
  check.note("PL-F SLD1 minus SLD>=3 margin " + fmt(margin) + " (per seed " + per_seed + "), " + fmt(elapsed, 2) + " s");
  return check.outcome();
}

Outcome vocabulary_filter() {
  Check check;
  // Token i appears in exactly planted_df[i] of the 100 documents.
  const std::vector<std::size_t> planted_df{1, 2, 3, 10, 50, 89, 90, 91, 95, 99, 100};
  const std::size_t num_docs = 100;
  std::vector<corpus::Judgment> judgments;
  std::vector<std::vector<std::string>> terms(num_docs);
  auto rng = make_rng(41);
  for (std::size_t t = 0; t < planted_df.size(); ++t) {
    std::vector<std::size_t> docs(num_docs);
    for (std::size_t d = 0; d < num_docs; ++d) docs[d] = d;
    for (std::size_t i = num_docs; i > 1; --i) std::swap(docs[i - 1], docs[uniform_index(rng, i)]);
    for (std::size_t i = 0; i < planted_df[t]; ++i) terms[docs[i]].push_back(testkit::synthetic_word(t));
  }
  for (std::size_t d = 0; d < num_docs; ++d) {
    // Some filler words unique to each document, and repeated terms.
    terms[d].push_back(testkit::synthetic_word(1000 + d));
    std::string text;
    for (const auto& w : terms[d]) text += w + " " + w + " ";
    char id[16];
    std::snprintf(id, sizeof id, "V%03zu", d);
    judgments.push_back({id, {text}});
  }
  const auto corpus = corpus::Corpus::from_judgments(judgments);
  const auto vocabulary = textprep::build_vocabulary(corpus, {0.0001, 0.9, 1});
  std::vector<std::string> got;
  for (const auto& e : vocabulary.entries()) got.push_back(e.token);
  const auto expected = oracle::df_filter(oracle::document_frequencies(terms), num_docs, 0.0001, 0.9);
  check.expect(got == expected, "retained " + std::to_string(got.size()) + " tokens, oracle " + std::to_string(expected.size()));
  const auto present = [&](std::size_t t) { return vocabulary.index_of(testkit::synthetic_word(t)).has_value(); };
  check.expect(present(0), "df=1 excluded");
  check.expect(present(6), "df=90 excluded");
  check.expect(!present(7), "df=91 retained");
  check.expect(!present(10), "df=100 retained");
  check.note(std::to_string(got.size()) + " tokens retained; df 90 kept, df 91 dropped");
  return check.outcome();
}

std::vector<std::string> regex_law_tokens(const std::string& text) {
  static const std::regex pattern(R"(section\s*\d+(\s*\(\s*[0-9a-z]+\s*\))*)", std::regex::icase);
  std::vector<std::string> tokens;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pattern); it != std::sregex_iterator(); ++it) {
    std::string token;
    for (const char c : it->str()) {
      if (std::isalnum(static_cast<unsigned char>(c))) token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    tokens.push_back(token);
  }
  return tokens;
}

Outcome law_tokens() {
  Check check;
  const auto worked = textprep::extract_law_tokens("section 170 (2) (a)").tokens;
  check.expect(worked == std::vector<std::string>{"section1702a"}, "worked example");
  const auto piped = textprep::preprocess("It falls under section 170 (2) (a) of the Act.").tokens;
  check.expect(std::find(piped.begin(), piped.end(), "section1702a") != piped.end(), "token lost in preprocess");

  struct Variant {
    std::string text;
    std::vector<std::string> tokens;
  };
  const std::vector<Variant> variants{
      {"Section 302 IPC", {"section302"}},
      {"SECTION 34(1) applies", {"section341"}},
      {"section  13 ( 1 ) ( e )", {"section131e"}},
      {"section 2(1)(d) of the Act", {"section21d"}},
      {"Section 11 (1)(a) (iii) was invoked", {"section111aiii"}},
      {"section302 as written", {"section302"}},
      {"section 5 () remains", {"section5"}},
      {"Section 9 of the Act and section 10 (2)", {"section9", "section102"}},
      {"under Section\t420\nread with", {"section420"}},
      {"no statute is cited here", {}},
  };
  for (const auto& v : variants) {
    const auto got = textprep::extract_law_tokens(v.text).tokens;
    check.expect(got == v.tokens, "'" + v.text + "'");
    check.expect(regex_law_tokens(v.text) == v.tokens, "fixture disagrees with pattern: '" + v.text + "'");
  }
  check.note("worked example plus " + std::to_string(variants.size()) + " variants");
  return check.outcome();
}

std::string jsonl(const corpus::Corpus& c) {
  std::ostringstream out;
  corpus::write_corpus(out, c);
  return out.str();
}

Outcome determinism() {
  Check check;
  testkit::PlantedCorpusOptions options;
  options.num_docs = 80;
  options.num_topics = 4;
  options.seed = 3;
  const auto planted = testkit::planted_topic_corpus(options);

  // Library level: the same computation on 1 and 4 threads.
  const auto model = vecspace::VectorSpaceModel::tfidf(textprep::build_vocabulary(planted.corpus));
  auto library_outputs = [&](unsigned threads) {
    const auto vectors = experiments::vectorize_corpus(planted.corpus, model, {}, threads);
    experiments::SldAnalysisConfig config;
    config.d_max = 5;
    config.pairs_per_d = 50;
    config.seed = 8;
    config.threads = threads;
    const auto strata = experiments::score_sld_strata(planted.graph, vectors, config);
    std::ostringstream out;
    experiments::write_mean_similarity_csv(out, experiments::mean_similarity_table(strata));
    experiments::write_overlap_csv(out, experiments::overlap_table(strata, parasim::Method::PlF, 20));
    const std::span<const parasim::VectorizedJudgment> all(vectors);
    evalanalysis::write_run(out, experiments::rank(all.subspan(0, 8), all, {parasim::Method::PlF, 3}, threads), "t");
    return out.str();
  };
  const auto reference = library_outputs(1);
  check.expect(reference == library_outputs(1), "library rerun differs");
  check.expect(reference == library_outputs(4), "library output differs with 4 threads");

#ifdef PARARANK_HAVE_CLI
  testkit::TempDir dir;
  const auto c = dir.write("c.jsonl", jsonl(planted.corpus)).string();
  std::string edges, qrels;
  for (const auto& [a, b] : planted.edges) {
    edges += a + "\t" + b + "\n";
    qrels += a + " 0 " + b + " 1\n" + b + " 0 " + a + " 1\n";
  }
  const auto e = dir.write("e.tsv", edges).string();
  const auto qr = dir.write("qrels.txt", qrels).string();
  std::vector<corpus::Judgment> query_docs;
  for (std::size_t i = 0; i < planted.corpus.size(); i += 10) query_docs.push_back(planted.corpus.judgments()[i]);
  const auto q = dir.write("q.jsonl", jsonl(corpus::Corpus::from_judgments(query_docs))).string();
  const auto vocab = (dir.path() / "v.txt").string();

  auto cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "pararank");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  check.expect(cli({"vocab", "--corpus", c, "--out", vocab}) == 0, "vocab command failed");
  const std::vector<std::vector<std::string>> commands{
      {"rank", "--queries", q, "--candidates", c, "--vocab", vocab},
      {"analyze-sld", "--corpus", c, "--edges", e, "--d-max", "5", "--pairs-per-d", "40", "--seed", "2"},
      {"overlap", "--corpus", c, "--edges", e, "--d-max", "5", "--pairs-per-d", "40", "--seed", "2"},
      {"sweep-k", "--queries", q, "--candidates", c, "--qrels", qr, "--vocab", vocab, "--k-values", "1,2,3,4"},
  };
  for (const auto& command : commands) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "1", "4"}) {
      auto args = command;
      const auto path = (dir.path() / (command[0] + std::to_string(outputs.size()))).string();
      args.insert(args.end(), {"--threads", threads, "--out", path});
      check.expect(cli(args) == 0, command[0] + " failed");
      outputs.push_back(testkit::read_file(path));
    }
    check.expect(!outputs[0].empty() && outputs[0] == outputs[1], command[0] + " rerun differs");
    check.expect(outputs[0] == outputs[2], command[0] + " differs with --threads 4");
  }
  check.note("library and CLI outputs byte-identical across reruns and thread counts");
#else
  check.note("library outputs byte-identical across reruns and thread counts (CLI not built)");
#endif
  return check.outcome();
}

// Expects <dir>/queries.jsonl, <dir>/candidates.jsonl and <dir>/qrels.txt.
Outcome fire_dataset() {
  const char* root = std::getenv("PARARANK_FIRE_DIR");
  if (root == nullptr || *root == '\0') return {Outcome::Status::Skip, "PARARANK_FIRE_DIR not set"};
  Check check;
  const std::filesystem::path dir(root);
  const auto queries_corpus = corpus::ingest_corpus(dir / "queries.jsonl");
  const auto candidates_corpus = corpus::ingest_corpus(dir / "candidates.jsonl");
  std::ifstream qrels_in(dir / "qrels.txt");
  if (!qrels_in) return {Outcome::Status::Fail, "cannot open qrels.txt"};
  const auto qrels = evalanalysis::read_qrels(qrels_in);
  const auto model = vecspace::VectorSpaceModel::tfidf(textprep::build_vocabulary(candidates_corpus));
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const auto queries = experiments::vectorize_corpus(queries_corpus, model, {}, threads);
  const auto candidates = experiments::vectorize_corpus(candidates_corpus, model, {}, threads);
  const std::vector<std::size_t> ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto rows = experiments::sweep_k(queries, candidates, qrels, ks, threads);
  const auto& at3 = rows[2];
  const auto best = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.map < b.map; });
  check.expect(at3.map >= kFireMinMap, "MAP " + fmt(at3.map));
  check.expect(at3.mrr >= kFireMinMrr, "MRR " + fmt(at3.mrr));
  check.expect(best->k >= 2 && best->k <= 4, "MAP peaks at k=" + std::to_string(best->k));
  check.note("k=3 MAP " + fmt(at3.map) + " MRR " + fmt(at3.mrr) + ", MAP peaks at k=" + std::to_string(best->k));
  return check.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"msp-pl-oracle", msp_oracle},
      {"metric-oracle", metric_oracle},
      {"algebraic-identities", algebraic_identities},
      {"graph-correctness", graph_correctness},
      {"overlap-statistic", overlap_statistic},
      {"trend-planted-corpus", trend},
      {"vocabulary-filter", vocabulary_filter},
      {"law-token-extraction", law_tokens},
      {"determinism", determinism},
      {"dataset-retrieval", fire_dataset},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {Outcome::Status::Fail, std::string("exception: ") + e.what()};
    }
    const char* label = outcome.status == Outcome::Status::Pass ? "PASS"
                        : outcome.status == Outcome::Status::Skip ? "SKIP"
                                                                  : "FAIL";
    if (outcome.status == Outcome::Status::Fail) ++failures;
    std::printf("%s %s: %s\n", label, name.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
