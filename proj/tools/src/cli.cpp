#include "pararank/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pararank/citegraph.hpp"
#include "pararank/corpus.hpp"
#include "pararank/errors.hpp"
#include "pararank/evalanalysis.hpp"
#include "pararank/experiments.hpp"
#include "pararank/parasim.hpp"
#include "pararank/textprep.hpp"
#include "pararank/vecspace.hpp"

namespace pararank::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus, queries, candidates, edges, qrels, run, vocab, meta, embeddings, out;
  std::string pairs_out, random_embeddings;
  std::string model = "tfidf";
  std::string method = "pl-f";
  std::string law_words = "section";
  std::string metrics = "map,mrr,p10,recall100,bpref";
  std::string k_values = "1,2,3,4,5,6,7,8,9,10";
  std::string tag;
  std::size_t k = 3;
  std::size_t dim = 100;
  std::size_t pairs_per_d = 1000;
  std::size_t bins = 50;
  std::uint32_t d_max = 10;
  double min_df = 0.0001;
  double max_df = 0.9;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool bigrams = false;
  std::vector<const CLI::Option*> k_options;  // one per subcommand; only the parsed one can be set
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<std::size_t> parse_k_values(const std::string& text) {
  std::vector<std::size_t> values;
  for (const auto& item : split_list(text)) {
    std::size_t k = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), k);
    if (r.ec != std::errc{} || r.ptr != item.data() + item.size() || k == 0) {
      throw UsageError("--k-values: '" + item + "' is not a positive integer");
    }
    values.push_back(k);
  }
  if (values.empty()) throw UsageError("--k-values: empty list");
  return values;
}

textprep::PreprocessOptions preprocess_options(const Options& o) {
  textprep::PreprocessOptions options;
  options.law_words = split_list(o.law_words);
  return options;
}

int ngram_order(const Options& o) { return o.bigrams ? 2 : 1; }

vecspace::ModelKind model_kind(const Options& o) {
  const auto kind = vecspace::parse_model_kind(o.model);
  const bool embedded = kind == vecspace::ModelKind::W2vSum || kind == vecspace::ModelKind::W2vIdf;
  if (embedded && o.bigrams) throw UsageError("--bigrams applies to bow and tfidf only");
  return kind;
}

parasim::ScoringConfig scoring(const Options& o) {
  parasim::ScoringConfig config;
  config.method = parasim::parse_method(o.method);
  const bool k_given = std::any_of(o.k_options.begin(), o.k_options.end(),
                                   [](const CLI::Option* option) { return option->count() > 0; });
  if (config.method != parasim::Method::PlF && k_given) {
    throw UsageError("--k is only valid with --method pl-f");
  }
  config.k = o.k;
  return config;
}

/// Writes to --out when given, otherwise to the command's standard output.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw DataError("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw DataError("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot open output file " + path);
  writer(file);
  file.flush();
  if (!file) throw DataError("write failed: " + path);
}

textprep::Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary file " + path);
  return textprep::read_vocabulary(in);
}

vecspace::IndexMetadata load_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open index metadata " + path);
  return vecspace::read_metadata(in);
}

vecspace::IndexMetadata requested_metadata(const Options& o, const textprep::Vocabulary& vocabulary) {
  vecspace::IndexMetadata metadata;
  metadata.kind = model_kind(o);
  metadata.ngram_order = ngram_order(o);
  metadata.vocabulary_hash = textprep::vocabulary_hash(vocabulary);
  metadata.law_words = split_list(o.law_words);
  return metadata;
}

vecspace::VectorSpaceModel make_model(const Options& o, textprep::Vocabulary vocabulary) {
  switch (model_kind(o)) {
    case vecspace::ModelKind::Bow: return vecspace::VectorSpaceModel::bow(std::move(vocabulary), ngram_order(o));
    case vecspace::ModelKind::Tfidf:
      return vecspace::VectorSpaceModel::tfidf(std::move(vocabulary), ngram_order(o));
    case vecspace::ModelKind::W2vSum:
    case vecspace::ModelKind::W2vIdf: {
      if (o.embeddings.empty()) throw UsageError("--model " + o.model + " requires --embeddings");
      auto table = vecspace::load_embeddings(o.embeddings, vocabulary);
      return model_kind(o) == vecspace::ModelKind::W2vSum
                 ? vecspace::VectorSpaceModel::w2v_sum(std::move(vocabulary), std::move(table))
                 : vecspace::VectorSpaceModel::w2v_idf(std::move(vocabulary), std::move(table));
    }
  }
  throw InvariantError("unhandled model kind");
}

/// Loads --vocab and checks it against --meta (default <vocab>.meta).
vecspace::VectorSpaceModel indexed_model(const Options& o) {
  auto vocabulary = load_vocabulary(o.vocab);
  const auto stored = load_metadata(o.meta.empty() ? o.vocab + ".meta" : o.meta);
  vecspace::check_metadata(requested_metadata(o, vocabulary), stored);
  return make_model(o, std::move(vocabulary));
}

/// Uses --vocab when given, otherwise builds a vocabulary from `corpus`.
vecspace::VectorSpaceModel analysis_model(const Options& o, const corpus::Corpus& corpus, std::ostream& err) {
  if (!o.vocab.empty()) return indexed_model(o);
  textprep::VocabularyOptions options;
  options.min_df_ratio = o.min_df;
  options.max_df_ratio = o.max_df;
  options.ngram_order = ngram_order(o);
  auto vocabulary = textprep::build_vocabulary(corpus, options, preprocess_options(o));
  err << "vocabulary: " << vocabulary.size() << " terms from " << corpus.size() << " judgments\n";
  return make_model(o, std::move(vocabulary));
}

/// Graph restricted to edges whose endpoints are both in the corpus.
citegraph::CitationGraph corpus_graph(const corpus::Corpus& corpus, const std::string& path, std::ostream& err) {
  const auto full = citegraph::load_graph(path);
  std::vector<citegraph::IdPair> kept;
  std::size_t dropped = 0;
  for (auto& edge : full.edges()) {
    if (corpus.find(edge.first) && corpus.find(edge.second)) {
      kept.push_back(std::move(edge));
    } else {
      ++dropped;
    }
  }
  if (dropped > 0) err << "warning: dropped " << dropped << " edges with endpoints outside the corpus\n";
  if (full.dropped_self_loops() > 0) err << "warning: dropped " << full.dropped_self_loops() << " self-loops\n";
  if (full.collapsed_duplicates() > 0) {
    err << "warning: collapsed " << full.collapsed_duplicates() << " duplicate edges\n";
  }
  return citegraph::CitationGraph(kept);
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = corpus::ingest_corpus(o.corpus);
  const auto graph = o.edges.empty() ? citegraph::CitationGraph() : corpus_graph(corpus, o.edges, err);
  const auto stats = corpus::corpus_stats(corpus, graph);
  Sink sink(o.out, out);
  sink.stream() << "num_judgments,avg_citations,avg_paragraphs,avg_words_per_paragraph\n"
                << stats.num_judgments << ',' << experiments::format_double(stats.avg_citations) << ','
                << experiments::format_double(stats.avg_paragraphs) << ','
                << experiments::format_double(stats.avg_words_per_paragraph) << '\n';
  sink.close();
  return kOk;
}

int cmd_vocab(const Options& o, std::ostream& err) {
  const auto kind = model_kind(o);
  const auto corpus = corpus::ingest_corpus(o.corpus);
  textprep::VocabularyOptions options;
  options.min_df_ratio = o.min_df;
  options.max_df_ratio = o.max_df;
  options.ngram_order = ngram_order(o);
  const auto vocabulary = textprep::build_vocabulary(corpus, options, preprocess_options(o));
  write_file(o.out, [&](std::ostream& s) { textprep::write_vocabulary(s, vocabulary); });

  vecspace::IndexMetadata metadata;
  metadata.kind = kind;
  metadata.ngram_order = options.ngram_order;
  metadata.vocabulary_hash = textprep::vocabulary_hash(vocabulary);
  metadata.law_words = split_list(o.law_words);
  write_file(o.meta.empty() ? o.out + ".meta" : o.meta, [&](std::ostream& s) { vecspace::write_metadata(s, metadata); });

  if (!o.random_embeddings.empty()) {
    if (o.dim == 0) throw UsageError("--dim must be >= 1");
    const auto table = vecspace::random_embeddings(vocabulary, o.dim, o.seed);
    write_file(o.random_embeddings, [&](std::ostream& s) { vecspace::write_embeddings(s, table, vocabulary); });
  }
  const auto bounds = textprep::df_bounds(corpus.size(), o.min_df, o.max_df);
  err << "vocabulary: " << vocabulary.size() << " terms, df in [" << bounds.min_df << ", " << bounds.max_df
      << "] over " << corpus.size() << " judgments\n";
  return kOk;
}

std::string run_tag(const Options& o, const parasim::ScoringConfig& config) {
  if (!o.tag.empty()) return o.tag;
  std::string tag = o.model + "_" + o.method;
  if (config.method == parasim::Method::PlF) tag += "_k" + std::to_string(config.k);
  return tag;
}

int cmd_rank(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = scoring(o);
  const auto model = indexed_model(o);
  const auto options = preprocess_options(o);
  const auto queries = experiments::vectorize_corpus(corpus::ingest_corpus(o.queries), model, options, o.threads);
  const auto candidates =
      experiments::vectorize_corpus(corpus::ingest_corpus(o.candidates), model, options, o.threads);
  const auto rankings = experiments::rank(queries, candidates, config, o.threads);
  Sink sink(o.out, out);
  evalanalysis::write_run(sink.stream(), rankings, run_tag(o, config));
  sink.close();
  err << "ranked " << candidates.size() << " candidates for " << queries.size() << " queries\n";
  return kOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<evalanalysis::Metric> metrics;
  for (const auto& name : split_list(o.metrics)) {
    try {
      metrics.push_back(evalanalysis::Metric::parse(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (metrics.empty()) throw UsageError("--metrics: empty list");
  std::ifstream run_in(o.run);
  if (!run_in) throw DataError("cannot open run file " + o.run);
  const auto runs = evalanalysis::read_run(run_in);
  std::ifstream qrels_in(o.qrels);
  if (!qrels_in) throw DataError("cannot open qrels file " + o.qrels);
  const auto qrels = evalanalysis::read_qrels(qrels_in);

  const auto evaluation = evalanalysis::evaluate_run(runs, qrels, metrics);
  for (const auto& q : evaluation.unknown_queries) err << "warning: query " << q << " not in qrels, skipped\n";
  for (const auto& q : evaluation.no_relevant_queries) {
    err << "warning: query " << q << " has no relevant documents, skipped\n";
  }
  Sink sink(o.out, out);
  evalanalysis::write_evaluation_csv(sink.stream(), evaluation);
  sink.close();
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    err << metrics[i].name() << '\t' << experiments::format_double(evaluation.aggregate[i]) << '\n';
  }
  return kOk;
}

std::vector<experiments::SldStratum> sld_strata(const Options& o, std::ostream& err) {
  if (o.d_max == 0) throw UsageError("--d-max must be >= 1");
  if (o.pairs_per_d == 0) throw UsageError("--pairs-per-d must be >= 1");
  if (o.k == 0) throw UsageError("--k must be >= 1");
  const auto corpus = corpus::ingest_corpus(o.corpus);
  const auto graph = corpus_graph(corpus, o.edges, err);
  const auto model = analysis_model(o, corpus, err);
  const auto judgments = experiments::vectorize_corpus(corpus, model, preprocess_options(o), o.threads);

  experiments::SldAnalysisConfig config;
  config.d_max = o.d_max;
  config.pairs_per_d = o.pairs_per_d;
  config.seed = o.seed;
  config.k = o.k;
  config.threads = o.threads;
  auto strata = experiments::score_sld_strata(graph, judgments, config);
  for (const auto& s : strata) {
    if (s.sample.shortage) {
      err << "warning: only " << s.sample.pairs.size() << " pairs at distance " << s.sample.sld << '\n';
    }
  }
  if (!o.pairs_out.empty()) {
    std::vector<citegraph::SldPairSample> samples;
    for (const auto& s : strata) samples.push_back(s.sample);
    write_file(o.pairs_out, [&](std::ostream& s) { citegraph::write_pair_samples(s, samples, o.seed); });
  }
  return strata;
}

int cmd_analyze_sld(const Options& o, std::ostream& out, std::ostream& err) {
  const auto strata = sld_strata(o, err);
  Sink sink(o.out, out);
  experiments::write_mean_similarity_csv(sink.stream(), experiments::mean_similarity_table(strata));
  sink.close();
  return kOk;
}

int cmd_overlap(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.bins == 0) throw UsageError("--bins must be >= 1");
  const auto method = scoring(o).method;
  const auto strata = sld_strata(o, err);
  Sink sink(o.out, out);
  experiments::write_overlap_csv(sink.stream(), experiments::overlap_table(strata, method, o.bins));
  sink.close();
  return kOk;
}

int cmd_sweep_k(const Options& o, std::ostream& out, std::ostream& err) {
  const auto k_values = parse_k_values(o.k_values);
  const auto model = indexed_model(o);
  const auto options = preprocess_options(o);
  const auto queries = experiments::vectorize_corpus(corpus::ingest_corpus(o.queries), model, options, o.threads);
  const auto candidates =
      experiments::vectorize_corpus(corpus::ingest_corpus(o.candidates), model, options, o.threads);
  std::ifstream qrels_in(o.qrels);
  if (!qrels_in) throw DataError("cannot open qrels file " + o.qrels);
  const auto qrels = evalanalysis::read_qrels(qrels_in);
  const auto rows = experiments::sweep_k(queries, candidates, qrels, k_values, o.threads);
  Sink sink(o.out, out);
  experiments::write_sweep_csv(sink.stream(), rows);
  sink.close();
  err << "swept " << rows.size() << " k values over " << queries.size() << " queries\n";
  return kOk;
}

const std::vector<std::string> kModels{"bow", "tfidf", "w2v", "w2v-idf"};
const std::vector<std::string> kMethods{"dl", "pl-m", "pl-f"};

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "bow, tfidf, w2v or w2v-idf")->check(CLI::IsMember(kModels))->capture_default_str();
  cmd->add_flag("--bigrams", o.bigrams, "unigrams and bigrams (bow, tfidf)");
  cmd->add_option("--law-words", o.law_words, "comma-separated statute words")->capture_default_str();
}

void add_embedding_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--embeddings", o.embeddings, "word vectors, one 'token v1 ... vd' per line")
      ->check(CLI::ExistingFile);
}

void add_df_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--min-df", o.min_df, "minimum document frequency ratio")->capture_default_str();
  cmd->add_option("--max-df", o.max_df, "maximum document frequency ratio")->capture_default_str();
}

void add_index_flags(CLI::App* cmd, Options& o, bool required) {
  auto* vocab = cmd->add_option("--vocab", o.vocab, "vocabulary file written by 'vocab'")->check(CLI::ExistingFile);
  if (required) vocab->required();
  cmd->add_option("--meta", o.meta, "index metadata (default <vocab>.meta)")->check(CLI::ExistingFile);
}

void add_threads(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
}

void add_method(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method, "dl, pl-m or pl-f")->check(CLI::IsMember(kMethods))->capture_default_str();
  o.k_options.push_back(
      cmd->add_option("--k", o.k, "top-k paragraph pairs for pl-f")->check(CLI::PositiveNumber)->capture_default_str());
}

void add_sld_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--corpus", o.corpus, "judgments (JSONL)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--edges", o.edges, "citation edges (TSV)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--d-max", o.d_max, "largest citation distance")->capture_default_str();
  cmd->add_option("--pairs-per-d", o.pairs_per_d, "pairs sampled per distance")->capture_default_str();
  cmd->add_option("--seed", o.seed, "sampling seed")->required();
  cmd->add_option("--pairs-out", o.pairs_out, "also write the sampled pairs (CSV)");
  cmd->add_option("--out", o.out, "output CSV (default stdout)");
  add_model_flags(cmd, o);
  add_embedding_flag(cmd, o);
  add_df_flags(cmd, o);
  add_index_flags(cmd, o, false);
  add_threads(cmd, o);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Paragraph-level similarity and precedent retrieval for court judgments", "pararank");
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "print corpus statistics");
  ingest->add_option("--corpus", o.corpus, "judgments (JSONL)")->required()->check(CLI::ExistingFile);
  ingest->add_option("--edges", o.edges, "citation edges (TSV)")->check(CLI::ExistingFile);
  ingest->add_option("--out", o.out, "output CSV (default stdout)");

  auto* vocab = app.add_subcommand("vocab", "build a vocabulary and index metadata");
  vocab->add_option("--corpus", o.corpus, "judgments (JSONL)")->required()->check(CLI::ExistingFile);
  vocab->add_option("--out", o.out, "vocabulary file")->required();
  vocab->add_option("--meta", o.meta, "index metadata (default <out>.meta)");
  vocab->add_option("--random-embeddings", o.random_embeddings, "also write seeded random word vectors here");
  vocab->add_option("--dim", o.dim, "random embedding dimension")->capture_default_str();
  vocab->add_option("--seed", o.seed, "random embedding seed")->capture_default_str();
  add_model_flags(vocab, o);
  add_df_flags(vocab, o);

  auto* rank = app.add_subcommand("rank", "rank candidates for each query (TREC run)");
  rank->add_option("--queries", o.queries, "query judgments (JSONL)")->required()->check(CLI::ExistingFile);
  rank->add_option("--candidates", o.candidates, "candidate judgments (JSONL)")->required()->check(CLI::ExistingFile);
  rank->add_option("--tag", o.tag, "run tag");
  rank->add_option("--out", o.out, "output run file (default stdout)");
  add_index_flags(rank, o, true);
  add_model_flags(rank, o);
  add_embedding_flag(rank, o);
  add_method(rank, o);
  add_threads(rank, o);

  auto* eval = app.add_subcommand("eval", "evaluate a run against qrels");
  eval->add_option("--run", o.run, "TREC run file")->required()->check(CLI::ExistingFile);
  eval->add_option("--qrels", o.qrels, "TREC qrels file")->required()->check(CLI::ExistingFile);
  eval->add_option("--metrics", o.metrics, "comma-separated metrics")->capture_default_str();
  eval->add_option("--out", o.out, "output CSV (default stdout)");

  auto* analyze = app.add_subcommand("analyze-sld", "mean similarity per citation distance");
  add_sld_flags(analyze, o);
  analyze->add_option("--k", o.k, "top-k for pl-f")->check(CLI::PositiveNumber)->capture_default_str();

  auto* overlap = app.add_subcommand("overlap", "overlap of score distributions at consecutive distances");
  add_sld_flags(overlap, o);
  overlap->add_option("--bins", o.bins, "histogram bins")->capture_default_str();
  add_method(overlap, o);

  auto* sweep = app.add_subcommand("sweep-k", "retrieval quality of pl-f for several k");
  sweep->add_option("--queries", o.queries, "query judgments (JSONL)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--candidates", o.candidates, "candidate judgments (JSONL)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--qrels", o.qrels, "TREC qrels file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--k-values", o.k_values, "comma-separated k values")->capture_default_str();
  sweep->add_option("--out", o.out, "output CSV (default stdout)");
  add_index_flags(sweep, o, true);
  add_model_flags(sweep, o);
  add_embedding_flag(sweep, o);
  add_threads(sweep, o);

  if (argc <= 1) {
    err << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    // Subcommand help is raised from within parse for the active subcommand.
    if (*ingest) return cmd_ingest(o, out, err);
    if (*vocab) return cmd_vocab(o, err);
    if (*rank) return cmd_rank(o, out, err);
    if (*eval) return cmd_eval(o, out, err);
    if (*analyze) return cmd_analyze_sld(o, out, err);
    if (*overlap) return cmd_overlap(o, out, err);
    if (*sweep) return cmd_sweep_k(o, out, err);
    throw InvariantError("no subcommand selected");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace pararank::cli
