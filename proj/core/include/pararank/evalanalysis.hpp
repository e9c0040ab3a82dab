#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pararank::evalanalysis {

/// Similarity scores of the judgment pairs at one citation distance.
struct SimilarityDistribution {
  std::string label;
  std::vector<double> samples;
};

/// Arithmetic mean. Throws std::invalid_argument when empty.
double mean_similarity(std::span<const double> samples);
double mean_similarity(const SimilarityDistribution& distribution);

/// Intersection over product of masses: sum_i min(p_i, q_i) / (sum p * sum q).
double histogram_overlap(std::span<const double> p, std::span<const double> q);

/// Overlap of two score distributions estimated with `bins` equal-width
/// histograms over their shared range, each normalised to mass 1.
/// When every sample in both sets is the same value the result is 1.
double overlap(const SimilarityDistribution& first, const SimilarityDistribution& second,
               std::size_t bins = 50);

struct RankedList {
  std::string query_id;
  std::vector<std::string> ranking;  ///< best first, no duplicates
};

/// Binary relevance for one query.
struct QueryJudgments {
  std::set<std::string, std::less<>> relevant;
  std::set<std::string, std::less<>> nonrelevant;  ///< explicit 0 labels
};

class QRels {
 public:
  void add(const std::string& query_id, const std::string& doc_id, int relevance);

  [[nodiscard]] const QueryJudgments* find(std::string_view query_id) const;
  [[nodiscard]] const std::map<std::string, QueryJudgments, std::less<>>& queries() const noexcept {
    return queries_;
  }

 private:
  std::map<std::string, QueryJudgments, std::less<>> queries_;
};

/// Relevant items in the top k over a fixed denominator k.
double precision_at_k(const RankedList& run, const QueryJudgments& qrels, std::size_t k);
/// 1 / rank of the first relevant item, 0 when none is retrieved.
double reciprocal_rank(const RankedList& run, const QueryJudgments& qrels);

// The following are undefined (nullopt) for a query without relevant items.

/// Sum of precision at each retrieved relevant rank, over |R|.
std::optional<double> average_precision(const RankedList& run, const QueryJudgments& qrels);
std::optional<double> recall_at_k(const RankedList& run, const QueryJudgments& qrels,
                                  std::size_t k);
/// TREC bpref against the judged non-relevant set.
std::optional<double> bpref(const RankedList& run, const QueryJudgments& qrels);

/// Unweighted mean over queries. Throws std::invalid_argument when empty.
double aggregate(std::span<const double> per_query);

enum class MetricKind { AveragePrecision, ReciprocalRank, PrecisionAt, RecallAt, Bpref };

struct Metric {
  MetricKind kind = MetricKind::AveragePrecision;
  std::size_t k = 0;

  /// map, mrr, bpref, p<k>, recall<k>
  [[nodiscard]] std::string name() const;
  static Metric parse(std::string_view name);

  friend bool operator==(const Metric&, const Metric&) = default;
};

/// map, mrr, p10, recall100, bpref
std::vector<Metric> default_metrics();

struct QueryEvaluation {
  std::string query_id;
  std::vector<double> values;  ///< parallel to RunEvaluation::metrics
};

struct RunEvaluation {
  std::vector<Metric> metrics;
  std::vector<QueryEvaluation> per_query;  ///< sorted by query id
  std::vector<double> aggregate;
  std::vector<std::string> unknown_queries;      ///< in the run, absent from qrels
  std::vector<std::string> no_relevant_queries;  ///< in qrels without relevant items
};

/// Evaluates every run query that has at least one relevant document.
/// Throws DataError when no query can be evaluated.
RunEvaluation evaluate_run(std::span<const RankedList> runs, const QRels& qrels,
                           std::span<const Metric> metrics);

/// CSV: "query,<metric>..." rows then an "all" aggregate row.
void write_evaluation_csv(std::ostream& out, const RunEvaluation& evaluation);

struct ScoredCandidate {
  std::string id;
  double score = 0.0;
};

struct ScoredRanking {
  std::string query_id;
  std::vector<ScoredCandidate> candidates;  ///< best first
};

/// TREC run format "qid Q0 docid rank score tag", scores with 6 decimals.
void write_run(std::ostream& out, std::span<const ScoredRanking> rankings, std::string_view tag);

/// Groups by query (in order of first appearance) and orders each list by the
/// rank column. Repeated documents keep their first occurrence.
std::vector<RankedList> read_run(std::istream& in);

/// TREC qrels "qid 0 docid relevance"; relevance > 0 is relevant.
QRels read_qrels(std::istream& in);

}  // namespace pararank::evalanalysis
