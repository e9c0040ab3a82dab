#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pararank/citegraph.hpp"
#include "pararank/corpus.hpp"
#include "pararank/evalanalysis.hpp"
#include "pararank/parasim.hpp"
#include "pararank/textprep.hpp"
#include "pararank/vecspace.hpp"

namespace pararank::experiments {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions are
/// rethrown on the calling thread.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Preprocesses and vectorizes a corpus in corpus (id) order.
std::vector<parasim::VectorizedJudgment> vectorize_corpus(
    const corpus::Corpus& corpus, const vecspace::VectorSpaceModel& model,
    const textprep::PreprocessOptions& options = {}, unsigned threads = 1);

/// Scores every candidate for every query and sorts by descending score,
/// ties by candidate id. Output order follows the query order.
std::vector<evalanalysis::ScoredRanking> rank(std::span<const parasim::VectorizedJudgment> queries,
                                              std::span<const parasim::VectorizedJudgment> candidates,
                                              const parasim::ScoringConfig& config,
                                              unsigned threads = 1);

evalanalysis::RankedList to_ranked_list(const evalanalysis::ScoredRanking& ranking);

/// Sampled pairs at one distance with their scores under every method.
struct SldStratum {
  citegraph::SldPairSample sample;
  std::vector<double> dl;
  std::vector<double> pl_m;
  std::vector<double> pl_f;
  std::vector<double> lb;
};

struct SldAnalysisConfig {
  std::uint32_t d_max = 10;
  std::size_t pairs_per_d = 1000;
  std::uint64_t seed = 0;
  std::size_t k = 3;
  unsigned threads = 1;
};

/// Samples pairs at each d in [1, d_max] and scores them. Every graph node
/// must be present in `judgments` (sorted by id).
std::vector<SldStratum> score_sld_strata(const citegraph::CitationGraph& graph,
                                         std::span<const parasim::VectorizedJudgment> judgments,
                                         const SldAnalysisConfig& config);

struct MeanSimilarityRow {
  std::uint32_t d = 0;
  std::size_t n_pairs = 0;
  std::optional<double> ms_dl, ms_plm, ms_plf, ms_lb;  ///< empty when n_pairs == 0
};

std::vector<MeanSimilarityRow> mean_similarity_table(std::span<const SldStratum> strata);

/// "d,ms_dl,ms_plm,ms_plf,ms_lb,n_pairs"
void write_mean_similarity_csv(std::ostream& out, std::span<const MeanSimilarityRow> rows);

struct OverlapRow {
  std::string pair;  ///< "D1-D2"
  std::optional<double> overlap;  ///< empty when either stratum has no pairs
};

/// Overlap between consecutive strata under one method (not LB).
std::vector<OverlapRow> overlap_table(std::span<const SldStratum> strata, parasim::Method method,
                                      std::size_t bins);

/// "pair,overlap"
void write_overlap_csv(std::ostream& out, std::span<const OverlapRow> rows);

struct SweepRow {
  std::size_t k = 0;
  double map = 0.0;
  double p10 = 0.0;
  double recall100 = 0.0;
  double mrr = 0.0;
};

/// PL-F retrieval quality for each k.
std::vector<SweepRow> sweep_k(std::span<const parasim::VectorizedJudgment> queries,
                              std::span<const parasim::VectorizedJudgment> candidates,
                              const evalanalysis::QRels& qrels, std::span<const std::size_t> k_values,
                              unsigned threads = 1);

/// "k,map,p10,recall100,mrr"
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Shortest decimal representation that round-trips.
std::string format_double(double value);

}  // namespace pararank::experiments
