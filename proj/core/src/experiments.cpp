#include "pararank/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "pararank/errors.hpp"

namespace pararank::experiments {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<parasim::VectorizedJudgment> vectorize_corpus(const corpus::Corpus& corpus,
                                                          const vecspace::VectorSpaceModel& model,
                                                          const textprep::PreprocessOptions& options,
                                                          unsigned threads) {
  std::vector<parasim::VectorizedJudgment> out(corpus.size());
  const auto judgments = corpus.judgments();
  parallel_for(judgments.size(), threads, [&](std::size_t i) {
    out[i] = parasim::vectorize_judgment(textprep::preprocess_judgment(judgments[i], options), model);
  });
  return out;
}

namespace {

evalanalysis::ScoredRanking sorted_ranking(const std::string& query_id,
                                           std::span<const parasim::VectorizedJudgment> candidates,
                                           std::span<const double> scores) {
  evalanalysis::ScoredRanking ranking;
  ranking.query_id = query_id;
  ranking.candidates.reserve(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) ranking.candidates.push_back({candidates[c].id, scores[c]});
  std::sort(ranking.candidates.begin(), ranking.candidates.end(),
            [](const evalanalysis::ScoredCandidate& a, const evalanalysis::ScoredCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.id < b.id;
            });
  return ranking;
}

}  // namespace

std::vector<evalanalysis::ScoredRanking> rank(std::span<const parasim::VectorizedJudgment> queries,
                                              std::span<const parasim::VectorizedJudgment> candidates,
                                              const parasim::ScoringConfig& config, unsigned threads) {
  if (config.method == parasim::Method::PlF && config.k == 0) {
    throw std::invalid_argument("PL-F requires k >= 1");
  }
  const std::size_t nc = candidates.size();
  std::vector<double> scores(queries.size() * nc);
  parallel_for(scores.size(), threads, [&](std::size_t i) {
    scores[i] = parasim::score(queries[i / nc], candidates[i % nc], config);
  });

  std::vector<evalanalysis::ScoredRanking> out;
  out.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    out.push_back(sorted_ranking(queries[q].id, candidates, std::span<const double>(scores).subspan(q * nc, nc)));
  }
  return out;
}

evalanalysis::RankedList to_ranked_list(const evalanalysis::ScoredRanking& ranking) {
  evalanalysis::RankedList list;
  list.query_id = ranking.query_id;
  list.ranking.reserve(ranking.candidates.size());
  for (const auto& c : ranking.candidates) list.ranking.push_back(c.id);
  return list;
}

namespace {

const parasim::VectorizedJudgment& lookup(std::span<const parasim::VectorizedJudgment> judgments,
                                          const std::string& id) {
  const auto it = std::lower_bound(judgments.begin(), judgments.end(), id,
                                   [](const parasim::VectorizedJudgment& j, const std::string& key) { return j.id < key; });
  if (it == judgments.end() || it->id != id) {
    throw DataError("citation graph node '" + id + "' has no judgment in the corpus");
  }
  return *it;
}

}  // namespace

std::vector<SldStratum> score_sld_strata(const citegraph::CitationGraph& graph,
                                         std::span<const parasim::VectorizedJudgment> judgments,
                                         const SldAnalysisConfig& config) {
  if (config.d_max == 0) throw std::invalid_argument("d_max must be >= 1");
  if (config.k == 0) throw std::invalid_argument("k must be >= 1");
  for (const auto& id : graph.node_ids()) lookup(judgments, id);

  std::vector<SldStratum> strata;
  strata.reserve(config.d_max);
  for (std::uint32_t d = 1; d <= config.d_max; ++d) {
    SldStratum stratum;
    stratum.sample = citegraph::sample_pairs_at_sld(graph, d, config.pairs_per_d, config.seed);
    const std::size_t n = stratum.sample.pairs.size();
    stratum.dl.resize(n);
    stratum.pl_m.resize(n);
    stratum.pl_f.resize(n);
    stratum.lb.assign(n, citegraph::lb_sim(d));
    parallel_for(n, config.threads, [&](std::size_t i) {
      const auto& a = lookup(judgments, stratum.sample.pairs[i].first);
      const auto& b = lookup(judgments, stratum.sample.pairs[i].second);
      const auto values = parasim::msp(parasim::para_sim_matrix(a, b));
      stratum.dl[i] = parasim::dl_sim(a, b);
      stratum.pl_m[i] = parasim::pl_m(values);
      stratum.pl_f[i] = parasim::pl_f(values, config.k);
    });
    strata.push_back(std::move(stratum));
  }
  return strata;
}

std::vector<MeanSimilarityRow> mean_similarity_table(std::span<const SldStratum> strata) {
  std::vector<MeanSimilarityRow> rows;
  for (const auto& s : strata) {
    MeanSimilarityRow row;
    row.d = s.sample.sld;
    row.n_pairs = s.sample.pairs.size();
    if (row.n_pairs > 0) {
      row.ms_dl = evalanalysis::mean_similarity(s.dl);
      row.ms_plm = evalanalysis::mean_similarity(s.pl_m);
      row.ms_plf = evalanalysis::mean_similarity(s.pl_f);
      row.ms_lb = evalanalysis::mean_similarity(s.lb);
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

}  // namespace

void write_mean_similarity_csv(std::ostream& out, std::span<const MeanSimilarityRow> rows) {
  out << "d,ms_dl,ms_plm,ms_plf,ms_lb,n_pairs\n";
  for (const auto& r : rows) {
    out << r.d << ',' << cell(r.ms_dl) << ',' << cell(r.ms_plm) << ',' << cell(r.ms_plf) << ','
        << cell(r.ms_lb) << ',' << r.n_pairs << '\n';
  }
}

std::vector<OverlapRow> overlap_table(std::span<const SldStratum> strata, parasim::Method method,
                                      std::size_t bins) {
  auto scores = [method](const SldStratum& s) -> const std::vector<double>& {
    switch (method) {
      case parasim::Method::Dl: return s.dl;
      case parasim::Method::PlM: return s.pl_m;
      case parasim::Method::PlF: return s.pl_f;
    }
    throw InvariantError("unhandled method");
  };
  std::vector<OverlapRow> rows;
  for (std::size_t i = 0; i + 1 < strata.size(); ++i) {
    const auto& a = strata[i];
    const auto& b = strata[i + 1];
    OverlapRow row;
    row.pair = "D" + std::to_string(a.sample.sld) + "-D" + std::to_string(b.sample.sld);
    if (!scores(a).empty() && !scores(b).empty()) {
      row.overlap = evalanalysis::overlap({"D" + std::to_string(a.sample.sld), scores(a)},
                                          {"D" + std::to_string(b.sample.sld), scores(b)}, bins);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_overlap_csv(std::ostream& out, std::span<const OverlapRow> rows) {
  out << "pair,overlap\n";
  for (const auto& r : rows) out << r.pair << ',' << cell(r.overlap) << '\n';
}

std::vector<SweepRow> sweep_k(std::span<const parasim::VectorizedJudgment> queries,
                              std::span<const parasim::VectorizedJudgment> candidates,
                              const evalanalysis::QRels& qrels, std::span<const std::size_t> k_values,
                              unsigned threads) {
  for (const auto k : k_values) {
    if (k == 0) throw std::invalid_argument("sweep-k: k values must be >= 1");
  }
  const std::size_t nc = candidates.size();
  // MSP lists are computed once and re-aggregated for every k.
  std::vector<parasim::MspValues> msps(queries.size() * nc);
  parallel_for(msps.size(), threads, [&](std::size_t i) {
    msps[i] = parasim::msp(parasim::para_sim_matrix(queries[i / nc], candidates[i % nc]));
  });

  using evalanalysis::Metric;
  using evalanalysis::MetricKind;
  const std::vector<Metric> metrics{{MetricKind::AveragePrecision, 0},
                                    {MetricKind::PrecisionAt, 10},
                                    {MetricKind::RecallAt, 100},
                                    {MetricKind::ReciprocalRank, 0}};
  std::vector<SweepRow> rows;
  std::vector<double> scores(nc);
  for (const auto k : k_values) {
    std::vector<evalanalysis::RankedList> runs;
    runs.reserve(queries.size());
    for (std::size_t q = 0; q < queries.size(); ++q) {
      for (std::size_t c = 0; c < nc; ++c) scores[c] = parasim::pl_f(msps[q * nc + c], k);
      runs.push_back(to_ranked_list(sorted_ranking(queries[q].id, candidates, scores)));
    }
    const auto evaluation = evalanalysis::evaluate_run(runs, qrels, metrics);
    rows.push_back({k, evaluation.aggregate[0], evaluation.aggregate[1], evaluation.aggregate[2],
                    evaluation.aggregate[3]});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "k,map,p10,recall100,mrr\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_double(r.map) << ',' << format_double(r.p10) << ','
        << format_double(r.recall100) << ',' << format_double(r.mrr) << '\n';
  }
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

}  // namespace pararank::experiments
