#include "pararank/evalanalysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "pararank/errors.hpp"
#include "pararank/experiments.hpp"
#include "text_util.hpp"

namespace pararank::evalanalysis {

double mean_similarity(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("mean_similarity: empty distribution");
  return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double mean_similarity(const SimilarityDistribution& distribution) {
  return mean_similarity(distribution.samples);
}

double histogram_overlap(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("histogram_overlap: bin count mismatch");
  double intersection = 0.0;
  double mass_p = 0.0;
  double mass_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    intersection += std::min(p[i], q[i]);
    mass_p += p[i];
    mass_q += q[i];
  }
  if (mass_p <= 0.0 || mass_q <= 0.0) throw std::invalid_argument("histogram_overlap: zero mass");
  return intersection / (mass_p * mass_q);
}

double overlap(const SimilarityDistribution& first, const SimilarityDistribution& second,
               std::size_t bins) {
  if (first.samples.empty() || second.samples.empty()) {
    throw std::invalid_argument("overlap: empty distribution");
  }
  if (bins < 2) throw std::invalid_argument("overlap: bins must be >= 2");
  for (const auto* d : {&first, &second}) {
    for (const double x : d->samples) {
      if (!std::isfinite(x)) throw std::invalid_argument("overlap: non-finite sample");
    }
  }

  const auto [min1, max1] = std::minmax_element(first.samples.begin(), first.samples.end());
  const auto [min2, max2] = std::minmax_element(second.samples.begin(), second.samples.end());
  const double lo = std::min(*min1, *min2);
  const double hi = std::max(*max1, *max2);
  if (lo == hi) return 1.0;

  const double width = (hi - lo) / static_cast<double>(bins);
  auto histogram = [&](const std::vector<double>& samples) {
    std::vector<std::uint64_t> counts(bins, 0);
    for (const double x : samples) {
      const auto bin = static_cast<std::size_t>((x - lo) / width);
      ++counts[std::min(bin, bins - 1)];
    }
    return counts;
  };
  // Both histograms normalized to mass 1, so the denominator of the
  // intersection is 1. Working in integer counts scaled by the other sample
  // size keeps identical inputs at exactly 1 and disjoint ones at exactly 0.
  const auto c1 = histogram(first.samples);
  const auto c2 = histogram(second.samples);
  const std::uint64_t n1 = first.samples.size();
  const std::uint64_t n2 = second.samples.size();
  std::uint64_t intersection = 0;
  for (std::size_t i = 0; i < bins; ++i) intersection += std::min(c1[i] * n2, c2[i] * n1);
  return static_cast<double>(intersection) / (static_cast<double>(n1) * static_cast<double>(n2));
}

void QRels::add(const std::string& query_id, const std::string& doc_id, int relevance) {
  auto& q = queries_[query_id];
  if (relevance > 0) {
    q.nonrelevant.erase(doc_id);
    q.relevant.insert(doc_id);
  } else {
    q.relevant.erase(doc_id);
    q.nonrelevant.insert(doc_id);
  }
}

const QueryJudgments* QRels::find(std::string_view query_id) const {
  const auto it = queries_.find(query_id);
  return it == queries_.end() ? nullptr : &it->second;
}

namespace {

std::size_t relevant_in_top(const RankedList& run, const QueryJudgments& qrels, std::size_t k) {
  const std::size_t depth = std::min(k, run.ranking.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += qrels.relevant.contains(run.ranking[i]) ? 1 : 0;
  return hits;
}

}  // namespace

double precision_at_k(const RankedList& run, const QueryJudgments& qrels, std::size_t k) {
  if (k == 0) throw std::invalid_argument("precision_at_k: k must be positive");
  return static_cast<double>(relevant_in_top(run, qrels, k)) / static_cast<double>(k);
}

double reciprocal_rank(const RankedList& run, const QueryJudgments& qrels) {
  for (std::size_t i = 0; i < run.ranking.size(); ++i) {
    if (qrels.relevant.contains(run.ranking[i])) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

std::optional<double> average_precision(const RankedList& run, const QueryJudgments& qrels) {
  if (qrels.relevant.empty()) return std::nullopt;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < run.ranking.size(); ++i) {
    if (qrels.relevant.contains(run.ranking[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(qrels.relevant.size());
}

std::optional<double> recall_at_k(const RankedList& run, const QueryJudgments& qrels, std::size_t k) {
  if (k == 0) throw std::invalid_argument("recall_at_k: k must be positive");
  if (qrels.relevant.empty()) return std::nullopt;
  return static_cast<double>(relevant_in_top(run, qrels, k)) /
         static_cast<double>(qrels.relevant.size());
}

std::optional<double> bpref(const RankedList& run, const QueryJudgments& qrels) {
  if (qrels.relevant.empty()) return std::nullopt;
  const double num_rel = static_cast<double>(qrels.relevant.size());
  const double denominator = std::min(static_cast<double>(qrels.nonrelevant.size()), num_rel);
  std::size_t nonrel_above = 0;
  double sum = 0.0;
  for (const auto& doc : run.ranking) {
    if (qrels.relevant.contains(doc)) {
      if (nonrel_above > 0) {
        sum += 1.0 - std::min(static_cast<double>(nonrel_above), num_rel) / denominator;
      } else {
        sum += 1.0;
      }
    } else if (qrels.nonrelevant.contains(doc)) {
      ++nonrel_above;
    }
  }
  return sum / num_rel;
}

double aggregate(std::span<const double> per_query) {
  if (per_query.empty()) throw std::invalid_argument("aggregate: no queries");
  return std::accumulate(per_query.begin(), per_query.end(), 0.0) / static_cast<double>(per_query.size());
}

std::string Metric::name() const {
  switch (kind) {
    case MetricKind::AveragePrecision: return "map";
    case MetricKind::ReciprocalRank: return "mrr";
    case MetricKind::Bpref: return "bpref";
    case MetricKind::PrecisionAt: return "p" + std::to_string(k);
    case MetricKind::RecallAt: return "recall" + std::to_string(k);
  }
  return "unknown";
}

Metric Metric::parse(std::string_view name) {
  std::string lower;
  for (const char c : name) {
    if (c != '@') lower.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
  }
  if (lower == "map") return {MetricKind::AveragePrecision, 0};
  if (lower == "mrr") return {MetricKind::ReciprocalRank, 0};
  if (lower == "bpref") return {MetricKind::Bpref, 0};
  auto with_depth = [&](std::string_view prefix, MetricKind kind) -> std::optional<Metric> {
    if (!std::string_view(lower).starts_with(prefix)) return std::nullopt;
    const std::string_view digits = std::string_view(lower).substr(prefix.size());
    std::size_t k = 0;
    const auto r = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (digits.empty() || r.ec != std::errc{} || r.ptr != digits.data() + digits.size() || k == 0) {
      return std::nullopt;
    }
    return Metric{kind, k};
  };
  if (auto m = with_depth("recall", MetricKind::RecallAt)) return *m;
  if (auto m = with_depth("p", MetricKind::PrecisionAt)) return *m;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

std::vector<Metric> default_metrics() {
  return {{MetricKind::AveragePrecision, 0}, {MetricKind::ReciprocalRank, 0},
          {MetricKind::PrecisionAt, 10}, {MetricKind::RecallAt, 100}, {MetricKind::Bpref, 0}};
}

namespace {

double metric_value(const Metric& metric, const RankedList& run, const QueryJudgments& qrels) {
  switch (metric.kind) {
    case MetricKind::AveragePrecision: return *average_precision(run, qrels);
    case MetricKind::ReciprocalRank: return reciprocal_rank(run, qrels);
    case MetricKind::PrecisionAt: return precision_at_k(run, qrels, metric.k);
    case MetricKind::RecallAt: return *recall_at_k(run, qrels, metric.k);
    case MetricKind::Bpref: return *bpref(run, qrels);
  }
  throw InvariantError("unhandled metric kind");
}

}  // namespace

RunEvaluation evaluate_run(std::span<const RankedList> runs, const QRels& qrels,
                           std::span<const Metric> metrics) {
  if (metrics.empty()) throw std::invalid_argument("evaluate_run: no metrics requested");
  RunEvaluation evaluation;
  evaluation.metrics.assign(metrics.begin(), metrics.end());
  for (const auto& run : runs) {
    const QueryJudgments* judgments = qrels.find(run.query_id);
    if (judgments == nullptr) {
      evaluation.unknown_queries.push_back(run.query_id);
      continue;
    }
    if (judgments->relevant.empty()) {
      evaluation.no_relevant_queries.push_back(run.query_id);
      continue;
    }
    QueryEvaluation q;
    q.query_id = run.query_id;
    for (const auto& metric : metrics) q.values.push_back(metric_value(metric, run, *judgments));
    evaluation.per_query.push_back(std::move(q));
  }
  if (evaluation.per_query.empty()) throw DataError("no run query has relevance judgments");
  std::sort(evaluation.per_query.begin(), evaluation.per_query.end(),
            [](const QueryEvaluation& a, const QueryEvaluation& b) { return a.query_id < b.query_id; });
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    std::vector<double> column;
    column.reserve(evaluation.per_query.size());
    for (const auto& q : evaluation.per_query) column.push_back(q.values[m]);
    evaluation.aggregate.push_back(aggregate(column));
  }
  return evaluation;
}

void write_evaluation_csv(std::ostream& out, const RunEvaluation& evaluation) {
  out << "query";
  for (const auto& m : evaluation.metrics) out << ',' << m.name();
  out << '\n';
  for (const auto& q : evaluation.per_query) {
    out << q.query_id;
    for (const double v : q.values) out << ',' << experiments::format_double(v);
    out << '\n';
  }
  out << "all";
  for (const double v : evaluation.aggregate) out << ',' << experiments::format_double(v);
  out << '\n';
}

void write_run(std::ostream& out, std::span<const ScoredRanking> rankings, std::string_view tag) {
  char score[64];
  for (const auto& ranking : rankings) {
    for (std::size_t i = 0; i < ranking.candidates.size(); ++i) {
      std::snprintf(score, sizeof score, "%.6f", ranking.candidates[i].score);
      out << ranking.query_id << " Q0 " << ranking.candidates[i].id << ' ' << (i + 1) << ' ' << score
          << ' ' << tag << '\n';
    }
  }
}

std::vector<RankedList> read_run(std::istream& in) {
  struct Row {
    long rank;
    std::size_t order;
    std::string doc;
  };
  std::vector<std::string> query_order;
  std::unordered_map<std::string, std::vector<Row>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto fields = detail::split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 6) {
      throw DataError("run line " + std::to_string(line_number) + ": expected 6 fields");
    }
    long rank = 0;
    const auto r = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), rank);
    if (r.ec != std::errc{} || r.ptr != fields[3].data() + fields[3].size()) {
      throw DataError("run line " + std::to_string(line_number) + ": bad rank");
    }
    const std::string query(fields[0]);
    auto [it, inserted] = rows.try_emplace(query);
    if (inserted) query_order.push_back(query);
    it->second.push_back({rank, line_number, std::string(fields[2])});
  }

  std::vector<RankedList> runs;
  runs.reserve(query_order.size());
  for (const auto& query : query_order) {
    auto& list = rows[query];
    std::stable_sort(list.begin(), list.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
    RankedList run;
    run.query_id = query;
    std::unordered_set<std::string> seen;
    for (auto& row : list) {
      if (seen.insert(row.doc).second) run.ranking.push_back(std::move(row.doc));
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

QRels read_qrels(std::istream& in) {
  QRels qrels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto fields = detail::split_whitespace(line);
    if (fields.empty()) continue;
    int relevance = 0;
    bool ok = fields.size() == 4;
    if (ok) {
      const auto r = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), relevance);
      ok = r.ec == std::errc{} && r.ptr == fields[3].data() + fields[3].size();
    }
    if (!ok) {
      throw DataError("qrels line " + std::to_string(line_number) + ": expected \"qid 0 docid relevance\"");
    }
    qrels.add(std::string(fields[0]), std::string(fields[2]), relevance);
  }
  return qrels;
}

}  // namespace pararank::evalanalysis
