#pragma once

// Deliberately naive reference implementations. They share no code paths
// with the library beyond its public data types.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pararank/citegraph.hpp"
#include "pararank/textprep.hpp"

namespace pararank::oracle {

using Dense = std::vector<double>;

/// Dense raw-count (tfidf=false) or count*idf vector over the vocabulary.
Dense dense_vector(const std::vector<std::string>& terms, const textprep::Vocabulary& vocabulary, bool tfidf);

double cosine(const Dense& u, const Dense& v);

struct ParagraphLevel {
  std::vector<double> msp_sorted;  ///< descending
  double pl_m = 0.0;
  std::vector<double> pl_f;  ///< pl_f[k-1] for k = 1..msp_sorted.size()
  double pl_f_at(std::size_t k) const;
};

/// Full m x n scan; rows are the judgment with fewer paragraphs, ties to the
/// lexicographically smaller id.
ParagraphLevel paragraph_level(const std::string& id_a, const std::vector<Dense>& a,
                               const std::string& id_b, const std::vector<Dense>& b);

/// All-pairs hop distances, -1 when unreachable.
std::vector<std::vector<int>> floyd_warshall(const citegraph::CitationGraph& graph);

struct Judged {
  std::set<std::string> relevant;
  std::set<std::string> nonrelevant;
};

double precision_at(const std::vector<std::string>& ranking, const Judged& j, std::size_t k);
double reciprocal_rank(const std::vector<std::string>& ranking, const Judged& j);
double average_precision(const std::vector<std::string>& ranking, const Judged& j);
double recall_at(const std::vector<std::string>& ranking, const Judged& j, std::size_t k);
double bpref(const std::vector<std::string>& ranking, const Judged& j);

/// Token -> number of documents containing it, for documents given as term lists.
std::map<std::string, std::size_t> document_frequencies(const std::vector<std::vector<std::string>>& docs);

/// Tokens whose df satisfies min_ratio*N <= df <= max_ratio*N, in sorted order.
std::vector<std::string> df_filter(const std::map<std::string, std::size_t>& df, std::size_t num_docs,
                                   double min_ratio, double max_ratio);

}  // namespace pararank::oracle
