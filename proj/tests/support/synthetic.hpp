#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pararank/citegraph.hpp"
#include "pararank/corpus.hpp"

namespace pararank::testkit {

/// Pronounceable word for an index. The shape (CV)(CV)C with vowels a/i/o/u
/// and a final b/d/f/g/k/m/p leaves Porter stemming a no-op, so synthetic
/// vocabularies survive preprocessing one-to-one.
std::string synthetic_word(std::size_t index);

struct PlantedCorpusOptions {
  std::size_t num_docs = 200;
  std::size_t num_topics = 10;
  std::size_t general_words = 600;
  std::size_t topic_words = 60;
  std::size_t min_paragraphs = 4;
  std::size_t max_paragraphs = 7;
  std::size_t min_words = 25;
  std::size_t max_words = 50;
  double topic_share = 0.5;  ///< probability a word comes from the topic vocabulary
  double copy_keep = 0.7;    ///< fraction of words kept when a cited paragraph is reused
  std::size_t extra_edges_per_topic = 2;
  std::uint64_t seed = 1;
};

/// Topic-clustered judgments with citation edges only inside topics. Each
/// topic's edges form a random recursive tree plus a few extra links, and a
/// citing judgment reuses a noisy copy of one paragraph of the cited one.
struct PlantedCorpus {
  corpus::Corpus corpus;
  citegraph::CitationGraph graph;
  std::vector<citegraph::IdPair> edges;
};

PlantedCorpus planted_topic_corpus(const PlantedCorpusOptions& options);

/// Judgments with 1..max_paragraphs paragraphs of random words drawn from a
/// small vocabulary, so paragraphs overlap often.
corpus::Corpus random_corpus(std::size_t num_docs, std::size_t vocabulary_size,
                             std::size_t max_paragraphs, std::uint64_t seed);

/// G(n, p) over ids "N000".."N<n-1>" plus isolated-node-free guarantee is not
/// given: nodes without edges are simply absent from the graph.
citegraph::CitationGraph random_graph(std::size_t nodes, double edge_probability, std::uint64_t seed);

}  // namespace pararank::testkit
