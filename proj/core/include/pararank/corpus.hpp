#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pararank::citegraph {
class CitationGraph;
}

namespace pararank::corpus {

/// A court decision as an ordered list of paragraphs.
struct Judgment {
  std::string id;
  std::vector<std::string> paragraphs;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

/// Validated, immutable collection of judgments, iterated in id order.
class Corpus {
 public:
  Corpus() = default;

  /// Validates every judgment and sorts by id. Throws DataError on an
  /// empty id, an empty paragraph list, a blank paragraph or a duplicate id.
  static Corpus from_judgments(std::vector<Judgment> judgments);

  [[nodiscard]] std::size_t size() const noexcept { return judgments_.size(); }
  [[nodiscard]] bool empty() const noexcept { return judgments_.empty(); }

  /// nullptr when the id is unknown.
  [[nodiscard]] const Judgment* find(std::string_view id) const;
  /// Throws DataError when the id is unknown.
  [[nodiscard]] const Judgment& at(std::string_view id) const;

  [[nodiscard]] std::span<const Judgment> judgments() const noexcept { return judgments_; }
  [[nodiscard]] auto begin() const noexcept { return judgments_.begin(); }
  [[nodiscard]] auto end() const noexcept { return judgments_.end(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Judgment> judgments_;
};

/// Corpus-level summary in the shape of a dataset statistics table.
struct CorpusStats {
  std::size_t num_judgments = 0;
  double avg_citations = 0.0;
  double avg_paragraphs = 0.0;
  double avg_words_per_paragraph = 0.0;
};

/// Splits on runs of blank (whitespace-only) lines, trims each piece and
/// drops empty pieces.
std::vector<std::string> split_paragraphs(std::string_view raw_text);

/// Number of whitespace-separated words in raw text.
std::size_t count_words(std::string_view text);

/// Reads the line-delimited document format: one JSON object per line with
/// "id" and exactly one of "text" or "paragraphs". Blank lines are skipped.
/// Errors name the offending line number.
Corpus parse_corpus(std::istream& in);
Corpus ingest_corpus(const std::filesystem::path& path);

/// Writes the corpus in the same format, using the "paragraphs" field.
void write_corpus(std::ostream& out, const Corpus& corpus);

/// avg_citations is 2|E|/|J| on the undirected graph. Every graph node must
/// be a corpus id; judgments absent from the graph count with degree 0.
CorpusStats corpus_stats(const Corpus& corpus, const citegraph::CitationGraph& graph);

}  // namespace pararank::corpus
