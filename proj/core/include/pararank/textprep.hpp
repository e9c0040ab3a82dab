#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pararank/corpus.hpp"

namespace pararank::textprep {

/// Ordered lowercase tokens with no embedded whitespace.
struct TokenStream {
  std::vector<std::string> tokens;

  friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

struct PreprocessOptions {
  /// Statute words whose numbered references collapse into one token,
  /// e.g. "section 170 (2) (a)" -> "section1702a". Lowercase.
  std::vector<std::string> law_words{"section"};
};

struct LawExtraction {
  std::string text;                 ///< input with each reference replaced by its token(s)
  std::vector<std::string> tokens;  ///< collapsed tokens in occurrence order
};

/// Lowercases ASCII, turns tabs/newlines into spaces, drops digits and ASCII
/// punctuation, collapses runs of spaces and trims. Bytes >= 0x80 are kept
/// as letters.
std::string clean_text(std::string_view raw);

/// Rewrites statute references into single tokens. A reference is a law word
/// (optionally plural) followed by a number, optional parenthesised
/// alphanumeric qualifiers, and optional ", / and / or / &" continuations
/// each producing another token.
LawExtraction extract_law_tokens(std::string_view raw, std::span<const std::string> law_words);
LawExtraction extract_law_tokens(std::string_view raw);

/// True for collapsed statute tokens (any token containing a digit; ordinary
/// words lose their digits during cleaning).
bool is_law_token(std::string_view token) noexcept;

/// Porter stemmer (English). Law tokens pass through unchanged.
std::string stem(std::string_view token);

/// Law-token extraction, cleaning, whitespace tokenisation and stemming.
TokenStream preprocess(std::string_view raw, const PreprocessOptions& options = {});

/// Paragraph-wise token streams for one judgment.
struct PreprocessedJudgment {
  std::string id;
  std::vector<TokenStream> paragraphs;

  /// Concatenation of all paragraph streams, in order.
  [[nodiscard]] TokenStream document() const;
};

PreprocessedJudgment preprocess_judgment(const corpus::Judgment& judgment,
                                         const PreprocessOptions& options = {});

/// Preprocesses every judgment (in corpus order) using up to `threads` workers.
std::vector<PreprocessedJudgment> preprocess_corpus(const corpus::Corpus& corpus,
                                                    const PreprocessOptions& options = {},
                                                    unsigned threads = 1);

/// Appends "a_b" bigram tokens after the unigrams when ngram_order == 2.
std::vector<std::string> ngram_terms(const TokenStream& stream, int ngram_order);

/// Token -> contiguous index in lexicographic order, with document frequencies.
class Vocabulary {
 public:
  struct Entry {
    std::string token;
    std::uint32_t doc_freq = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  Vocabulary() = default;
  /// Entries must be strictly increasing by token with doc_freq in [1, num_docs].
  Vocabulary(std::vector<Entry> entries, std::size_t num_docs, double min_df_ratio,
             double max_df_ratio);

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] std::size_t num_docs() const noexcept { return num_docs_; }
  [[nodiscard]] double min_df_ratio() const noexcept { return min_df_ratio_; }
  [[nodiscard]] double max_df_ratio() const noexcept { return max_df_ratio_; }

  [[nodiscard]] std::optional<std::uint32_t> index_of(std::string_view token) const;
  [[nodiscard]] const std::string& token(std::uint32_t index) const { return entries_.at(index).token; }
  [[nodiscard]] std::uint32_t doc_freq(std::uint32_t index) const { return entries_.at(index).doc_freq; }
  [[nodiscard]] std::span<const Entry> entries() const noexcept { return entries_; }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<Entry> entries_;
  std::size_t num_docs_ = 0;
  double min_df_ratio_ = 0.0;
  double max_df_ratio_ = 1.0;
};

struct VocabularyOptions {
  double min_df_ratio = 0.0001;
  double max_df_ratio = 0.9;
  int ngram_order = 1;
};

/// Inclusive document-frequency bounds [ceil(min*N), floor(max*N)]; a token
/// is dropped when it appears in more than max or fewer than min of the docs.
struct DfBounds {
  std::size_t min_df = 0;
  std::size_t max_df = 0;
};
DfBounds df_bounds(std::size_t num_docs, double min_df_ratio, double max_df_ratio);

/// Document frequency counts once per judgment; terms are stemmed unigrams
/// (plus bigrams when ngram_order == 2) of the whole judgment stream.
Vocabulary build_vocabulary(std::span<const PreprocessedJudgment> judgments,
                            const VocabularyOptions& options = {});
Vocabulary build_vocabulary(const corpus::Corpus& corpus, const VocabularyOptions& options = {},
                            const PreprocessOptions& preprocess_options = {});

/// "#num_docs=N min_df=x max_df=y" then "token<TAB>index<TAB>doc_freq" lines.
void write_vocabulary(std::ostream& out, const Vocabulary& vocabulary);
Vocabulary read_vocabulary(std::istream& in);

/// FNV-1a over the serialized vocabulary; stable across platforms.
std::uint64_t vocabulary_hash(const Vocabulary& vocabulary);

}  // namespace pararank::textprep
