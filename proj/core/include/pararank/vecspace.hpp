#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pararank/textprep.hpp"

namespace pararank::vecspace {

struct SparseEntry {
  std::uint32_t index = 0;
  double weight = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Non-negative weights over vocabulary indices [0, dimension).
class SparseVector {
 public:
  SparseVector() = default;
  /// Entries must have strictly increasing indices below `dimension`; zero
  /// weights are dropped. Throws std::invalid_argument otherwise.
  SparseVector(std::size_t dimension, std::vector<SparseEntry> entries);

  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] std::span<const SparseEntry> entries() const noexcept { return entries_; }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] double weight(std::uint32_t index) const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<SparseEntry> entries_;
};

struct DenseVector {
  std::vector<double> components;

  [[nodiscard]] std::size_t dimension() const noexcept { return components.size(); }
  friend bool operator==(const DenseVector&, const DenseVector&) = default;
};

using Vector = std::variant<SparseVector, DenseVector>;

/// Word vectors keyed by vocabulary index.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t vocabulary_size, std::size_t dimension);

  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] std::size_t vocabulary_size() const noexcept { return row_of_.size(); }
  [[nodiscard]] bool contains(std::uint32_t index) const noexcept;
  /// Empty span when the token has no vector.
  [[nodiscard]] std::span<const double> vector(std::uint32_t index) const noexcept;

  void set(std::uint32_t index, std::span<const double> values);

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  std::size_t dimension_ = 0;
  std::size_t count_ = 0;
  std::vector<std::int64_t> row_of_;  // per vocabulary index, -1 when absent
  std::vector<double> data_;
};

enum class ModelKind { Bow, Tfidf, W2vSum, W2vIdf };

/// CLI spelling: bow, tfidf, w2v, w2v-idf.
std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);

/// ln((1 + N) / (1 + df)) + 1
double idf(std::size_t num_docs, std::uint32_t doc_freq);
inline constexpr std::string_view kIdfFormulaTag = "ln((1+N)/(1+df))+1";

/// One vocabulary plus weighting scheme; shared by the paragraph and document
/// granularities so both are compared in the same space.
class VectorSpaceModel {
 public:
  static VectorSpaceModel bow(textprep::Vocabulary vocabulary, int ngram_order = 1);
  static VectorSpaceModel tfidf(textprep::Vocabulary vocabulary, int ngram_order = 1);
  static VectorSpaceModel w2v_sum(textprep::Vocabulary vocabulary, EmbeddingTable embeddings);
  static VectorSpaceModel w2v_idf(textprep::Vocabulary vocabulary, EmbeddingTable embeddings);

  [[nodiscard]] ModelKind kind() const noexcept { return kind_; }
  [[nodiscard]] int ngram_order() const noexcept { return ngram_order_; }
  [[nodiscard]] const textprep::Vocabulary& vocabulary() const noexcept { return *vocabulary_; }
  /// nullptr for BOW / TF-IDF.
  [[nodiscard]] const EmbeddingTable* embeddings() const noexcept { return embeddings_.get(); }
  [[nodiscard]] std::span<const double> idf_weights() const noexcept { return idf_; }

 private:
  VectorSpaceModel(ModelKind kind, textprep::Vocabulary vocabulary, int ngram_order,
                   std::shared_ptr<const EmbeddingTable> embeddings);

  ModelKind kind_ = ModelKind::Bow;
  int ngram_order_ = 1;
  std::shared_ptr<const textprep::Vocabulary> vocabulary_;
  std::shared_ptr<const EmbeddingTable> embeddings_;
  std::vector<double> idf_;
};

/// Raw in-vocabulary term counts (unigrams, plus bigrams at order 2).
SparseVector bow_vector(const textprep::TokenStream& tokens, const VectorSpaceModel& model);
/// Raw count times idf; no length normalisation.
SparseVector tfidf_vector(const textprep::TokenStream& tokens, const VectorSpaceModel& model);
/// Sum of word vectors with multiplicity; zero vector when nothing is in the table.
DenseVector embed_sum(const textprep::TokenStream& tokens, const VectorSpaceModel& model);
/// Sum of idf(t) * e(t) with multiplicity.
DenseVector embed_idf_sum(const textprep::TokenStream& tokens, const VectorSpaceModel& model);

/// Dispatches on model.kind().
Vector vectorize(const textprep::TokenStream& tokens, const VectorSpaceModel& model);

/// dot / (|u| |v|), clamped to [-1, 1]; 0 when either norm is 0.
/// Throws std::invalid_argument on dimension (or kind) mismatch.
double cosine(const SparseVector& u, const SparseVector& v);
double cosine(const DenseVector& u, const DenseVector& v);
double cosine(const Vector& u, const Vector& v);

/// word2vec text format: "COUNT DIM" header then "token v1 ... vDIM" rows.
/// Rows whose token is not in the vocabulary are skipped.
EmbeddingTable parse_embeddings(std::istream& in, const textprep::Vocabulary& vocabulary);
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const textprep::Vocabulary& vocabulary);
void write_embeddings(std::ostream& out, const EmbeddingTable& table,
                      const textprep::Vocabulary& vocabulary);

/// Unit-normal components for every vocabulary token, from a fixed seed.
EmbeddingTable random_embeddings(const textprep::Vocabulary& vocabulary, std::size_t dimension,
                                 std::uint64_t seed);

/// Records what a ranking run needs to refuse mismatched artifacts.
struct IndexMetadata {
  ModelKind kind = ModelKind::Tfidf;
  std::string idf_formula{kIdfFormulaTag};
  int ngram_order = 1;
  std::uint64_t vocabulary_hash = 0;
  std::vector<std::string> law_words{"section"};

  friend bool operator==(const IndexMetadata&, const IndexMetadata&) = default;
};

void write_metadata(std::ostream& out, const IndexMetadata& metadata);
IndexMetadata read_metadata(std::istream& in);

/// Throws DataError naming the first field that differs.
void check_metadata(const IndexMetadata& expected, const IndexMetadata& actual);

}  // namespace pararank::vecspace
