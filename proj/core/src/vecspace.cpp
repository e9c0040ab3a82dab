#include "pararank/vecspace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "pararank/errors.hpp"
#include "pararank/random.hpp"
#include "text_util.hpp"

namespace pararank::vecspace {

using textprep::TokenStream;
using textprep::Vocabulary;

SparseVector::SparseVector(std::size_t dimension, std::vector<SparseEntry> entries)
    : dimension_(dimension) {
  entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.index >= dimension) throw std::invalid_argument("sparse index out of range");
    if (!entries_.empty() && e.index <= entries_.back().index) {
      throw std::invalid_argument("sparse indices must be strictly increasing");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw std::invalid_argument("sparse weights must be finite and non-negative");
    }
    if (e.weight != 0.0) entries_.push_back(e);
  }
}

double SparseVector::weight(std::uint32_t index) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                   [](const SparseEntry& e, std::uint32_t key) { return e.index < key; });
  return (it != entries_.end() && it->index == index) ? it->weight : 0.0;
}

EmbeddingTable::EmbeddingTable(std::size_t vocabulary_size, std::size_t dimension)
    : dimension_(dimension), row_of_(vocabulary_size, -1) {
  if (dimension == 0) throw std::invalid_argument("embedding dimension must be positive");
}

bool EmbeddingTable::contains(std::uint32_t index) const noexcept {
  return index < row_of_.size() && row_of_[index] >= 0;
}

std::span<const double> EmbeddingTable::vector(std::uint32_t index) const noexcept {
  if (!contains(index)) return {};
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(row_of_[index]) * dimension_,
                                                dimension_);
}

void EmbeddingTable::set(std::uint32_t index, std::span<const double> values) {
  if (index >= row_of_.size()) throw std::invalid_argument("embedding index out of range");
  if (values.size() != dimension_) throw std::invalid_argument("embedding length != dimension");
  for (const double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("embedding components must be finite");
  }
  if (row_of_[index] < 0) {
    row_of_[index] = static_cast<std::int64_t>(count_++);
    data_.insert(data_.end(), values.begin(), values.end());
  } else {
    std::copy(values.begin(), values.end(),
              data_.begin() + row_of_[index] * static_cast<std::int64_t>(dimension_));
  }
}

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Bow: return "bow";
    case ModelKind::Tfidf: return "tfidf";
    case ModelKind::W2vSum: return "w2v";
    case ModelKind::W2vIdf: return "w2v-idf";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "bow") return ModelKind::Bow;
  if (name == "tfidf") return ModelKind::Tfidf;
  if (name == "w2v") return ModelKind::W2vSum;
  if (name == "w2v-idf") return ModelKind::W2vIdf;
  throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

double idf(std::size_t num_docs, std::uint32_t doc_freq) {
  return std::log((1.0 + static_cast<double>(num_docs)) / (1.0 + static_cast<double>(doc_freq))) + 1.0;
}

VectorSpaceModel::VectorSpaceModel(ModelKind kind, Vocabulary vocabulary, int ngram_order,
                                   std::shared_ptr<const EmbeddingTable> embeddings)
    : kind_(kind),
      ngram_order_(ngram_order),
      vocabulary_(std::make_shared<const Vocabulary>(std::move(vocabulary))),
      embeddings_(std::move(embeddings)) {
  if (ngram_order_ != 1 && ngram_order_ != 2) throw std::invalid_argument("ngram_order must be 1 or 2");
  const bool needs_embeddings = kind_ == ModelKind::W2vSum || kind_ == ModelKind::W2vIdf;
  if (needs_embeddings != static_cast<bool>(embeddings_)) {
    throw std::invalid_argument("embeddings are required exactly for the w2v models");
  }
  if (needs_embeddings &&
      (embeddings_->dimension() == 0 || embeddings_->vocabulary_size() != vocabulary_->size())) {
    throw std::invalid_argument("embedding table does not match the vocabulary");
  }
  if (needs_embeddings && ngram_order_ != 1) {
    throw std::invalid_argument("bigrams are only supported for bow and tfidf");
  }
  idf_.reserve(vocabulary_->size());
  for (const auto& entry : vocabulary_->entries()) idf_.push_back(idf(vocabulary_->num_docs(), entry.doc_freq));
}

VectorSpaceModel VectorSpaceModel::bow(Vocabulary vocabulary, int ngram_order) {
  return VectorSpaceModel(ModelKind::Bow, std::move(vocabulary), ngram_order, nullptr);
}

VectorSpaceModel VectorSpaceModel::tfidf(Vocabulary vocabulary, int ngram_order) {
  return VectorSpaceModel(ModelKind::Tfidf, std::move(vocabulary), ngram_order, nullptr);
}

VectorSpaceModel VectorSpaceModel::w2v_sum(Vocabulary vocabulary, EmbeddingTable embeddings) {
  return VectorSpaceModel(ModelKind::W2vSum, std::move(vocabulary), 1,
                          std::make_shared<const EmbeddingTable>(std::move(embeddings)));
}

VectorSpaceModel VectorSpaceModel::w2v_idf(Vocabulary vocabulary, EmbeddingTable embeddings) {
  return VectorSpaceModel(ModelKind::W2vIdf, std::move(vocabulary), 1,
                          std::make_shared<const EmbeddingTable>(std::move(embeddings)));
}

namespace {

void require_kind(const VectorSpaceModel& model, ModelKind kind, const char* what) {
  if (model.kind() != kind) {
    throw std::invalid_argument(std::string(what) + " requires a " + std::string(to_string(kind)) +
                                " model, got " + std::string(to_string(model.kind())));
  }
}

std::vector<SparseEntry> term_counts(const TokenStream& tokens, const VectorSpaceModel& model) {
  std::vector<std::uint32_t> indices;
  const auto& vocabulary = model.vocabulary();
  auto add = [&](std::string_view term) {
    if (const auto index = vocabulary.index_of(term)) indices.push_back(*index);
  };
  for (const auto& t : tokens.tokens) add(t);
  if (model.ngram_order() == 2) {
    std::string bigram;
    for (std::size_t i = 0; i + 1 < tokens.tokens.size(); ++i) {
      bigram.assign(tokens.tokens[i]).append("_").append(tokens.tokens[i + 1]);
      add(bigram);
    }
  }
  std::sort(indices.begin(), indices.end());
  std::vector<SparseEntry> entries;
  for (const auto index : indices) {
    if (!entries.empty() && entries.back().index == index) {
      entries.back().weight += 1.0;
    } else {
      entries.push_back({index, 1.0});
    }
  }
  return entries;
}

DenseVector weighted_embedding_sum(const TokenStream& tokens, const VectorSpaceModel& model,
                                   bool idf_weighted) {
  const EmbeddingTable& table = *model.embeddings();
  DenseVector out{std::vector<double>(table.dimension(), 0.0)};
  const auto idf_weights = model.idf_weights();
  for (const auto& token : tokens.tokens) {
    const auto index = model.vocabulary().index_of(token);
    if (!index) continue;
    const auto e = table.vector(*index);
    if (e.empty()) continue;
    const double w = idf_weighted ? idf_weights[*index] : 1.0;
    for (std::size_t d = 0; d < e.size(); ++d) out.components[d] += w * e[d];
  }
  return out;
}

}  // namespace

SparseVector bow_vector(const TokenStream& tokens, const VectorSpaceModel& model) {
  require_kind(model, ModelKind::Bow, "bow_vector");
  return SparseVector(model.vocabulary().size(), term_counts(tokens, model));
}

SparseVector tfidf_vector(const TokenStream& tokens, const VectorSpaceModel& model) {
  require_kind(model, ModelKind::Tfidf, "tfidf_vector");
  auto entries = term_counts(tokens, model);
  const auto idf_weights = model.idf_weights();
  for (auto& e : entries) e.weight *= idf_weights[e.index];
  return SparseVector(model.vocabulary().size(), std::move(entries));
}

DenseVector embed_sum(const TokenStream& tokens, const VectorSpaceModel& model) {
  require_kind(model, ModelKind::W2vSum, "embed_sum");
  return weighted_embedding_sum(tokens, model, false);
}

DenseVector embed_idf_sum(const TokenStream& tokens, const VectorSpaceModel& model) {
  require_kind(model, ModelKind::W2vIdf, "embed_idf_sum");
  return weighted_embedding_sum(tokens, model, true);
}

Vector vectorize(const TokenStream& tokens, const VectorSpaceModel& model) {
  switch (model.kind()) {
    case ModelKind::Bow: return bow_vector(tokens, model);
    case ModelKind::Tfidf: return tfidf_vector(tokens, model);
    case ModelKind::W2vSum: return embed_sum(tokens, model);
    case ModelKind::W2vIdf: return embed_idf_sum(tokens, model);
  }
  throw InvariantError("unhandled model kind");
}

namespace {

double finish_cosine(double dot, double norm_u_sq, double norm_v_sq) {
  if (norm_u_sq == 0.0 || norm_v_sq == 0.0) return 0.0;
  const double c = dot / (std::sqrt(norm_u_sq) * std::sqrt(norm_v_sq));
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace

double cosine(const SparseVector& u, const SparseVector& v) {
  if (u.dimension() != v.dimension()) throw std::invalid_argument("cosine: dimension mismatch");
  const auto a = u.entries();
  const auto b = v.entries();
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].index < b[j].index) {
      ++i;
    } else if (b[j].index < a[i].index) {
      ++j;
    } else {
      dot += a[i].weight * b[j].weight;
      ++i;
      ++j;
    }
  }
  double nu = 0.0;
  for (const auto& e : a) nu += e.weight * e.weight;
  double nv = 0.0;
  for (const auto& e : b) nv += e.weight * e.weight;
  return finish_cosine(dot, nu, nv);
}

double cosine(const DenseVector& u, const DenseVector& v) {
  if (u.dimension() != v.dimension()) throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t d = 0; d < u.components.size(); ++d) {
    dot += u.components[d] * v.components[d];
    nu += u.components[d] * u.components[d];
    nv += v.components[d] * v.components[d];
  }
  return finish_cosine(dot, nu, nv);
}

double cosine(const Vector& u, const Vector& v) {
  if (u.index() != v.index()) throw std::invalid_argument("cosine: sparse/dense mismatch");
  if (const auto* su = std::get_if<SparseVector>(&u)) return cosine(*su, std::get<SparseVector>(v));
  return cosine(std::get<DenseVector>(u), std::get<DenseVector>(v));
}

EmbeddingTable parse_embeddings(std::istream& in, const Vocabulary& vocabulary) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("embeddings line 1: missing \"COUNT DIM\" header");
  const auto header = detail::split_whitespace(detail::chomp(line));
  std::size_t count = 0;
  std::size_t dimension = 0;
  auto parse_size = [](std::string_view text, std::size_t& out) {
    const auto r = std::from_chars(text.data(), text.data() + text.size(), out);
    return r.ec == std::errc{} && r.ptr == text.data() + text.size();
  };
  if (header.size() != 2 || !parse_size(header[0], count) || !parse_size(header[1], dimension) ||
      dimension == 0) {
    throw DataError("embeddings line 1: malformed \"COUNT DIM\" header");
  }

  EmbeddingTable table(vocabulary.size(), dimension);
  std::vector<double> values(dimension);
  std::size_t line_number = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto fields = detail::split_whitespace(detail::chomp(line));
    if (fields.empty()) continue;
    ++rows;
    const std::string where = "embeddings line " + std::to_string(line_number) + ": ";
    if (fields.size() != dimension + 1) {
      throw DataError(where + "expected " + std::to_string(dimension) + " components, got " +
                      std::to_string(fields.size() - 1));
    }
    for (std::size_t d = 0; d < dimension; ++d) {
      const auto text = fields[d + 1];
      const auto r = std::from_chars(text.data(), text.data() + text.size(), values[d]);
      if (r.ec != std::errc{} || r.ptr != text.data() + text.size() || !std::isfinite(values[d])) {
        throw DataError(where + "bad component '" + std::string(text) + "'");
      }
    }
    if (const auto index = vocabulary.index_of(fields[0])) table.set(*index, values);
  }
  if (rows != count) {
    throw DataError("embeddings: header announces " + std::to_string(count) + " rows, found " +
                    std::to_string(rows));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocabulary) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings file " + path.string());
  return parse_embeddings(in, vocabulary);
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table, const Vocabulary& vocabulary) {
  out << table.size() << ' ' << table.dimension() << '\n';
  char buffer[64];
  for (std::uint32_t i = 0; i < vocabulary.size(); ++i) {
    const auto e = table.vector(i);
    if (e.empty()) continue;
    out << vocabulary.token(i);
    for (const double v : e) {
      const auto r = std::to_chars(buffer, buffer + sizeof buffer, v);
      out << ' ' << std::string_view(buffer, static_cast<std::size_t>(r.ptr - buffer));
    }
    out << '\n';
  }
}

EmbeddingTable random_embeddings(const Vocabulary& vocabulary, std::size_t dimension,
                                 std::uint64_t seed) {
  EmbeddingTable table(vocabulary.size(), dimension);
  auto rng = make_rng(seed);
  std::vector<double> values(dimension);
  for (std::uint32_t i = 0; i < vocabulary.size(); ++i) {
    for (auto& v : values) v = standard_normal(rng);
    table.set(i, values);
  }
  return table;
}

void write_metadata(std::ostream& out, const IndexMetadata& metadata) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(metadata.vocabulary_hash));
  out << "model=" << to_string(metadata.kind) << '\n'
      << "idf=" << metadata.idf_formula << '\n'
      << "ngram_order=" << metadata.ngram_order << '\n'
      << "vocabulary_hash=" << hash << '\n'
      << "law_words=";
  for (std::size_t i = 0; i < metadata.law_words.size(); ++i) {
    out << (i ? "," : "") << metadata.law_words[i];
  }
  out << '\n';
}

IndexMetadata read_metadata(std::istream& in) {
  std::map<std::string, std::string, std::less<>> fields;
  std::string line;
  while (std::getline(in, line)) {
    const auto row = detail::chomp(line);
    if (row.empty() || row.starts_with('#')) continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) throw DataError("index metadata: bad line '" + std::string(row) + "'");
    fields[std::string(row.substr(0, eq))] = std::string(row.substr(eq + 1));
  }
  auto require = [&](std::string_view key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw DataError("index metadata: missing " + std::string(key));
    return it->second;
  };

  IndexMetadata metadata;
  try {
    metadata.kind = parse_model_kind(require("model"));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("index metadata: ") + e.what());
  }
  metadata.idf_formula = require("idf");
  const auto& ngram = require("ngram_order");
  if (ngram != "1" && ngram != "2") throw DataError("index metadata: bad ngram_order " + ngram);
  metadata.ngram_order = ngram[0] - '0';
  const auto& hash = require("vocabulary_hash");
  const auto r = std::from_chars(hash.data(), hash.data() + hash.size(), metadata.vocabulary_hash, 16);
  if (r.ec != std::errc{} || r.ptr != hash.data() + hash.size()) {
    throw DataError("index metadata: bad vocabulary_hash " + hash);
  }
  metadata.law_words.clear();
  for (const auto word : detail::split_char(require("law_words"), ',')) {
    if (!word.empty()) metadata.law_words.emplace_back(word);
  }
  return metadata;
}

void check_metadata(const IndexMetadata& expected, const IndexMetadata& actual) {
  auto mismatch = [](const std::string& field, const std::string& want, const std::string& got) {
    throw DataError("index metadata mismatch on " + field + ": index has " + got + ", run requests " + want);
  };
  if (expected.kind != actual.kind) {
    mismatch("model", std::string(to_string(expected.kind)), std::string(to_string(actual.kind)));
  }
  if (expected.idf_formula != actual.idf_formula) mismatch("idf", expected.idf_formula, actual.idf_formula);
  if (expected.ngram_order != actual.ngram_order) {
    mismatch("ngram_order", std::to_string(expected.ngram_order), std::to_string(actual.ngram_order));
  }
  if (expected.vocabulary_hash != actual.vocabulary_hash) {
    mismatch("vocabulary_hash", std::to_string(expected.vocabulary_hash), std::to_string(actual.vocabulary_hash));
  }
  if (expected.law_words != actual.law_words) mismatch("law_words", "(configured)", "(different)");
}

}  // namespace pararank::vecspace
