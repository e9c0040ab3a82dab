#include "pararank/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "pararank/citegraph.hpp"
#include "pararank/errors.hpp"
#include "text_util.hpp"

namespace pararank::corpus {

using detail::trim;

Corpus Corpus::from_judgments(std::vector<Judgment> judgments) {
  for (const auto& j : judgments) {
    if (j.id.empty()) throw DataError("judgment with empty id");
    if (j.paragraphs.empty()) throw DataError("judgment '" + j.id + "' has no paragraphs");
    for (const auto& p : j.paragraphs) {
      if (trim(p).empty()) throw DataError("judgment '" + j.id + "' has a blank paragraph");
    }
  }
  std::sort(judgments.begin(), judgments.end(),
            [](const Judgment& a, const Judgment& b) { return a.id < b.id; });
  const auto dup = std::adjacent_find(judgments.begin(), judgments.end(),
                                      [](const Judgment& a, const Judgment& b) { return a.id == b.id; });
  if (dup != judgments.end()) throw DataError("duplicate judgment id '" + dup->id + "'");
  Corpus corpus;
  corpus.judgments_ = std::move(judgments);
  return corpus;
}

const Judgment* Corpus::find(std::string_view id) const {
  const auto it = std::lower_bound(judgments_.begin(), judgments_.end(), id,
                                   [](const Judgment& j, std::string_view key) { return j.id < key; });
  if (it == judgments_.end() || it->id != id) return nullptr;
  return &*it;
}

const Judgment& Corpus::at(std::string_view id) const {
  const Judgment* j = find(id);
  if (j == nullptr) throw DataError("unknown judgment id '" + std::string(id) + "'");
  return *j;
}

std::vector<std::string> split_paragraphs(std::string_view raw_text) {
  std::vector<std::string> paragraphs;
  std::string current;
  bool has_content = false;
  auto flush = [&] {
    if (has_content) {
      const auto piece = trim(current);
      if (!piece.empty()) paragraphs.emplace_back(piece);
    }
    current.clear();
    has_content = false;
  };

  std::size_t start = 0;
  while (start <= raw_text.size()) {
    std::size_t end = raw_text.find('\n', start);
    if (end == std::string_view::npos) end = raw_text.size();
    const auto line = detail::chomp(raw_text.substr(start, end - start));
    if (trim(line).empty()) {
      flush();
    } else {
      if (has_content) current.push_back('\n');
      current.append(line);
      has_content = true;
    }
    start = end + 1;
  }
  flush();
  return paragraphs;
}

std::size_t count_words(std::string_view text) {
  return detail::split_whitespace(text).size();
}

namespace {

Judgment parse_record(std::string_view line, std::size_t line_number) {
  const std::string where = "line " + std::to_string(line_number) + ": ";
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(where + "malformed record (" + e.what() + ")");
  }
  if (!record.is_object()) throw DataError(where + "record is not an object");

  Judgment judgment;
  const auto id = record.find("id");
  if (id == record.end() || !id->is_string()) throw DataError(where + "missing string field \"id\"");
  judgment.id = id->get<std::string>();
  if (judgment.id.empty()) throw DataError(where + "empty id");

  const auto text = record.find("text");
  const auto paragraphs = record.find("paragraphs");
  const bool has_text = text != record.end();
  const bool has_paragraphs = paragraphs != record.end();
  if (has_text == has_paragraphs) {
    throw DataError(where + "exactly one of \"text\" or \"paragraphs\" is required");
  }
  if (has_text) {
    if (!text->is_string()) throw DataError(where + "\"text\" must be a string");
    judgment.paragraphs = split_paragraphs(text->get<std::string>());
  } else {
    if (!paragraphs->is_array()) throw DataError(where + "\"paragraphs\" must be an array");
    for (const auto& p : *paragraphs) {
      if (!p.is_string()) throw DataError(where + "paragraph is not a string");
      judgment.paragraphs.push_back(p.get<std::string>());
      if (trim(judgment.paragraphs.back()).empty()) {
        throw DataError(where + "blank paragraph in '" + judgment.id + "'");
      }
    }
  }
  if (judgment.paragraphs.empty()) {
    throw DataError(where + "judgment '" + judgment.id + "' has no paragraphs");
  }
  return judgment;
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  std::vector<Judgment> judgments;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    judgments.push_back(parse_record(line, line_number));
  }
  if (judgments.empty()) throw DataError("empty corpus file");

  // Report duplicates by id before sorting loses the order.
  std::vector<std::string_view> ids;
  ids.reserve(judgments.size());
  for (const auto& j : judgments) ids.push_back(j.id);
  std::sort(ids.begin(), ids.end());
  const auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) throw DataError("duplicate judgment id '" + std::string(*dup) + "'");

  return Corpus::from_judgments(std::move(judgments));
}

Corpus ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& j : corpus) {
    nlohmann::json record;
    record["id"] = j.id;
    record["paragraphs"] = j.paragraphs;
    out << record.dump() << '\n';
  }
}

CorpusStats corpus_stats(const Corpus& corpus, const citegraph::CitationGraph& graph) {
  if (corpus.empty()) throw DataError("corpus_stats: empty corpus");
  for (const auto& id : graph.node_ids()) {
    if (corpus.find(id) == nullptr) {
      throw DataError("citation graph node '" + id + "' is not a corpus judgment");
    }
  }
  std::size_t paragraphs = 0;
  std::size_t words = 0;
  for (const auto& j : corpus) {
    paragraphs += j.paragraphs.size();
    for (const auto& p : j.paragraphs) words += count_words(p);
  }
  const auto n = static_cast<double>(corpus.size());
  CorpusStats stats;
  stats.num_judgments = corpus.size();
  stats.avg_citations = 2.0 * static_cast<double>(graph.num_edges()) / n;
  stats.avg_paragraphs = static_cast<double>(paragraphs) / n;
  stats.avg_words_per_paragraph = static_cast<double>(words) / static_cast<double>(paragraphs);
  return stats;
}

}  // namespace pararank::corpus
