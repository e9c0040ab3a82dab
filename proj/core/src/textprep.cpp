#include "pararank/textprep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "pararank/errors.hpp"
#include "pararank/experiments.hpp"
#include "porter_stemmer.hpp"
#include "text_util.hpp"

namespace pararank::textprep {

namespace {

bool is_ascii_alpha(char c) noexcept { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_ascii_alnum(char c) noexcept { return is_ascii_alpha(c) || is_ascii_digit(c); }
char to_lower(char c) noexcept { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

const std::vector<std::string>& default_law_words() {
  static const std::vector<std::string> words{"section"};
  return words;
}

// One statute reference: raw[begin, end) becomes `tokens`.
struct LawMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> tokens;
};

class LawScanner {
 public:
  explicit LawScanner(std::string_view raw) : raw_(raw) {}

  std::vector<LawMatch> scan(std::span<const std::string> law_words) {
    std::vector<LawMatch> matches;
    std::size_t i = 0;
    while (i < raw_.size()) {
      const bool word_start = is_ascii_alpha(raw_[i]) && (i == 0 || !is_ascii_alnum(raw_[i - 1]));
      if (word_start) {
        if (auto match = match_at(i, law_words)) {
          i = match->end;
          matches.push_back(std::move(*match));
          continue;
        }
      }
      ++i;
    }
    return matches;
  }

 private:
  char lower_at(std::size_t i) const { return i < raw_.size() ? to_lower(raw_[i]) : '\0'; }

  std::size_t skip_spaces(std::size_t i) const {
    while (i < raw_.size() && detail::is_space(raw_[i])) ++i;
    return i;
  }

  bool word_at(std::size_t i, std::string_view word) const {
    if (i + word.size() > raw_.size()) return false;
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (to_lower(raw_[i + k]) != word[k]) return false;
    }
    return true;
  }

  // digits, then at most one letter, ending on a word boundary.
  std::optional<std::size_t> number_at(std::size_t i, std::string& out) const {
    const std::size_t start = i;
    while (i < raw_.size() && is_ascii_digit(raw_[i])) ++i;
    if (i == start) return std::nullopt;
    std::size_t end = i;
    if (i < raw_.size() && is_ascii_alpha(raw_[i]) &&
        (i + 1 >= raw_.size() || !is_ascii_alnum(raw_[i + 1]))) {
      end = i + 1;
    }
    if (end < raw_.size() && is_ascii_alnum(raw_[end])) return std::nullopt;
    for (std::size_t k = start; k < end; ++k) out.push_back(to_lower(raw_[k]));
    return end;
  }

  // "(" alnum+ ")" with optional inner spaces.
  std::optional<std::size_t> qualifier_at(std::size_t i, std::string& out) const {
    i = skip_spaces(i);
    if (i >= raw_.size() || raw_[i] != '(') return std::nullopt;
    i = skip_spaces(i + 1);
    const std::size_t start = i;
    while (i < raw_.size() && is_ascii_alnum(raw_[i])) ++i;
    if (i == start) return std::nullopt;
    const std::size_t stop = i;
    i = skip_spaces(i);
    if (i >= raw_.size() || raw_[i] != ')') return std::nullopt;
    for (std::size_t k = start; k < stop; ++k) out.push_back(to_lower(raw_[k]));
    return i + 1;
  }

  // An already collapsed reference such as "section1702a": the whole
  // alphanumeric run after the law word.
  std::optional<std::size_t> collapsed_at(std::size_t i, std::string& out) const {
    if (i >= raw_.size() || !is_ascii_digit(raw_[i])) return std::nullopt;
    const std::size_t start = i;
    while (i < raw_.size() && is_ascii_alnum(raw_[i])) ++i;
    for (std::size_t k = start; k < i; ++k) out.push_back(to_lower(raw_[k]));
    return i;
  }

  // number followed by any qualifiers; appends the collapsed text to out.
  std::optional<std::size_t> reference_at(std::size_t i, std::string& out, bool attached = false) const {
    auto end = attached ? collapsed_at(i, out) : number_at(i, out);
    if (!end) return std::nullopt;
    std::size_t pos = *end;
    while (auto next = qualifier_at(pos, out)) pos = *next;
    return pos;
  }

  // ",", "&", "and" or "or" between numbers.
  std::optional<std::size_t> separator_at(std::size_t i) const {
    i = skip_spaces(i);
    if (i >= raw_.size()) return std::nullopt;
    if (raw_[i] == ',' || raw_[i] == '&') return i + 1;
    for (std::string_view word : {std::string_view("and"), std::string_view("or")}) {
      if (word_at(i, word) && (i + word.size() >= raw_.size() || !is_ascii_alnum(raw_[i + word.size()]))) {
        return i + word.size();
      }
    }
    return std::nullopt;
  }

  std::optional<LawMatch> match_at(std::size_t begin, std::span<const std::string> law_words) const {
    for (const auto& word : law_words) {
      if (word.empty() || !word_at(begin, word)) continue;
      std::size_t i = begin + word.size();
      if (lower_at(i) == 's' && !is_ascii_alpha(lower_at(i + 1))) ++i;  // plural
      if (i < raw_.size() && is_ascii_alpha(raw_[i])) continue;        // longer word
      const bool attached = i == begin + word.size() && i < raw_.size() && is_ascii_digit(raw_[i]);
      i = skip_spaces(i);

      LawMatch match;
      match.begin = begin;
      std::string token = word;
      auto end = reference_at(i, token, attached);
      if (!end) continue;
      match.tokens.push_back(std::move(token));
      match.end = *end;

      while (auto after_separator = separator_at(match.end)) {
        std::string next = word;
        auto next_end = reference_at(skip_spaces(*after_separator), next);
        if (!next_end) break;
        match.tokens.push_back(std::move(next));
        match.end = *next_end;
      }
      return match;
    }
    return std::nullopt;
  }

  std::string_view raw_;
};

// Private-use code points survive clean_text (bytes >= 0x80 are letters),
// so a law token hidden behind one keeps its digits through cleaning.
constexpr std::string_view kPlaceholderOpen = "\xEE\x80\x80";
constexpr std::string_view kPlaceholderClose = "\xEE\x80\x81";

std::string placeholder(std::size_t index) {
  std::string out(kPlaceholderOpen);
  for (const char digit : std::to_string(index)) out.push_back(static_cast<char>('a' + (digit - '0')));
  out.append(kPlaceholderClose);
  return out;
}

std::optional<std::size_t> placeholder_index(std::string_view token) {
  if (token.size() <= kPlaceholderOpen.size() + kPlaceholderClose.size()) return std::nullopt;
  if (!token.starts_with(kPlaceholderOpen) || !token.ends_with(kPlaceholderClose)) return std::nullopt;
  token.remove_prefix(kPlaceholderOpen.size());
  token.remove_suffix(kPlaceholderClose.size());
  std::size_t index = 0;
  for (const char c : token) {
    if (c < 'a' || c > 'j') return std::nullopt;
    index = index * 10 + static_cast<std::size_t>(c - 'a');
  }
  return index;
}

}  // namespace

std::string clean_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (const char c : raw) {
    const auto byte = static_cast<unsigned char>(c);
    if (byte >= 0x80 || is_ascii_alpha(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(to_lower(c));
    } else if (detail::is_space(c)) {
      pending_space = true;
    }
    // digits, punctuation and other control characters are dropped
  }
  return out;
}

LawExtraction extract_law_tokens(std::string_view raw, std::span<const std::string> law_words) {
  LawExtraction result;
  std::size_t copied = 0;
  for (auto& match : LawScanner(raw).scan(law_words)) {
    result.text.append(raw.substr(copied, match.begin - copied));
    for (std::size_t t = 0; t < match.tokens.size(); ++t) {
      if (t > 0) result.text.push_back(' ');
      result.text.append(match.tokens[t]);
    }
    copied = match.end;
    for (auto& token : match.tokens) result.tokens.push_back(std::move(token));
  }
  result.text.append(raw.substr(copied));
  return result;
}

LawExtraction extract_law_tokens(std::string_view raw) {
  return extract_law_tokens(raw, default_law_words());
}

bool is_law_token(std::string_view token) noexcept {
  return std::any_of(token.begin(), token.end(), is_ascii_digit);
}

std::string stem(std::string_view token) {
  std::string word(token);
  if (!is_law_token(word)) detail::porter_stem(word);
  return word;
}

TokenStream preprocess(std::string_view raw, const PreprocessOptions& options) {
  const auto matches = LawScanner(raw).scan(options.law_words);

  std::vector<std::string> law_tokens;
  std::string protected_text;
  protected_text.reserve(raw.size());
  std::size_t copied = 0;
  for (const auto& match : matches) {
    protected_text.append(raw.substr(copied, match.begin - copied));
    for (const auto& token : match.tokens) {
      protected_text.push_back(' ');
      protected_text.append(placeholder(law_tokens.size()));
      protected_text.push_back(' ');
      law_tokens.push_back(token);
    }
    copied = match.end;
  }
  protected_text.append(raw.substr(copied));

  TokenStream stream;
  const std::string cleaned = clean_text(protected_text);
  for (const auto word : detail::split_whitespace(cleaned)) {
    if (const auto index = placeholder_index(word); index && *index < law_tokens.size()) {
      stream.tokens.push_back(law_tokens[*index]);
    } else {
      stream.tokens.push_back(stem(word));
    }
  }
  return stream;
}

TokenStream PreprocessedJudgment::document() const {
  TokenStream out;
  for (const auto& p : paragraphs) out.tokens.insert(out.tokens.end(), p.tokens.begin(), p.tokens.end());
  return out;
}

PreprocessedJudgment preprocess_judgment(const corpus::Judgment& judgment,
                                         const PreprocessOptions& options) {
  PreprocessedJudgment out;
  out.id = judgment.id;
  out.paragraphs.reserve(judgment.paragraphs.size());
  for (const auto& p : judgment.paragraphs) out.paragraphs.push_back(preprocess(p, options));
  return out;
}

std::vector<PreprocessedJudgment> preprocess_corpus(const corpus::Corpus& corpus,
                                                    const PreprocessOptions& options,
                                                    unsigned threads) {
  std::vector<PreprocessedJudgment> out(corpus.size());
  const auto judgments = corpus.judgments();
  experiments::parallel_for(judgments.size(), threads, [&](std::size_t i) {
    out[i] = preprocess_judgment(judgments[i], options);
  });
  return out;
}

std::vector<std::string> ngram_terms(const TokenStream& stream, int ngram_order) {
  std::vector<std::string> terms = stream.tokens;
  if (ngram_order >= 2) {
    for (std::size_t i = 0; i + 1 < stream.tokens.size(); ++i) {
      terms.push_back(stream.tokens[i] + "_" + stream.tokens[i + 1]);
    }
  }
  return terms;
}

Vocabulary::Vocabulary(std::vector<Entry> entries, std::size_t num_docs, double min_df_ratio,
                       double max_df_ratio)
    : entries_(std::move(entries)),
      num_docs_(num_docs),
      min_df_ratio_(min_df_ratio),
      max_df_ratio_(max_df_ratio) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.token.empty()) throw DataError("vocabulary: empty token");
    if (i > 0 && !(entries_[i - 1].token < e.token)) {
      throw DataError("vocabulary: tokens not strictly increasing at '" + e.token + "'");
    }
    if (e.doc_freq < 1 || e.doc_freq > num_docs_) {
      throw DataError("vocabulary: doc_freq out of range for '" + e.token + "'");
    }
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view token) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), token,
                                   [](const Entry& e, std::string_view key) { return e.token < key; });
  if (it == entries_.end() || it->token != token) return std::nullopt;
  return static_cast<std::uint32_t>(it - entries_.begin());
}

DfBounds df_bounds(std::size_t num_docs, double min_df_ratio, double max_df_ratio) {
  if (!(min_df_ratio >= 0.0 && min_df_ratio < max_df_ratio && max_df_ratio <= 1.0)) {
    throw std::invalid_argument("document-frequency ratios must satisfy 0 <= min < max <= 1");
  }
  // The slack absorbs representation error such as 0.3 * 10 = 3.0000000000000004.
  constexpr double kSlack = 1e-9;
  const double n = static_cast<double>(num_docs);
  DfBounds bounds;
  bounds.min_df = static_cast<std::size_t>(std::max(0.0, std::ceil(min_df_ratio * n - kSlack)));
  bounds.max_df = static_cast<std::size_t>(std::floor(max_df_ratio * n + kSlack));
  return bounds;
}

Vocabulary build_vocabulary(std::span<const PreprocessedJudgment> judgments,
                            const VocabularyOptions& options) {
  if (judgments.empty()) throw DataError("build_vocabulary: empty corpus");
  if (options.ngram_order != 1 && options.ngram_order != 2) {
    throw std::invalid_argument("ngram_order must be 1 or 2");
  }
  const DfBounds bounds = df_bounds(judgments.size(), options.min_df_ratio, options.max_df_ratio);

  std::unordered_map<std::string, std::uint32_t> df;
  for (const auto& judgment : judgments) {
    auto terms = ngram_terms(judgment.document(), options.ngram_order);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& term : terms) ++df[std::move(term)];
  }

  std::vector<Vocabulary::Entry> entries;
  for (auto& [token, count] : df) {
    if (count >= bounds.min_df && count <= bounds.max_df) entries.push_back({token, count});
  }
  if (entries.empty()) throw DataError("empty vocabulary");
  std::sort(entries.begin(), entries.end(),
            [](const Vocabulary::Entry& a, const Vocabulary::Entry& b) { return a.token < b.token; });
  return Vocabulary(std::move(entries), judgments.size(), options.min_df_ratio, options.max_df_ratio);
}

Vocabulary build_vocabulary(const corpus::Corpus& corpus, const VocabularyOptions& options,
                            const PreprocessOptions& preprocess_options) {
  if (corpus.empty()) throw DataError("build_vocabulary: empty corpus");
  const auto preprocessed = preprocess_corpus(corpus, preprocess_options);
  return build_vocabulary(preprocessed, options);
}

namespace {

std::string format_ratio(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

double parse_ratio(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw DataError("vocabulary header: bad " + std::string(what) + " value '" + std::string(text) + "'");
  }
  return value;
}

template <typename Int>
Int parse_int(std::string_view text, const std::string& where) {
  Int value{};
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw DataError(where + "bad integer '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void write_vocabulary(std::ostream& out, const Vocabulary& vocabulary) {
  out << "#num_docs=" << vocabulary.num_docs() << " min_df=" << format_ratio(vocabulary.min_df_ratio())
      << " max_df=" << format_ratio(vocabulary.max_df_ratio()) << '\n';
  const auto entries = vocabulary.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out << entries[i].token << '\t' << i << '\t' << entries[i].doc_freq << '\n';
  }
}

Vocabulary read_vocabulary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("vocabulary: missing header");
  std::size_t num_docs = 0;
  double min_df = 0.0;
  double max_df = 1.0;
  {
    const auto header = detail::chomp(line);
    if (!header.starts_with('#')) throw DataError("vocabulary: header must start with '#'");
    bool seen_docs = false, seen_min = false, seen_max = false;
    for (const auto field : detail::split_whitespace(header.substr(1))) {
      const auto eq = field.find('=');
      if (eq == std::string_view::npos) throw DataError("vocabulary header: bad field '" + std::string(field) + "'");
      const auto key = field.substr(0, eq);
      const auto value = field.substr(eq + 1);
      if (key == "num_docs") {
        num_docs = parse_int<std::size_t>(value, "vocabulary header: ");
        seen_docs = true;
      } else if (key == "min_df") {
        min_df = parse_ratio(value, key);
        seen_min = true;
      } else if (key == "max_df") {
        max_df = parse_ratio(value, key);
        seen_max = true;
      }
    }
    if (!seen_docs || !seen_min || !seen_max) {
      throw DataError("vocabulary header must carry num_docs, min_df and max_df");
    }
  }

  std::vector<Vocabulary::Entry> entries;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    const auto row = detail::chomp(line);
    if (row.empty()) continue;
    const std::string where = "vocabulary line " + std::to_string(line_number) + ": ";
    const auto fields = detail::split_char(row, '\t');
    if (fields.size() != 3) throw DataError(where + "expected token<TAB>index<TAB>doc_freq");
    const auto index = parse_int<std::size_t>(fields[1], where);
    if (index != entries.size()) throw DataError(where + "indices must be contiguous from 0");
    entries.push_back({std::string(fields[0]), parse_int<std::uint32_t>(fields[2], where)});
  }
  return Vocabulary(std::move(entries), num_docs, min_df, max_df);
}

std::uint64_t vocabulary_hash(const Vocabulary& vocabulary) {
  std::ostringstream serialized;
  write_vocabulary(serialized, vocabulary);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : serialized.str()) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace pararank::textprep
