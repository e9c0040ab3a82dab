#include "pararank/parasim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "pararank/errors.hpp"

namespace pararank::parasim {

VectorizedJudgment vectorize_judgment(const textprep::PreprocessedJudgment& judgment,
                                      const vecspace::VectorSpaceModel& model) {
  VectorizedJudgment out;
  out.id = judgment.id;
  out.paragraphs.reserve(judgment.paragraphs.size());
  for (const auto& p : judgment.paragraphs) out.paragraphs.push_back(vecspace::vectorize(p, model));
  out.document = vecspace::vectorize(judgment.document(), model);
  return out;
}

ParaSimMatrix::ParaSimMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                             bool swapped)
    : rows_(rows), cols_(cols), values_(std::move(values)), swapped_(swapped) {
  if (rows_ == 0 || rows_ > cols_) throw std::invalid_argument("ParaSimMatrix requires 0 < rows <= cols");
  if (values_.size() != rows_ * cols_) throw std::invalid_argument("ParaSimMatrix value count != rows*cols");
  for (const double v : values_) {
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) throw InvariantError("similarity outside [-1, 1]");
  }
}

ParaSimMatrix para_sim_matrix(const VectorizedJudgment& first, const VectorizedJudgment& second) {
  if (first.paragraphs.empty() || second.paragraphs.empty()) {
    throw std::invalid_argument("para_sim_matrix: judgment without paragraphs");
  }
  bool swapped = second.paragraphs.size() < first.paragraphs.size();
  if (first.paragraphs.size() == second.paragraphs.size()) swapped = second.id < first.id;
  const auto& rows = swapped ? second : first;
  const auto& cols = swapped ? first : second;

  const std::size_t m = rows.paragraphs.size();
  const std::size_t n = cols.paragraphs.size();
  std::vector<double> values(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      values[i * n + j] = vecspace::cosine(rows.paragraphs[i], cols.paragraphs[j]);
    }
  }
  return ParaSimMatrix(m, n, std::move(values), swapped);
}

ParaSimMatrix para_sim_matrix(const corpus::Judgment& first, const corpus::Judgment& second,
                              const vecspace::VectorSpaceModel& model,
                              const textprep::PreprocessOptions& options) {
  return para_sim_matrix(vectorize_judgment(textprep::preprocess_judgment(first, options), model),
                         vectorize_judgment(textprep::preprocess_judgment(second, options), model));
}

MspValues msp(const ParaSimMatrix& matrix) {
  MspValues out;
  out.values.reserve(matrix.rows());
  out.pair_indices.reserve(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    const auto row = matrix.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] > row[best]) best = j;
    }
    out.values.push_back(row[best]);
    out.pair_indices.emplace_back(i, best);
  }
  return out;
}

namespace {

std::vector<double> sorted_descending(const MspValues& values) {
  std::vector<double> sorted = values.values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted;
}

}  // namespace

double pl_m(const MspValues& values) {
  if (values.values.empty()) throw std::invalid_argument("pl_m: empty MSP");
  const auto sorted = sorted_descending(values);
  return top_k_mean(sorted, sorted.size());
}

// Running mean over the descending prefix. Each step moves toward a value no
// larger than the current mean and is clamped between the two, so the result
// never increases with k even under rounding.
double top_k_mean(std::span<const double> descending, std::size_t k) {
  if (k == 0) throw std::invalid_argument("pl_f: k must be positive");
  if (descending.empty()) throw std::invalid_argument("pl_f: empty MSP");
  const std::size_t take = std::min(k, descending.size());
  double mean = descending[0];
  for (std::size_t i = 1; i < take; ++i) {
    const double x = descending[i];
    const double next = mean + (x - mean) / static_cast<double>(i + 1);
    mean = std::clamp(next, std::min(x, mean), mean);
  }
  return mean;
}

double pl_f(const MspValues& values, std::size_t k) {
  if (k == 0) throw std::invalid_argument("pl_f: k must be positive");
  if (values.values.empty()) throw std::invalid_argument("pl_f: empty MSP");
  if (k >= values.values.size()) return pl_m(values);
  return top_k_mean(sorted_descending(values), k);
}

double dl_sim(const VectorizedJudgment& first, const VectorizedJudgment& second) {
  return vecspace::cosine(first.document, second.document);
}

double dl_sim(const corpus::Judgment& first, const corpus::Judgment& second,
              const vecspace::VectorSpaceModel& model, const textprep::PreprocessOptions& options) {
  return dl_sim(vectorize_judgment(textprep::preprocess_judgment(first, options), model),
                vectorize_judgment(textprep::preprocess_judgment(second, options), model));
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Dl: return "dl";
    case Method::PlM: return "pl-m";
    case Method::PlF: return "pl-f";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "dl") return Method::Dl;
  if (name == "pl-m") return Method::PlM;
  if (name == "pl-f") return Method::PlF;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

double score(const VectorizedJudgment& first, const VectorizedJudgment& second,
             const ScoringConfig& config) {
  switch (config.method) {
    case Method::Dl: return dl_sim(first, second);
    case Method::PlM: return pl_m(msp(para_sim_matrix(first, second)));
    case Method::PlF: return pl_f(msp(para_sim_matrix(first, second)), config.k);
  }
  throw InvariantError("unhandled method");
}

}  // namespace pararank::parasim
