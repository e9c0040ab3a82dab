#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pararank/corpus.hpp"
#include "pararank/textprep.hpp"
#include "pararank/vecspace.hpp"

namespace pararank::parasim {

/// Paragraph and whole-document vectors of one judgment in one model.
struct VectorizedJudgment {
  std::string id;
  std::vector<vecspace::Vector> paragraphs;
  vecspace::Vector document;
};

VectorizedJudgment vectorize_judgment(const textprep::PreprocessedJudgment& judgment,
                                      const vecspace::VectorSpaceModel& model);

/// m x n cosine matrix. Rows belong to the judgment with fewer paragraphs;
/// equal counts put the lexicographically smaller id on rows, then the first
/// argument. `swapped` is true when rows hold the second argument.
class ParaSimMatrix {
 public:
  ParaSimMatrix(std::size_t rows, std::size_t cols, std::vector<double> values, bool swapped);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool swapped() const noexcept { return swapped_; }
  [[nodiscard]] double at(std::size_t row, std::size_t col) const { return values_[row * cols_ + col]; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  bool swapped_;
};

/// Maximum similarity pairs: one (value, argmax column) per matrix row.
struct MspValues {
  std::vector<double> values;
  std::vector<std::pair<std::size_t, std::size_t>> pair_indices;
};

ParaSimMatrix para_sim_matrix(const VectorizedJudgment& first, const VectorizedJudgment& second);
ParaSimMatrix para_sim_matrix(const corpus::Judgment& first, const corpus::Judgment& second,
                              const vecspace::VectorSpaceModel& model,
                              const textprep::PreprocessOptions& options = {});

/// Row maxima; ties go to the lowest column.
MspValues msp(const ParaSimMatrix& matrix);

/// Mean of all MSP values. Throws std::invalid_argument when empty.
double pl_m(const MspValues& values);

/// Mean of the min(k, m) largest MSP values. Throws std::invalid_argument
/// when k == 0 or the MSP is empty.
double pl_f(const MspValues& values, std::size_t k);

/// Same as pl_f on an already descending-sorted list.
double top_k_mean(std::span<const double> descending, std::size_t k);

/// Cosine of the whole-document vectors.
double dl_sim(const VectorizedJudgment& first, const VectorizedJudgment& second);
double dl_sim(const corpus::Judgment& first, const corpus::Judgment& second,
              const vecspace::VectorSpaceModel& model,
              const textprep::PreprocessOptions& options = {});

enum class Method { Dl, PlM, PlF };

/// CLI spelling: dl, pl-m, pl-f.
std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);

struct ScoringConfig {
  Method method = Method::PlF;
  std::size_t k = 3;  ///< PL-F only
};

double score(const VectorizedJudgment& first, const VectorizedJudgment& second,
             const ScoringConfig& config);

}  // namespace pararank::parasim
