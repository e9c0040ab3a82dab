#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pararank::citegraph {

using IdPair = std::pair<std::string, std::string>;

/// Simple undirected graph over judgment ids. Nodes are indexed in id order.
class CitationGraph {
 public:
  CitationGraph() = default;
  /// Self-loops are dropped and repeated edges (in either direction) collapse.
  explicit CitationGraph(std::span<const IdPair> edges);

  [[nodiscard]] std::size_t num_nodes() const noexcept { return ids_.size(); }
  [[nodiscard]] std::size_t num_edges() const noexcept { return num_edges_; }
  [[nodiscard]] std::size_t dropped_self_loops() const noexcept { return dropped_self_loops_; }
  [[nodiscard]] std::size_t collapsed_duplicates() const noexcept { return collapsed_duplicates_; }

  [[nodiscard]] std::optional<std::uint32_t> node_index(std::string_view id) const;
  [[nodiscard]] bool contains(std::string_view id) const { return node_index(id).has_value(); }
  [[nodiscard]] const std::string& node_id(std::uint32_t index) const { return ids_.at(index); }
  [[nodiscard]] std::span<const std::string> node_ids() const noexcept { return ids_; }
  /// Sorted neighbour indices.
  [[nodiscard]] std::span<const std::uint32_t> neighbors(std::uint32_t index) const;
  [[nodiscard]] std::size_t degree(std::uint32_t index) const { return neighbors(index).size(); }

  /// Edge list as (smaller id, larger id), sorted.
  [[nodiscard]] std::vector<IdPair> edges() const;

  /// Induced subgraph on nodes satisfying `keep`.
  template <typename Predicate>
  [[nodiscard]] CitationGraph restricted_to(Predicate keep) const {
    std::vector<IdPair> kept;
    for (auto& edge : edges()) {
      if (keep(edge.first) && keep(edge.second)) kept.push_back(std::move(edge));
    }
    return CitationGraph(kept);
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::uint32_t> offsets_;  // CSR
  std::vector<std::uint32_t> adjacency_;
  std::size_t num_edges_ = 0;
  std::size_t dropped_self_loops_ = 0;
  std::size_t collapsed_duplicates_ = 0;
};

/// "id1<TAB>id2" per line; blank lines and lines starting with '#' ignored.
CitationGraph parse_graph(std::istream& in);
CitationGraph load_graph(const std::filesystem::path& path);

/// Hop counts from `source` (-1 when unreachable). Stops expanding past
/// `max_depth` when given.
std::vector<std::int32_t> bfs_distances(const CitationGraph& graph, std::uint32_t source,
                                        std::optional<std::uint32_t> max_depth = std::nullopt);

/// Shortest link distance; nullopt when unreachable. Throws DataError for an
/// unknown id and std::invalid_argument when a == b.
std::optional<std::uint32_t> sld(const CitationGraph& graph, std::string_view a,
                                 std::string_view b);

/// 1/d; 0 when unreachable.
double lb_sim(std::optional<std::uint32_t> distance);

struct SldPairSample {
  std::uint32_t sld = 0;
  std::vector<IdPair> pairs;  ///< unordered, stored as (smaller id, larger id)
  std::uint64_t seed = 0;
  bool shortage = false;      ///< fewer than the requested count exist / were found
};

/// Seeded sample of distinct unordered pairs at exactly distance `d`.
SldPairSample sample_pairs_at_sld(const CitationGraph& graph, std::uint32_t d, std::size_t count,
                                  std::uint64_t seed);

/// CSV "d,id1,id2" preceded by a "# seed=N" comment.
void write_pair_samples(std::ostream& out, std::span<const SldPairSample> samples,
                        std::uint64_t seed);
std::vector<SldPairSample> read_pair_samples(std::istream& in);

}  // namespace pararank::citegraph
