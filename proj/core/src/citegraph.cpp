#include "pararank/citegraph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "pararank/errors.hpp"
#include "pararank/random.hpp"
#include "text_util.hpp"

namespace pararank::citegraph {

namespace {

// Exhaustive enumeration is only attempted up to this many nodes.
constexpr std::size_t kExhaustiveNodeLimit = 20000;

}  // namespace

CitationGraph::CitationGraph(std::span<const IdPair> edges) {
  std::vector<std::string> ids;
  ids.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  ids_ = std::move(ids);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> undirected;
  undirected.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    const auto ia = *node_index(a);
    const auto ib = *node_index(b);
    if (ia == ib) {
      ++dropped_self_loops_;
      continue;
    }
    undirected.emplace_back(std::min(ia, ib), std::max(ia, ib));
  }
  std::sort(undirected.begin(), undirected.end());
  const auto unique_end = std::unique(undirected.begin(), undirected.end());
  collapsed_duplicates_ = static_cast<std::size_t>(undirected.end() - unique_end);
  undirected.erase(unique_end, undirected.end());
  num_edges_ = undirected.size();

  std::vector<std::uint32_t> degree(ids_.size(), 0);
  for (const auto& [a, b] : undirected) {
    ++degree[a];
    ++degree[b];
  }
  offsets_.assign(ids_.size() + 1, 0);
  for (std::size_t i = 0; i < ids_.size(); ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b] : undirected) {
    adjacency_[cursor[a]++] = b;
    adjacency_[cursor[b]++] = a;
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }
}

std::optional<std::uint32_t> CitationGraph::node_index(std::string_view id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id,
                                   [](const std::string& a, std::string_view b) { return a < b; });
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - ids_.begin());
}

std::span<const std::uint32_t> CitationGraph::neighbors(std::uint32_t index) const {
  if (index >= ids_.size()) throw std::out_of_range("node index out of range");
  return std::span<const std::uint32_t>(adjacency_).subspan(offsets_[index], offsets_[index + 1] - offsets_[index]);
}

std::vector<IdPair> CitationGraph::edges() const {
  std::vector<IdPair> out;
  out.reserve(num_edges_);
  for (std::uint32_t a = 0; a < ids_.size(); ++a) {
    for (const auto b : neighbors(a)) {
      if (a < b) out.emplace_back(ids_[a], ids_[b]);
    }
  }
  return out;
}

CitationGraph parse_graph(std::istream& in) {
  std::vector<IdPair> edges;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto row = detail::chomp(line);
    if (detail::trim(row).empty() || row.starts_with('#')) continue;
    const auto fields = detail::split_char(row, '\t');
    if (fields.size() != 2 || detail::trim(fields[0]).empty() || detail::trim(fields[1]).empty()) {
      throw DataError("edge file line " + std::to_string(line_number) + ": expected id1<TAB>id2");
    }
    edges.emplace_back(std::string(detail::trim(fields[0])), std::string(detail::trim(fields[1])));
  }
  return CitationGraph(edges);
}

CitationGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge file " + path.string());
  return parse_graph(in);
}

std::vector<std::int32_t> bfs_distances(const CitationGraph& graph, std::uint32_t source,
                                        std::optional<std::uint32_t> max_depth) {
  std::vector<std::int32_t> distance(graph.num_nodes(), -1);
  if (source >= graph.num_nodes()) throw std::out_of_range("bfs source out of range");
  std::deque<std::uint32_t> frontier{source};
  distance[source] = 0;
  while (!frontier.empty()) {
    const auto node = frontier.front();
    frontier.pop_front();
    if (max_depth && static_cast<std::uint32_t>(distance[node]) >= *max_depth) continue;
    for (const auto next : graph.neighbors(node)) {
      if (distance[next] < 0) {
        distance[next] = distance[node] + 1;
        frontier.push_back(next);
      }
    }
  }
  return distance;
}

std::optional<std::uint32_t> sld(const CitationGraph& graph, std::string_view a, std::string_view b) {
  const auto ia = graph.node_index(a);
  const auto ib = graph.node_index(b);
  if (!ia) throw DataError("unknown judgment id '" + std::string(a) + "'");
  if (!ib) throw DataError("unknown judgment id '" + std::string(b) + "'");
  if (*ia == *ib) throw std::invalid_argument("sld: a and b must differ");

  // Bidirectional search would be faster; plain BFS with early exit is enough here.
  std::vector<std::int32_t> distance(graph.num_nodes(), -1);
  std::deque<std::uint32_t> frontier{*ia};
  distance[*ia] = 0;
  while (!frontier.empty()) {
    const auto node = frontier.front();
    frontier.pop_front();
    for (const auto next : graph.neighbors(node)) {
      if (distance[next] >= 0) continue;
      distance[next] = distance[node] + 1;
      if (next == *ib) return static_cast<std::uint32_t>(distance[next]);
      frontier.push_back(next);
    }
  }
  return std::nullopt;
}

double lb_sim(std::optional<std::uint32_t> distance) {
  if (!distance) return 0.0;
  if (*distance == 0) throw std::invalid_argument("lb_sim: distance must be >= 1");
  return 1.0 / static_cast<double>(*distance);
}

SldPairSample sample_pairs_at_sld(const CitationGraph& graph, std::uint32_t d, std::size_t count,
                                  std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("sample_pairs_at_sld: d must be >= 1");
  if (count == 0) throw std::invalid_argument("sample_pairs_at_sld: count must be >= 1");

  SldPairSample sample;
  sample.sld = d;
  sample.seed = seed;
  const std::size_t n = graph.num_nodes();
  if (n < 2) {
    sample.shortage = true;
    return sample;
  }

  auto rng = make_rng(seed, d);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> picked;
  auto accept = [&](std::uint32_t a, std::uint32_t b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    if (seen.insert(key).second) picked.push_back(key);
  };

  // Random source, random node at exactly depth d.
  const std::size_t max_attempts = 10 * count;
  std::vector<std::uint32_t> at_depth;
  for (std::size_t attempt = 0; attempt < max_attempts && picked.size() < count; ++attempt) {
    const auto source = static_cast<std::uint32_t>(uniform_index(rng, n));
    const auto distance = bfs_distances(graph, source, d);
    at_depth.clear();
    for (std::uint32_t v = 0; v < n; ++v) {
      if (distance[v] == static_cast<std::int32_t>(d)) at_depth.push_back(v);
    }
    if (at_depth.empty()) continue;
    accept(source, at_depth[uniform_index(rng, at_depth.size())]);
  }

  // Random probing fell short: enumerate the remaining pairs on small graphs.
  if (picked.size() < count && n <= kExhaustiveNodeLimit) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> remaining;
    for (std::uint32_t a = 0; a < n; ++a) {
      const auto distance = bfs_distances(graph, a, d);
      for (std::uint32_t b = a + 1; b < n; ++b) {
        if (distance[b] == static_cast<std::int32_t>(d) && !seen.contains({a, b})) remaining.emplace_back(a, b);
      }
    }
    for (std::size_t i = remaining.size(); i > 1; --i) {
      std::swap(remaining[i - 1], remaining[uniform_index(rng, i)]);
    }
    for (const auto& [a, b] : remaining) {
      if (picked.size() >= count) break;
      accept(a, b);
    }
  }

  sample.shortage = picked.size() < count;
  sample.pairs.reserve(picked.size());
  for (const auto& [a, b] : picked) sample.pairs.emplace_back(graph.node_id(a), graph.node_id(b));
  return sample;
}

void write_pair_samples(std::ostream& out, std::span<const SldPairSample> samples, std::uint64_t seed) {
  out << "# seed=" << seed << '\n' << "d,id1,id2\n";
  for (const auto& sample : samples) {
    for (const auto& [a, b] : sample.pairs) out << sample.sld << ',' << a << ',' << b << '\n';
  }
}

std::vector<SldPairSample> read_pair_samples(std::istream& in) {
  std::vector<SldPairSample> samples;
  std::uint64_t seed = 0;
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    const auto row = detail::chomp(line);
    if (row.empty()) continue;
    if (row.starts_with("# seed=")) {
      const auto text = row.substr(7);
      const auto r = std::from_chars(text.data(), text.data() + text.size(), seed);
      if (r.ec != std::errc{}) throw DataError("pair sample: bad seed comment");
      continue;
    }
    if (row.starts_with('#')) continue;
    if (!header_seen) {
      if (row != "d,id1,id2") throw DataError("pair sample: expected header d,id1,id2");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split_char(row, ',');
    std::uint32_t d = 0;
    if (fields.size() != 3 ||
        std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), d).ec != std::errc{}) {
      throw DataError("pair sample line " + std::to_string(line_number) + ": expected d,id1,id2");
    }
    if (samples.empty() || samples.back().sld != d) {
      samples.push_back({});
      samples.back().sld = d;
    }
    samples.back().pairs.emplace_back(std::string(fields[1]), std::string(fields[2]));
  }
  for (auto& s : samples) s.seed = seed;
  return samples;
}

}  // namespace pararank::citegraph
