#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imbed {

using VertexIndex = std::size_t;
using VertexSet = std::vector<VertexIndex>;  // sorted ascending

// A finite simple graph. The listed vertex order is the total order used for
// canonical syllable shuffling.
class Graph {
 public:
  Graph() = default;
  // Throws Error(validation) on duplicate vertices, self-loops, duplicate
  // edges and unknown endpoints, naming the offending item.
  Graph(std::vector<std::string> vertices,
        const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(VertexIndex v) const;
  const std::vector<std::string>& names() const noexcept { return names_; }
  VertexIndex index_of(std::string_view name) const;
  std::optional<VertexIndex> find(std::string_view name) const;

  bool adjacent(VertexIndex a, VertexIndex b) const { return adjacency_[a][b]; }
  std::vector<std::pair<VertexIndex, VertexIndex>> edges() const;
  bool has_edges() const noexcept;

  VertexSet link(VertexIndex v) const;
  VertexSet star(VertexIndex v) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> adjacency_;
};

enum class Neighborhood { link, star };

VertexSet neighborhood(const Graph& graph, std::string_view vertex, Neighborhood kind);

struct JoinWitness {
  VertexSet first;
  VertexSet second;
};

struct Irreducibility {
  bool irreducible = true;
  std::optional<JoinWitness> witness;  // set iff !irreducible
};

// A graph is a join of two nonempty full subgraphs iff its complement is
// disconnected. The witness takes a smallest complement component (ties: the
// one with the smallest vertex) as the first part. Throws on an empty graph.
Irreducibility is_irreducible(const Graph& graph);

}  // namespace imbed
