#include "imbed/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "imbed/error.hpp"

namespace imbed {

Graph::Graph(std::vector<std::string> vertices,
             const std::vector<std::pair<std::string, std::string>>& edges)
    : names_(std::move(vertices)) {
  std::set<std::string> seen;
  for (const auto& v : names_)
    if (!seen.insert(v).second) throw Error(ErrorCode::validation, "duplicate vertex '" + v + "'");
  adjacency_.assign(names_.size(), std::vector<bool>(names_.size(), false));
  for (const auto& [a, b] : edges) {
    auto ia = find(a);
    auto ib = find(b);
    if (!ia) throw Error(ErrorCode::validation, "edge (" + a + "," + b + ") has unknown endpoint '" + a + "'");
    if (!ib) throw Error(ErrorCode::validation, "edge (" + a + "," + b + ") has unknown endpoint '" + b + "'");
    if (*ia == *ib) throw Error(ErrorCode::validation, "self-loop at '" + a + "'");
    if (adjacency_[*ia][*ib]) throw Error(ErrorCode::validation, "duplicate edge (" + a + "," + b + ")");
    adjacency_[*ia][*ib] = adjacency_[*ib][*ia] = true;
  }
}

const std::string& Graph::name(VertexIndex v) const {
  if (v >= names_.size()) throw Error(ErrorCode::validation, "vertex index " + std::to_string(v) + " out of range");
  return names_[v];
}

std::optional<VertexIndex> Graph::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<VertexIndex>(it - names_.begin());
}

VertexIndex Graph::index_of(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw Error(ErrorCode::validation, "unknown vertex '" + std::string(name) + "'");
}

std::vector<std::pair<VertexIndex, VertexIndex>> Graph::edges() const {
  std::vector<std::pair<VertexIndex, VertexIndex>> out;
  for (VertexIndex a = 0; a < size(); ++a)
    for (VertexIndex b = a + 1; b < size(); ++b)
      if (adjacency_[a][b]) out.emplace_back(a, b);
  return out;
}

bool Graph::has_edges() const noexcept {
  for (const auto& row : adjacency_)
    if (std::find(row.begin(), row.end(), true) != row.end()) return true;
  return false;
}

VertexSet Graph::link(VertexIndex v) const {
  name(v);
  VertexSet out;
  for (VertexIndex u = 0; u < size(); ++u)
    if (adjacency_[v][u]) out.push_back(u);
  return out;
}

VertexSet Graph::star(VertexIndex v) const {
  auto out = link(v);
  out.insert(std::lower_bound(out.begin(), out.end(), v), v);
  return out;
}

VertexSet neighborhood(const Graph& graph, std::string_view vertex, Neighborhood kind) {
  VertexIndex v = graph.index_of(vertex);
  return kind == Neighborhood::link ? graph.link(v) : graph.star(v);
}

Irreducibility is_irreducible(const Graph& graph) {
  if (graph.empty()) throw Error(ErrorCode::validation, "irreducibility of the empty graph is undefined");
  const std::size_t n = graph.size();
  // Components of the complement graph.
  std::vector<int> component(n, -1);
  std::vector<VertexSet> components;
  for (VertexIndex start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    VertexSet members{start};
    component[start] = static_cast<int>(components.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (VertexIndex u = 0; u < n; ++u) {
        if (u != members[i] && !graph.adjacent(members[i], u) && component[u] < 0) {
          component[u] = component[start];
          members.push_back(u);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  if (components.size() == 1) return {};
  auto smallest = std::min_element(components.begin(), components.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.front() < b.front();
  });
  JoinWitness witness;
  witness.first = *smallest;
  for (VertexIndex v = 0; v < n; ++v)
    if (!std::binary_search(smallest->begin(), smallest->end(), v)) witness.second.push_back(v);
  return {false, std::move(witness)};
}

}  // namespace imbed
