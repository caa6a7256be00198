#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "imbed/finite_group.hpp"
#include "imbed/graph.hpp"

namespace imbed {

inline constexpr std::size_t kDefaultBallCap = 1'000'000;

struct Syllable {
  VertexIndex vertex = 0;
  int element = 0;  // index into the vertex group; 0 (identity) only in raw input

  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

// An element of a graph product, always held in canonical normal form: a
// reduced sequence, shuffled to the lexicographically smallest arrangement of
// (vertex, element) pairs. Equality is syntactic.
class Element {
 public:
  Element() = default;  // identity, usable in any context

  std::span<const Syllable> syllables() const noexcept { return syllables_; }
  std::size_t length() const noexcept { return syllables_.size(); }
  bool is_identity() const noexcept { return syllables_.empty(); }
  std::uint64_t context() const noexcept { return context_; }

  friend bool operator==(const Element& a, const Element& b) { return a.syllables_ == b.syllables_; }
  friend auto operator<=>(const Element& a, const Element& b) { return a.syllables_ <=> b.syllables_; }

 private:
  friend class GraphProduct;
  Element(std::vector<Syllable> syllables, std::uint64_t context)
      : syllables_(std::move(syllables)), context_(context) {}

  std::vector<Syllable> syllables_;
  std::uint64_t context_ = 0;
};

struct ElementHash {
  std::size_t operator()(const Element& g) const noexcept;
};

// g = a * l * h with a in A_v, l supported on lk(v), and h either trivial or
// with every shuffle-leading syllable outside st(v).
struct AlhDecomposition {
  Element a;
  Element l;
  Element h;
};

// The graph product of finite table-given vertex groups over a finite simple
// graph: normal forms, group operations, retractions, and the truncated
// enumerations (balls, coset representatives) used by the coupling builders.
class GraphProduct {
 public:
  GraphProduct(Graph graph, std::vector<FiniteGroup> groups);

  const Graph& graph() const noexcept { return graph_; }
  const FiniteGroup& group(VertexIndex v) const { return groups_.at(v); }
  const std::vector<FiniteGroup>& groups() const noexcept { return groups_; }
  std::size_t vertex_count() const noexcept { return graph_.size(); }
  std::uint64_t id() const noexcept { return id_; }
  // Same graph and identical vertex tables.
  bool same_structure(const GraphProduct& other) const;

  Element identity() const { return Element({}, id_); }
  Element syllable(VertexIndex v, int element) const;

  // Normal form of a raw syllable sequence. Identity syllables are dropped.
  // Throws Error(validation) on unknown vertices or element indices.
  Element reduce(std::span<const Syllable> raw) const;
  bool is_reduced(std::span<const Syllable> raw) const;

  Element multiply(const Element& a, const Element& b) const;
  Element invert(const Element& a) const;
  // Re-validates an element of a structurally identical product in this context.
  Element adopt(const Element& foreign) const;

  // Deletes syllables at vertices outside `subset` (sorted) and reduces.
  Element retraction(const Element& g, const VertexSet& subset) const;
  AlhDecomposition alh_decompose(const Element& g, VertexIndex v) const;

  // Every element of syllable length <= radius, in BFS order (by length, then
  // canonical order). Throws Error(resource_cap) past `cap` elements.
  std::vector<Element> ball(std::size_t radius, std::size_t cap = kDefaultBallCap) const;

  // g = w * gamma with gamma in A_v and w free of any A_v syllable that can be
  // shuffled to the end. The pair is unique.
  struct CosetSplit {
    Element w;
    int gamma = 0;
  };
  CosetSplit split_right_coset(const Element& g, VertexIndex v) const;
  bool in_coset_reps(const Element& g, VertexIndex v) const;
  std::vector<Element> coset_reps(VertexIndex v, std::size_t radius,
                                  std::size_t cap = kDefaultBallCap) const;

  // The maximal right factor of g lying in the standard subgroup on lk(v), and
  // what remains once it is stripped.
  struct LinkTailSplit {
    Element head;
    Element tail;
  };
  LinkTailSplit split_link_tail(const Element& g, VertexIndex v) const;
  // Membership in the minimal-length transversal of right H_lk(v)-orbits on W.
  bool in_orbit_reps(const Element& w, VertexIndex v) const;
  // One minimal (length, then canonical order) element per right H_lk(v)-orbit
  // meeting `coset_reps`. Orbit keys come from split_link_tail.
  std::vector<Element> orbit_reps(std::span<const Element> coset_reps, VertexIndex v) const;

  std::string format(const Element& g) const;
  std::string format(const Syllable& s) const;

 private:
  bool commute(VertexIndex a, VertexIndex b) const { return a != b && graph_.adjacent(a, b); }
  void validate(const Syllable& s) const;
  void check_context(const Element& g) const;
  void append(std::vector<Syllable>& word, Syllable s) const;
  std::vector<Syllable> canonical_order(std::vector<Syllable> word) const;
  Element make(std::vector<Syllable> reduced) const;

  Graph graph_;
  std::vector<FiniteGroup> groups_;
  std::uint64_t id_;
};

}  // namespace imbed
