#include "imbed/graph_product.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>

#include "imbed/error.hpp"

namespace imbed {

namespace {

std::uint64_t next_context_id() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

}  // namespace

std::size_t ElementHash::operator()(const Element& g) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto& s : g.syllables()) {
    h ^= (s.vertex << 20) ^ static_cast<std::size_t>(s.element);
    h *= 0x100000001b3ull;
  }
  return h;
}

GraphProduct::GraphProduct(Graph graph, std::vector<FiniteGroup> groups)
    : graph_(std::move(graph)), groups_(std::move(groups)), id_(next_context_id()) {
  if (groups_.size() != graph_.size())
    throw Error(ErrorCode::validation, "graph product needs one vertex group per vertex (" +
                                           std::to_string(graph_.size()) + " vertices, " +
                                           std::to_string(groups_.size()) + " groups)");
}

bool GraphProduct::same_structure(const GraphProduct& other) const {
  if (!(graph_ == other.graph_)) return false;
  for (std::size_t v = 0; v < groups_.size(); ++v)
    if (!groups_[v].same_table(other.groups_[v])) return false;
  return true;
}

void GraphProduct::validate(const Syllable& s) const {
  if (s.vertex >= graph_.size())
    throw Error(ErrorCode::validation, "syllable at unknown vertex index " + std::to_string(s.vertex));
  if (!groups_[s.vertex].contains(s.element))
    throw Error(ErrorCode::validation, "element " + std::to_string(s.element) + " not in vertex group of '" +
                                           graph_.name(s.vertex) + "'");
}

void GraphProduct::check_context(const Element& g) const {
  if (g.context_ != 0 && g.context_ != id_)
    throw Error(ErrorCode::mismatch, "element belongs to a different graph product context");
}

Element GraphProduct::syllable(VertexIndex v, int element) const {
  Syllable s{v, element};
  return reduce(std::span<const Syllable>(&s, 1));
}

// `word` is reduced in some shuffle. Scan back through syllables commuting with
// s.vertex: the first same-vertex syllable absorbs s; otherwise s is appended.
void GraphProduct::append(std::vector<Syllable>& word, Syllable s) const {
  for (std::size_t j = word.size(); j-- > 0;) {
    if (word[j].vertex == s.vertex) {
      int merged = groups_[s.vertex].multiply(word[j].element, s.element);
      if (merged == 0)
        word.erase(word.begin() + static_cast<std::ptrdiff_t>(j));
      else
        word[j].element = merged;
      return;
    }
    if (!commute(word[j].vertex, s.vertex)) break;
  }
  word.push_back(s);
}

// Lexicographically smallest shuffle: repeatedly emit the smallest-vertex
// syllable that no remaining earlier syllable blocks.
std::vector<Syllable> GraphProduct::canonical_order(std::vector<Syllable> word) const {
  const std::size_t n = word.size();
  std::vector<Syllable> out;
  out.reserve(n);
  std::vector<bool> used(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (best < n && word[j].vertex >= word[best].vertex) continue;
      bool minimal = true;
      for (std::size_t i = 0; i < j && minimal; ++i)
        if (!used[i] && !commute(word[i].vertex, word[j].vertex)) minimal = false;
      if (minimal) best = j;
    }
    used[best] = true;
    out.push_back(word[best]);
  }
  return out;
}

Element GraphProduct::make(std::vector<Syllable> reduced) const {
  return Element(canonical_order(std::move(reduced)), id_);
}

Element GraphProduct::reduce(std::span<const Syllable> raw) const {
  std::vector<Syllable> word;
  word.reserve(raw.size());
  for (const auto& s : raw) {
    validate(s);
    if (s.element != 0) append(word, s);
  }
  return make(std::move(word));
}

bool GraphProduct::is_reduced(std::span<const Syllable> raw) const {
  for (const auto& s : raw) {
    validate(s);
    if (s.element == 0) return false;
  }
  return reduce(raw).length() == raw.size();
}

Element GraphProduct::multiply(const Element& a, const Element& b) const {
  check_context(a);
  check_context(b);
  std::vector<Syllable> word(a.syllables_.begin(), a.syllables_.end());
  for (const auto& s : b.syllables_) append(word, s);
  return make(std::move(word));
}

Element GraphProduct::invert(const Element& a) const {
  check_context(a);
  std::vector<Syllable> word;
  word.reserve(a.length());
  for (auto it = a.syllables_.rbegin(); it != a.syllables_.rend(); ++it)
    word.push_back({it->vertex, groups_[it->vertex].inverse(it->element)});
  return make(std::move(word));
}

Element GraphProduct::adopt(const Element& foreign) const {
  return reduce(foreign.syllables());
}

Element GraphProduct::retraction(const Element& g, const VertexSet& subset) const {
  check_context(g);
  std::vector<Syllable> kept;
  for (const auto& s : g.syllables_)
    if (std::binary_search(subset.begin(), subset.end(), s.vertex)) kept.push_back(s);
  return reduce(kept);
}

AlhDecomposition GraphProduct::alh_decompose(const Element& g, VertexIndex v) const {
  check_context(g);
  graph_.name(v);
  const auto& word = g.syllables_;
  const std::size_t n = word.size();
  std::vector<bool> taken(n, false);

  AlhDecomposition out{identity(), identity(), identity()};
  for (std::size_t j = 0; j < n; ++j) {
    if (word[j].vertex == v) {
      out.a = Element({word[j]}, id_);
      taken[j] = true;
      break;
    }
    if (!commute(word[j].vertex, v)) break;
  }

  // Largest front factor supported on lk(v): a syllable joins it when every
  // earlier syllable outside the factor commutes with it.
  std::vector<bool> in_link(n, false);
  std::vector<Syllable> link_part, rest;
  for (std::size_t j = 0; j < n; ++j) {
    if (taken[j]) continue;
    bool ok = commute(word[j].vertex, v);
    for (std::size_t i = 0; i < j && ok; ++i)
      if (!taken[i] && !in_link[i] && !commute(word[i].vertex, word[j].vertex)) ok = false;
    in_link[j] = ok;
    (ok ? link_part : rest).push_back(word[j]);
  }
  out.l = make(std::move(link_part));
  out.h = make(std::move(rest));
  return out;
}

std::vector<Element> GraphProduct::ball(std::size_t radius, std::size_t cap) const {
  std::vector<Element> out{identity()};
  if (out.size() > cap) throw Error(ErrorCode::resource_cap, "truncation cap " + std::to_string(cap) + " exceeded");
  std::size_t level_begin = 0;
  for (std::size_t r = 1; r <= radius; ++r) {
    std::set<std::vector<Syllable>> next;
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (VertexIndex v = 0; v < graph_.size(); ++v) {
        for (int a = 1; a < groups_[v].order(); ++a) {
          std::vector<Syllable> word(out[i].syllables_.begin(), out[i].syllables_.end());
          append(word, {v, a});
          if (word.size() != r) continue;
          next.insert(canonical_order(std::move(word)));
          if (out.size() + next.size() > cap)
            throw Error(ErrorCode::resource_cap,
                        "truncation cap " + std::to_string(cap) + " exceeded at radius " + std::to_string(r));
        }
      }
    }
    if (next.empty()) break;
    level_begin = level_end;
    for (const auto& word : next) out.push_back(Element(word, id_));
  }
  return out;
}

GraphProduct::CosetSplit GraphProduct::split_right_coset(const Element& g, VertexIndex v) const {
  check_context(g);
  const auto& word = g.syllables_;
  for (std::size_t j = word.size(); j-- > 0;) {
    if (word[j].vertex == v) {
      std::vector<Syllable> rest(word.begin(), word.end());
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      return {make(std::move(rest)), word[j].element};
    }
    if (!commute(word[j].vertex, v)) break;
  }
  return {g, 0};
}

bool GraphProduct::in_coset_reps(const Element& g, VertexIndex v) const {
  return split_right_coset(g, v).gamma == 0;
}

std::vector<Element> GraphProduct::coset_reps(VertexIndex v, std::size_t radius, std::size_t cap) const {
  graph_.name(v);
  std::vector<Element> out;
  for (auto& g : ball(radius, cap))
    if (in_coset_reps(g, v)) out.push_back(std::move(g));
  return out;
}

GraphProduct::LinkTailSplit GraphProduct::split_link_tail(const Element& g, VertexIndex v) const {
  check_context(g);
  const auto& word = g.syllables_;
  const std::size_t n = word.size();
  std::vector<bool> in_tail(n, false);
  for (std::size_t j = n; j-- > 0;) {
    bool ok = commute(word[j].vertex, v);
    for (std::size_t k = j + 1; k < n && ok; ++k)
      if (!in_tail[k] && !commute(word[j].vertex, word[k].vertex)) ok = false;
    in_tail[j] = ok;
  }
  std::vector<Syllable> head, tail;
  for (std::size_t j = 0; j < n; ++j) (in_tail[j] ? tail : head).push_back(word[j]);
  return {make(std::move(head)), make(std::move(tail))};
}

bool GraphProduct::in_orbit_reps(const Element& w, VertexIndex v) const {
  return in_coset_reps(w, v) && split_link_tail(w, v).tail.is_identity();
}

std::vector<Element> GraphProduct::orbit_reps(std::span<const Element> coset_reps, VertexIndex v) const {
  std::map<Element, Element> best;  // orbit key -> minimal member seen
  for (const auto& w : coset_reps) {
    auto key = split_link_tail(w, v).head;
    auto [it, inserted] = best.try_emplace(key, w);
    if (!inserted) {
      const auto& cur = it->second;
      if (w.length() < cur.length() || (w.length() == cur.length() && w < cur)) it->second = w;
    }
  }
  std::vector<Element> out;
  for (auto& [key, rep] : best) out.push_back(rep);
  std::sort(out.begin(), out.end(), [](const Element& a, const Element& b) {
    return a.length() != b.length() ? a.length() < b.length() : a < b;
  });
  return out;
}

std::string GraphProduct::format(const Syllable& s) const {
  return graph_.name(s.vertex) + ":" + groups_.at(s.vertex).element_name(s.element);
}

std::string GraphProduct::format(const Element& g) const {
  if (g.is_identity()) return "e";
  std::string out;
  for (const auto& s : g.syllables()) {
    if (!out.empty()) out += " ";
    out += format(s);
  }
  return out;
}

}  // namespace imbed
