#pragma once

#include <random>
#include <string>
#include <vector>

#include "imbed/finite_group.hpp"
#include "imbed/graph.hpp"
#include "imbed/graph_product.hpp"
#include "imbed/measure.hpp"

namespace fixture {

using namespace imbed;

inline Graph path(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("v" + std::to_string(i));
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(names[i - 1], names[i]);
  return Graph(names, edges);
}

inline Graph edgeless(std::vector<std::string> names) { return Graph(std::move(names), {}); }

inline Graph complete(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(names[i], names[j]);
  return Graph(names, edges);
}

// K_{1,3} with the center listed second.
inline Graph star_k13() { return Graph({"v1", "v2", "v3", "v4"}, {{"v2", "v1"}, {"v2", "v3"}, {"v2", "v4"}}); }

inline FiniteGroup z(int n, const std::string& symbol = "t") { return FiniteGroup::cyclic(n, symbol); }

inline GraphProduct p4_z2() { return GraphProduct(path(4), std::vector<FiniteGroup>(4, z(2, "b"))); }

// P4 with Z4 at v1 and Z2 elsewhere.
inline GraphProduct p4_z4_at_v1() { return GraphProduct(path(4), {z(4, "t"), z(2, "b"), z(2, "b"), z(2, "b")}); }

// Z2 * Z4 = <g> * <t>; vGamma is vertex 1.
inline GraphProduct z2_free_z4() { return GraphProduct(edgeless({"vG", "vGamma"}), {z(2, "g"), z(4, "t")}); }

inline std::vector<Syllable> random_raw(const GraphProduct& p, std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), vert(0, p.vertex_count() - 1);
  std::vector<Syllable> w(len(rng));
  for (auto& s : w) {
    s.vertex = vert(rng);
    s.element = std::uniform_int_distribution<int>(0, p.group(s.vertex).order() - 1)(rng);
  }
  return w;
}

inline Element random_element(const GraphProduct& p, std::mt19937_64& rng, std::size_t max_len) {
  return p.reduce(random_raw(p, rng, max_len));
}

inline std::vector<Syllable> syllables(const Element& g) { return {g.syllables().begin(), g.syllables().end()}; }

// Z2 -> Z4 with alpha(s, x) = t^2 on a one-point space.
inline SmiSystem z2_to_z4() {
  return SmiSystem(make_cocycle(make_action(z(2, "s"), make_space({Rational(1)}), {{1, {0}}}), z(4, "t"), {{1, {2}}}));
}

// Z4 -> Z8 with alpha(t, x) = u^2 on a one-point space.
inline SmiSystem z4_to_z8() {
  return SmiSystem(make_cocycle(make_action(z(4, "t"), make_space({Rational(1)}), {{1, {0}}}), z(8, "u"), {{1, {2}}}));
}

inline SmiSystem identity_z2() { return identity_system(z(2, "s")); }

}  // namespace fixture
