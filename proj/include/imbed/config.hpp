#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "imbed/finite_group.hpp"
#include "imbed/graph.hpp"
#include "imbed/graph_product.hpp"
#include "imbed/measure.hpp"

namespace imbed {

using Json = nlohmann::ordered_json;

struct GroupSpec {
  std::optional<int> cyclic;  // set for {"cyclic": n}
  std::string symbol = "t";
  FiniteGroup group = FiniteGroup::trivial();
};

struct SystemSpec {
  std::string source;
  std::string target;
  std::vector<std::string> point_names;
  std::vector<Rational> weights;
  GeneratorTable<std::size_t> action;  // source element -> permutation
  GeneratorTable<int> cocycle;         // source element -> value per point
};

struct CouplingSpec {
  std::string lambda;
  std::string gamma;
  std::vector<Rational> weights;
  GeneratorTable<std::size_t> lambda_action;
  GeneratorTable<std::size_t> gamma_action;
};

// A parsed configuration. Every cross-reference has been resolved and every
// group, graph, system and coupling validated; `params` is kept verbatim.
struct Config {
  std::map<std::string, GroupSpec> groups;
  std::optional<Graph> graph;
  std::map<std::string, std::string> vertex_groups;
  std::map<std::string, SystemSpec> systems;
  std::map<std::string, CouplingSpec> couplings;
  std::optional<std::vector<std::pair<std::string, std::string>>> word;  // (vertex, element name)
  Json params = Json::object();

  const FiniteGroup& group(const std::string& name) const;
  SmiSystem system(const std::string& name) const;
  FiniteCoupling coupling(const std::string& name) const;
  // The vertex groups in graph order.
  std::vector<FiniteGroup> graph_groups() const;
};

// Throws Error(config): syntax errors carry the byte position, schema errors
// the JSON path, dangling references the missing name. Validation failures of
// the objects themselves are rethrown as config errors prefixed with the path.
Config parse_config(std::string_view text);
Json serialize_config(const Config& config);

// A raw word from a string "v1:s v2:t^2" or a list [["v1","s"], ...].
std::vector<std::pair<std::string, std::string>> parse_word(const Json& j, const std::string& path);

std::vector<Syllable> resolve_word(const GraphProduct& product,
                                   const std::vector<std::pair<std::string, std::string>>& word);

}  // namespace imbed
