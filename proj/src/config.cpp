#include "imbed/config.hpp"

#include <algorithm>
#include <sstream>

#include "imbed/error.hpp"

namespace imbed {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::config, path + ": " + why);
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(path, "missing required key '" + key + "'");
  return *it;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

long long as_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<long long>();
}

Rational as_rational(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    schema(path, e.what());
  }
  schema(path, "expected an exact rational (integer or \"p/q\" string)");
}

int element_ref(const Json& j, const FiniteGroup& group, const std::string& path) {
  std::optional<int> found;
  if (j.is_number_integer()) {
    auto v = j.get<long long>();
    if (v >= 0 && v < group.order()) found = static_cast<int>(v);
  } else if (j.is_string()) {
    found = group.find_element(j.get<std::string>());
  } else {
    schema(path, "expected an element name or index");
  }
  if (!found) schema(path, "'" + (j.is_string() ? j.get<std::string>() : j.dump()) + "' is not an element of group '" +
                               group.name() + "'");
  return *found;
}

std::size_t point_ref(const Json& j, const std::vector<std::string>& names, const std::string& path) {
  if (j.is_number_integer()) {
    auto v = j.get<long long>();
    if (v >= 0 && static_cast<std::size_t>(v) < names.size()) return static_cast<std::size_t>(v);
  } else if (j.is_string()) {
    auto it = std::find(names.begin(), names.end(), j.get<std::string>());
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  }
  schema(path, "unknown point " + j.dump());
}

template <typename F>
auto rethrow_as_config(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    schema(path, e.what());
  }
}

std::string dotted(const std::string& path, const std::string& key) { return path + "." + key; }
std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

GroupSpec parse_group(const std::string& name, const Json& j, const std::string& path) {
  GroupSpec spec;
  if (!j.is_object()) schema(path, "expected {\"cyclic\": n} or {\"table\": ..., \"names\": ...}");
  if (j.contains("cyclic")) {
    auto n = as_integer(j["cyclic"], dotted(path, "cyclic"));
    if (n < 1 || n > 4096) schema(dotted(path, "cyclic"), "order must be between 1 and 4096");
    spec.cyclic = static_cast<int>(n);
    if (j.contains("symbol")) spec.symbol = as_string(j["symbol"], dotted(path, "symbol"));
    spec.group = rethrow_as_config(path, [&] { return FiniteGroup::cyclic(*spec.cyclic, spec.symbol, name); });
    return spec;
  }
  const auto& table_json = require(j, "table", path);
  if (!table_json.is_array()) schema(dotted(path, "table"), "expected an array of rows");
  std::vector<std::vector<int>> table;
  for (std::size_t r = 0; r < table_json.size(); ++r) {
    const auto row_path = indexed(dotted(path, "table"), r);
    if (!table_json[r].is_array()) schema(row_path, "expected an array");
    std::vector<int> row;
    for (std::size_t c = 0; c < table_json[r].size(); ++c)
      row.push_back(static_cast<int>(as_integer(table_json[r][c], indexed(row_path, c))));
    table.push_back(std::move(row));
  }
  std::vector<std::string> names;
  if (j.contains("names")) {
    const auto& nj = j["names"];
    if (!nj.is_array()) schema(dotted(path, "names"), "expected an array of strings");
    for (std::size_t i = 0; i < nj.size(); ++i) names.push_back(as_string(nj[i], indexed(dotted(path, "names"), i)));
  }
  spec.group = rethrow_as_config(path, [&] { return FiniteGroup(name, std::move(table), std::move(names)); });
  return spec;
}

const FiniteGroup& lookup_group(const std::map<std::string, GroupSpec>& groups, const Json& j,
                                const std::string& path) {
  auto name = as_string(j, path);
  auto it = groups.find(name);
  if (it == groups.end()) schema(path, "dangling reference to group '" + name + "'");
  return it->second.group;
}

GeneratorTable<std::size_t> parse_permutations(const Json& j, const FiniteGroup& group,
                                               const std::vector<std::string>& points, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object mapping generators to permutations");
  GeneratorTable<std::size_t> out;
  for (const auto& [key, perm] : j.items()) {
    const auto gen_path = dotted(path, key);
    int g = element_ref(Json(key), group, gen_path);
    if (!perm.is_array()) schema(gen_path, "expected an array of points");
    std::vector<std::size_t> image;
    for (std::size_t i = 0; i < perm.size(); ++i) image.push_back(point_ref(perm[i], points, indexed(gen_path, i)));
    out.emplace_back(g, std::move(image));
  }
  return out;
}

GeneratorTable<std::size_t> trivial_action(const FiniteGroup& group, std::size_t n) {
  GeneratorTable<std::size_t> out;
  std::vector<std::size_t> id(n);
  for (std::size_t x = 0; x < n; ++x) id[x] = x;
  for (int g : group.generators()) out.emplace_back(g, id);
  return out;
}

std::vector<Rational> parse_weights(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected a nonempty array of weights");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_rational(j[i], indexed(path, i)));
  return out;
}

SystemSpec parse_system(const Config& cfg, const Json& j, const std::string& path) {
  SystemSpec spec;
  const auto& source = lookup_group(cfg.groups, require(j, "source", path), dotted(path, "source"));
  const auto& target = lookup_group(cfg.groups, require(j, "target", path), dotted(path, "target"));
  spec.source = j["source"].get<std::string>();
  spec.target = j["target"].get<std::string>();

  const auto space_path = dotted(path, "space");
  if (!j.contains("space")) {
    spec.weights = {Rational(1)};
  } else if (j["space"].is_array()) {
    spec.weights = parse_weights(j["space"], space_path);
  } else {
    spec.weights = parse_weights(require(j["space"], "weights", space_path), dotted(space_path, "weights"));
    if (j["space"].contains("names")) {
      const auto& nj = j["space"]["names"];
      if (!nj.is_array()) schema(dotted(space_path, "names"), "expected an array of strings");
      for (std::size_t i = 0; i < nj.size(); ++i)
        spec.point_names.push_back(as_string(nj[i], indexed(dotted(space_path, "names"), i)));
    }
  }
  auto space = rethrow_as_config(space_path, [&] { return make_space(spec.weights, spec.point_names); });
  spec.point_names = space.points;
  const std::size_t n = space.size();

  spec.action = j.contains("action") ? parse_permutations(j["action"], source, spec.point_names, dotted(path, "action"))
                                     : trivial_action(source, n);

  const auto& cj = require(j, "cocycle", path);
  const auto cpath = dotted(path, "cocycle");
  if (!cj.is_object()) schema(cpath, "expected an object mapping generators to values");
  for (const auto& [key, values] : cj.items()) {
    const auto gen_path = dotted(cpath, key);
    int g = element_ref(Json(key), source, gen_path);
    std::vector<int> column;
    if (values.is_array()) {
      if (values.size() != n) schema(gen_path, "expected " + std::to_string(n) + " values, one per point");
      for (std::size_t i = 0; i < values.size(); ++i) column.push_back(element_ref(values[i], target, indexed(gen_path, i)));
    } else {
      column.assign(n, element_ref(values, target, gen_path));
    }
    spec.cocycle.emplace_back(g, std::move(column));
  }
  return spec;
}

CouplingSpec parse_coupling(const Config& cfg, const Json& j, const std::string& path) {
  CouplingSpec spec;
  const auto& lambda = lookup_group(cfg.groups, require(j, "lambda", path), dotted(path, "lambda"));
  const auto& gamma = lookup_group(cfg.groups, require(j, "gamma", path), dotted(path, "gamma"));
  spec.lambda = j["lambda"].get<std::string>();
  spec.gamma = j["gamma"].get<std::string>();
  spec.weights = parse_weights(require(j, "weights", path), dotted(path, "weights"));
  std::vector<std::string> points;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) points.push_back(std::to_string(i));
  spec.lambda_action = parse_permutations(require(j, "lambda_action", path), lambda, points, dotted(path, "lambda_action"));
  spec.gamma_action = parse_permutations(require(j, "gamma_action", path), gamma, points, dotted(path, "gamma_action"));
  return spec;
}

}  // namespace

const FiniteGroup& Config::group(const std::string& name) const {
  auto it = groups.find(name);
  if (it == groups.end()) throw Error(ErrorCode::config, "dangling reference to group '" + name + "'");
  return it->second.group;
}

SmiSystem Config::system(const std::string& name) const {
  auto it = systems.find(name);
  if (it == systems.end()) throw Error(ErrorCode::config, "dangling reference to system '" + name + "'");
  const auto& s = it->second;
  auto action = make_action(group(s.source), make_space(s.weights, s.point_names), s.action);
  return SmiSystem(make_cocycle(std::move(action), group(s.target), s.cocycle));
}

FiniteCoupling Config::coupling(const std::string& name) const {
  auto it = couplings.find(name);
  if (it == couplings.end()) throw Error(ErrorCode::config, "dangling reference to coupling '" + name + "'");
  const auto& c = it->second;
  return make_finite_coupling(group(c.lambda), group(c.gamma), c.weights, c.lambda_action, c.gamma_action);
}

std::vector<FiniteGroup> Config::graph_groups() const {
  if (!graph) throw Error(ErrorCode::config, "configuration has no graph");
  std::vector<FiniteGroup> out;
  for (const auto& v : graph->names()) {
    auto it = vertex_groups.find(v);
    if (it == vertex_groups.end()) throw Error(ErrorCode::config, "vertex_groups: no group for vertex '" + v + "'");
    out.push_back(group(it->second));
  }
  return out;
}

Config parse_config(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::config, "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.is_object()) schema("$", "expected a JSON object");
  static const std::vector<std::string> known{"groups", "graph", "vertex_groups", "systems", "couplings", "word", "params"};
  for (const auto& [key, value] : root.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) schema("$." + key, "unknown top-level key");

  Config cfg;
  if (root.contains("groups")) {
    const auto& gj = root["groups"];
    if (!gj.is_object()) schema("$.groups", "expected an object");
    for (const auto& [name, spec] : gj.items()) cfg.groups.emplace(name, parse_group(name, spec, "$.groups." + name));
  }
  if (root.contains("graph")) {
    const auto& g = root["graph"];
    const auto& vj = require(g, "vertices", "$.graph");
    if (!vj.is_array()) schema("$.graph.vertices", "expected an array");
    std::vector<std::string> vertices;
    for (std::size_t i = 0; i < vj.size(); ++i) vertices.push_back(as_string(vj[i], indexed("$.graph.vertices", i)));
    std::vector<std::pair<std::string, std::string>> edges;
    if (g.contains("edges")) {
      const auto& ej = g["edges"];
      if (!ej.is_array()) schema("$.graph.edges", "expected an array of pairs");
      for (std::size_t i = 0; i < ej.size(); ++i) {
        const auto p = indexed("$.graph.edges", i);
        if (!ej[i].is_array() || ej[i].size() != 2) schema(p, "expected a [vertex, vertex] pair");
        edges.emplace_back(as_string(ej[i][0], p), as_string(ej[i][1], p));
      }
    }
    cfg.graph = rethrow_as_config("$.graph", [&] { return Graph(std::move(vertices), edges); });
  }
  if (root.contains("vertex_groups")) {
    const auto& vg = root["vertex_groups"];
    if (!vg.is_object()) schema("$.vertex_groups", "expected an object");
    if (!cfg.graph) schema("$.vertex_groups", "given without a graph");
    for (const auto& [vertex, group] : vg.items()) {
      const auto p = "$.vertex_groups." + vertex;
      if (!cfg.graph->find(vertex)) schema(p, "dangling reference to vertex '" + vertex + "'");
      lookup_group(cfg.groups, group, p);
      cfg.vertex_groups.emplace(vertex, group.get<std::string>());
    }
    for (const auto& v : cfg.graph->names())
      if (!cfg.vertex_groups.contains(v)) schema("$.vertex_groups", "no group for vertex '" + v + "'");
  }
  if (root.contains("systems")) {
    const auto& sj = root["systems"];
    if (!sj.is_object()) schema("$.systems", "expected an object");
    for (const auto& [name, spec] : sj.items()) {
      const auto p = "$.systems." + name;
      cfg.systems.emplace(name, parse_system(cfg, spec, p));
      rethrow_as_config(p, [&] { return cfg.system(name); });
    }
  }
  if (root.contains("couplings")) {
    const auto& cj = root["couplings"];
    if (!cj.is_object()) schema("$.couplings", "expected an object");
    for (const auto& [name, spec] : cj.items()) {
      const auto p = "$.couplings." + name;
      cfg.couplings.emplace(name, parse_coupling(cfg, spec, p));
      rethrow_as_config(p, [&] { return cfg.coupling(name); });
    }
  }
  if (root.contains("word")) {
    cfg.word = parse_word(root["word"], "$.word");
    if (cfg.graph)
      for (std::size_t i = 0; i < cfg.word->size(); ++i)
        if (!cfg.graph->find((*cfg.word)[i].first))
          schema(indexed("$.word", i), "dangling reference to vertex '" + (*cfg.word)[i].first + "'");
  }
  if (root.contains("params")) {
    if (!root["params"].is_object()) schema("$.params", "expected an object");
    cfg.params = root["params"];
  }
  return cfg;
}

Json serialize_config(const Config& cfg) {
  Json root = Json::object();
  if (!cfg.groups.empty()) {
    Json groups = Json::object();
    for (const auto& [name, spec] : cfg.groups) {
      if (spec.cyclic) {
        groups[name] = {{"cyclic", *spec.cyclic}, {"symbol", spec.symbol}};
      } else {
        groups[name] = {{"table", spec.group.table()}, {"names", spec.group.element_names()}};
      }
    }
    root["groups"] = std::move(groups);
  }
  if (cfg.graph) {
    Json edges = Json::array();
    for (const auto& [a, b] : cfg.graph->edges()) edges.push_back({cfg.graph->name(a), cfg.graph->name(b)});
    root["graph"] = {{"vertices", cfg.graph->names()}, {"edges", std::move(edges)}};
  }
  if (!cfg.vertex_groups.empty()) {
    Json vg = Json::object();
    for (const auto& v : cfg.graph->names()) vg[v] = cfg.vertex_groups.at(v);
    root["vertex_groups"] = std::move(vg);
  }
  auto permutations = [](const FiniteGroup& g, const GeneratorTable<std::size_t>& table) {
    Json out = Json::object();
    for (const auto& [gen, perm] : table) out[g.element_name(gen)] = perm;
    return out;
  };
  if (!cfg.systems.empty()) {
    Json systems = Json::object();
    for (const auto& [name, s] : cfg.systems) {
      const auto& source = cfg.group(s.source);
      const auto& target = cfg.group(s.target);
      Json weights = Json::array();
      for (const auto& w : s.weights) weights.push_back(format_rational(w));
      Json cocycle = Json::object();
      for (const auto& [gen, column] : s.cocycle) {
        Json values = Json::array();
        for (int v : column) values.push_back(target.element_name(v));
        cocycle[source.element_name(gen)] = std::move(values);
      }
      systems[name] = {{"source", s.source},
                       {"target", s.target},
                       {"space", {{"weights", std::move(weights)}, {"names", s.point_names}}},
                       {"action", permutations(source, s.action)},
                       {"cocycle", std::move(cocycle)}};
    }
    root["systems"] = std::move(systems);
  }
  if (!cfg.couplings.empty()) {
    Json couplings = Json::object();
    for (const auto& [name, c] : cfg.couplings) {
      Json weights = Json::array();
      for (const auto& w : c.weights) weights.push_back(format_rational(w));
      couplings[name] = {{"lambda", c.lambda},
                         {"gamma", c.gamma},
                         {"weights", std::move(weights)},
                         {"lambda_action", permutations(cfg.group(c.lambda), c.lambda_action)},
                         {"gamma_action", permutations(cfg.group(c.gamma), c.gamma_action)}};
    }
    root["couplings"] = std::move(couplings);
  }
  if (cfg.word) {
    Json word = Json::array();
    for (const auto& [v, a] : *cfg.word) word.push_back({v, a});
    root["word"] = std::move(word);
  }
  if (!cfg.params.empty()) root["params"] = cfg.params;
  return root;
}

std::vector<std::pair<std::string, std::string>> parse_word(const Json& j, const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  if (j.is_string()) {
    std::istringstream in(j.get<std::string>());
    std::string token;
    while (in >> token) {
      auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
        schema(path, "syllable '" + token + "' is not of the form vertex:element");
      out.emplace_back(token.substr(0, colon), token.substr(colon + 1));
    }
    return out;
  }
  if (!j.is_array()) schema(path, "expected \"v:a v:b ...\" or an array of [vertex, element] pairs");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = indexed(path, i);
    if (!j[i].is_array() || j[i].size() != 2) schema(p, "expected a [vertex, element] pair");
    std::string element = j[i][1].is_number_integer() ? std::to_string(j[i][1].get<long long>()) : as_string(j[i][1], p);
    out.emplace_back(as_string(j[i][0], p), element);
  }
  return out;
}

std::vector<Syllable> resolve_word(const GraphProduct& product,
                                   const std::vector<std::pair<std::string, std::string>>& word) {
  std::vector<Syllable> out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const auto& [vertex, element] = word[i];
    auto v = product.graph().find(vertex);
    if (!v) throw Error(ErrorCode::config, indexed("$.word", i) + ": dangling reference to vertex '" + vertex + "'");
    auto a = product.group(*v).find_element(element);
    if (!a)
      throw Error(ErrorCode::config, indexed("$.word", i) + ": '" + element + "' is not an element of the group at '" +
                                         vertex + "'");
    out.push_back({*v, *a});
  }
  return out;
}

}  // namespace imbed
