#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "imbed/commands.hpp"
#include "imbed/config.hpp"
#include "imbed/error.hpp"
#include "imbed/graph.hpp"
#include "imbed/graph_product.hpp"

namespace py = pybind11;
using namespace imbed;

namespace {

using Edge = std::pair<std::string, std::string>;
using PyWord = std::vector<std::pair<std::string, py::object>>;
using NamedWord = std::vector<std::pair<std::string, std::string>>;

std::vector<Syllable> to_word(const GraphProduct& p, const PyWord& word) {
  std::vector<Syllable> out;
  for (const auto& [vertex, element] : word) {
    auto v = p.graph().index_of(vertex);
    int e;
    if (py::isinstance<py::int_>(element)) {
      e = element.cast<int>();
    } else {
      auto found = p.group(v).find_element(element.cast<std::string>());
      if (!found) throw Error(ErrorCode::validation, "'" + element.cast<std::string>() + "' is not an element at " + vertex);
      e = *found;
    }
    out.push_back({v, e});
  }
  return out;
}

NamedWord from_element(const GraphProduct& p, const Element& g) {
  NamedWord out;
  for (auto s : g.syllables()) out.emplace_back(p.graph().name(s.vertex), p.group(s.vertex).element_name(s.element));
  return out;
}

GraphProduct make_product(const std::vector<std::string>& vertices, const std::vector<Edge>& edges,
                          const std::vector<int>& orders) {
  if (orders.size() != vertices.size()) throw Error(ErrorCode::validation, "one group order per vertex");
  std::vector<FiniteGroup> groups;
  for (std::size_t i = 0; i < orders.size(); ++i) groups.push_back(FiniteGroup::cyclic(orders[i], "a" + std::to_string(i + 1)));
  return GraphProduct(Graph(vertices, edges), std::move(groups));
}

std::pair<int, std::string> run(const std::string& command, const std::string& config, std::optional<std::size_t> radius,
                                std::optional<std::size_t> words, std::size_t ball_cap, std::uint64_t seed, std::size_t jobs) {
  RunFlags flags;
  flags.radius = radius;
  flags.words = words;
  flags.ball_cap = ball_cap;
  flags.seed = seed;
  flags.jobs = jobs;
  RunResult result;
  {
    py::gil_scoped_release release;
    try {
      result = run_command(command, parse_config(config), flags);
    } catch (const Error& e) {
      result.exit_code = exit_usage;
      result.report = {{"command", command}, {"status", "error"}, {"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    }
  }
  return {result.exit_code, result.report.dump()};
}

}  // namespace

PYBIND11_MODULE(_imbed, m) {
  m.doc() = "Graph-product normal forms and coupling checks";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error;
  error.call_once_and_store_result([&] { return py::exception<Error>(m, "ImbedError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error.get_stored(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("commands", &command_names);
  m.def(
      "is_irreducible",
      [](const std::vector<std::string>& vertices, const std::vector<Edge>& edges) {
        Graph g(vertices, edges);
        auto r = is_irreducible(g);
        std::optional<std::pair<std::vector<std::string>, std::vector<std::string>>> witness;
        if (r.witness) {
          auto names = [&](const VertexSet& s) {
            std::vector<std::string> out;
            for (auto v : s) out.push_back(g.name(v));
            return out;
          };
          witness.emplace(names(r.witness->first), names(r.witness->second));
        }
        return std::make_pair(r.irreducible, witness);
      },
      py::arg("vertices"), py::arg("edges"));

  m.def(
      "normalize_config", [](const std::string& text) { return serialize_config(parse_config(text)).dump(); },
      py::arg("text"));
  m.def("run", &run, py::arg("command"), py::arg("config"), py::arg("radius") = py::none(),
        py::arg("words") = py::none(), py::arg("ball_cap") = kDefaultBallCap, py::arg("seed") = 0, py::arg("jobs") = 1);

  py::class_<GraphProduct>(m, "GraphProduct")
      .def(py::init(&make_product), py::arg("vertices"), py::arg("edges"), py::arg("orders"))
      .def("reduce", [](const GraphProduct& p, const PyWord& w) { return from_element(p, p.reduce(to_word(p, w))); })
      .def("is_reduced", [](const GraphProduct& p, const PyWord& w) { return p.is_reduced(to_word(p, w)); })
      .def("length", [](const GraphProduct& p, const PyWord& w) { return p.reduce(to_word(p, w)).length(); })
      .def("multiply",
           [](const GraphProduct& p, const PyWord& a, const PyWord& b) {
             return from_element(p, p.multiply(p.reduce(to_word(p, a)), p.reduce(to_word(p, b))));
           })
      .def("invert", [](const GraphProduct& p, const PyWord& w) { return from_element(p, p.invert(p.reduce(to_word(p, w)))); })
      .def("alh",
           [](const GraphProduct& p, const PyWord& w, const std::string& vertex) {
             auto d = p.alh_decompose(p.reduce(to_word(p, w)), p.graph().index_of(vertex));
             return py::make_tuple(from_element(p, d.a), from_element(p, d.l), from_element(p, d.h));
           })
      .def("ball_size", [](const GraphProduct& p, std::size_t radius, std::size_t cap) { return p.ball(radius, cap).size(); },
           py::arg("radius"), py::arg("cap") = kDefaultBallCap)
      .def("format", [](const GraphProduct& p, const PyWord& w) { return p.format(p.reduce(to_word(p, w))); });
}
