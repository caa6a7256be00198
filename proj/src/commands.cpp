#include "imbed/commands.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>

#include "imbed/coupling.hpp"
#include "imbed/error.hpp"
#include "imbed/randomorphism.hpp"

namespace imbed {

namespace {

using Clock = std::chrono::steady_clock;

Json rat(const Rational& r) { return format_rational(r); }

Json rats(std::span<const Rational> values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(rat(v));
  return out;
}

Json vertex_names(const Graph& g, const VertexSet& s) {
  Json out = Json::array();
  for (auto v : s) out.push_back(g.name(v));
  return out;
}

const Json* param(const Config& cfg, const std::string& key) {
  auto it = cfg.params.find(key);
  return it == cfg.params.end() ? nullptr : &*it;
}

std::string param_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw Error(ErrorCode::config, path + ": expected a string");
  return j.get<std::string>();
}

std::size_t param_size(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw Error(ErrorCode::config, path + ": expected a nonnegative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

std::pair<std::string, std::string> param_pair(const Config& cfg, const std::string& key) {
  const Json* j = param(cfg, key);
  if (!j) throw Error(ErrorCode::config, "$.params." + key + ": missing (expected [first, second])");
  if (!j->is_array() || j->size() != 2)
    throw Error(ErrorCode::config, "$.params." + key + ": expected [first, second]");
  return {param_string((*j)[0], "$.params." + key + "[0]"), param_string((*j)[1], "$.params." + key + "[1]")};
}

std::string chosen_system(const Config& cfg) {
  if (const Json* j = param(cfg, "system")) return param_string(*j, "$.params.system");
  if (cfg.systems.size() == 1) return cfg.systems.begin()->first;
  throw Error(ErrorCode::config, "$.params.system: missing (the configuration defines " +
                                     std::to_string(cfg.systems.size()) + " systems)");
}

std::vector<std::size_t> radii_list(const Config& cfg, const RunFlags& flags, std::vector<std::size_t> fallback) {
  if (const Json* j = param(cfg, "radii")) {
    if (!j->is_array()) throw Error(ErrorCode::config, "$.params.radii: expected an array");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j->size(); ++i)
      out.push_back(param_size((*j)[i], "$.params.radii[" + std::to_string(i) + "]"));
    if (!std::is_sorted(out.begin(), out.end()))
      throw Error(ErrorCode::config, "$.params.radii: radii must be ascending");
    return out;
  }
  if (flags.radius) {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r <= *flags.radius; ++r) out.push_back(r);
    return out;
  }
  return fallback;
}

Json cocycle_json(const SmiSystem& sys) {
  Json table = Json::object();
  const auto& c = sys.cocycle();
  for (int l = 0; l < sys.source().order(); ++l) {
    Json row = Json::array();
    for (std::size_t x = 0; x < sys.space().size(); ++x) row.push_back(sys.target().element_name(c.value(l, x)));
    table[sys.source().element_name(l)] = std::move(row);
  }
  return table;
}

Json certificate_json(const SmiSystem& sys) {
  const auto& cert = sys.certificate();
  Json out = {{"smi", cert.smi}, {"injective", cert.injective}};
  if (cert.counterexample)
    out["counterexample"] = {{"lambda", sys.source().element_name(cert.counterexample->first)},
                             {"point", sys.space().points[cert.counterexample->second]}};
  if (cert.collision) {
    const auto& [l1, l2, x] = *cert.collision;
    out["collision"] = {{"lambda1", sys.source().element_name(l1)},
                        {"lambda2", sys.source().element_name(l2)},
                        {"point", sys.space().points[x]}};
  }
  return out;
}

Json system_json(const SmiSystem& sys) {
  Json out = {{"source", sys.source().name()},
              {"target", sys.target().name()},
              {"points", sys.space().size()},
              {"certificate", certificate_json(sys)}};
  if (sys.certified()) out["index"] = rat(system_index(sys));
  return out;
}

// ---- extensions ----------------------------------------------------------

ExtendedSystem build_extension(const Config& cfg) {
  const Json* j = param(cfg, "extension");
  if (!j || !j->is_object()) throw Error(ErrorCode::config, "$.params.extension: missing or not an object");
  const std::string path = "$.params.extension";
  if (!j->contains("base")) throw Error(ErrorCode::config, path + ": missing required key 'base'");
  auto base = cfg.system(param_string((*j)["base"], path + ".base"));
  ExtendOptions options;
  if (j->contains("require_certified")) {
    if (!(*j)["require_certified"].is_boolean())
      throw Error(ErrorCode::config, path + ".require_certified: expected a boolean");
    options.require_certified = (*j)["require_certified"].get<bool>();
  }
  if (j->contains("free_factor")) {
    const auto& G = cfg.group(param_string((*j)["free_factor"], path + ".free_factor"));
    return extend_free(base, G, options);
  }
  if (!j->contains("vertex"))
    throw Error(ErrorCode::config, path + ": needs 'free_factor' (free product) or 'vertex' (graph product)");
  if (!cfg.graph) throw Error(ErrorCode::config, path + ".vertex: graph-product extension needs a graph");
  const auto vertex = param_string((*j)["vertex"], path + ".vertex");
  if (!cfg.graph->find(vertex))
    throw Error(ErrorCode::config, path + ".vertex: dangling reference to vertex '" + vertex + "'");
  auto source = cfg.graph_groups();
  auto target = source;
  target[cfg.graph->index_of(vertex)] = base.target();
  if (j->contains("target_vertex_groups")) {
    const auto& tv = (*j)["target_vertex_groups"];
    if (!tv.is_object()) throw Error(ErrorCode::config, path + ".target_vertex_groups: expected an object");
    for (const auto& [v, g] : tv.items()) {
      auto idx = cfg.graph->find(v);
      if (!idx)
        throw Error(ErrorCode::config, path + ".target_vertex_groups." + v + ": dangling reference to vertex '" + v + "'");
      target[*idx] = cfg.group(param_string(g, path + ".target_vertex_groups." + v));
    }
  }
  return extend_graph(*cfg.graph, std::move(source), std::move(target), vertex, base, options);
}

Json extension_json(const ExtendedSystem& ext) {
  const auto& theta = ext.theta();
  Json groups = Json::object();
  for (VertexIndex v = 0; v < theta.size(); ++v)
    groups[theta.name(v)] = {{"source", ext.source().group(v).name()}, {"target", ext.target().group(v).name()}};
  Json out = {{"kind", ext.kind() == ExtensionKind::free_product ? "free-product" : "graph-product"},
              {"base_vertex", theta.name(ext.base_vertex())},
              {"vertex_groups", std::move(groups)},
              {"base", system_json(ext.base())},
              {"base_domain_measure", rat(ext.base_domain_measure())},
              {"reducible_regime", ext.reducible()},
              {"orbit_reps_trivial", ext.orbit_reps_trivial()}};
  if (ext.trivial_free_factor()) out["trivial_free_factor"] = true;
  return out;
}

// alpha~ agrees with alpha on H_w and with the identity map elsewhere.
Json restriction_check(const ExtendedSystem& ext) {
  const auto& H = ext.source();
  std::size_t checks = 0, failures = 0;
  for (VertexIndex v = 0; v < H.vertex_count(); ++v)
    for (int a = 1; a < H.group(v).order(); ++a)
      for (std::size_t x = 0; x < ext.space().size(); ++x) {
        ++checks;
        int expected = v == ext.base_vertex() ? ext.base().cocycle().value(a, x) : a;
        if (ext.value(H.syllable(v, a), x) != ext.target().syllable(v, expected)) ++failures;
      }
  return {{"checks", checks}, {"failures", failures}};
}

Json well_definedness_check(const ExtendedSystem& ext, std::size_t radius, const RunFlags& flags) {
  std::mt19937_64 rng(flags.seed);
  const auto ball = ext.source().ball(radius, flags.ball_cap);
  std::size_t samples = 0, failures = 0;
  for (const auto& h : ball)
    for (int rep = 0; rep < 3; ++rep) {
      auto word = random_representative(ext.source(), h, rng);
      for (std::size_t x = 0; x < ext.space().size(); ++x) {
        ++samples;
        if (ext.value_of_word(word, x) != ext.value(h, x) || ext.source().reduce(word) != h) ++failures;
      }
    }
  return {{"samples", samples}, {"failures", failures}, {"seed", flags.seed}};
}

Json smi_violation_json(const LazyCocycle& sys, const std::optional<std::pair<Element, std::size_t>>& v) {
  if (!v) return nullptr;
  return {{"word", sys.source().format(v->first)}, {"point", sys.space().points[v->second]}};
}

Json growth_json(const ExtensionGrowth& g) {
  Json out = {{"radii", g.radii}, {"partials", rats(g.partials)}, {"orbit_reps", g.orbit_reps}, {"class", to_string(g.cls)}};
  if (g.constant) out["constant"] = rat(*g.constant);
  if (!g.note.empty()) out["note"] = g.note;
  return out;
}

const char* case_label(ExtensionKind kind, std::size_t c) {
  static const char* free_labels[] = {"a,h nontrivial", "a = e", "h = e"};
  static const char* graph_labels[] = {"a,l,h nontrivial", "a = e", "l = e", "h = e", "a = l = e", "l = h = e", "a = h = e"};
  return kind == ExtensionKind::free_product ? free_labels[c] : graph_labels[c];
}

Json disjointness_json(const ExtendedSystem& ext, const DisjointnessReport& r, bool timing) {
  Json cases = Json::array();
  for (std::size_t c = 0; c < r.cases.size(); ++c)
    cases.push_back({{"case", c + 1}, {"shape", case_label(ext.kind(), c)}, {"words", r.cases[c].words},
                     {"checks", r.cases[c].checks}});
  Json out = {{"pass", r.pass}, {"words_radius", r.words_radius}, {"view_radius", r.view_radius},
              {"words", r.words}, {"ytilde_points", r.ytilde_points}, {"checks", r.checks},
              {"violations", r.violations}, {"cases", std::move(cases)}};
  if (r.witness)
    out["witness"] = {{"word", ext.source().format(r.witness->word)},
                      {"from", ext.describe(r.witness->from)},
                      {"to", ext.describe(r.witness->to)}};
  if (timing) out["seconds"] = r.seconds;
  return out;
}

Json coverage_json(const ExtendedSystem& ext, const CoverageReport& r, bool timing) {
  Json missed = Json::array();
  for (const auto& p : r.missed) missed.push_back(ext.describe(p));
  Json out = {{"fraction", rat(r.fraction)}, {"interior_radius", r.interior_radius},
              {"search_radius", r.search_radius}, {"interior_points", r.interior_points},
              {"covered", r.covered}, {"missed_count", r.missed_count}, {"missed", std::move(missed)},
              {"multiply_hit", r.multiply_hit}, {"longest_word", r.longest_word}};
  if (timing) out["seconds"] = r.seconds;
  return out;
}

std::vector<CouplingPoint> removed_points(const ExtendedSystem& ext, const Json& coverage) {
  std::vector<CouplingPoint> out;
  if (!coverage.contains("remove")) return out;
  const auto& list = coverage["remove"];
  const std::string path = "$.params.coverage.remove";
  if (!list.is_array()) throw Error(ErrorCode::config, path + ": expected an array of {\"g\", \"x\"} points");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto p = path + "[" + std::to_string(i) + "]";
    const auto& item = list[i];
    if (!item.is_object() || !item.contains("g")) throw Error(ErrorCode::config, p + ": expected {\"g\": word, \"x\": point}");
    auto word = resolve_word(ext.target(), parse_word(item["g"], p + ".g"));
    std::size_t x = item.contains("x") ? param_size(item["x"], p + ".x") : 0;
    if (x >= ext.space().size()) throw Error(ErrorCode::config, p + ".x: unknown point");
    out.push_back({ext.target().reduce(word), x});
  }
  return out;
}

// ---- commands --------------------------------------------------------------

Json cmd_graph_check(const Config& cfg, const RunFlags&, int&) {
  if (!cfg.graph) throw Error(ErrorCode::config, "$.graph: graph-check needs a graph");
  const auto& g = *cfg.graph;
  auto result = is_irreducible(g);
  Json out = {{"vertices", g.names()}, {"irreducible", result.irreducible}};
  if (result.witness) out["witness"] = {vertex_names(g, result.witness->first), vertex_names(g, result.witness->second)};
  Json nb = Json::object();
  for (VertexIndex v = 0; v < g.size(); ++v)
    nb[g.name(v)] = {{"link", vertex_names(g, g.link(v))}, {"star", vertex_names(g, g.star(v))}};
  out["neighborhoods"] = std::move(nb);
  return out;
}

Json cmd_reduce(const Config& cfg, const RunFlags&, int&) {
  if (!cfg.word) throw Error(ErrorCode::config, "$.word: reduce needs a word");
  GraphProduct product(*cfg.graph, cfg.graph_groups());
  auto raw = resolve_word(product, *cfg.word);
  auto g = product.reduce(raw);
  Json syllables = Json::array();
  for (const auto& s : g.syllables())
    syllables.push_back({product.graph().name(s.vertex), product.group(s.vertex).element_name(s.element)});
  Json input = Json::array();
  for (const auto& s : raw) input.push_back(product.format(s));
  Json out = {{"input", std::move(input)},
              {"is_reduced", product.is_reduced(raw)},
              {"normal_form", product.format(g)},
              {"syllables", std::move(syllables)},
              {"length", g.length()},
              {"inverse", product.format(product.invert(g))}};
  if (const Json* v = param(cfg, "alh_vertex")) {
    auto d = product.alh_decompose(g, product.graph().index_of(param_string(*v, "$.params.alh_vertex")));
    out["alh"] = {{"a", product.format(d.a)}, {"l", product.format(d.l)}, {"h", product.format(d.h)}};
  }
  return out;
}

Json cmd_verify_base(const Config& cfg, const RunFlags&, int& exit_code) {
  const auto name = chosen_system(cfg);
  auto sys = cfg.system(name);
  Json out = system_json(sys);
  out["system"] = name;
  out["cocycle"] = cocycle_json(sys);
  if (!sys.certified()) exit_code = exit_failure;
  return out;
}

Json cmd_omega(const Config& cfg, const RunFlags& flags, int& exit_code) {
  const auto name = chosen_system(cfg);
  auto sys = cfg.system(name);
  const std::size_t radius = flags.radius.value_or(1);
  auto view = omega_coupling(sys, radius, flags.ball_cap);
  auto domain = greedy_fundamental_domain(view);
  auto index = coupling_index(view, domain);
  Json points = Json::array();
  for (auto p : domain.points) points.push_back({sys.target().element_name(p.gamma), sys.space().points[p.x]});
  Json out = {{"system", name},
              {"radius", radius},
              {"view_points", view.size()},
              {"complete", view.complete()},
              {"actions_commute", view.actions_commute()},
              {"lambda_free", view.lambda_free()},
              {"x_domain_tiles", view.x_domain_tiles()},
              {"domain", std::move(points)},
              {"measure", rat(domain.measure)},
              {"index", rat(index.value)},
              {"index_exact", index.complete},
              {"boundary_points", domain.boundary.size()}};
  if (view.complete()) out["read_back_matches"] = read_back_cocycle(view) == sys.cocycle().table();
  if (!view.actions_commute() || !view.lambda_free() || !view.x_domain_tiles()) exit_code = exit_failure;
  return out;
}

Json cmd_compose(const Config& cfg, const RunFlags&, int& exit_code) {
  auto [a, b] = param_pair(cfg, "compose");
  auto first = cfg.system(a), second = cfg.system(b);
  auto result = compose(first, second);
  Json out = {{"first", system_json(first)}, {"second", system_json(second)}, {"composite", system_json(result)}};
  if (first.certified() && second.certified()) {
    bool ok = result.certified() && system_index(result) == system_index(first) * system_index(second);
    out["multiplicative"] = ok;
    if (!ok) exit_code = exit_failure;
  }
  return out;
}

Json cmd_product(const Config& cfg, const RunFlags&, int& exit_code) {
  auto [a, b] = param_pair(cfg, "product");
  auto first = cfg.system(a), second = cfg.system(b);
  auto result = direct_product(first, second);
  Json out = {{"first", system_json(first)}, {"second", system_json(second)}, {"product", system_json(result)}};
  if (first.certified() && second.certified()) {
    bool ok = result.certified() && system_index(result) == system_index(first) * system_index(second);
    out["multiplicative"] = ok;
    if (!ok) exit_code = exit_failure;
  }
  return out;
}

Json cmd_extend(const Config& cfg, const RunFlags& flags, int& exit_code, ExtensionKind expected) {
  auto ext = build_extension(cfg);
  if (ext.kind() != expected)
    throw Error(ErrorCode::config, std::string("$.params.extension: this command needs ") +
                                       (expected == ExtensionKind::free_product ? "'free_factor'" : "'vertex'"));
  const std::size_t radius = flags.radius.value_or(3);
  Json out = extension_json(ext);
  auto violation = smi_violation_on_ball(ext, radius, flags.ball_cap);
  out["smi_radius"] = radius;
  out["smi_on_ball"] = !violation;
  if (violation) out["smi_violation"] = smi_violation_json(ext, violation);
  auto restriction = restriction_check(ext);
  auto well_defined = well_definedness_check(ext, std::min<std::size_t>(radius, 3), flags);
  out["restriction"] = restriction;
  out["well_defined"] = well_defined;
  if (violation || restriction["failures"] != 0 || well_defined["failures"] != 0) exit_code = exit_failure;
  return out;
}

Json cmd_verify_coupling(const Config& cfg, const RunFlags& flags, int& exit_code) {
  auto ext = build_extension(cfg);
  const std::size_t words = flags.words.value_or(3);
  const std::size_t view = flags.radius.value_or(words);
  VerifyOptions options{flags.jobs, flags.ball_cap};
  Json coverage_params = Json::object();
  if (const Json* c = param(cfg, "coverage")) {
    if (!c->is_object()) throw Error(ErrorCode::config, "$.params.coverage: expected an object");
    coverage_params = *c;
  }
  const std::size_t interior = coverage_params.contains("interior")
                                   ? param_size(coverage_params["interior"], "$.params.coverage.interior")
                                   : std::min<std::size_t>(words, 2);
  const std::size_t search = coverage_params.contains("search")
                                 ? param_size(coverage_params["search"], "$.params.coverage.search")
                                 : coverage_search_radius(ext, interior);
  auto removed = removed_points(ext, coverage_params);

  auto disjoint = verify_disjointness(ext, words, view, options);
  auto coverage = verify_coverage(ext, interior, search, options, removed);
  auto growth = extension_index_growth(ext, radii_list(cfg, flags, {0, 1, 2}), flags.ball_cap);
  Json out = extension_json(ext);
  out["disjointness"] = disjointness_json(ext, disjoint, flags.timing);
  out["coverage"] = coverage_json(ext, coverage, flags.timing);
  out["growth"] = growth_json(growth);
  out["well_defined"] = well_definedness_check(ext, std::min<std::size_t>(words, 3), flags);
  if (!disjoint.pass || coverage.fraction != 1 || out["well_defined"]["failures"] != 0) exit_code = exit_failure;
  return out;
}

Json cmd_index_growth(const Config& cfg, const RunFlags& flags, int&) {
  auto ext = build_extension(cfg);
  auto growth = extension_index_growth(ext, radii_list(cfg, flags, {0, 1, 2, 3}), flags.ball_cap);
  Json out = growth_json(growth);
  out["base_index"] = rat(ext.base_index());
  out["reducible_regime"] = ext.reducible();
  return out;
}

Json germ_measure_json(const GermMeasure& m) {
  Json support = Json::array();
  for (std::size_t i = 0; i < m.support.size(); ++i)
    support.push_back({{"germ", format_germ(m, m.support[i])}, {"weight", rat(m.weights[i])},
                       {"injective", m.support[i].injective()}});
  return support;
}

Json invariance_json(const GermMeasure& m, const InvarianceReport& r) {
  Json gaps = Json::array();
  for (const auto& g : r.gaps) gaps.push_back({{"lambda", m.source.element_name(g.lambda)}, {"total_variation", rat(g.total_variation)}});
  return {{"invariant", r.invariant}, {"violations", std::move(gaps)}};
}

Json cmd_random_check(const Config& cfg, const RunFlags& flags, int& exit_code) {
  Json out = Json::object();
  if (!cfg.systems.empty()) {
    const auto name = chosen_system(cfg);
    auto sys = cfg.system(name);
    int max_len = 0;
    for (int l = 0; l < sys.source().order(); ++l) max_len = std::max(max_len, sys.source().word_length(l));
    const std::size_t r = flags.radius.value_or(static_cast<std::size_t>(max_len));
    auto m = germ_measure_from_cocycle(sys.cocycle(), r);
    Json s = {{"system", name}, {"radius", r}, {"smi", sys.certified()},
              {"supported_on_injective", m.supported_on_injective()}, {"support", germ_measure_json(m)}};
    if (sys.certified() != m.supported_on_injective()) exit_code = exit_failure;
    std::vector<int> lambdas;
    for (int l = 0; l < sys.source().order(); ++l)
      if (m.support.front().in_domain(l)) lambdas.push_back(l);
    auto inv = check_invariance(m, lambdas);
    s["invariance"] = invariance_json(m, inv);
    if (!inv.invariant) exit_code = exit_failure;
    if (sys.certified() && m.support.front().full_domain()) {
      auto back = cocycle_from_randembedding(m);
      auto again = randembedding_from_cocycle(back, r);
      bool measure_round_trip = again.support == m.support && again.weights == m.weights;
      s["measure_round_trip"] = measure_round_trip;
      auto map = relabeling(sys, back);
      if (map) s["system_round_trip"] = true;
      else s["system_round_trip"] = m.support.size() == sys.space().size() ? Json(false) : Json("points merged");
      if (!measure_round_trip || (m.support.size() == sys.space().size() && !map)) exit_code = exit_failure;
    }
    out["from_system"] = std::move(s);
  }
  if (const Json* gj = param(cfg, "germs")) {
    const std::string path = "$.params.germs";
    if (!gj->is_object()) throw Error(ErrorCode::config, path + ": expected an object");
    const auto& source = cfg.group(param_string((*gj).value("source", Json()), path + ".source"));
    const auto& target = cfg.group(param_string((*gj).value("target", Json()), path + ".target"));
    if (!gj->contains("support") || !(*gj)["support"].is_array())
      throw Error(ErrorCode::config, path + ".support: expected an array of {element: image} maps");
    std::vector<MapGerm> germs;
    std::vector<Rational> weights;
    const auto& support = (*gj)["support"];
    for (std::size_t i = 0; i < support.size(); ++i) {
      const auto p = path + ".support[" + std::to_string(i) + "]";
      MapGerm f;
      f.values.assign(static_cast<std::size_t>(source.order()), -1);
      f.values[0] = 0;
      if (!support[i].is_object()) throw Error(ErrorCode::config, p + ": expected an object");
      for (const auto& [k, v] : support[i].items()) {
        auto l = source.find_element(k);
        if (!l) throw Error(ErrorCode::config, p + "." + k + ": not an element of '" + source.name() + "'");
        auto g = target.find_element(v.is_string() ? v.get<std::string>() : v.dump());
        if (!g) throw Error(ErrorCode::config, p + "." + k + ": not an element of '" + target.name() + "'");
        f.values[*l] = *g;
      }
      germs.push_back(std::move(f));
    }
    if (gj->contains("weights")) {
      const auto& wj = (*gj)["weights"];
      if (!wj.is_array()) throw Error(ErrorCode::config, path + ".weights: expected an array");
      for (const auto& w : wj) weights.push_back(parse_rational(w.is_string() ? w.get<std::string>() : w.dump()));
    } else {
      for (std::size_t i = 0; i < germs.size(); ++i) weights.push_back(Rational(1) / Rational(germs.size()));
    }
    auto m = make_germ_measure(source, target, std::move(germs), std::move(weights));
    Json g = {{"support", germ_measure_json(m)}, {"supported_on_injective", m.supported_on_injective()}};
    std::vector<int> lambdas;
    for (int l = 0; l < source.order(); ++l)
      if (m.support.front().in_domain(l)) lambdas.push_back(l);
    g["invariance"] = invariance_json(m, check_invariance(m, lambdas));
    try {
      auto sys = cocycle_from_randembedding(m);
      g["accepted"] = true;
      g["system"] = system_json(sys);
    } catch (const Error& e) {
      g["accepted"] = false;
      g["reason"] = e.what();
    }
    out["germs"] = std::move(g);
  }
  if (out.empty()) throw Error(ErrorCode::config, "random-check needs a system or $.params.germs");
  return out;
}

Json cmd_theorem_b(const Config& cfg, const RunFlags& flags, int& exit_code) {
  if (!cfg.graph) throw Error(ErrorCode::config, "$.graph: theorem-b needs a graph");
  const auto& theta = *cfg.graph;
  auto groups = cfg.graph_groups();
  std::vector<SmiSystem> bases;
  const Json* bj = param(cfg, "bases");
  if (bj && !bj->is_object()) throw Error(ErrorCode::config, "$.params.bases: expected an object");
  if (bj)
    for (const auto& [v, s] : bj->items())
      if (!theta.find(v)) throw Error(ErrorCode::config, "$.params.bases." + v + ": dangling reference to vertex '" + v + "'");
  for (VertexIndex v = 0; v < theta.size(); ++v) {
    const auto& name = theta.name(v);
    if (bj && bj->contains(name)) bases.push_back(cfg.system(param_string((*bj)[name], "$.params.bases." + name)));
    else bases.push_back(identity_system(groups[v]));
    if (!bases.back().source().same_table(groups[v]))
      throw Error(ErrorCode::mismatch, "theorem-b base at '" + name + "' does not start from the vertex group");
  }
  PipelineOptions options;
  options.radii = radii_list(cfg, flags, {0, 1, 2});
  options.smi_radius = flags.words.value_or(3);
  options.cap = flags.ball_cap;
  auto report = theorem_b_pipeline(theta, bases, options);

  Json steps = Json::array();
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    const auto& s = report.steps[i];
    steps.push_back({{"step", i + 1},
                     {"vertex", theta.name(s.vertex)},
                     {"extension", extension_json(*s.extension)},
                     {"growth", growth_json(s.growth)}});
  }
  Json out = {{"irreducible", is_irreducible(theta).irreducible},
              {"steps", std::move(steps)},
              {"extensions", report.steps.size()},
              {"compositions", report.compositions},
              {"final", {{"smi_radius", report.smi_radius},
                         {"smi_on_ball", !report.smi_violation},
                         {"radii", report.radii},
                         {"partials", rats(report.final_partials)},
                         {"partials_class", to_string(report.final_partials_cls)}}},
              {"class", to_string(report.cls)}};
  if (report.smi_violation) out["final"]["smi_violation"] = smi_violation_json(*report.final_system, report.smi_violation);
  if (report.constant) out["constant"] = rat(*report.constant);
  if (report.smi_violation) exit_code = exit_failure;
  return out;
}

Json cmd_finite_coupling(const Config& cfg, const RunFlags&, int&) {
  std::string name;
  if (const Json* j = param(cfg, "coupling")) name = param_string(*j, "$.params.coupling");
  else if (cfg.couplings.size() == 1) name = cfg.couplings.begin()->first;
  else throw Error(ErrorCode::config, "$.params.coupling: missing");
  auto fc = cfg.coupling(name);
  auto report = validate_finite_coupling(fc);
  auto nested = attempt_nested_domains(fc);
  Json out = {{"coupling", name},
              {"x_domain", report.x_domain},
              {"y_domain", report.y_domain},
              {"x_measure", rat(report.x_measure)},
              {"y_measure", rat(report.y_measure)},
              {"index", rat(report.index)}};
  Json n = {{"success", nested.success}};
  if (nested.success) {
    n["x_domain"] = nested.x_domain;
    n["y_domain"] = nested.y_domain;
  } else {
    n["obstruction"] = nested.obstruction;
    n["blocked_gamma_orbits"] = nested.blocked_gamma_orbits;
    n["reachable_lambda_orbits"] = nested.reachable_lambda_orbits;
  }
  out["nested_domains"] = std::move(n);
  return out;
}

Json cmd_disjoint_union(const Config& cfg, const RunFlags&, int& exit_code) {
  const Json* j = param(cfg, "union");
  const std::string path = "$.params.union";
  if (!j || !j->is_object()) throw Error(ErrorCode::config, path + ": missing or not an object");
  auto first = cfg.coupling(param_string(j->value("first", Json()), path + ".first"));
  auto second = cfg.coupling(param_string(j->value("second", Json()), path + ".second"));
  std::vector<Rational> scales;
  if (j->contains("a")) {
    const auto& aj = (*j)["a"];
    auto one = [&](const Json& v) { return parse_rational(v.is_string() ? v.get<std::string>() : v.dump()); };
    if (aj.is_array()) for (const auto& v : aj) scales.push_back(one(v));
    else scales.push_back(one(aj));
  } else {
    scales = {Rational(1)};
  }
  auto c1 = validate_finite_coupling(first).index;
  auto c2 = validate_finite_coupling(second).index;
  Json rows = Json::array();
  for (const auto& a : scales) {
    auto joined = validate_finite_coupling(disjoint_union(first, second, a)).index;
    auto formula = union_index_formula(c1, c2, a);
    rows.push_back({{"a", rat(a)}, {"index", rat(joined)}, {"formula", rat(formula)}, {"match", joined == formula}});
    if (joined != formula) exit_code = exit_failure;
  }
  return {{"c1", rat(c1)}, {"c2", rat(c2)}, {"unions", std::move(rows)}};
}

using Handler = std::function<Json(const Config&, const RunFlags&, int&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"graph-check", cmd_graph_check},
      {"reduce", cmd_reduce},
      {"verify-base", cmd_verify_base},
      {"omega", cmd_omega},
      {"compose", cmd_compose},
      {"product", cmd_product},
      {"extend-free", [](const Config& c, const RunFlags& f, int& e) { return cmd_extend(c, f, e, ExtensionKind::free_product); }},
      {"extend-graph", [](const Config& c, const RunFlags& f, int& e) { return cmd_extend(c, f, e, ExtensionKind::graph_product); }},
      {"verify-coupling", cmd_verify_coupling},
      {"index-growth", cmd_index_growth},
      {"random-check", cmd_random_check},
      {"theorem-b", cmd_theorem_b},
      {"finite-coupling", cmd_finite_coupling},
      {"disjoint-union", cmd_disjoint_union},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, h] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

RunResult run_command(const std::string& command, const Config& config, const RunFlags& flags) {
  RunResult result;
  result.report = {{"command", command}};
  auto it = handlers().find(command);
  if (it == handlers().end()) {
    result.exit_code = exit_usage;
    result.report["error"] = {{"code", "usage"}, {"message", "unknown command '" + command + "'"}};
    return result;
  }
  const auto start = Clock::now();
  try {
    int exit_code = exit_pass;
    Json body = it->second(config, flags, exit_code);
    for (auto& [key, value] : body.items()) result.report[key] = value;
    result.exit_code = exit_code;
    result.report["status"] = exit_code == exit_pass ? "pass" : "fail";
  } catch (const Error& e) {
    result.exit_code = e.code() == ErrorCode::resource_cap ? exit_resource : exit_usage;
    result.report["status"] = "error";
    result.report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  }
  if (flags.timing) result.report["seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace imbed
