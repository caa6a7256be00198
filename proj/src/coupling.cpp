#include "imbed/coupling.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "imbed/error.hpp"
#include "imbed/parallel.hpp"

namespace imbed {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string point_label(const ProbSpace& space, std::size_t x) {
  return x < space.points.size() ? space.points[x] : "#" + std::to_string(x);
}

struct PointHash {
  std::size_t operator()(const CouplingPoint& p) const noexcept { return ElementHash{}(p.g) * 31 + p.x; }
};

using PointSet = std::unordered_set<CouplingPoint, PointHash>;

// alpha and the dot action for every (h, x) over a list of source words.
struct WordTable {
  std::vector<std::vector<Element>> inverse_value;  // [word][x] -> alpha(h, x)^-1
  std::vector<std::vector<std::size_t>> image;      // [word][x] -> h.x
};

WordTable tabulate(const LazyCocycle& system, const std::vector<Element>& words) {
  const std::size_t n = system.space().size();
  WordTable t;
  t.inverse_value.resize(words.size());
  t.image.resize(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    t.inverse_value[i].reserve(n);
    t.image[i].reserve(n);
    for (std::size_t x = 0; x < n; ++x) {
      t.inverse_value[i].push_back(system.target().invert(system.value(words[i], x)));
      t.image[i].push_back(system.act(words[i], x));
    }
  }
  return t;
}

}  // namespace

CouplingPoint act_on_point(const LazyCocycle& system, const Element& h, const CouplingPoint& p) {
  const auto& G = system.target();
  return {G.multiply(p.g, G.invert(system.value(h, p.x))), system.act(h, p.x)};
}

std::optional<std::pair<Element, std::size_t>> smi_violation_on_ball(const LazyCocycle& system, std::size_t radius,
                                                                     std::size_t cap) {
  for (const auto& h : system.source().ball(radius, cap)) {
    if (h.is_identity()) continue;
    for (std::size_t x = 0; x < system.space().size(); ++x)
      if (system.value(h, x).is_identity()) return std::make_pair(h, x);
  }
  return std::nullopt;
}

// ---- extended systems ----------------------------------------------------

ExtendedSystem::ExtendedSystem(ExtensionKind kind, Graph theta, std::vector<FiniteGroup> source_groups,
                               std::vector<FiniteGroup> target_groups, VertexIndex base_vertex, SmiSystem base,
                               ExtendOptions options)
    : kind_(kind),
      source_(theta, std::move(source_groups)),
      target_(std::move(theta), std::move(target_groups)),
      base_vertex_(base_vertex),
      base_(std::move(base)) {
  const auto& graph = source_.graph();
  graph.name(base_vertex_);
  if (options.require_certified) require_certified(base_, "coupling extension");
  if (!source_.group(base_vertex_).same_table(base_.source()))
    throw Error(ErrorCode::mismatch, "source vertex group at '" + graph.name(base_vertex_) +
                                         "' differs from the base source group");
  if (!target_.group(base_vertex_).same_table(base_.target()))
    throw Error(ErrorCode::mismatch, "target vertex group at '" + graph.name(base_vertex_) +
                                         "' differs from the base target group");
  for (VertexIndex v = 0; v < graph.size(); ++v)
    if (v != base_vertex_ && !source_.group(v).same_table(target_.group(v)))
      throw Error(ErrorCode::mismatch, "vertex groups at '" + graph.name(v) +
                                           "' differ between source and target (only the base vertex may differ)");

  auto view = materialize_view(base_, 1);
  auto domain = greedy_fundamental_domain(view);
  base_domain_.assign(static_cast<std::size_t>(base_.target().order()),
                      std::vector<bool>(base_.space().size(), false));
  for (auto p : domain.points) base_domain_[p.gamma][p.x] = true;
  base_measure_ = domain.measure;

  reducible_ = !is_irreducible(graph).irreducible;
  star_is_everything_ = graph.star(base_vertex_).size() == graph.size();
  if (kind_ == ExtensionKind::free_product)
    for (VertexIndex v = 0; v < graph.size(); ++v)
      if (v != base_vertex_ && source_.group(v).order() == 1) trivial_free_factor_ = true;
}

std::size_t ExtendedSystem::act(const Element& h, std::size_t x) const {
  const auto s = h.syllables();
  for (std::size_t j = s.size(); j-- > 0;)
    if (s[j].vertex == base_vertex_) x = base_.cocycle().action().act(s[j].element, x);
  return x;
}

Element ExtendedSystem::value(const Element& h, std::size_t x) const { return value_of_word(h.syllables(), x); }

Element ExtendedSystem::value_of_word(std::span<const Syllable> word, std::size_t x) const {
  // alpha(s1 ... sn, x) = alpha(s1, (s2 ... sn).x) ... alpha(sn, x)
  std::vector<Syllable> out(word.size());
  for (std::size_t j = word.size(); j-- > 0;) {
    const auto& s = word[j];
    if (s.vertex == base_vertex_) {
      out[j] = {s.vertex, base_.cocycle().value(s.element, x)};
      x = base_.cocycle().action().act(s.element, x);
    } else {
      out[j] = s;
    }
  }
  return target_.reduce(out);
}

ExtendedSystem::Coordinates ExtendedSystem::coordinates(const CouplingPoint& p) const {
  auto split = target_.split_right_coset(p.g, base_vertex_);
  return {std::move(split.w), split.gamma, p.x};
}

bool ExtendedSystem::in_ytilde(const CouplingPoint& p) const {
  auto c = coordinates(p);
  if (c.gamma == 0) return c.w.is_identity();
  return base_domain_[c.gamma][c.x] && target_.in_orbit_reps(c.w, base_vertex_);
}

std::string ExtendedSystem::describe(const CouplingPoint& p) const {
  return "(" + target_.format(p.g) + ", " + point_label(space(), p.x) + ")";
}

ExtendedSystem extend_free(const SmiSystem& base, const FiniteGroup& free_factor, ExtendOptions options) {
  Graph theta({"vG", "vGamma"}, {});
  return ExtendedSystem(ExtensionKind::free_product, std::move(theta), {free_factor, base.source()},
                        {free_factor, base.target()}, 1, base, options);
}

ExtendedSystem extend_graph(const Graph& theta, std::vector<FiniteGroup> source_groups,
                            std::vector<FiniteGroup> target_groups, std::string_view base_vertex,
                            const SmiSystem& base, ExtendOptions options) {
  VertexIndex w = theta.index_of(base_vertex);
  if (source_groups.size() != theta.size() || target_groups.size() != theta.size())
    throw Error(ErrorCode::validation, "extend_graph needs one source and one target group per vertex");
  return ExtendedSystem(ExtensionKind::graph_product, theta, std::move(source_groups), std::move(target_groups), w,
                        base, options);
}

// ---- the domain Y~ -------------------------------------------------------

YtildeSlice build_ytilde(const ExtendedSystem& system, std::size_t radius, std::size_t cap) {
  const auto& G = system.target();
  const auto w0 = system.base_vertex();
  YtildeSlice out;
  out.radius = radius;
  out.measure = 0;
  const auto& space = system.space();
  for (std::size_t x = 0; x < space.size(); ++x) {
    out.points.push_back({G.identity(), 0, x});
    out.measure += space.weights[x];
  }
  const int order = system.base().target().order();
  for (auto& w : G.ball(radius, cap)) {
    if (!G.in_orbit_reps(w, w0)) continue;
    ++out.orbit_reps;
    for (int gamma = 1; gamma < order; ++gamma)
      for (std::size_t x = 0; x < space.size(); ++x)
        if (system.base_domain_contains(gamma, x)) {
          out.points.push_back({w, gamma, x});
          out.measure += space.weights[x];
        }
  }
  return out;
}

std::size_t classify_case(const ExtendedSystem& system, const Element& word) {
  auto d = system.source().alh_decompose(word, system.base_vertex());
  const bool a = !d.a.is_identity(), l = !d.l.is_identity(), h = !d.h.is_identity();
  if (!a && !l && !h) throw Error(ErrorCode::validation, "classify_case needs a nontrivial word");
  if (system.kind() == ExtensionKind::free_product) {
    if (a && h) return 0;
    if (h) return 1;
    return 2;
  }
  static constexpr std::size_t table[2][2][2] = {
      {{7, 4}, {6, 1}},  // a = e: (l, h)
      {{5, 2}, {3, 0}},  // a != e
  };
  return table[a][l][h];
}

DisjointnessReport verify_disjointness(const ExtendedSystem& system, std::size_t words_radius,
                                       std::size_t view_radius, const VerifyOptions& options) {
  if (view_radius < words_radius)
    throw Error(ErrorCode::view_too_small, "view radius " + std::to_string(view_radius) +
                                               " is smaller than the word radius " + std::to_string(words_radius));
  const auto start = Clock::now();
  const auto& G = system.target();
  DisjointnessReport report;
  report.words_radius = words_radius;
  report.view_radius = view_radius;
  const std::size_t n_cases = system.kind() == ExtensionKind::free_product ? 3 : 7;
  report.cases.assign(n_cases, {});

  std::vector<Element> words;
  for (auto& h : system.source().ball(words_radius, options.cap))
    if (!h.is_identity()) words.push_back(std::move(h));
  std::vector<CouplingPoint> ytilde;
  for (const auto& p : build_ytilde(system, view_radius, options.cap).points)
    ytilde.push_back({G.multiply(p.w, G.syllable(system.base_vertex(), p.gamma)), p.x});
  report.words = words.size();
  report.ytilde_points = ytilde.size();

  struct Partial {
    std::vector<CaseTally> cases;
    std::size_t violations = 0;
    std::optional<Violation> witness;
  };
  auto partials = parallel_chunks<Partial>(words.size(), options.jobs, [&](std::size_t begin, std::size_t end) {
    Partial part;
    part.cases.assign(n_cases, {});
    for (std::size_t i = begin; i < end; ++i) {
      auto& tally = part.cases[classify_case(system, words[i])];
      ++tally.words;
      for (const auto& y : ytilde) {
        ++tally.checks;
        auto moved = act_on_point(system, words[i], y);
        if (!system.in_ytilde(moved)) continue;
        ++part.violations;
        if (!part.witness) part.witness = Violation{words[i], y, std::move(moved)};
      }
    }
    return part;
  });
  for (auto& part : partials) {
    for (std::size_t c = 0; c < n_cases; ++c) {
      report.cases[c].words += part.cases[c].words;
      report.cases[c].checks += part.cases[c].checks;
    }
    report.violations += part.violations;
    if (!report.witness && part.witness) report.witness = std::move(part.witness);
  }
  for (const auto& c : report.cases) report.checks += c.checks;
  report.pass = report.violations == 0;
  report.seconds = seconds_since(start);
  return report;
}

std::size_t coverage_search_radius(const ExtendedSystem& system, std::size_t interior_radius) {
  std::size_t m = 0;
  const auto& H = system.source();
  for (VertexIndex v = 0; v < H.vertex_count(); ++v)
    for (int a : H.group(v).generators())
      for (std::size_t x = 0; x < system.space().size(); ++x)
        m = std::max(m, system.value(H.syllable(v, a), x).length());
  return interior_radius + (m + 1) * interior_radius + 1;
}

CoverageReport verify_coverage(const ExtendedSystem& system, std::size_t interior_radius, std::size_t search_radius,
                               const VerifyOptions& options, std::span<const CouplingPoint> removed) {
  const std::size_t needed = coverage_search_radius(system, interior_radius);
  if (search_radius < needed)
    throw Error(ErrorCode::precondition, "search radius " + std::to_string(search_radius) +
                                             " is below the displacement margin " + std::to_string(needed) +
                                             " for interior radius " + std::to_string(interior_radius));
  const auto start = Clock::now();
  const auto& G = system.target();
  CoverageReport report;
  report.interior_radius = interior_radius;
  report.search_radius = search_radius;

  const PointSet deleted(removed.begin(), removed.end());
  const auto words = system.source().ball(search_radius, options.cap);
  const auto table = tabulate(system, words);
  std::vector<CouplingPoint> interior;
  for (const auto& g : G.ball(interior_radius, options.cap))
    for (std::size_t x = 0; x < system.space().size(); ++x) interior.push_back({g, x});
  report.interior_points = interior.size();

  struct Partial {
    std::size_t covered = 0;
    std::size_t multiply_hit = 0;
    std::size_t longest = 0;
    std::vector<CouplingPoint> missed;
  };
  auto partials = parallel_chunks<Partial>(interior.size(), options.jobs, [&](std::size_t begin, std::size_t end) {
    Partial part;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& p = interior[i];
      std::size_t hits = 0;
      for (std::size_t k = 0; k < words.size(); ++k) {
        CouplingPoint q{G.multiply(p.g, table.inverse_value[k][p.x]), table.image[k][p.x]};
        if (!system.in_ytilde(q) || deleted.contains(q)) continue;
        if (hits++ == 0) part.longest = std::max(part.longest, words[k].length());
      }
      if (hits == 0) part.missed.push_back(p);
      else ++part.covered;
      if (hits > 1) ++part.multiply_hit;
    }
    return part;
  });
  for (auto& part : partials) {
    report.covered += part.covered;
    report.multiply_hit += part.multiply_hit;
    report.longest_word = std::max(report.longest_word, part.longest);
    report.missed_count += part.missed.size();
    for (auto& p : part.missed)
      if (report.missed.size() < 16) report.missed.push_back(std::move(p));
  }
  report.fraction = interior.empty() ? Rational(1) : Rational(report.covered) / Rational(interior.size());
  report.seconds = seconds_since(start);
  return report;
}

GrowthClass classify_partials(std::span<const Rational> partials) {
  if (partials.empty()) return GrowthClass::undetermined;
  if (std::all_of(partials.begin(), partials.end(), [](const Rational& v) { return v == 1; }))
    return GrowthClass::constant_one;
  if (partials.size() < 2) return GrowthClass::undetermined;
  for (std::size_t i = 1; i < partials.size(); ++i)
    if (!(partials[i - 1] < partials[i])) return GrowthClass::undetermined;
  return GrowthClass::growing;
}

ExtensionGrowth extension_index_growth(const ExtendedSystem& system, std::span<const std::size_t> radii,
                                       std::size_t cap) {
  ExtensionGrowth out;
  for (auto r : radii) {
    auto slice = build_ytilde(system, r, cap);
    out.radii.push_back(r);
    out.partials.push_back(slice.measure);
    out.orbit_reps.push_back(slice.orbit_reps);
  }
  out.cls = classify_partials(out.partials);
  if (system.base_index() == 1) {
    out.constant = Rational(1);
    return out;
  }
  if (system.orbit_reps_trivial() || system.trivial_free_factor()) {
    out.cls = GrowthClass::constant;
    out.constant = system.base_index();
    out.note = system.trivial_free_factor() ? "trivial free factor: W = {e}, index equals the base index"
                                            : "star of the base vertex is the whole graph: W~ = {e}, index c_w";
    return out;
  }
  if (out.cls == GrowthClass::undetermined) {
    if (!out.orbit_reps.empty() && out.orbit_reps.back() <= 1)
      out.note = "W~ within the largest ball is still {e}; increase the radii";
    else
      out.note = "partial measures are not strictly increasing over the given radii";
  }
  if (system.reducible() && out.note.empty()) out.note = "reducible regime: index may differ from the irreducible case";
  return out;
}

// ---- composition and the iterated pipeline --------------------------------

ComposedSystem::ComposedSystem(std::shared_ptr<const LazyCocycle> first, std::shared_ptr<const LazyCocycle> second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (!first_->target().same_structure(second_->source()))
    throw Error(ErrorCode::mismatch, "compose: the first target and the second source are different graph products");
  space_ = product_space(first_->space(), second_->space());
}

std::size_t ComposedSystem::act(const Element& h, std::size_t x) const {
  const std::size_t n2 = second_->space().size();
  const std::size_t x1 = x / n2, x2 = x % n2;
  auto d = second_->source().adopt(first_->value(h, x1));
  return first_->act(h, x1) * n2 + second_->act(d, x2);
}

Element ComposedSystem::value(const Element& h, std::size_t x) const {
  const std::size_t n2 = second_->space().size();
  auto d = second_->source().adopt(first_->value(h, x / n2));
  return second_->value(d, x % n2);
}

std::vector<Rational> truncated_greedy_measures(const LazyCocycle& system, std::span<const std::size_t> radii,
                                                std::size_t search_radius, std::size_t cap) {
  std::vector<std::size_t> sorted(radii.begin(), radii.end());
  if (!std::is_sorted(sorted.begin(), sorted.end()))
    throw Error(ErrorCode::validation, "truncated_greedy_measures needs ascending radii");
  std::vector<Rational> out;
  if (sorted.empty()) return out;
  const auto& G = system.target();
  const auto& space = system.space();
  std::vector<Element> words;
  for (auto& h : system.source().ball(search_radius, cap))
    if (!h.is_identity()) words.push_back(std::move(h));
  const auto table = tabulate(system, words);
  const auto ball = G.ball(sorted.back(), cap);

  PointSet chosen;
  Rational measure = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i <= ball.size(); ++i) {
    while (next < sorted.size() && (i == ball.size() || ball[i].length() > sorted[next])) {
      out.push_back(measure);
      ++next;
    }
    if (i == ball.size()) break;
    for (std::size_t x = 0; x < space.size(); ++x) {
      CouplingPoint p{ball[i], x};
      bool identified = false;
      for (std::size_t k = 0; k < words.size() && !identified; ++k)
        identified = chosen.contains({G.multiply(p.g, table.inverse_value[k][x]), table.image[k][x]});
      if (identified) continue;
      chosen.insert(std::move(p));
      measure += space.weights[x];
    }
  }
  return out;
}

PipelineReport theorem_b_pipeline(const Graph& theta, const std::vector<SmiSystem>& bases,
                                  const PipelineOptions& options) {
  if (theta.empty()) throw Error(ErrorCode::validation, "theorem-b needs a nonempty graph");
  if (bases.size() != theta.size())
    throw Error(ErrorCode::validation, "theorem-b needs one base system per vertex");
  for (VertexIndex v = 0; v < theta.size(); ++v) require_certified(bases[v], "theorem-b base at '" + theta.name(v) + "'");

  PipelineReport report;
  report.radii = options.radii;
  report.smi_radius = options.smi_radius;
  std::vector<FiniteGroup> current;
  for (const auto& b : bases) current.push_back(b.source());

  for (VertexIndex v = 0; v < theta.size(); ++v) {
    auto next = current;
    next[v] = bases[v].target();
    auto ext = std::make_shared<const ExtendedSystem>(ExtensionKind::graph_product, theta, current, next, v, bases[v]);
    PipelineStep step{v, ext, extension_index_growth(*ext, options.radii, options.cap)};
    if (!report.final_system) {
      report.final_system = ext;
    } else {
      report.final_system = std::make_shared<const ComposedSystem>(report.final_system, ext);
      report.compositions.push_back("compose(steps 1.." + std::to_string(v) + ", extension at " + theta.name(v) + ")");
    }
    report.steps.push_back(std::move(step));
    current = std::move(next);
  }

  report.smi_violation = smi_violation_on_ball(*report.final_system, options.smi_radius, options.cap);
  std::size_t max_radius = options.radii.empty() ? 0 : *std::max_element(options.radii.begin(), options.radii.end());
  report.final_partials = truncated_greedy_measures(*report.final_system, options.radii, 2 * max_radius + 1, options.cap);
  report.final_partials_cls = classify_partials(report.final_partials);

  bool all_one = true;
  bool any_growing = false;
  for (const auto& s : report.steps) {
    if (s.extension->base_index() != 1) all_one = false;
    if (s.growth.cls == GrowthClass::growing) any_growing = true;
  }
  if (report.smi_violation) {
    report.cls = GrowthClass::undetermined;
  } else if (all_one) {
    report.cls = report.final_partials_cls == GrowthClass::constant_one ? GrowthClass::constant_one
                                                                        : GrowthClass::undetermined;
    if (report.cls == GrowthClass::constant_one) report.constant = Rational(1);
  } else if (any_growing) {
    report.cls = GrowthClass::growing;
  } else {
    bool all_constant = std::all_of(report.steps.begin(), report.steps.end(), [](const PipelineStep& s) {
      return s.growth.cls == GrowthClass::constant || s.growth.cls == GrowthClass::constant_one;
    });
    if (all_constant) {
      report.cls = GrowthClass::constant;
      Rational c = 1;
      for (const auto& s : report.steps) c *= *s.growth.constant;
      report.constant = c;
    }
  }
  return report;
}

std::vector<Syllable> random_representative(const GraphProduct& product, const Element& g, std::mt19937_64& rng,
                                            std::size_t insertions) {
  std::vector<Syllable> word(g.syllables().begin(), g.syllables().end());
  const auto& graph = product.graph();
  auto pick = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  for (std::size_t k = 0; k < insertions; ++k) {
    VertexIndex v = pick(graph.size());
    const auto& A = product.group(v);
    if (A.order() == 1) continue;
    int a = 1 + static_cast<int>(pick(static_cast<std::size_t>(A.order() - 1)));
    std::size_t at = pick(word.size() + 1);
    word.insert(word.begin() + static_cast<std::ptrdiff_t>(at), {{v, a}, {v, A.inverse(a)}});
  }
  if (!word.empty()) {
    std::size_t j = pick(word.size());
    const auto& A = product.group(word[j].vertex);
    int b = static_cast<int>(pick(static_cast<std::size_t>(A.order())));
    int rest = A.multiply(A.inverse(b), word[j].element);
    word.insert(word.begin() + static_cast<std::ptrdiff_t>(j) + 1, {word[j].vertex, rest});
    word[j].element = b;
  }
  for (std::size_t k = 0; k < 4 * word.size(); ++k) {
    if (word.size() < 2) break;
    std::size_t j = pick(word.size() - 1);
    if (word[j].vertex != word[j + 1].vertex && graph.adjacent(word[j].vertex, word[j + 1].vertex))
      std::swap(word[j], word[j + 1]);
  }
  return word;
}

}  // namespace imbed
