#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imbed/graph_product.hpp"
#include "imbed/measure.hpp"

namespace imbed {

// A cocycle system whose source and target are graph products, evaluated on
// demand: the source acts on a finite space X and alpha(h, x) lies in the target.
class LazyCocycle {
 public:
  virtual ~LazyCocycle() = default;
  virtual const GraphProduct& source() const = 0;
  virtual const GraphProduct& target() const = 0;
  virtual const ProbSpace& space() const = 0;
  virtual std::size_t act(const Element& h, std::size_t x) const = 0;
  virtual Element value(const Element& h, std::size_t x) const = 0;
};

// A point (g, x) of target x X.
struct CouplingPoint {
  Element g;
  std::size_t x = 0;
  friend bool operator==(const CouplingPoint&, const CouplingPoint&) = default;
};

// h . (g, x) = (g alpha(h, x)^-1, h.x)
CouplingPoint act_on_point(const LazyCocycle& system, const Element& h, const CouplingPoint& p);

// (h, x) with h nontrivial in the source ball and alpha(h, x) = e, if any.
std::optional<std::pair<Element, std::size_t>> smi_violation_on_ball(const LazyCocycle& system, std::size_t radius,
                                                                     std::size_t cap = kDefaultBallCap);

enum class ExtensionKind { free_product, graph_product };

struct ExtendOptions {
  // Off only for negative controls that feed a deliberately broken base.
  bool require_certified = true;
};

// The extension of a finite SMI system at one vertex w of a graph Theta to an
// SMI cocycle between the graph products H (with H_w = source) and G (with
// G_w = target, G_v = H_v elsewhere). Off w the vertex groups act trivially on
// X and alpha(h, x) = h.
class ExtendedSystem : public LazyCocycle {
 public:
  ExtendedSystem(ExtensionKind kind, Graph theta, std::vector<FiniteGroup> source_groups,
                 std::vector<FiniteGroup> target_groups, VertexIndex base_vertex, SmiSystem base,
                 ExtendOptions options = {});

  const GraphProduct& source() const override { return source_; }
  const GraphProduct& target() const override { return target_; }
  const ProbSpace& space() const override { return base_.space(); }
  std::size_t act(const Element& h, std::size_t x) const override;
  Element value(const Element& h, std::size_t x) const override;
  // alpha over an arbitrary (unreduced) word, through the cocycle identity.
  Element value_of_word(std::span<const Syllable> word, std::size_t x) const;

  ExtensionKind kind() const noexcept { return kind_; }
  const Graph& theta() const noexcept { return source_.graph(); }
  VertexIndex base_vertex() const noexcept { return base_vertex_; }
  const SmiSystem& base() const noexcept { return base_; }
  // Base greedy Lambda-domain Y inside Gamma x X.
  bool base_domain_contains(int gamma, std::size_t x) const { return base_domain_[gamma][x]; }
  const Rational& base_domain_measure() const noexcept { return base_measure_; }
  // mu(Y) / mu(X) of the base.
  const Rational& base_index() const noexcept { return base_measure_; }

  bool reducible() const noexcept { return reducible_; }
  bool trivial_free_factor() const noexcept { return trivial_free_factor_; }
  // V = st(w): every coset representative lies in H_lk(w), so W~ = {e}.
  bool orbit_reps_trivial() const noexcept { return star_is_everything_; }

  struct Coordinates {
    Element w;
    int gamma = 0;
    std::size_t x = 0;
  };
  // target x X  ~  W x Gamma x X
  Coordinates coordinates(const CouplingPoint& p) const;
  // Membership in Y~ = ({e} x X) u (W~ x (Y \ X)).
  bool in_ytilde(const CouplingPoint& p) const;
  std::string describe(const CouplingPoint& p) const;

 private:
  ExtensionKind kind_;
  GraphProduct source_;
  GraphProduct target_;
  VertexIndex base_vertex_;
  SmiSystem base_;
  std::vector<std::vector<bool>> base_domain_;
  Rational base_measure_;
  bool reducible_ = false;
  bool trivial_free_factor_ = false;
  bool star_is_everything_ = false;
};

// G * Lambda -> G * Gamma over the edgeless graph {vG, vGamma}.
ExtendedSystem extend_free(const SmiSystem& base, const FiniteGroup& free_factor, ExtendOptions options = {});
// H_v and G_v must have identical tables for v != w; H_w / G_w are the base
// source / target. Reducible graphs are accepted and flagged.
ExtendedSystem extend_graph(const Graph& theta, std::vector<FiniteGroup> source_groups,
                            std::vector<FiniteGroup> target_groups, std::string_view base_vertex,
                            const SmiSystem& base, ExtendOptions options = {});

struct YtildePoint {
  Element w;
  int gamma = 0;
  std::size_t x = 0;
};

struct YtildeSlice {
  std::size_t radius = 0;
  std::vector<YtildePoint> points;
  std::size_t orbit_reps = 0;  // |W~ within ball(radius)|
  Rational measure;
};

// {(e, e, x)} u {(w, gamma, x) : w in W~ within ball(radius), (gamma, x) in Y \ X}.
YtildeSlice build_ytilde(const ExtendedSystem& system, std::size_t radius, std::size_t cap = kDefaultBallCap);

struct VerifyOptions {
  std::size_t jobs = 1;
  std::size_t cap = kDefaultBallCap;
};

struct CaseTally {
  std::size_t words = 0;   // source words of this shape in the tested ball
  std::size_t checks = 0;  // (word, point) pairs checked
};

struct Violation {
  Element word;
  CouplingPoint from;
  CouplingPoint to;
};

struct DisjointnessReport {
  std::size_t words_radius = 0;
  std::size_t view_radius = 0;
  bool pass = true;
  std::optional<Violation> witness;  // first violation in enumeration order
  std::size_t violations = 0;
  std::vector<CaseTally> cases;  // 3 cases (free) or 7 cases (graph)
  std::size_t words = 0;
  std::size_t ytilde_points = 0;
  std::size_t checks = 0;
  double seconds = 0;
};

// Case of a nontrivial source word by its (a, l, h) split at the base vertex,
// 0-based. Free: 0 = a,h nontrivial; 1 = a = e; 2 = h = e. Graph:
// 0 = all nontrivial; 1 = a = e; 2 = l = e; 3 = h = e; 4 = a = l = e;
// 5 = l = h = e; 6 = a = h = e.
std::size_t classify_case(const ExtendedSystem& system, const Element& word);

// Every nontrivial word of syllable length <= words_radius moves every point of
// Y~ within ball(view_radius) out of Y~. view_radius < words_radius is
// rejected with Error(view_too_small).
DisjointnessReport verify_disjointness(const ExtendedSystem& system, std::size_t words_radius,
                                       std::size_t view_radius, const VerifyOptions& options = {});

struct CoverageReport {
  std::size_t interior_radius = 0;
  std::size_t search_radius = 0;
  std::size_t interior_points = 0;
  std::size_t covered = 0;
  Rational fraction;
  std::vector<CouplingPoint> missed;  // at most 16 listed
  std::size_t missed_count = 0;
  std::size_t multiply_hit = 0;  // points reaching Y~ by more than one word
  std::size_t longest_word = 0;  // longest word needed for a covered point
  double seconds = 0;
};

// Smallest admissible search radius for an interior radius: the interior
// radius plus (m + 1) * interior + 1, with m the largest syllable length of a
// generator's cocycle value.
std::size_t coverage_search_radius(const ExtendedSystem& system, std::size_t interior_radius);

// Every point (g, x) with g in the target ball(interior_radius) is carried into
// Y~ by some source word of length <= search_radius. Points in `removed` are
// treated as deleted from Y~ (negative controls).
CoverageReport verify_coverage(const ExtendedSystem& system, std::size_t interior_radius, std::size_t search_radius,
                               const VerifyOptions& options = {}, std::span<const CouplingPoint> removed = {});

struct ExtensionGrowth {
  std::vector<std::size_t> radii;
  std::vector<Rational> partials;        // mu(Y~ within ball(R))
  std::vector<std::size_t> orbit_reps;   // |W~ within ball(R)|
  GrowthClass cls = GrowthClass::undetermined;
  std::optional<Rational> constant;      // for constant classes
  std::string note;
};

// constant-1 iff the base has index 1; growing when the partial measures
// strictly increase; constant c_w for the W~ = {e} regime.
ExtensionGrowth extension_index_growth(const ExtendedSystem& system, std::span<const std::size_t> radii,
                                       std::size_t cap = kDefaultBallCap);

// alpha(h, (x1, x2)) = second(first(h, x1), x2).
class ComposedSystem : public LazyCocycle {
 public:
  ComposedSystem(std::shared_ptr<const LazyCocycle> first, std::shared_ptr<const LazyCocycle> second);

  const GraphProduct& source() const override { return first_->source(); }
  const GraphProduct& target() const override { return second_->target(); }
  const ProbSpace& space() const override { return space_; }
  std::size_t act(const Element& h, std::size_t x) const override;
  Element value(const Element& h, std::size_t x) const override;

 private:
  std::shared_ptr<const LazyCocycle> first_;
  std::shared_ptr<const LazyCocycle> second_;
  ProbSpace space_;
};

// Greedy Lambda-domain on target x X restricted to ball(radius), with orbit
// identifications searched among source words of length <= search_radius.
// Returns the partial measure for each radius in `radii` (sorted ascending).
std::vector<Rational> truncated_greedy_measures(const LazyCocycle& system, std::span<const std::size_t> radii,
                                                std::size_t search_radius, std::size_t cap = kDefaultBallCap);

struct PipelineStep {
  VertexIndex vertex = 0;
  std::shared_ptr<const ExtendedSystem> extension;
  ExtensionGrowth growth;
};

struct PipelineReport {
  std::vector<PipelineStep> steps;
  std::vector<std::string> compositions;  // one line per composition performed
  std::shared_ptr<const LazyCocycle> final_system;
  std::size_t smi_radius = 0;
  std::optional<std::pair<Element, std::size_t>> smi_violation;
  std::vector<std::size_t> radii;
  std::vector<Rational> final_partials;  // truncated greedy on the composite
  GrowthClass final_partials_cls = GrowthClass::undetermined;
  GrowthClass cls = GrowthClass::undetermined;
  std::optional<Rational> constant;
};

struct PipelineOptions {
  std::vector<std::size_t> radii{0, 1, 2};
  std::size_t smi_radius = 3;
  std::size_t cap = kDefaultBallCap;
};

// Replaces H_v by G_v one vertex at a time (vertex order), extending each base
// at its vertex and composing the intermediate systems. bases[v] : H_v -> G_v.
PipelineReport theorem_b_pipeline(const Graph& theta, const std::vector<SmiSystem>& bases,
                                  const PipelineOptions& options = {});

// A random unreduced word for g: commuting swaps, inserted cancelling pairs
// and split syllables. Used to test that alpha~ ignores the representative.
std::vector<Syllable> random_representative(const GraphProduct& product, const Element& g, std::mt19937_64& rng,
                                            std::size_t insertions = 2);

// Shared classifier for partial measures.
GrowthClass classify_partials(std::span<const Rational> partials);

}  // namespace imbed
