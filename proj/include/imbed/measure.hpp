#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "imbed/finite_group.hpp"
#include "imbed/graph_product.hpp"
#include "imbed/rational.hpp"

namespace imbed {

// A finite probability space with exact weights.
struct ProbSpace {
  std::vector<std::string> points;
  std::vector<Rational> weights;

  std::size_t size() const noexcept { return weights.size(); }
  friend bool operator==(const ProbSpace&, const ProbSpace&) = default;
};

// Throws Error(validation) for an empty list, a nonpositive weight (naming the
// point) or weights not summing to 1. Point names default to x0, x1, ...
ProbSpace make_space(std::vector<Rational> weights, std::vector<std::string> names = {});
// Points (a, b) indexed a * |rhs| + b.
ProbSpace product_space(const ProbSpace& lhs, const ProbSpace& rhs);

// Images of generators: (group element, permutation or value per point).
template <typename Value>
using GeneratorTable = std::vector<std::pair<int, std::vector<Value>>>;

// A measure-preserving action of a finite group on a finite probability space,
// stored as a full table [element][point].
class GroupAction {
 public:
  const FiniteGroup& group() const noexcept { return group_; }
  const ProbSpace& space() const noexcept { return space_; }
  std::size_t act(int g, std::size_t x) const { return table_.at(static_cast<std::size_t>(g)).at(x); }
  const std::vector<std::vector<std::size_t>>& table() const noexcept { return table_; }

 private:
  friend GroupAction make_action(FiniteGroup, ProbSpace, const GeneratorTable<std::size_t>&);
  friend GroupAction action_from_table(FiniteGroup, ProbSpace, std::vector<std::vector<std::size_t>>);
  GroupAction(FiniteGroup group, ProbSpace space, std::vector<std::vector<std::size_t>> table)
      : group_(std::move(group)), space_(std::move(space)), table_(std::move(table)) {}

  FiniteGroup group_;
  ProbSpace space_;
  std::vector<std::vector<std::size_t>> table_;
};

// Extends generator permutations to the whole group and validates the
// permutation property, weight preservation and the action law. Errors carry a
// witness (element, element, point) or the violated relation.
GroupAction make_action(FiniteGroup group, ProbSpace space, const GeneratorTable<std::size_t>& generators);
GroupAction action_from_table(FiniteGroup group, ProbSpace space, std::vector<std::vector<std::size_t>> table);

// alpha: source x X -> target satisfying alpha(gh, x) = alpha(g, h.x) alpha(h, x).
class Cocycle {
 public:
  const GroupAction& action() const noexcept { return action_; }
  const FiniteGroup& source() const noexcept { return action_.group(); }
  const FiniteGroup& target() const noexcept { return target_; }
  const ProbSpace& space() const noexcept { return action_.space(); }
  int value(int lambda, std::size_t x) const { return table_.at(static_cast<std::size_t>(lambda)).at(x); }
  const std::vector<std::vector<int>>& table() const noexcept { return table_; }

 private:
  friend Cocycle make_cocycle(GroupAction, FiniteGroup, const GeneratorTable<int>&);
  friend Cocycle cocycle_from_table(GroupAction, FiniteGroup, std::vector<std::vector<int>>);
  Cocycle(GroupAction action, FiniteGroup target, std::vector<std::vector<int>> table)
      : action_(std::move(action)), target_(std::move(target)), table_(std::move(table)) {}

  GroupAction action_;
  FiniteGroup target_;
  std::vector<std::vector<int>> table_;
};

// Extends generator values through the cocycle identity, checking every
// relation of the source group (exhaustive over its Cayley graph).
Cocycle make_cocycle(GroupAction action, FiniteGroup target, const GeneratorTable<int>& generators);
Cocycle cocycle_from_table(GroupAction action, FiniteGroup target, std::vector<std::vector<int>> table);

struct SmiCertificate {
  bool smi = false;        // alpha(l, x) = e  <=>  l = e
  bool injective = false;  // l -> alpha(l, x) injective for every x
  std::optional<std::pair<int, std::size_t>> counterexample;  // (l != e, x) with alpha(l, x) = e
  std::optional<std::tuple<int, int, std::size_t>> collision;  // (l1, l2, x) with equal values
};

SmiCertificate is_smi_cocycle(const Cocycle& cocycle);

// A cocycle together with its SMI certificate.
class SmiSystem {
 public:
  explicit SmiSystem(Cocycle cocycle);

  const Cocycle& cocycle() const noexcept { return cocycle_; }
  const SmiCertificate& certificate() const noexcept { return certificate_; }
  bool certified() const noexcept { return certificate_.smi; }
  const FiniteGroup& source() const noexcept { return cocycle_.source(); }
  const FiniteGroup& target() const noexcept { return cocycle_.target(); }
  const ProbSpace& space() const noexcept { return cocycle_.space(); }

 private:
  Cocycle cocycle_;
  SmiCertificate certificate_;
};

// Throws Error(precondition) unless the system is certified.
void require_certified(const SmiSystem& system, const std::string& what);

// One-point space, alpha(l, x) = l.
SmiSystem identity_system(const FiniteGroup& group);

struct ViewPoint {
  int gamma = 0;
  std::size_t x = 0;
  friend auto operator<=>(const ViewPoint&, const ViewPoint&) = default;
};

// Truncated view of Omega = target x X with the two commuting actions
//   gamma . (g, x) = (gamma g, x)
//   l . (g, x) = (g alpha(l, x)^-1, l.x)
// restricted to the syllable-length ball of the target. The target of a finite
// system is a single vertex group, so radius >= 1 already covers it.
class CouplingView {
 public:
  const SmiSystem& system() const noexcept { return *system_; }
  std::size_t radius() const noexcept { return radius_; }
  const std::vector<int>& gammas() const noexcept { return gammas_; }  // enumeration order
  bool in_view(int gamma) const { return position_.at(static_cast<std::size_t>(gamma)) >= 0; }
  bool complete() const noexcept { return static_cast<int>(gammas_.size()) == system_->target().order(); }
  std::size_t size() const noexcept { return gammas_.size() * system_->space().size(); }

  ViewPoint gamma_act(int gamma, ViewPoint p) const;
  ViewPoint lambda_act(int lambda, ViewPoint p) const;
  // The whole source orbit of p stays in the view.
  bool interior(ViewPoint p) const;
  std::vector<ViewPoint> x_domain() const;
  std::vector<ViewPoint> points() const;
  Rational weight(ViewPoint p) const { return system_->space().weights.at(p.x); }

  // Outcome of the checks run when the view is materialized.
  bool actions_commute() const noexcept { return commute_; }
  bool lambda_free() const noexcept { return free_; }
  bool x_domain_tiles() const noexcept { return tiles_; }

 private:
  friend CouplingView materialize_view(const SmiSystem&, std::size_t, std::size_t);
  CouplingView(const SmiSystem& system, std::size_t radius);

  const SmiSystem* system_;
  std::size_t radius_;
  std::vector<int> gammas_;
  std::vector<int> position_;
  bool commute_ = true;
  bool free_ = true;
  bool tiles_ = true;
};

// The system must outlive the view. Throws Error(precondition) for an
// uncertified system and Error(resource_cap) when the view exceeds `cap` points.
CouplingView omega_coupling(const SmiSystem& system, std::size_t radius, std::size_t cap = kDefaultBallCap);
// Same view without the certification check; used to build negative controls.
CouplingView materialize_view(const SmiSystem& system, std::size_t radius, std::size_t cap = kDefaultBallCap);

// The cocycle recovered from the view: l . (e, x) = (alpha(l, x)^-1, l.x).
// Needs a complete view.
std::vector<std::vector<int>> read_back_cocycle(const CouplingView& view);

struct FundamentalDomain {
  std::vector<ViewPoint> points;
  Rational measure;
  std::vector<ViewPoint> boundary;  // uncovered view points whose orbit leaves the view
};

// Y_0 = {e} x X; Y_n = ({gamma_n} x X) minus the source orbits of Y_0..Y_{n-1},
// with gamma_n running through the view in enumeration order.
FundamentalDomain greedy_fundamental_domain(const CouplingView& view);

enum class GrowthClass { constant_one, constant, growing, undetermined };
const char* to_string(GrowthClass cls) noexcept;

struct IndexRecord {
  std::size_t radius = 0;
  Rational value;         // mu(Y within view) / mu(X)
  bool complete = false;  // the view is the whole coupling, so value is the index
};

struct GrowthRecord {
  std::vector<std::size_t> radii;
  std::vector<Rational> partials;
  GrowthClass cls = GrowthClass::undetermined;
  std::optional<Rational> exact;  // set when the largest view was complete
};

IndexRecord coupling_index(const CouplingView& view, const FundamentalDomain& domain);
GrowthRecord index_growth(const SmiSystem& system, std::span<const std::size_t> radii,
                          std::size_t cap = kDefaultBallCap);
// Exact index of a finite system from the greedy domain on the complete view.
Rational system_index(const SmiSystem& system);

// l . (x1, x2) = (l.x1, alpha1(l, x1).x2), alpha(l, (x1, x2)) = alpha2(alpha1(l, x1), x2).
SmiSystem compose(const SmiSystem& first, const SmiSystem& second);
// Componentwise system into the product of the targets.
SmiSystem direct_product(const SmiSystem& lhs, const SmiSystem& rhs);

// A finite coupling given directly by two actions on weighted points, for
// examples (index < 1) that no cocycle system realizes.
struct FiniteCoupling {
  FiniteGroup lambda = FiniteGroup::trivial();
  FiniteGroup gamma = FiniteGroup::trivial();
  std::vector<Rational> weights;
  std::vector<std::vector<std::size_t>> lambda_table;  // [element][point]
  std::vector<std::vector<std::size_t>> gamma_table;
};

// Builds the tables from generator images (extended and validated as actions).
FiniteCoupling make_finite_coupling(FiniteGroup lambda, FiniteGroup gamma, std::vector<Rational> weights,
                                    const GeneratorTable<std::size_t>& lambda_generators,
                                    const GeneratorTable<std::size_t>& gamma_generators);

struct FiniteCouplingReport {
  std::vector<std::size_t> x_domain;  // gamma-fundamental domain
  std::vector<std::size_t> y_domain;  // lambda-fundamental domain
  Rational x_measure;
  Rational y_measure;
  Rational index;  // y_measure / x_measure
};

// Checks weight preservation, freeness and commutation (throwing with a
// witness), then picks both fundamental domains greedily in point order.
FiniteCouplingReport validate_finite_coupling(const FiniteCoupling& coupling);

// Rescales the first coupling to mu(X1) = 1 and the second to mu(X2) = a.
FiniteCoupling disjoint_union(const FiniteCoupling& first, const FiniteCoupling& second, const Rational& a);
Rational union_index_formula(const Rational& c1, const Rational& c2, const Rational& a);

struct NestedDomains {
  bool success = false;
  std::vector<std::size_t> x_domain;
  std::vector<std::size_t> y_domain;
  // On failure: a set of gamma-orbits (by smallest point) whose points meet
  // fewer lambda-orbits than there are orbits in the set (Hall violation).
  std::vector<std::size_t> blocked_gamma_orbits;
  std::size_t reachable_lambda_orbits = 0;
  std::string obstruction;
};

// Searches for a gamma-domain X inside a lambda-domain Y. This is a matching
// of gamma-orbits into distinct lambda-orbits; failure is certified by Hall's
// condition, so the search is exhaustive.
NestedDomains attempt_nested_domains(const FiniteCoupling& coupling);

}  // namespace imbed
