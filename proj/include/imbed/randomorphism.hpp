#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbed/finite_group.hpp"
#include "imbed/measure.hpp"
#include "imbed/rational.hpp"

namespace imbed {

// A map f: Lambda -> Gamma restricted to a domain of Lambda, with f(e) = e.
// values[l] is the image of l, or -1 when l is outside the domain.
struct MapGerm {
  std::vector<int> values;

  bool in_domain(int l) const { return l >= 0 && static_cast<std::size_t>(l) < values.size() && values[l] >= 0; }
  std::size_t domain_size() const;
  bool fixes_identity() const { return !values.empty() && values[0] == 0; }
  bool injective() const;
  bool full_domain() const { return domain_size() == values.size(); }

  friend auto operator<=>(const MapGerm&, const MapGerm&) = default;
};

// A finitely supported probability measure on germs, all sharing one domain.
// Support is kept sorted and free of repeats.
struct GermMeasure {
  FiniteGroup source = FiniteGroup::trivial();
  FiniteGroup target = FiniteGroup::trivial();
  std::vector<MapGerm> support;
  std::vector<Rational> weights;

  bool supported_on_injective() const;
};

// Validates germs (size, f(e) = e, values in the target, one common domain),
// merges repeats and sorts the support.
GermMeasure make_germ_measure(FiniteGroup source, FiniteGroup target, std::vector<MapGerm> germs,
                              std::vector<Rational> weights);

// (l . f)(x) = f(x l) f(l)^-1 on {x : x l in dom f}. Throws Error(view_too_small)
// when l is outside dom f.
MapGerm germ_act(const FiniteGroup& source, const FiniteGroup& target, int lambda, const MapGerm& f);

// The germ l -> alpha(l, x) over the word-length ball of radius r, pushed
// forward along mu. No certification is required.
GermMeasure germ_measure_from_cocycle(const Cocycle& cocycle, std::size_t radius);
// Same, for a certified system; re-verifies that every germ is injective.
GermMeasure randembedding_from_cocycle(const SmiSystem& system, std::size_t radius);

struct InvarianceGap {
  int lambda = 0;
  Rational total_variation;
};

struct InvarianceReport {
  bool invariant = true;
  std::vector<InvarianceGap> gaps;  // only violating lambdas
};

// Compares l_* m with m on the common shrunken domain for each l. Throws
// Error(view_too_small) when some l is outside the germ domain.
InvarianceReport check_invariance(const GermMeasure& measure, std::span<const int> lambdas);
InvarianceReport check_invariance(const GermMeasure& measure);  // every element of the source

// X = support, l . f = germ_act(l, f), alpha(l, f) = f(l). Throws
// Error(validation) with a witness for non-injective germs, partial domains,
// non-invariance, or an action that leaves the support.
SmiSystem cocycle_from_randembedding(const GermMeasure& measure);

// A point bijection between the two systems preserving weights, the action and
// the cocycle, matched through germs (so it needs distinct germs per point).
std::optional<std::vector<std::size_t>> relabeling(const SmiSystem& from, const SmiSystem& to);

std::string format_germ(const GermMeasure& measure, const MapGerm& f);

}  // namespace imbed
