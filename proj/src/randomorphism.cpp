#include "imbed/randomorphism.hpp"

#include <algorithm>
#include <map>

#include "imbed/error.hpp"

namespace imbed {

std::size_t MapGerm::domain_size() const {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](int v) { return v >= 0; }));
}

bool MapGerm::injective() const {
  std::vector<int> seen;
  for (int v : values) {
    if (v < 0) continue;
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) return false;
    seen.push_back(v);
  }
  return true;
}

bool GermMeasure::supported_on_injective() const {
  return std::all_of(support.begin(), support.end(), [](const MapGerm& f) { return f.injective(); });
}

namespace {

std::vector<bool> domain_mask(const MapGerm& f) {
  std::vector<bool> mask(f.values.size());
  for (std::size_t l = 0; l < f.values.size(); ++l) mask[l] = f.values[l] >= 0;
  return mask;
}

MapGerm restrict(const MapGerm& f, const std::vector<bool>& mask) {
  MapGerm out = f;
  for (std::size_t l = 0; l < mask.size(); ++l)
    if (!mask[l]) out.values[l] = -1;
  return out;
}

std::map<MapGerm, Rational> as_map(const std::vector<MapGerm>& germs, const std::vector<Rational>& weights) {
  std::map<MapGerm, Rational> out;
  for (std::size_t i = 0; i < germs.size(); ++i) out[germs[i]] += weights[i];
  return out;
}

}  // namespace

GermMeasure make_germ_measure(FiniteGroup source, FiniteGroup target, std::vector<MapGerm> germs,
                              std::vector<Rational> weights) {
  if (germs.empty()) throw Error(ErrorCode::validation, "germ measure needs a nonempty support");
  if (germs.size() != weights.size()) throw Error(ErrorCode::validation, "germ and weight counts differ");
  Rational total = 0;
  const auto n = static_cast<std::size_t>(source.order());
  std::optional<std::vector<bool>> mask;
  for (std::size_t i = 0; i < germs.size(); ++i) {
    const auto& f = germs[i];
    const std::string label = "germ " + std::to_string(i);
    if (f.values.size() != n) throw Error(ErrorCode::validation, label + " needs one entry per source element");
    if (!f.fixes_identity()) throw Error(ErrorCode::validation, label + " does not fix the identity");
    for (int v : f.values)
      if (v >= target.order() || v < -1) throw Error(ErrorCode::validation, label + " has a value outside the target");
    if (!mask) mask = domain_mask(f);
    else if (*mask != domain_mask(f)) throw Error(ErrorCode::validation, label + " has a different domain");
    if (weights[i] <= 0) throw Error(ErrorCode::validation, label + " has nonpositive weight");
    total += weights[i];
  }
  if (total != 1) throw Error(ErrorCode::validation, "germ weights sum to " + format_rational(total) + ", not 1");
  GermMeasure m{std::move(source), std::move(target), {}, {}};
  for (auto& [f, w] : as_map(germs, weights)) {
    m.support.push_back(f);
    m.weights.push_back(w);
  }
  return m;
}

MapGerm germ_act(const FiniteGroup& source, const FiniteGroup& target, int lambda, const MapGerm& f) {
  if (!f.in_domain(lambda))
    throw Error(ErrorCode::view_too_small, "germ_act: " + source.element_name(lambda) +
                                               " is outside the germ domain; use a larger radius");
  const int inv = target.inverse(f.values[lambda]);
  MapGerm out;
  out.values.assign(f.values.size(), -1);
  for (int x = 0; x < source.order(); ++x) {
    int xl = source.multiply(x, lambda);
    if (f.in_domain(xl)) out.values[x] = target.multiply(f.values[xl], inv);
  }
  return out;
}

GermMeasure germ_measure_from_cocycle(const Cocycle& cocycle, std::size_t radius) {
  const auto& source = cocycle.source();
  std::vector<MapGerm> germs;
  for (std::size_t x = 0; x < cocycle.space().size(); ++x) {
    MapGerm f;
    f.values.assign(static_cast<std::size_t>(source.order()), -1);
    for (int l = 0; l < source.order(); ++l)
      if (static_cast<std::size_t>(source.word_length(l)) <= radius) f.values[l] = cocycle.value(l, x);
    germs.push_back(std::move(f));
  }
  return make_germ_measure(source, cocycle.target(), std::move(germs), cocycle.space().weights);
}

GermMeasure randembedding_from_cocycle(const SmiSystem& system, std::size_t radius) {
  require_certified(system, "randembedding_from_cocycle");
  auto m = germ_measure_from_cocycle(system.cocycle(), radius);
  for (const auto& f : m.support)
    if (!f.injective())
      throw Error(ErrorCode::validation, "certified system produced a non-injective germ " + format_germ(m, f));
  return m;
}

InvarianceReport check_invariance(const GermMeasure& m, std::span<const int> lambdas) {
  InvarianceReport report;
  for (int l : lambdas) {
    if (!m.source.contains(l)) throw Error(ErrorCode::validation, "invariance check with an element outside the source");
    const auto& f0 = m.support.front();
    if (!f0.in_domain(l))
      throw Error(ErrorCode::view_too_small, "germ domain too small for " + m.source.element_name(l) +
                                                 "; use a larger radius");
    auto mask = domain_mask(germ_act(m.source, m.target, l, f0));
    std::vector<MapGerm> pushed, base;
    for (const auto& f : m.support) {
      pushed.push_back(germ_act(m.source, m.target, l, f));
      base.push_back(restrict(f, mask));
    }
    auto a = as_map(pushed, m.weights);
    auto b = as_map(base, m.weights);
    for (const auto& [f, w] : b) a.try_emplace(f, 0);
    Rational gap = 0;
    for (const auto& [f, w] : a) {
      auto it = b.find(f);
      Rational d = w - (it == b.end() ? Rational(0) : it->second);
      gap += d < 0 ? -d : d;
    }
    gap /= 2;
    if (gap != 0) {
      report.invariant = false;
      report.gaps.push_back({l, gap});
    }
  }
  return report;
}

InvarianceReport check_invariance(const GermMeasure& m) {
  std::vector<int> all;
  for (int l = 0; l < m.source.order(); ++l) all.push_back(l);
  return check_invariance(m, all);
}

SmiSystem cocycle_from_randembedding(const GermMeasure& m) {
  for (const auto& f : m.support) {
    if (!f.full_domain())
      throw Error(ErrorCode::validation, "germ " + format_germ(m, f) + " is not defined on the whole source group");
    if (!f.injective())
      throw Error(ErrorCode::validation, "not a randembedding: germ " + format_germ(m, f) + " is not injective");
  }
  auto inv = check_invariance(m);
  if (!inv.invariant)
    throw Error(ErrorCode::validation, "measure is not invariant: " + m.source.element_name(inv.gaps.front().lambda) +
                                           " moves it by total variation " +
                                           format_rational(inv.gaps.front().total_variation));
  const std::size_t n = m.support.size();
  std::vector<std::vector<std::size_t>> action(static_cast<std::size_t>(m.source.order()), std::vector<std::size_t>(n));
  std::vector<std::vector<int>> table(static_cast<std::size_t>(m.source.order()), std::vector<int>(n));
  for (int l = 0; l < m.source.order(); ++l)
    for (std::size_t i = 0; i < n; ++i) {
      auto moved = germ_act(m.source, m.target, l, m.support[i]);
      auto it = std::lower_bound(m.support.begin(), m.support.end(), moved);
      if (it == m.support.end() || *it != moved)
        throw Error(ErrorCode::validation, "action leaves the support: " + m.source.element_name(l) + " . " +
                                               format_germ(m, m.support[i]) + " = " + format_germ(m, moved));
      action[l][i] = static_cast<std::size_t>(it - m.support.begin());
      table[l][i] = m.support[i].values[l];
    }
  std::vector<std::string> names;
  for (const auto& f : m.support) names.push_back(format_germ(m, f));
  auto act = action_from_table(m.source, make_space(m.weights, std::move(names)), std::move(action));
  return SmiSystem(cocycle_from_table(std::move(act), m.target, std::move(table)));
}

std::optional<std::vector<std::size_t>> relabeling(const SmiSystem& from, const SmiSystem& to) {
  const auto& a = from.cocycle();
  const auto& b = to.cocycle();
  if (!a.source().same_table(b.source()) || !a.target().same_table(b.target())) return std::nullopt;
  const std::size_t n = a.space().size();
  if (b.space().size() != n) return std::nullopt;
  const int order = a.source().order();
  auto column = [order](const Cocycle& c, std::size_t x) {
    std::vector<int> col(static_cast<std::size_t>(order));
    for (int l = 0; l < order; ++l) col[l] = c.value(l, x);
    return col;
  };
  std::map<std::vector<int>, std::size_t> target_points;
  for (std::size_t y = 0; y < n; ++y)
    if (!target_points.emplace(column(b, y), y).second) return std::nullopt;
  std::vector<std::size_t> map(n);
  std::vector<bool> used(n, false);
  for (std::size_t x = 0; x < n; ++x) {
    auto it = target_points.find(column(a, x));
    if (it == target_points.end() || used[it->second]) return std::nullopt;
    map[x] = it->second;
    used[it->second] = true;
    if (a.space().weights[x] != b.space().weights[map[x]]) return std::nullopt;
  }
  for (int l = 0; l < order; ++l)
    for (std::size_t x = 0; x < n; ++x)
      if (map[a.action().act(l, x)] != b.action().act(l, map[x])) return std::nullopt;
  return map;
}

std::string format_germ(const GermMeasure& m, const MapGerm& f) {
  std::string out = "{";
  bool first = true;
  for (int l = 1; l < static_cast<int>(f.values.size()); ++l) {
    if (f.values[l] < 0) continue;
    if (!first) out += ", ";
    first = false;
    out += m.source.element_name(l) + "->" + m.target.element_name(f.values[l]);
  }
  return out + "}";
}

}  // namespace imbed
