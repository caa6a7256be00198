#include "imbed/measure.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "imbed/error.hpp"

namespace imbed {

namespace {

std::string point_name(const ProbSpace& space, std::size_t x) {
  return x < space.points.size() ? space.points[x] : "#" + std::to_string(x);
}

std::string element_label(const FiniteGroup& g, int a) { return g.element_name(a); }

// Breadth-first extension of generator data over the Cayley graph of `group`:
// value(s h) = combine(s, h, value(h)). Every Cayley edge is visited, so every
// relation is checked; `same` decides consistency on revisits.
template <typename Value, typename Combine, typename Describe>
std::vector<Value> extend_over_group(const FiniteGroup& group, const Value& at_identity,
                                     const std::vector<int>& generators, Combine combine, Describe describe) {
  const int n = group.order();
  std::vector<std::optional<Value>> value(static_cast<std::size_t>(n));
  value[0] = at_identity;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int h = queue.front();
    queue.pop_front();
    for (int s : generators) {
      int sh = group.multiply(s, h);
      Value v = combine(s, h, *value[h]);
      if (!value[sh]) {
        value[sh] = std::move(v);
        queue.push_back(sh);
      } else if (*value[sh] != v) {
        throw Error(ErrorCode::validation, "relation " + group.element_name(s) + "*" + group.element_name(h) +
                                               " = " + group.element_name(sh) + " violated: " +
                                               describe(*value[sh], v));
      }
    }
  }
  std::vector<Value> out;
  out.reserve(value.size());
  for (int a = 0; a < n; ++a) {
    if (!value[a])
      throw Error(ErrorCode::validation,
                  "generators do not generate group '" + group.name() + "' (missing " + group.element_name(a) + ")");
    out.push_back(std::move(*value[a]));
  }
  return out;
}

void check_permutation(const std::vector<std::size_t>& perm, std::size_t n, const std::string& what) {
  if (perm.size() != n) throw Error(ErrorCode::validation, what + ": image has wrong length");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw Error(ErrorCode::validation, what + ": not a permutation of the points");
    seen[p] = true;
  }
}

std::vector<std::vector<std::size_t>> extend_permutations(const FiniteGroup& group, std::size_t n_points,
                                                          const GeneratorTable<std::size_t>& generators) {
  std::vector<int> gens;
  std::vector<std::vector<std::size_t>> image(static_cast<std::size_t>(group.order()));
  for (const auto& [g, perm] : generators) {
    if (!group.contains(g)) throw Error(ErrorCode::validation, "generator outside group '" + group.name() + "'");
    check_permutation(perm, n_points, "generator " + group.element_name(g));
    gens.push_back(g);
    image[g] = perm;
  }
  std::vector<std::size_t> id(n_points);
  for (std::size_t x = 0; x < n_points; ++x) id[x] = x;
  return extend_over_group(
      group, id, gens,
      [&](int s, int, const std::vector<std::size_t>& h) {
        std::vector<std::size_t> out(n_points);
        for (std::size_t x = 0; x < n_points; ++x) out[x] = image[s][h[x]];
        return out;
      },
      [](const auto&, const auto&) { return std::string("two different permutations"); });
}

void validate_action_table(const FiniteGroup& group, const std::vector<Rational>& weights,
                           const std::vector<std::vector<std::size_t>>& table, const std::string& label) {
  const std::size_t n = weights.size();
  if (table.size() != static_cast<std::size_t>(group.order()))
    throw Error(ErrorCode::validation, label + ": action table needs one row per group element");
  for (int g = 0; g < group.order(); ++g) {
    check_permutation(table[g], n, label + " element " + group.element_name(g));
    for (std::size_t x = 0; x < n; ++x)
      if (weights[table[g][x]] != weights[x])
        throw Error(ErrorCode::validation, label + " not weight-preserving: " + group.element_name(g) +
                                               " moves point " + std::to_string(x) + " (weight " +
                                               format_rational(weights[x]) + ") to point " +
                                               std::to_string(table[g][x]) + " (weight " +
                                               format_rational(weights[table[g][x]]) + ")");
  }
  for (std::size_t x = 0; x < n; ++x)
    if (table[0][x] != x) throw Error(ErrorCode::validation, label + ": identity moves point " + std::to_string(x));
  for (int g = 0; g < group.order(); ++g)
    for (int h = 0; h < group.order(); ++h)
      for (std::size_t x = 0; x < n; ++x)
        if (table[group.multiply(g, h)][x] != table[g][table[h][x]])
          throw Error(ErrorCode::validation, label + " violates the action law at (" + group.element_name(g) +
                                                 ", " + group.element_name(h) + ", point " + std::to_string(x) +
                                                 ")");
}

}  // namespace

ProbSpace make_space(std::vector<Rational> weights, std::vector<std::string> names) {
  if (weights.empty()) throw Error(ErrorCode::validation, "probability space needs at least one point");
  if (names.empty())
    for (std::size_t i = 0; i < weights.size(); ++i) names.push_back("x" + std::to_string(i));
  if (names.size() != weights.size()) throw Error(ErrorCode::validation, "point name count differs from weights");
  Rational total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0)
      throw Error(ErrorCode::validation,
                  "point '" + names[i] + "' has nonpositive weight " + format_rational(weights[i]));
    total += weights[i];
  }
  if (total != 1) throw Error(ErrorCode::validation, "weights sum to " + format_rational(total) + ", not 1");
  return {std::move(names), std::move(weights)};
}

ProbSpace product_space(const ProbSpace& lhs, const ProbSpace& rhs) {
  ProbSpace out;
  for (std::size_t a = 0; a < lhs.size(); ++a)
    for (std::size_t b = 0; b < rhs.size(); ++b) {
      out.points.push_back("(" + point_name(lhs, a) + "," + point_name(rhs, b) + ")");
      out.weights.push_back(lhs.weights[a] * rhs.weights[b]);
    }
  return out;
}

GroupAction make_action(FiniteGroup group, ProbSpace space, const GeneratorTable<std::size_t>& generators) {
  auto table = extend_permutations(group, space.size(), generators);
  validate_action_table(group, space.weights, table, "action of '" + group.name() + "'");
  return GroupAction(std::move(group), std::move(space), std::move(table));
}

GroupAction action_from_table(FiniteGroup group, ProbSpace space, std::vector<std::vector<std::size_t>> table) {
  validate_action_table(group, space.weights, table, "action of '" + group.name() + "'");
  return GroupAction(std::move(group), std::move(space), std::move(table));
}

Cocycle make_cocycle(GroupAction action, FiniteGroup target, const GeneratorTable<int>& generators) {
  const auto& source = action.group();
  const std::size_t n = action.space().size();
  std::vector<int> gens;
  std::vector<std::vector<int>> value(static_cast<std::size_t>(source.order()));
  for (const auto& [g, column] : generators) {
    if (!source.contains(g)) throw Error(ErrorCode::validation, "cocycle generator outside the source group");
    if (column.size() != n)
      throw Error(ErrorCode::validation, "cocycle column for " + source.element_name(g) + " has wrong length");
    for (std::size_t x = 0; x < n; ++x)
      if (!target.contains(column[x]))
        throw Error(ErrorCode::validation, "cocycle value at (" + source.element_name(g) + ", point " +
                                               std::to_string(x) + ") outside target '" + target.name() + "'");
    gens.push_back(g);
    value[g] = column;
  }
  auto table = extend_over_group(
      source, std::vector<int>(n, 0), gens,
      [&](int s, int h, const std::vector<int>& alpha_h) {
        std::vector<int> out(n);
        for (std::size_t x = 0; x < n; ++x) out[x] = target.multiply(value[s][action.act(h, x)], alpha_h[x]);
        return out;
      },
      [&](const std::vector<int>& before, const std::vector<int>& now) {
        for (std::size_t x = 0; x < n; ++x)
          if (before[x] != now[x])
            return "at point " + point_name(action.space(), x) + " the cocycle gives " +
                   element_label(target, now[x]) + ", expected " + element_label(target, before[x]);
        return std::string();
      });
  return cocycle_from_table(std::move(action), std::move(target), std::move(table));
}

Cocycle cocycle_from_table(GroupAction action, FiniteGroup target, std::vector<std::vector<int>> table) {
  const auto& source = action.group();
  const std::size_t n = action.space().size();
  if (table.size() != static_cast<std::size_t>(source.order()))
    throw Error(ErrorCode::validation, "cocycle table needs one row per source element");
  for (const auto& row : table) {
    if (row.size() != n) throw Error(ErrorCode::validation, "cocycle row has wrong length");
    for (int v : row)
      if (!target.contains(v)) throw Error(ErrorCode::validation, "cocycle value outside the target group");
  }
  for (std::size_t x = 0; x < n; ++x)
    if (table[0][x] != 0) throw Error(ErrorCode::validation, "cocycle is nontrivial at the identity");
  for (int g = 0; g < source.order(); ++g)
    for (int h = 0; h < source.order(); ++h)
      for (std::size_t x = 0; x < n; ++x)
        if (table[source.multiply(g, h)][x] != target.multiply(table[g][action.act(h, x)], table[h][x]))
          throw Error(ErrorCode::validation, "cocycle identity fails at (" + source.element_name(g) + ", " +
                                                 source.element_name(h) + ", point " + std::to_string(x) + ")");
  return Cocycle(std::move(action), std::move(target), std::move(table));
}

SmiCertificate is_smi_cocycle(const Cocycle& cocycle) {
  SmiCertificate cert;
  const int n = cocycle.source().order();
  const std::size_t points = cocycle.space().size();
  for (std::size_t x = 0; x < points && !cert.counterexample; ++x)
    for (int l = 1; l < n; ++l)
      if (cocycle.value(l, x) == 0) {
        cert.counterexample = std::make_pair(l, x);
        break;
      }
  for (std::size_t x = 0; x < points && !cert.collision; ++x) {
    std::vector<int> first_preimage(static_cast<std::size_t>(cocycle.target().order()), -1);
    for (int l = 0; l < n; ++l) {
      int v = cocycle.value(l, x);
      if (first_preimage[v] >= 0) {
        cert.collision = std::make_tuple(first_preimage[v], l, x);
        break;
      }
      first_preimage[v] = l;
    }
  }
  cert.smi = !cert.counterexample;
  cert.injective = !cert.collision && cocycle.value(0, 0) == 0;
  return cert;
}

SmiSystem::SmiSystem(Cocycle cocycle) : cocycle_(std::move(cocycle)), certificate_(is_smi_cocycle(cocycle_)) {}

void require_certified(const SmiSystem& system, const std::string& what) {
  if (system.certified()) return;
  const auto& [l, x] = *system.certificate().counterexample;
  throw Error(ErrorCode::precondition, what + " needs an SMI-certified system; alpha(" +
                                           system.source().element_name(l) + ", " +
                                           point_name(system.space(), x) + ") = e");
}

SmiSystem identity_system(const FiniteGroup& group) {
  auto action = action_from_table(group, make_space({Rational(1)}),
                                  std::vector<std::vector<std::size_t>>(group.order(), {0}));
  std::vector<std::vector<int>> table(group.order());
  for (int a = 0; a < group.order(); ++a) table[a] = {a};
  return SmiSystem(cocycle_from_table(std::move(action), group, std::move(table)));
}

// ---- coupling view -------------------------------------------------------

CouplingView::CouplingView(const SmiSystem& system, std::size_t radius) : system_(&system), radius_(radius) {
  const int order = system.target().order();
  position_.assign(static_cast<std::size_t>(order), -1);
  const int visible = radius == 0 ? 1 : order;
  for (int g = 0; g < visible; ++g) {
    position_[g] = static_cast<int>(gammas_.size());
    gammas_.push_back(g);
  }
}

ViewPoint CouplingView::gamma_act(int gamma, ViewPoint p) const {
  return {system_->target().multiply(gamma, p.gamma), p.x};
}

ViewPoint CouplingView::lambda_act(int lambda, ViewPoint p) const {
  const auto& c = system_->cocycle();
  return {c.target().multiply(p.gamma, c.target().inverse(c.value(lambda, p.x))), c.action().act(lambda, p.x)};
}

bool CouplingView::interior(ViewPoint p) const {
  for (int l = 0; l < system_->source().order(); ++l)
    if (!in_view(lambda_act(l, p).gamma)) return false;
  return true;
}

std::vector<ViewPoint> CouplingView::x_domain() const {
  std::vector<ViewPoint> out;
  for (std::size_t x = 0; x < system_->space().size(); ++x) out.push_back({0, x});
  return out;
}

std::vector<ViewPoint> CouplingView::points() const {
  std::vector<ViewPoint> out;
  for (int g : gammas_)
    for (std::size_t x = 0; x < system_->space().size(); ++x) out.push_back({g, x});
  return out;
}

CouplingView omega_coupling(const SmiSystem& system, std::size_t radius, std::size_t cap) {
  require_certified(system, "omega_coupling");
  return materialize_view(system, radius, cap);
}

CouplingView materialize_view(const SmiSystem& system, std::size_t radius, std::size_t cap) {
  CouplingView view(system, radius);
  if (view.gammas().size() > cap || view.size() > cap)
    throw Error(ErrorCode::resource_cap, "truncation cap " + std::to_string(cap) + " exceeded by coupling view");
  const auto& target = system.target();
  std::set<ViewPoint> translates;
  for (auto p : view.points()) {
    for (int l = 0; l < system.source().order(); ++l) {
      auto lp = view.lambda_act(l, p);
      if (l != 0 && lp == p) view.free_ = false;
      for (int g = 0; g < target.order(); ++g)
        if (view.gamma_act(g, lp) != view.lambda_act(l, view.gamma_act(g, p))) view.commute_ = false;
    }
    // p must be the unique translate gamma . (e, x).
    if (view.gamma_act(p.gamma, {0, p.x}) != p || !translates.insert(p).second) view.tiles_ = false;
  }
  return view;
}

std::vector<std::vector<int>> read_back_cocycle(const CouplingView& view) {
  if (!view.complete()) throw Error(ErrorCode::view_too_small, "cocycle read-back needs a complete view");
  const auto& sys = view.system();
  std::vector<std::vector<int>> table(sys.source().order(), std::vector<int>(sys.space().size()));
  for (int l = 0; l < sys.source().order(); ++l)
    for (std::size_t x = 0; x < sys.space().size(); ++x)
      table[l][x] = sys.target().inverse(view.lambda_act(l, {0, x}).gamma);
  return table;
}

FundamentalDomain greedy_fundamental_domain(const CouplingView& view) {
  const auto& sys = view.system();
  const std::size_t n = sys.space().size();
  std::vector<std::vector<bool>> covered(sys.target().order(), std::vector<bool>(n, false));
  FundamentalDomain out;
  out.measure = 0;
  auto take = [&](ViewPoint p) {
    out.points.push_back(p);
    out.measure += view.weight(p);
    for (int l = 0; l < sys.source().order(); ++l) {
      auto q = view.lambda_act(l, p);
      covered[q.gamma][q.x] = true;
    }
  };
  for (auto p : view.x_domain()) take(p);
  for (int g : view.gammas()) {
    if (g == 0) continue;
    for (std::size_t x = 0; x < n; ++x)
      if (!covered[g][x]) take({g, x});
  }
  for (auto p : view.points())
    if (!view.interior(p)) out.boundary.push_back(p);
  return out;
}

const char* to_string(GrowthClass cls) noexcept {
  switch (cls) {
    case GrowthClass::constant_one: return "constant-1";
    case GrowthClass::constant: return "constant";
    case GrowthClass::growing: return "growing";
    case GrowthClass::undetermined: return "undetermined";
  }
  return "undetermined";
}

IndexRecord coupling_index(const CouplingView& view, const FundamentalDomain& domain) {
  Rational x_measure = 0;
  for (auto w : view.system().space().weights) x_measure += w;
  return {view.radius(), domain.measure / x_measure, view.complete()};
}

GrowthRecord index_growth(const SmiSystem& system, std::span<const std::size_t> radii, std::size_t cap) {
  GrowthRecord out;
  bool complete = false;
  for (auto r : radii) {
    auto view = omega_coupling(system, r, cap);
    auto record = coupling_index(view, greedy_fundamental_domain(view));
    out.radii.push_back(r);
    out.partials.push_back(record.value);
    complete = record.complete;
  }
  if (complete) out.exact = out.partials.back();
  if (out.exact)
    out.cls = *out.exact == 1 ? GrowthClass::constant_one : GrowthClass::constant;
  else if (std::all_of(out.partials.begin(), out.partials.end(), [](const Rational& v) { return v == 1; }))
    out.cls = GrowthClass::constant_one;
  return out;
}

Rational system_index(const SmiSystem& system) {
  auto view = omega_coupling(system, 1);
  return coupling_index(view, greedy_fundamental_domain(view)).value;
}

SmiSystem compose(const SmiSystem& first, const SmiSystem& second) {
  if (!first.target().same_table(second.source()))
    throw Error(ErrorCode::mismatch, "compose: target '" + first.target().name() + "' of the first system is not the source '" +
                                         second.source().name() + "' of the second");
  const auto& c1 = first.cocycle();
  const auto& c2 = second.cocycle();
  const std::size_t n2 = second.space().size();
  auto space = product_space(first.space(), second.space());
  const int order = first.source().order();
  std::vector<std::vector<std::size_t>> action(order, std::vector<std::size_t>(space.size()));
  std::vector<std::vector<int>> table(order, std::vector<int>(space.size()));
  for (int l = 0; l < order; ++l)
    for (std::size_t x1 = 0; x1 < first.space().size(); ++x1)
      for (std::size_t x2 = 0; x2 < n2; ++x2) {
        int d = c1.value(l, x1);
        action[l][x1 * n2 + x2] = c1.action().act(l, x1) * n2 + c2.action().act(d, x2);
        table[l][x1 * n2 + x2] = c2.value(d, x2);
      }
  auto act = action_from_table(first.source(), std::move(space), std::move(action));
  return SmiSystem(cocycle_from_table(std::move(act), second.target(), std::move(table)));
}

SmiSystem direct_product(const SmiSystem& lhs, const SmiSystem& rhs) {
  auto source = FiniteGroup::direct_product(lhs.source(), rhs.source());
  auto target = FiniteGroup::direct_product(lhs.target(), rhs.target());
  const int ns = rhs.source().order(), nt = rhs.target().order();
  const std::size_t n2 = rhs.space().size();
  auto space = product_space(lhs.space(), rhs.space());
  std::vector<std::vector<std::size_t>> action(source.order(), std::vector<std::size_t>(space.size()));
  std::vector<std::vector<int>> table(source.order(), std::vector<int>(space.size()));
  for (int l = 0; l < source.order(); ++l)
    for (std::size_t x1 = 0; x1 < lhs.space().size(); ++x1)
      for (std::size_t x2 = 0; x2 < n2; ++x2) {
        int l1 = l / ns, l2 = l % ns;
        action[l][x1 * n2 + x2] = lhs.cocycle().action().act(l1, x1) * n2 + rhs.cocycle().action().act(l2, x2);
        table[l][x1 * n2 + x2] = lhs.cocycle().value(l1, x1) * nt + rhs.cocycle().value(l2, x2);
      }
  auto act = action_from_table(std::move(source), std::move(space), std::move(action));
  return SmiSystem(cocycle_from_table(std::move(act), std::move(target), std::move(table)));
}

// ---- finite couplings ----------------------------------------------------

FiniteCoupling make_finite_coupling(FiniteGroup lambda, FiniteGroup gamma, std::vector<Rational> weights,
                                    const GeneratorTable<std::size_t>& lambda_generators,
                                    const GeneratorTable<std::size_t>& gamma_generators) {
  FiniteCoupling fc{std::move(lambda), std::move(gamma), std::move(weights), {}, {}};
  fc.lambda_table = extend_permutations(fc.lambda, fc.weights.size(), lambda_generators);
  fc.gamma_table = extend_permutations(fc.gamma, fc.weights.size(), gamma_generators);
  return fc;
}

namespace {

std::vector<std::size_t> orbit_ids(const std::vector<std::vector<std::size_t>>& table, std::size_t n,
                                   std::size_t* count) {
  std::vector<std::size_t> id(n, n);
  std::size_t next = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (id[p] != n) continue;
    for (const auto& row : table) id[row[p]] = next;
    ++next;
  }
  *count = next;
  return id;
}

}  // namespace

FiniteCouplingReport validate_finite_coupling(const FiniteCoupling& fc) {
  const std::size_t n = fc.weights.size();
  for (std::size_t p = 0; p < n; ++p)
    if (fc.weights[p] <= 0) throw Error(ErrorCode::validation, "coupling point " + std::to_string(p) + " has nonpositive weight");
  validate_action_table(fc.lambda, fc.weights, fc.lambda_table, "lambda action");
  validate_action_table(fc.gamma, fc.weights, fc.gamma_table, "gamma action");
  for (std::size_t p = 0; p < n; ++p) {
    for (int l = 1; l < fc.lambda.order(); ++l)
      if (fc.lambda_table[l][p] == p)
        throw Error(ErrorCode::validation, "lambda action not free: " + fc.lambda.element_name(l) + " fixes point " +
                                               std::to_string(p));
    for (int g = 1; g < fc.gamma.order(); ++g)
      if (fc.gamma_table[g][p] == p)
        throw Error(ErrorCode::validation, "gamma action not free: " + fc.gamma.element_name(g) + " fixes point " +
                                               std::to_string(p));
    for (int l = 0; l < fc.lambda.order(); ++l)
      for (int g = 0; g < fc.gamma.order(); ++g)
        if (fc.lambda_table[l][fc.gamma_table[g][p]] != fc.gamma_table[g][fc.lambda_table[l][p]])
          throw Error(ErrorCode::validation, "actions do not commute at (" + fc.lambda.element_name(l) + ", " +
                                                 fc.gamma.element_name(g) + ", point " + std::to_string(p) + ")");
  }
  FiniteCouplingReport report;
  report.x_measure = 0;
  report.y_measure = 0;
  auto pick = [&](const std::vector<std::vector<std::size_t>>& table, std::vector<std::size_t>& domain, Rational& measure) {
    std::vector<bool> seen(n, false);
    for (std::size_t p = 0; p < n; ++p) {
      if (seen[p]) continue;
      domain.push_back(p);
      measure += fc.weights[p];
      for (const auto& row : table) seen[row[p]] = true;
    }
  };
  pick(fc.gamma_table, report.x_domain, report.x_measure);
  pick(fc.lambda_table, report.y_domain, report.y_measure);
  report.index = report.y_measure / report.x_measure;
  return report;
}

FiniteCoupling disjoint_union(const FiniteCoupling& first, const FiniteCoupling& second, const Rational& a) {
  if (!first.lambda.same_table(second.lambda) || !first.gamma.same_table(second.gamma))
    throw Error(ErrorCode::mismatch, "disjoint_union needs couplings of the same (lambda, gamma) pair");
  if (a <= 0) throw Error(ErrorCode::validation, "disjoint_union scale must be positive");
  auto r1 = validate_finite_coupling(first);
  auto r2 = validate_finite_coupling(second);
  FiniteCoupling out{first.lambda, first.gamma, {}, {}, {}};
  const std::size_t n1 = first.weights.size();
  for (const auto& w : first.weights) out.weights.push_back(w / r1.x_measure);
  for (const auto& w : second.weights) out.weights.push_back(w * a / r2.x_measure);
  auto join = [n1](const auto& t1, const auto& t2) {
    std::vector<std::vector<std::size_t>> t(t1.size());
    for (std::size_t g = 0; g < t1.size(); ++g) {
      t[g] = t1[g];
      for (auto p : t2[g]) t[g].push_back(p + n1);
    }
    return t;
  };
  out.lambda_table = join(first.lambda_table, second.lambda_table);
  out.gamma_table = join(first.gamma_table, second.gamma_table);
  return out;
}

Rational union_index_formula(const Rational& c1, const Rational& c2, const Rational& a) {
  return (a * c2 + c1) / (a + 1);
}

NestedDomains attempt_nested_domains(const FiniteCoupling& fc) {
  validate_finite_coupling(fc);
  const std::size_t n = fc.weights.size();
  std::size_t gamma_count = 0, lambda_count = 0;
  auto gamma_orbit = orbit_ids(fc.gamma_table, n, &gamma_count);
  auto lambda_orbit = orbit_ids(fc.lambda_table, n, &lambda_count);

  std::vector<std::set<std::size_t>> adjacent(gamma_count);
  std::vector<std::size_t> gamma_rep(gamma_count, n);
  for (std::size_t p = 0; p < n; ++p) {
    adjacent[gamma_orbit[p]].insert(lambda_orbit[p]);
    gamma_rep[gamma_orbit[p]] = std::min(gamma_rep[gamma_orbit[p]], p);
  }

  // Kuhn's augmenting paths: gamma-orbits into distinct lambda-orbits.
  std::vector<std::size_t> match_lambda(lambda_count, gamma_count), match_gamma(gamma_count, lambda_count);
  std::vector<bool> visited_gamma;
  std::vector<bool> visited_lambda;
  std::function<bool(std::size_t)> augment = [&](std::size_t g) {
    if (visited_gamma[g]) return false;
    visited_gamma[g] = true;
    for (auto l : adjacent[g]) {
      visited_lambda[l] = true;
      if (match_lambda[l] == gamma_count || augment(match_lambda[l])) {
        match_lambda[l] = g;
        match_gamma[g] = l;
        return true;
      }
    }
    return false;
  };

  NestedDomains out;
  for (std::size_t g = 0; g < gamma_count; ++g) {
    visited_gamma.assign(gamma_count, false);
    visited_lambda.assign(lambda_count, false);
    if (augment(g)) continue;
    // The alternating tree from g is a Hall violator.
    for (std::size_t k = 0; k < gamma_count; ++k)
      if (visited_gamma[k]) out.blocked_gamma_orbits.push_back(gamma_rep[k]);
    out.reachable_lambda_orbits = static_cast<std::size_t>(std::count(visited_lambda.begin(), visited_lambda.end(), true));
    if (gamma_count > lambda_count)
      out.obstruction = "cardinality obstruction: a gamma-domain needs " + std::to_string(gamma_count) +
                        " points in distinct lambda-orbits but only " + std::to_string(lambda_count) +
                        " lambda-orbits exist";
    else
      out.obstruction = "Hall obstruction: " + std::to_string(out.blocked_gamma_orbits.size()) +
                        " gamma-orbits meet only " + std::to_string(out.reachable_lambda_orbits) + " lambda-orbits";
    return out;
  }

  out.success = true;
  std::vector<bool> lambda_used(lambda_count, false);
  for (std::size_t g = 0; g < gamma_count; ++g) {
    for (std::size_t p = 0; p < n; ++p)
      if (gamma_orbit[p] == g && lambda_orbit[p] == match_gamma[g]) {
        out.x_domain.push_back(p);
        lambda_used[match_gamma[g]] = true;
        break;
      }
  }
  out.y_domain = out.x_domain;
  for (std::size_t p = 0; p < n; ++p)
    if (!lambda_used[lambda_orbit[p]]) {
      lambda_used[lambda_orbit[p]] = true;
      out.y_domain.push_back(p);
    }
  std::sort(out.x_domain.begin(), out.x_domain.end());
  std::sort(out.y_domain.begin(), out.y_domain.end());
  return out;
}

}  // namespace imbed
