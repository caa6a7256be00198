#include <doctest.h>

#include <set>

#include "imbed/error.hpp"
#include "imbed/measure.hpp"
#include "support.hpp"

using namespace imbed;
using fixture::z;

namespace {

// Sum of weights over one point per Lambda-orbit of Gamma x X, computed
// straight from the cocycle table.
Rational orbit_count_measure(const SmiSystem& sys) {
  const auto& c = sys.cocycle();
  const int ng = sys.target().order();
  const std::size_t n = sys.space().size();
  std::set<std::pair<int, std::size_t>> seen;
  Rational total = 0;
  for (int g = 0; g < ng; ++g)
    for (std::size_t x = 0; x < n; ++x) {
      if (seen.contains({g, x})) continue;
      total += sys.space().weights[x];
      for (int l = 0; l < sys.source().order(); ++l)
        seen.insert({sys.target().multiply(g, sys.target().inverse(c.value(l, x))), c.action().act(l, x)});
    }
  return total;
}

SmiSystem cyclic_system(int m, int n, int value) {
  return SmiSystem(make_cocycle(make_action(z(m, "s"), make_space({Rational(1)}), {{1, {0}}}), z(n, "t"), {{1, {value}}}));
}

// Z2 swapping two points, alpha(s, x0) = t, alpha(s, x1) = t^3 into Z4.
SmiSystem swap_system() {
  auto action = make_action(z(2, "s"), make_space({Rational(1, 2), Rational(1, 2)}), {{1, {1, 0}}});
  return SmiSystem(make_cocycle(std::move(action), z(4, "t"), {{1, {1, 3}}}));
}

// Omega = Z3 x Z2 with counting measure, point (i, j) at index 2i + j.
FiniteCoupling z3_z2_coupling() {
  std::vector<std::size_t> rotate(6), flip(6);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      rotate[2 * i + j] = 2 * ((i + 1) % 3) + j;
      flip[2 * i + j] = 2 * i + (1 - j);
    }
  return make_finite_coupling(z(3, "l"), z(2, "g"), std::vector<Rational>(6, Rational(1)), {{1, rotate}}, {{1, flip}});
}

FiniteCoupling translation_coupling() {
  return make_finite_coupling(z(2, "l"), z(2, "g"), {Rational(1), Rational(1)}, {{1, {1, 0}}}, {{1, {1, 0}}});
}

}  // namespace

TEST_SUITE("spaces and actions") {
  TEST_CASE("make_space") {
    CHECK(make_space({Rational(1)}).size() == 1);
    CHECK(make_space({Rational(1, 2), Rational(1, 2)}).size() == 2);
    CHECK_THROWS_AS(make_space({Rational(1, 3), Rational(1, 3)}), Error);
    CHECK_THROWS_AS(make_space({Rational(3, 2), Rational(-1, 2)}), Error);
    CHECK_THROWS_AS(make_space({}), Error);
  }

  TEST_CASE("make_action") {
    auto trivial = make_action(z(2, "s"), make_space({Rational(1)}), {{1, {0}}});
    CHECK(trivial.act(1, 0) == 0);
    auto swap = make_action(z(2, "s"), make_space({Rational(1, 2), Rational(1, 2)}), {{1, {1, 0}}});
    CHECK(swap.act(1, 0) == 1);
    CHECK_THROWS_AS(make_action(z(2, "s"), make_space({Rational(1, 3), Rational(2, 3)}), {{1, {1, 0}}}), Error);
    CHECK_THROWS_AS(make_action(z(2, "s"), make_space({Rational(1, 2), Rational(1, 2)}), {{1, {0, 0}}}), Error);
    // A 3-cycle cannot be the image of an involution.
    CHECK_THROWS_AS(make_action(z(2, "s"), make_space({Rational(1, 3), Rational(1, 3), Rational(1, 3)}), {{1, {1, 2, 0}}}),
                    Error);
  }

  TEST_CASE("action law on the extended table") {
    auto a = make_action(z(6, "s"), make_space({Rational(1, 3), Rational(1, 3), Rational(1, 3)}), {{1, {1, 2, 0}}});
    const auto& g = a.group();
    for (int x = 0; x < 6; ++x)
      for (int y = 0; y < 6; ++y)
        for (std::size_t p = 0; p < 3; ++p) CHECK(a.act(g.multiply(x, y), p) == a.act(x, a.act(y, p)));
  }
}

TEST_SUITE("cocycles") {
  TEST_CASE("make_cocycle examples") {
    auto id = identity_system(z(2, "s"));
    CHECK(id.cocycle().value(1, 0) == 1);
    auto sys = fixture::z2_to_z4();
    CHECK(sys.cocycle().value(1, 0) == 2);
    CHECK_THROWS_AS(cyclic_system(2, 4, 1), Error);
    try {
      cyclic_system(2, 4, 1);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("relation") != std::string::npos);
    }
  }

  TEST_CASE("cocycle identity holds exhaustively") {
    for (const auto& sys : {fixture::z2_to_z4(), fixture::z4_to_z8(), swap_system(), cyclic_system(3, 6, 2)}) {
      const auto& c = sys.cocycle();
      for (int g = 0; g < sys.source().order(); ++g)
        for (int h = 0; h < sys.source().order(); ++h)
          for (std::size_t x = 0; x < sys.space().size(); ++x)
            REQUIRE(c.value(sys.source().multiply(g, h), x) ==
                    sys.target().multiply(c.value(g, c.action().act(h, x)), c.value(h, x)));
      for (std::size_t x = 0; x < sys.space().size(); ++x) REQUIRE(c.value(0, x) == 0);
    }
  }

  TEST_CASE("SMI certification") {
    CHECK(identity_system(z(2, "s")).certified());
    auto sys = fixture::z2_to_z4();
    CHECK(sys.certified());
    CHECK(sys.certificate().injective);
    auto zero = SmiSystem(make_cocycle(make_action(z(2, "s"), make_space({Rational(1)}), {{1, {0}}}), z(2, "t"), {{1, {0}}}));
    CHECK_FALSE(zero.certified());
    REQUIRE(zero.certificate().counterexample.has_value());
    CHECK(zero.certificate().counterexample->first == 1);
    CHECK(zero.certificate().counterexample->second == 0);
    CHECK_THROWS_AS(require_certified(zero, "test"), Error);
  }

  TEST_CASE("SMI and injectivity agree") {
    for (int m : {2, 3, 4, 6})
      for (int n : {2, 4, 6, 8, 12})
        for (int v = 0; v < n; ++v) {
          std::optional<SmiSystem> sys;
          try {
            sys.emplace(cyclic_system(m, n, v));
          } catch (const Error&) {
            continue;
          }
          REQUIRE(sys->certificate().smi == sys->certificate().injective);
        }
  }
}

TEST_SUITE("coupling views") {
  TEST_CASE("omega examples") {
    auto id = identity_system(z(2, "s"));
    auto v0 = omega_coupling(id, 0);
    CHECK(v0.size() == 1);
    CHECK_FALSE(v0.interior({0, 0}));

    auto sys = fixture::z2_to_z4();
    auto v = omega_coupling(sys, 4);
    CHECK(v.size() == 4);
    CHECK(v.complete());
    CHECK(v.actions_commute());
    CHECK(v.lambda_free());
    CHECK(v.x_domain_tiles());
    CHECK(v.lambda_act(1, {0, 0}) == ViewPoint{2, 0});
    CHECK(v.lambda_act(1, {1, 0}) == ViewPoint{3, 0});

    auto zero = SmiSystem(make_cocycle(make_action(z(2, "s"), make_space({Rational(1)}), {{1, {0}}}), z(2, "t"), {{1, {0}}}));
    CHECK_THROWS_AS(omega_coupling(zero, 1), Error);
    try {
      omega_coupling(sys, 1, 2);
      FAIL("cap not enforced");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::resource_cap);
    }
  }

  TEST_CASE("greedy domain examples") {
    auto id = identity_system(z(2, "s"));
    auto d = greedy_fundamental_domain(omega_coupling(id, 1));
    CHECK(d.points.size() == 1);
    CHECK(d.measure == 1);

    auto sys = fixture::z2_to_z4();
    d = greedy_fundamental_domain(omega_coupling(sys, 1));
    CHECK(d.points == std::vector<ViewPoint>{{0, 0}, {1, 0}});
    CHECK(d.measure == 2);

    auto trivial = SmiSystem(make_cocycle(make_action(FiniteGroup::trivial(), make_space({Rational(1, 2), Rational(1, 2)}), {}),
                                          z(2, "t"), {}));
    d = greedy_fundamental_domain(omega_coupling(trivial, 1));
    CHECK(d.points.size() == 4);
    CHECK(d.measure == 2);
  }

  TEST_CASE("greedy domain is a fundamental domain and matches orbit counting") {
    for (const auto& sys : {fixture::z2_to_z4(), fixture::z4_to_z8(), swap_system(), cyclic_system(3, 6, 2),
                            identity_system(z(5, "s"))}) {
      auto view = omega_coupling(sys, 1);
      auto d = greedy_fundamental_domain(view);
      std::set<ViewPoint> y(d.points.begin(), d.points.end());
      for (auto p : view.x_domain()) CHECK(y.contains(p));
      std::set<ViewPoint> hit;
      for (auto p : d.points)
        for (int l = 0; l < sys.source().order(); ++l) {
          auto q = view.lambda_act(l, p);
          if (l != 0) REQUIRE_FALSE(y.contains(q));
          REQUIRE(hit.insert(q).second);
        }
      CHECK(hit.size() == view.points().size());
      CHECK(d.boundary.empty());
      CHECK(d.measure == orbit_count_measure(sys));
      CHECK(d.measure == Rational(sys.target().order(), sys.source().order()));
    }
  }

  TEST_CASE("cocycle read back from the view") {
    for (const auto& sys : {fixture::z2_to_z4(), swap_system(), cyclic_system(3, 6, 2)}) {
      auto view = omega_coupling(sys, 1);
      CHECK(read_back_cocycle(view) == sys.cocycle().table());
    }
    CHECK_THROWS_AS(read_back_cocycle(omega_coupling(fixture::z2_to_z4(), 0)), Error);
  }

  TEST_CASE("index records") {
    auto id = identity_system(z(2, "s"));
    std::vector<std::size_t> radii{0, 1, 2};
    auto g = index_growth(id, radii);
    CHECK(g.cls == GrowthClass::constant_one);
    for (const auto& v : g.partials) CHECK(v == 1);

    auto idx = index_growth(fixture::z2_to_z4(), radii);
    CHECK(idx.exact == Rational(2));
    CHECK(idx.partials.front() == 1);
    CHECK(idx.partials.back() == 2);
    CHECK(std::string(to_string(idx.cls)) == "constant");
    CHECK(system_index(fixture::z2_to_z4()) == 2);
  }
}

TEST_SUITE("composition and products") {
  TEST_CASE("compose examples") {
    auto id = identity_system(z(2, "s"));
    auto idid = compose(id, id);
    CHECK(idid.certified());
    CHECK(system_index(idid) == 1);
    CHECK(idid.cocycle().value(1, 0) == 1);

    auto c = compose(fixture::z2_to_z4(), fixture::z4_to_z8());
    CHECK(c.certified());
    CHECK(c.target().order() == 8);
    CHECK(system_index(c) == 4);
    CHECK(c.cocycle().value(1, 0) == 4);

    CHECK_THROWS_AS(compose(fixture::z2_to_z4(), fixture::z2_to_z4()), Error);
  }

  TEST_CASE("index is multiplicative under composition") {
    std::vector<SmiSystem> systems{fixture::z2_to_z4(), fixture::z4_to_z8(), swap_system(), identity_system(z(4, "t"))};
    for (const auto& a : systems)
      for (const auto& b : systems) {
        if (!a.target().same_table(b.source())) continue;
        auto c = compose(a, b);
        CHECK(c.certified());
        CHECK(system_index(c) == system_index(a) * system_index(b));
        CHECK(system_index(c) == orbit_count_measure(c));
        for (const auto& cc : systems) {
          if (!c.target().same_table(cc.source())) continue;
          auto left = compose(c, cc), right = compose(a, compose(b, cc));
          CHECK(system_index(left) == system_index(right));
        }
      }
  }

  TEST_CASE("direct product examples") {
    auto id = identity_system(z(2, "s"));
    CHECK(system_index(direct_product(id, id)) == 1);
    CHECK(system_index(direct_product(fixture::z2_to_z4(), id)) == 2);
    auto p = direct_product(fixture::z2_to_z4(), fixture::z2_to_z4());
    CHECK(p.certified());
    CHECK(system_index(p) == 4);
    CHECK(system_index(direct_product(swap_system(), fixture::z4_to_z8())) == 4);
  }
}

TEST_SUITE("finite couplings") {
  TEST_CASE("validate examples") {
    auto r = validate_finite_coupling(z3_z2_coupling());
    CHECK(r.x_measure == 3);
    CHECK(r.y_measure == 2);
    CHECK(r.index == Rational(2, 3));
    CHECK(validate_finite_coupling(translation_coupling()).index == 1);

    auto nonfree = make_finite_coupling(z(2, "l"), z(2, "g"), {Rational(1), Rational(1)}, {{1, {0, 1}}}, {{1, {1, 0}}});
    CHECK_THROWS_AS(validate_finite_coupling(nonfree), Error);
  }

  TEST_CASE("disjoint union index formula") {
    for (const auto& a : {Rational(1), Rational(2), Rational(1, 2)}) {
      auto u = disjoint_union(z3_z2_coupling(), z3_z2_coupling(), a);
      auto r = validate_finite_coupling(u);
      CHECK(r.x_measure == 1 + a);
      CHECK(r.index == Rational(2, 3));
      CHECK(r.index == union_index_formula(Rational(2, 3), Rational(2, 3), a));
    }
    CHECK(validate_finite_coupling(disjoint_union(translation_coupling(), translation_coupling(), 1)).index == 1);
    CHECK(union_index_formula(Rational(1, 2), Rational(3), Rational(1)) == Rational(7, 4));
    CHECK_THROWS_AS(disjoint_union(z3_z2_coupling(), translation_coupling(), 1), Error);
  }

  TEST_CASE("nested domains") {
    auto ok = attempt_nested_domains(translation_coupling());
    CHECK(ok.success);
    CHECK(ok.x_domain.size() == 1);
    CHECK(ok.x_domain == ok.y_domain);

    auto bad = attempt_nested_domains(z3_z2_coupling());
    CHECK_FALSE(bad.success);
    CHECK(bad.obstruction.find("cardinality") != std::string::npos);

    // Omega = Z4, Lambda = <t^2> and Gamma = Z4 by translation.
    auto sub = make_finite_coupling(z(2, "l"), z(4, "g"), std::vector<Rational>(4, Rational(1)), {{1, {2, 3, 0, 1}}},
                                    {{1, {1, 2, 3, 0}}});
    auto nested = attempt_nested_domains(sub);
    CHECK(nested.success);
    CHECK(nested.x_domain == std::vector<std::size_t>{0});
    CHECK(nested.y_domain == std::vector<std::size_t>{0, 1});
  }
}
