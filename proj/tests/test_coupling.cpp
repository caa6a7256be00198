#include <doctest.h>

#include <memory>
#include <random>
#include <set>

#include "imbed/coupling.hpp"
#include "imbed/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace imbed;
using fixture::syllables;
using fixture::z;

namespace {

ExtendedSystem p4_extension(const SmiSystem& base) {
  std::vector<FiniteGroup> src(4, z(2, "b")), tgt(4, z(2, "b"));
  src[0] = base.source();
  tgt[0] = base.target();
  return extend_graph(fixture::path(4), src, tgt, "v1", base);
}

// The same system with alpha(s, x) = e: violates the SMI condition.
SmiSystem corrupted_z2_to_z4() {
  return SmiSystem(make_cocycle(make_action(z(2, "s"), make_space({Rational(1)}), {{1, {0}}}), z(4, "t"), {{1, {0}}}));
}

SmiSystem swap_system() {
  auto action = make_action(z(2, "s"), make_space({Rational(1, 2), Rational(1, 2)}), {{1, {1, 0}}});
  return SmiSystem(make_cocycle(std::move(action), z(4, "t"), {{1, {1, 3}}}));
}

// alpha~ for a one-point base: the syllable-wise homomorphism.
oracle::Word homomorphic_image(const ExtendedSystem& ext, const Element& h) {
  oracle::Word out;
  for (auto s : h.syllables()) {
    if (s.vertex == ext.base_vertex()) s.element = ext.base().cocycle().value(s.element, 0);
    out.push_back(s);
  }
  return oracle::reduce(ext.target().graph(), ext.target().groups(), out);
}

// alpha~ walked syllable by syllable from the right, tracking x.
oracle::Word walked_value(const ExtendedSystem& ext, std::span<const Syllable> word, std::size_t x) {
  oracle::Word out(word.begin(), word.end());
  const auto& c = ext.base().cocycle();
  for (std::size_t j = word.size(); j-- > 0;)
    if (word[j].vertex == ext.base_vertex()) {
      out[j].element = c.value(word[j].element, x);
      x = c.action().act(word[j].element, x);
    }
  return oracle::reduce(ext.target().graph(), ext.target().groups(), out);
}

std::size_t oracle_free_w_count(std::size_t r) {
  std::size_t n = 0;
  for (const auto& w : oracle::free_product_ball(2, 4, r))
    if (w.empty() || w.back().vertex != 1) ++n;
  return n;
}

}  // namespace

TEST_SUITE("extensions") {
  TEST_CASE("extend_free examples") {
    auto id = extend_free(fixture::identity_z2(), z(2, "g"));
    CHECK(id.base_index() == 1);
    CHECK(id.kind() == ExtensionKind::free_product);
    CHECK(id.target().group(1).order() == 2);

    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    CHECK(ext.base_index() == 2);
    const auto& h = ext.source();
    auto gs = h.multiply(h.syllable(0, 1), h.syllable(1, 1));
    const auto& g = ext.target();
    CHECK(ext.value(gs, 0) == g.multiply(g.syllable(0, 1), g.syllable(1, 2)));

    CHECK_THROWS_AS(extend_free(corrupted_z2_to_z4(), z(2, "g")), Error);
    CHECK(extend_free(fixture::z2_to_z4(), FiniteGroup::trivial()).trivial_free_factor());
  }

  TEST_CASE("extend_graph examples") {
    auto ext = p4_extension(fixture::z2_to_z4());
    CHECK_FALSE(ext.reducible());
    CHECK(ext.target().group(0).order() == 4);

    std::vector<FiniteGroup> src{z(2, "s"), z(2, "b")}, tgt{z(4, "t"), z(4, "b")};
    try {
      extend_graph(fixture::complete(2), src, tgt, "v1", fixture::z2_to_z4());
      FAIL("mismatched vertex accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::mismatch);
    }
    CHECK_THROWS_AS(extend_graph(fixture::path(4), std::vector<FiniteGroup>(4, z(2, "s")),
                                 std::vector<FiniteGroup>(4, z(2, "s")), "v9", fixture::identity_z2()),
                    Error);

    auto p3 = extend_graph(fixture::path(3), std::vector<FiniteGroup>(3, z(2, "s")),
                           std::vector<FiniteGroup>(3, z(2, "s")), "v1", fixture::identity_z2());
    CHECK(p3.reducible());
  }

  TEST_CASE("alpha~ restricts to the base and to the identity elsewhere") {
    for (const auto& base : {fixture::z2_to_z4(), swap_system()}) {
      auto ext = p4_extension(base);
      for (int l = 0; l < base.source().order(); ++l)
        for (std::size_t x = 0; x < base.space().size(); ++x) {
          auto v = ext.value(ext.source().syllable(0, l), x);
          CHECK(v == ext.target().syllable(0, base.cocycle().value(l, x)));
        }
      for (VertexIndex u = 1; u < 4; ++u)
        for (std::size_t x = 0; x < base.space().size(); ++x) {
          CHECK(ext.value(ext.source().syllable(u, 1), x) == ext.target().syllable(u, 1));
          CHECK(ext.act(ext.source().syllable(u, 1), x) == x);
        }
    }
  }

  TEST_CASE("alpha~ agrees with independent evaluations") {
    std::mt19937_64 rng(41);
    auto one_point = p4_extension(fixture::z2_to_z4());
    for (int i = 0; i < 500; ++i) {
      auto h = fixture::random_element(one_point.source(), rng, 10);
      REQUIRE(syllables(one_point.value(h, 0)) == homomorphic_image(one_point, h));
    }
    auto two_point = p4_extension(swap_system());
    for (int i = 0; i < 500; ++i) {
      auto raw = fixture::random_raw(two_point.source(), rng, 10);
      for (std::size_t x = 0; x < 2; ++x)
        REQUIRE(syllables(two_point.value_of_word(raw, x)) == walked_value(two_point, raw, x));
    }
  }

  TEST_CASE("alpha~ is independent of the representative") {
    std::mt19937_64 rng(43);
    for (auto ext : {p4_extension(swap_system()), extend_free(swap_system(), z(3, "g"))}) {
      for (int i = 0; i < 500; ++i) {
        auto h = fixture::random_element(ext.source(), rng, 8);
        for (int k = 0; k < 3; ++k) {
          auto raw = random_representative(ext.source(), h, rng);
          REQUIRE(ext.source().reduce(raw) == h);
          for (std::size_t x = 0; x < 2; ++x) REQUIRE(ext.value_of_word(raw, x) == ext.value(h, x));
        }
      }
    }
  }

  TEST_CASE("cocycle identity and the dot action through the retraction") {
    auto ext = p4_extension(swap_system());
    const auto& h = ext.source();
    auto ball = h.ball(2);
    for (const auto& a : ball)
      for (const auto& b : ball)
        for (std::size_t x = 0; x < 2; ++x)
          REQUIRE(ext.value(h.multiply(a, b), x) == ext.target().multiply(ext.value(a, ext.act(b, x)), ext.value(b, x)));
    for (const auto& w : h.ball(3)) {
      auto p = h.retraction(w, {0});
      int lambda = p.is_identity() ? 0 : p.syllables()[0].element;
      for (std::size_t x = 0; x < 2; ++x) REQUIRE(ext.act(w, x) == ext.base().cocycle().action().act(lambda, x));
    }
  }

  TEST_CASE("SMI on balls") {
    CHECK_FALSE(smi_violation_on_ball(p4_extension(fixture::z2_to_z4()), 4).has_value());
    CHECK_FALSE(smi_violation_on_ball(extend_free(swap_system(), z(2, "g")), 5).has_value());
    ExtendOptions loose;
    loose.require_certified = false;
    auto bad = extend_free(corrupted_z2_to_z4(), z(2, "g"), loose);
    auto v = smi_violation_on_ball(bad, 2);
    REQUIRE(v.has_value());
    CHECK(v->first == bad.source().syllable(1, 1));
  }
}

TEST_SUITE("fundamental domain") {
  TEST_CASE("build_ytilde measures") {
    auto id = extend_free(fixture::identity_z2(), z(2, "g"));
    for (std::size_t r = 0; r <= 4; ++r) {
      auto s = build_ytilde(id, r);
      CHECK(s.measure == 1);
      CHECK(s.points.size() == 1);
    }
    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    CHECK(build_ytilde(ext, 2).measure == 6);
    CHECK(build_ytilde(ext, 1).measure == 3);
    for (std::size_t r = 0; r <= 5; ++r) {
      auto s = build_ytilde(ext, r);
      CHECK(s.orbit_reps == oracle_free_w_count(r));
      CHECK(s.measure == 1 + Rational(oracle_free_w_count(r)));
    }
  }

  TEST_CASE("graph case measures match the independent orbit-representative count") {
    auto ext = p4_extension(fixture::z2_to_z4());
    const auto& g = ext.target();
    for (std::size_t r = 0; r <= 3; ++r) {
      std::size_t reps = 0;
      for (const auto& w : oracle::ball(g.graph(), g.groups(), r))
        if (oracle::in_coset_reps(g.graph(), w, 0) && oracle::empty_link_tail(g.graph(), w, 0)) ++reps;
      auto s = build_ytilde(ext, r);
      CHECK(s.orbit_reps == reps);
      CHECK(s.measure == 1 + Rational(reps) * (Rational(4, 2) - 1));
    }
  }

  TEST_CASE("Y~ membership agrees with the explicit free-product description") {
    // With Y = {e, t} the domain is {e} plus the words whose last syllable is exactly t.
    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    for (const auto& g : ext.target().ball(5)) {
      auto s = g.syllables();
      bool expected = s.empty() || (s.back().vertex == 1 && s.back().element == 1);
      REQUIRE(ext.in_ytilde({g, 0}) == expected);
    }
  }

  TEST_CASE("independent translate check for the free extension") {
    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    const auto& gp = ext.target();
    auto in_y = [](const oracle::Word& w) { return w.empty() || (w.back().vertex == 1 && w.back().element == 1); };
    std::vector<oracle::Word> ytilde;
    for (const auto& w : oracle::free_product_ball(2, 4, 3))
      if (in_y(w)) ytilde.push_back(w);
    std::size_t checks = 0;
    for (const auto& h : ext.source().ball(4)) {
      if (h.is_identity()) continue;
      auto inv = gp.invert(gp.reduce(homomorphic_image(ext, h)));
      for (const auto& y : ytilde) {
        auto moved = y;
        auto tail = syllables(inv);
        moved.insert(moved.end(), tail.begin(), tail.end());
        REQUIRE_FALSE(in_y(oracle::reduce(gp.graph(), gp.groups(), moved)));
        ++checks;
      }
    }
    CHECK(checks > 0);
  }
}

TEST_SUITE("verification") {
  TEST_CASE("disjointness, free case") {
    auto id = extend_free(fixture::identity_z2(), z(2, "g"));
    auto r = verify_disjointness(id, 6, 6);
    CHECK(r.pass);
    CHECK(r.cases.size() == 3);

    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    r = verify_disjointness(ext, 4, 4);
    CHECK(r.pass);
    CHECK(r.violations == 0);
    for (const auto& c : r.cases) CHECK(c.words > 0);

    try {
      verify_disjointness(ext, 4, 3);
      FAIL("small view accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::view_too_small);
    }
  }

  TEST_CASE("disjointness is monotone in the word radius") {
    auto ext = extend_free(swap_system(), z(2, "g"));
    std::size_t previous = 0;
    for (std::size_t r = 1; r <= 4; ++r) {
      auto rep = verify_disjointness(ext, r, 4);
      CHECK(rep.pass);
      CHECK(rep.checks >= previous);
      previous = rep.checks;
    }
  }

  TEST_CASE("disjointness, graph case with all seven shapes") {
    auto ext = p4_extension(fixture::z2_to_z4());
    auto r = verify_disjointness(ext, 3, 3);
    CHECK(r.pass);
    REQUIRE(r.cases.size() == 7);
    for (const auto& c : r.cases) CHECK(c.words > 0);
  }

  TEST_CASE("case classification follows the alh shape") {
    auto ext = p4_extension(fixture::z2_to_z4());
    const auto& h = ext.source();
    const std::size_t table[2][2][2] = {{{7, 4}, {6, 1}}, {{5, 2}, {3, 0}}};
    for (const auto& w : h.ball(3)) {
      if (w.is_identity()) continue;
      auto d = h.alh_decompose(w, 0);
      REQUIRE(classify_case(ext, w) == table[!d.a.is_identity()][!d.l.is_identity()][!d.h.is_identity()]);
    }
    auto free = extend_free(fixture::z2_to_z4(), z(2, "g"));
    const auto& f = free.source();
    CHECK(classify_case(free, f.syllable(1, 1)) == 2);
    CHECK(classify_case(free, f.syllable(0, 1)) == 1);
    CHECK(classify_case(free, f.multiply(f.syllable(1, 1), f.syllable(0, 1))) == 0);
    CHECK_THROWS_AS(classify_case(free, f.identity()), Error);
  }

  TEST_CASE("negative control: a corrupted cocycle entry breaks disjointness") {
    ExtendOptions loose;
    loose.require_certified = false;
    auto bad = extend_free(corrupted_z2_to_z4(), z(2, "g"), loose);
    auto r = verify_disjointness(bad, 2, 2);
    CHECK_FALSE(r.pass);
    REQUIRE(r.witness.has_value());
    CHECK_FALSE(r.witness->word.is_identity());
    CHECK(bad.in_ytilde(r.witness->from));
    CHECK(bad.in_ytilde(r.witness->to));
    CHECK(act_on_point(bad, r.witness->word, r.witness->from) == r.witness->to);
  }

  TEST_CASE("coverage") {
    auto id = extend_free(fixture::identity_z2(), z(2, "g"));
    auto c = verify_coverage(id, 3, coverage_search_radius(id, 3));
    CHECK(c.fraction == 1);
    CHECK(c.missed_count == 0);
    CHECK(c.multiply_hit == 0);

    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    const std::size_t search = coverage_search_radius(ext, 2);
    CHECK(search == 2 + 2 * 2 + 1);
    c = verify_coverage(ext, 2, search);
    CHECK(c.fraction == 1);
    CHECK(c.interior_points == ext.target().ball(2).size());
    try {
      verify_coverage(ext, 2, search - 1);
      FAIL("margin not enforced");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::precondition);
    }

    auto graph = p4_extension(fixture::z2_to_z4());
    c = verify_coverage(graph, 1, coverage_search_radius(graph, 1));
    CHECK(c.fraction == 1);
  }

  TEST_CASE("negative control: deleting a point of Y~ breaks coverage") {
    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    const auto& g = ext.target();
    CouplingPoint dropped{g.multiply(g.syllable(0, 1), g.syllable(1, 1)), 0};
    REQUIRE(ext.in_ytilde(dropped));
    std::vector<CouplingPoint> removed{dropped};
    auto c = verify_coverage(ext, 2, coverage_search_radius(ext, 2), {}, removed);
    CHECK(c.fraction < 1);
    CHECK(c.missed_count > 0);
    REQUIRE_FALSE(c.missed.empty());
  }

  TEST_CASE("parallel sweeps give identical reports") {
    auto ext = p4_extension(fixture::z2_to_z4());
    VerifyOptions one, three;
    three.jobs = 3;
    auto a = verify_disjointness(ext, 2, 2, one), b = verify_disjointness(ext, 2, 2, three);
    CHECK(a.checks == b.checks);
    for (std::size_t k = 0; k < 7; ++k) CHECK(a.cases[k].checks == b.cases[k].checks);
    auto ca = verify_coverage(ext, 1, coverage_search_radius(ext, 1), one);
    auto cb = verify_coverage(ext, 1, coverage_search_radius(ext, 1), three);
    CHECK(ca.covered == cb.covered);
    CHECK(ca.longest_word == cb.longest_word);
  }
}

TEST_SUITE("index growth") {
  TEST_CASE("growth examples") {
    auto id = extend_free(fixture::identity_z2(), z(2, "g"));
    std::vector<std::size_t> even{0, 2, 4};
    auto gi = extension_index_growth(id, even);
    CHECK(gi.cls == GrowthClass::constant_one);
    CHECK(gi.partials == std::vector<Rational>{1, 1, 1});

    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    std::vector<std::size_t> radii{0, 1, 2, 3};
    auto g = extension_index_growth(ext, radii);
    CHECK(g.cls == GrowthClass::growing);
    CHECK(g.partials == std::vector<Rational>{2, 3, 6, 9});
    CHECK(g.orbit_reps == std::vector<std::size_t>{1, 2, 5, 8});

    std::vector<FiniteGroup> src(4, z(2, "b")), tgt(4, z(2, "b"));
    src[1] = z(2, "s");
    tgt[1] = z(4, "t");
    auto centre = extend_graph(fixture::star_k13(), src, tgt, "v2", fixture::z2_to_z4());
    CHECK(centre.reducible());
    CHECK(centre.orbit_reps_trivial());
    auto gc = extension_index_growth(centre, radii);
    CHECK(gc.cls == GrowthClass::constant);
    CHECK(gc.constant == Rational(2));
    CHECK(gc.partials == std::vector<Rational>{2, 2, 2, 2});

    auto trivial = extend_free(fixture::z2_to_z4(), FiniteGroup::trivial());
    CHECK(extension_index_growth(trivial, radii).cls == GrowthClass::constant);
  }

  TEST_CASE("classify_partials") {
    CHECK(classify_partials(std::vector<Rational>{1, 1}) == GrowthClass::constant_one);
    CHECK(classify_partials(std::vector<Rational>{2, 3, 6}) == GrowthClass::growing);
    CHECK(classify_partials(std::vector<Rational>{2, 2, 3}) == GrowthClass::undetermined);
  }
}

TEST_SUITE("composition of extensions") {
  TEST_CASE("composed systems") {
    auto first = std::make_shared<const ExtendedSystem>(extend_free(fixture::z2_to_z4(), z(2, "g")));
    auto second = std::make_shared<const ExtendedSystem>(extend_free(fixture::z4_to_z8(), z(2, "g")));
    ComposedSystem c(first, second);
    CHECK(c.space().size() == 1);
    const auto& h = c.source();
    for (const auto& w : h.ball(3))
      CHECK(c.value(w, 0) == second->value(second->source().adopt(first->value(w, 0)), 0));
    CHECK_FALSE(smi_violation_on_ball(c, 4).has_value());
    CHECK_THROWS_AS(ComposedSystem(first, first), Error);
  }

  TEST_CASE("truncated greedy measures on a single extension") {
    // One point, so the cocycle is a homomorphism with image K = <g, t^2> in
    // Z2 * Z4 and the greedy picks one point per left coset uK meeting the ball.
    auto ext = extend_free(fixture::z2_to_z4(), z(2, "g"));
    const int orders[2] = {2, 4};
    auto free_reduce = [&](oracle::Word w) {
      oracle::Word out;
      for (auto s : w) {
        if (!out.empty() && out.back().vertex == s.vertex) {
          int e = (out.back().element + s.element) % orders[s.vertex];
          out.pop_back();
          if (e != 0) out.push_back({s.vertex, e});
        } else if (s.element != 0) {
          out.push_back(s);
        }
      }
      return out;
    };
    auto in_k = [&](const oracle::Word& w) {
      return std::all_of(w.begin(), w.end(), [](Syllable s) { return s.vertex == 0 || s.element == 2; });
    };
    std::vector<std::size_t> radii{0, 1, 2, 3};
    auto m = truncated_greedy_measures(ext, radii, 7);
    REQUIRE(m.size() == radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      auto ball = oracle::free_product_ball(2, 4, radii[i]);
      std::vector<oracle::Word> reps;
      for (const auto& v : ball) {
        bool seen = false;
        for (const auto& u : reps) {
          oracle::Word w;
          for (auto it = u.rbegin(); it != u.rend(); ++it) w.push_back({it->vertex, (orders[it->vertex] - it->element) % orders[it->vertex]});
          w.insert(w.end(), v.begin(), v.end());
          if (in_k(free_reduce(w))) seen = true;
        }
        if (!seen) reps.push_back(v);
      }
      CAPTURE(radii[i]);
      CHECK(m[i] == Rational(static_cast<long long>(reps.size())));
    }
    CHECK(m[0] == 1);
    CHECK(m[2] == 3);
  }

  TEST_CASE("iterated extension pipeline") {
    auto theta = fixture::path(4);
    std::vector<SmiSystem> ids(4, fixture::identity_z2());
    auto a = theorem_b_pipeline(theta, ids);
    CHECK(a.cls == GrowthClass::constant_one);
    CHECK(a.steps.size() == 4);
    CHECK(a.compositions.size() == 3);
    CHECK_FALSE(a.smi_violation.has_value());
    for (const auto& v : a.final_partials) CHECK(v == 1);

    auto one = ids;
    one[0] = fixture::z2_to_z4();
    auto b = theorem_b_pipeline(theta, one);
    CHECK(b.cls == GrowthClass::growing);
    CHECK(b.steps.size() == 4);
    CHECK(b.compositions.size() == 3);
    CHECK(b.steps[0].growth.cls == GrowthClass::growing);

    auto two = one;
    two[2] = fixture::z2_to_z4();
    auto c = theorem_b_pipeline(theta, two);
    CHECK(c.cls == GrowthClass::growing);
    CHECK(c.final_system->target().group(0).order() == 4);
    CHECK(c.final_system->target().group(2).order() == 4);
    CHECK(c.final_system->source().group(2).order() == 2);
  }
}
