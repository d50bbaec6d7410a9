#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gkm/coxeter.hpp"

using namespace gkm;

TEST_CASE("A1 gives the subgeneric graph") {
  auto g = bruhat_moment_graph(CoxeterSystem::from_type("A1"), {});
  CHECK(g.num_vertices() == 2);
  CHECK(g.edges().size() == 1);
  CHECK(g.validate().empty());
  CHECK(g.id(0) == "e");
  CHECK(g.id(1) == "s1");
  CHECK(g.less(0, 1));
}

TEST_CASE("A2 Bruhat graph") {
  auto sys = CoxeterSystem::from_type("A2");
  auto g = bruhat_moment_graph(sys, {});
  CHECK(g.num_vertices() == 6);
  CHECK(g.edges().size() == 9);
  CHECK(g.validate().empty());
  CHECK(g.is_gkm().first);

  // unique minimum e, unique maximum of length 3
  int min_count = 0, max_count = 0;
  for (int x = 0; x < 6; ++x) {
    if (g.less_than(x).empty()) ++min_count;
    if (g.greater_eq(x).size() == 1) ++max_count;
  }
  CHECK(min_count == 1);
  CHECK(max_count == 1);
  CHECK(g.less_eq(g.require_vertex("s1 s2 s1")).size() == 6);

  // every edge connects different lengths
  auto len = [&](int x) {
    return g.id(x) == "e" ? 0 : (int)std::count(g.id(x).begin(), g.id(x).end(), 's');
  };
  for (const auto& e : g.edges()) CHECK(len(e.u) != len(e.v));
}

TEST_CASE("A2 parabolic quotient: the projective plane graph") {
  auto g = bruhat_moment_graph(CoxeterSystem::from_type("A2"), {0});
  CHECK(g.num_vertices() == 3);
  CHECK(g.edges().size() == 3);
  CHECK(g.validate().empty());
}

TEST_CASE("A3 size and edge count") {
  auto g = bruhat_moment_graph(CoxeterSystem::from_type("A3"), {});
  CHECK(g.num_vertices() == 24);
  CHECK(g.edges().size() == 72);
  CHECK(g.is_gkm().first);
  CHECK(g.validate().empty());
}

TEST_CASE("dihedral types") {
  CHECK(bruhat_moment_graph(CoxeterSystem::from_type("I2(3)"), {}).num_vertices() == 6);
  CHECK(bruhat_moment_graph(CoxeterSystem::from_type("I2(4)"), {}).num_vertices() == 8);
  CHECK(bruhat_moment_graph(CoxeterSystem::from_type("I2(6)"), {}).num_vertices() == 12);
  CHECK(bruhat_moment_graph(CoxeterSystem::from_type("B2"), {}).num_vertices() == 8);
  CHECK(bruhat_moment_graph(CoxeterSystem::from_type("G2"), {}).num_vertices() == 12);
  CHECK_THROWS_AS(CoxeterSystem::from_type("I2(5)"), std::invalid_argument);
  CHECK_THROWS_AS(CoxeterSystem::from_type("H3"), std::invalid_argument);
}

TEST_CASE("infinite groups are rejected by enumeration") {
  auto affine = CoxeterSystem::from_cartan({{2, -2}, {-2, 2}}, "A1~");
  CHECK_THROWS_AS(CoxeterGroup::enumerate(affine, 500), infinite_group_error);
  CHECK_THROWS_AS(bruhat_moment_graph(affine, {}, 500), infinite_group_error);
}

TEST_CASE("reflection counts") {
  CHECK(CoxeterGroup::enumerate(CoxeterSystem::from_type("A2")).reflections().size() == 3);
  CHECK(CoxeterGroup::enumerate(CoxeterSystem::from_type("A3")).reflections().size() == 6);
  CHECK(CoxeterGroup::enumerate(CoxeterSystem::from_type("B2")).reflections().size() == 4);
  CHECK(CoxeterGroup::enumerate(CoxeterSystem::from_type("G2")).reflections().size() == 6);
}

TEST_CASE("gamma reduction of a Bruhat graph splits into generic and subgeneric parts") {
  auto g = bruhat_moment_graph(CoxeterSystem::from_type("A2"), {});
  // collect the distinct label lines and reduce at each
  for (const auto& probe : g.edges()) {
    auto r = g.gamma_reduced(probe.label);
    std::vector<int> all(r.num_vertices());
    for (int i = 0; i < r.num_vertices(); ++i) all[i] = i;
    auto comps = r.connected_components(all);
    for (const auto& comp : comps) CHECK(comp.size() <= 2);
    int edge_total = 0;
    for (const auto& comp : comps) edge_total += (int)r.edges_inside(comp).size();
    CHECK(edge_total == (int)r.edges().size());
  }
  // the simple-root reduction of A2 is three subgeneric components
  auto r = g.gamma_reduced(g.edges()[0].label);
  std::vector<int> all(6);
  for (int i = 0; i < 6; ++i) all[i] = i;
  CHECK(r.connected_components(all).size() == 3);
  CHECK(r.edges().size() == 3);
}

TEST_CASE("bruhat order via the descent recursion") {
  auto w = CoxeterGroup::enumerate(CoxeterSystem::from_type("A2"));
  int e = 0;
  int w0 = w.parse_word("s1 s2 s1");
  CHECK(w.length(w0) == 3);
  for (int x = 0; x < w.size(); ++x) {
    CHECK(w.bruhat_leq(e, x));
    CHECK(w.bruhat_leq(x, w0));
    for (int y = 0; y < w.size(); ++y)
      if (x != y && w.bruhat_leq(x, y)) CHECK_FALSE(w.bruhat_leq(y, x));
  }
  // s1 s2 and s2 s1 are incomparable
  CHECK_FALSE(w.bruhat_leq(w.parse_word("s1 s2"), w.parse_word("s2 s1")));
  CHECK_FALSE(w.bruhat_leq(w.parse_word("s2 s1"), w.parse_word("s1 s2")));
}

TEST_CASE("words are ShortLex-minimal and parseable") {
  auto w = CoxeterGroup::enumerate(CoxeterSystem::from_type("A3"));
  for (int x = 0; x < w.size(); ++x) {
    CHECK(w.parse_word(w.word_string(x)) == x);
    CHECK((int)w.word(x).size() == w.length(x));
  }
  CHECK(w.word_string(0) == "e");
  // the braid pair s1 s2 s1 = s2 s1 s2 resolves to the ShortLex-smaller word
  CHECK(w.word_string(w.parse_word("s2 s1 s2")) == "s1 s2 s1");
}
