#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gkm/graph.hpp"

using namespace gkm;

namespace {
LinForm lf(std::initializer_list<long long> v) {
  std::vector<BigRat> c;
  for (long long x : v) c.push_back(BigRat(x));
  return LinForm(std::move(c));
}
} // namespace

TEST_CASE("builders") {
  auto g = generic_graph();
  CHECK(g.num_vertices() == 1);
  CHECK(g.edges().empty());
  CHECK(g.validate().empty());

  auto s = subgeneric_graph(lf({1}));
  CHECK(s.num_vertices() == 2);
  CHECK(s.edges().size() == 1);
  CHECK(s.validate().empty());
  CHECK(s.less(0, 1));
  CHECK_FALSE(s.less(1, 0));

  auto d = diamond_graph(lf({1, 0}), lf({0, 1}));
  CHECK(d.validate().empty());
  CHECK(d.is_gkm().first);
}

TEST_CASE("validation catches broken graphs") {
  // zero label
  MomentGraph z(1, {"a", "b"}, {GraphEdge{0, 1, lf({0})}});
  auto v1 = z.validate();
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].what.find("zero label") != std::string::npos);

  // incomparable endpoints: relations supplied explicitly, edge not covered
  MomentGraph inc(1, {"a", "b", "c"}, {GraphEdge{0, 1, lf({1})}},
                  {{0, 2}}, /*edges_direct_order=*/false);
  bool found = false;
  for (const auto& v : inc.validate())
    if (v.what.find("incomparable") != std::string::npos) found = true;
  CHECK(found);

  // cycle
  MomentGraph cyc(1, {"a", "b"}, {GraphEdge{0, 1, lf({1})}}, {{1, 0}});
  found = false;
  for (const auto& v : cyc.validate())
    if (v.what.find("strict partial order") != std::string::npos) found = true;
  CHECK(found);

  // parallel edges
  MomentGraph par(1, {"a", "b"},
                  {GraphEdge{0, 1, lf({1})}, GraphEdge{0, 1, lf({1})}});
  found = false;
  for (const auto& v : par.validate())
    if (v.what.find("parallel") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("gkm witness") {
  MomentGraph g(2, {"a", "b", "c"},
                {GraphEdge{0, 1, lf({1, 0})}, GraphEdge{0, 2, lf({2, 0})}});
  auto [ok, witness] = g.is_gkm();
  CHECK_FALSE(ok);
  CHECK(witness.find("a") != std::string::npos);
  CHECK(generic_graph().is_gkm().first);
}

TEST_CASE("open sets and order queries") {
  auto s = subgeneric_graph(lf({1}));
  CHECK(s.is_open({0}));
  CHECK_FALSE(s.is_open({1}));
  CHECK(s.is_open({}));
  CHECK(s.is_open({0, 1}));
  CHECK(s.edges_into(1) == std::vector<int>{0});
  CHECK(s.edges_into(0).empty());
  CHECK(s.less_than(1) == std::vector<int>{0});
  CHECK(s.open_subsets().size() == 3);
  CHECK_THROWS_AS(s.require_vertex("zzz"), std::invalid_argument);
}

TEST_CASE("tilt is an involution and preserves gkm") {
  auto d = diamond_graph(lf({1, 0}), lf({0, 1}));
  auto t = d.tilted();
  CHECK(t.less(2, 0));
  CHECK_FALSE(t.less(0, 2));
  auto tt = t.tilted();
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) CHECK(tt.less(x, y) == d.less(x, y));
  CHECK(t.is_gkm().first == d.is_gkm().first);
}

TEST_CASE("gamma reduction") {
  auto d = diamond_graph(lf({1, 0}), lf({0, 1}));
  auto r = d.gamma_reduced(lf({2, 0}));
  CHECK(r.edges().size() == 1);
  CHECK(r.num_vertices() == 3);
  // order survives reduction
  CHECK(r.less(1, 2));
  // unmatched gamma gives an edgeless graph
  CHECK(d.gamma_reduced(lf({1, 1})).edges().empty());
  // idempotence
  auto rr = r.gamma_reduced(lf({2, 0}));
  CHECK(rr.edges().size() == r.edges().size());
  CHECK_THROWS_AS(d.gamma_reduced(lf({0, 0})), std::invalid_argument);

  // subgeneric graph reduced at its own label is unchanged
  auto s = subgeneric_graph(lf({3}));
  CHECK(s.gamma_reduced(lf({1})).edges().size() == 1);
}

TEST_CASE("connected components") {
  auto d = diamond_graph(lf({1, 0}), lf({0, 1}));
  auto comps = d.connected_components({0, 1});
  CHECK(comps.size() == 2);
  auto all = d.connected_components({0, 1, 2});
  CHECK(all.size() == 1);
}
