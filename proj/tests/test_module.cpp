#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "gkm/module.hpp"
#include "oracle.hpp"

using namespace gkm;

namespace {

AmbientPtr free_ambient(PolyRingPtr ring, std::vector<int> shifts) {
  std::vector<AmbientComponent> comps;
  for (int s : shifts) comps.push_back({s, std::nullopt});
  return std::make_shared<AmbientModule>(ring, comps);
}

GenTuple tup(std::vector<Poly> comps, int degree) { return GenTuple{std::move(comps), degree}; }

} // namespace

TEST_CASE("span of the unit in a free rank-1 module") {
  for (int n = 1; n <= 3; ++n) {
    auto ring = std::make_shared<PolyRing>(n);
    auto amb = free_ambient(ring, {0});
    auto m = GradedSubmodule::span(amb, {tup({Poly::constant(1)}, 0)}, 4);
    CHECK(m.dim(0) == 1);
    CHECK(m.dim(2) == n);
    CHECK(m.dim(4) == n * (n + 1) / 2);
    CHECK(m.dim(1) == 0);
    CHECK(m.dim(-2) == 0);
  }
}

TEST_CASE("empty span is the zero module") {
  auto ring = std::make_shared<PolyRing>(2);
  auto m = GradedSubmodule::span(free_ambient(ring, {0, 2}), {}, 6);
  for (int d = 0; d <= 6; d += 2) CHECK(m.dim(d) == 0);
  CHECK(m.minimal_generators().empty());
}

TEST_CASE("annihilator kills the generator") {
  auto ring = std::make_shared<PolyRing>(2);
  LinForm alpha({BigRat(1), BigRat(0)});
  auto amb = std::make_shared<AmbientModule>(
      ring, std::vector<AmbientComponent>{{0, alpha}});
  auto m = GradedSubmodule::span(amb, {tup({alpha.to_poly()}, 2)}, 6);
  for (int d = 0; d <= 6; d += 2) CHECK(m.dim(d) == 0);
}

TEST_CASE("span rejections") {
  auto ring = std::make_shared<PolyRing>(2);
  auto amb = free_ambient(ring, {0});
  Poly bad = Poly::variable(0) + Poly::constant(1);
  CHECK_THROWS_WITH_AS(GradedSubmodule::span(amb, {tup({bad}, 2)}, 4),
                       doctest::Contains("generator 0"), std::invalid_argument);
  CHECK_THROWS_AS(GradedSubmodule::span(amb, {tup({Poly::variable(0)}, 2)}, 0),
                  std::invalid_argument);
}

TEST_CASE("minimal generators of span{(1,1),(t,0)} in S+S, S=Q[t]") {
  auto ring = std::make_shared<PolyRing>(1);
  auto amb = free_ambient(ring, {0, 0});
  Poly one = Poly::constant(1), t = Poly::variable(0);
  auto m = GradedSubmodule::span(amb, {tup({one, one}, 0), tup({t, Poly()}, 2)}, 8);
  CHECK(m.minimal_generator_degrees() == std::vector<int>{0, 2});

  // independent brute-force check of the degree distribution
  oracle::AmbientSpec amb_o{1, {{0, {}}, {0, {}}}};
  std::vector<oracle::GenSpec> gens_o = {
      {{oracle::to_rep(one, 1), oracle::to_rep(one, 1)}, 0},
      {{oracle::to_rep(t, 1), {}}, 2}};
  for (int d = 0; d <= 8; d += 2) {
    CHECK(oracle::span_dim(amb_o, gens_o, d) == m.dim(d));
    int want = oracle::min_gen_count(amb_o, gens_o, d);
    int got = 0;
    for (const auto& g : m.minimal_generators())
      if (g.degree == d) ++got;
    CHECK(got == want);
  }
}

TEST_CASE("redundant generator dropped") {
  auto ring = std::make_shared<PolyRing>(1);
  auto amb = free_ambient(ring, {0, 0});
  Poly one = Poly::constant(1), t = Poly::variable(0);
  auto m = GradedSubmodule::span(amb, {tup({one, one}, 0), tup({t, t}, 2)}, 8);
  CHECK(m.minimal_generator_degrees() == std::vector<int>{0});
}

TEST_CASE("kernel of the identity is zero") {
  auto ring = std::make_shared<PolyRing>(2);
  auto amb = free_ambient(ring, {0, 2});
  auto k = kernel(PolyMap::identity(amb), nullptr, 8);
  for (int d = 0; d <= 8; d += 2) CHECK(k.dim(d) == 0);
}

TEST_CASE("kernel of the quotient map S -> S/alpha") {
  auto ring = std::make_shared<PolyRing>(2);
  LinForm alpha({BigRat(2), BigRat(-1)});
  auto src = free_ambient(ring, {0});
  auto tgt = std::make_shared<AmbientModule>(
      ring, std::vector<AmbientComponent>{{0, alpha}});
  PolyMap quot(src, tgt, {{Poly::constant(1)}});
  auto k = kernel(quot, nullptr, 8);
  auto degs = k.minimal_generator_degrees();
  REQUIRE(degs == std::vector<int>{2});
  // the generator is alpha itself up to scale
  auto rep = is_graded_free(k);
  CHECK(rep.free);
  CHECK(rep.generator_degrees == std::vector<int>{2});
}

TEST_CASE("kernel with restricted source: (a,b) -> a-b mod t") {
  auto ring = std::make_shared<PolyRing>(1);
  LinForm alpha({BigRat(1)});
  auto src = free_ambient(ring, {0, 0});
  auto tgt = std::make_shared<AmbientModule>(
      ring, std::vector<AmbientComponent>{{0, alpha}});
  PolyMap f(src, tgt, {{Poly::constant(1), Poly::constant(-1)}});
  Poly one = Poly::constant(1), t = Poly::variable(0);
  auto m = GradedSubmodule::span(src, {tup({one, one}, 0), tup({t, Poly()}, 2)}, 8);
  auto k = kernel(f, &m, 8);
  CHECK(k.dim(0) == 1);
  CHECK(k.dim(2) == 2);
  CHECK(k.dim(4) == 2);
  CHECK(k.dim(6) == 2);
  CHECK(k.minimal_generator_degrees() == std::vector<int>{0, 2});
  // rank-nullity against the image, degree by degree
  auto img = image(f, m);
  for (int d = 0; d <= 8; d += 2) CHECK(m.dim(d) == img.dim(d) + k.dim(d));
}

TEST_CASE("image of the identity") {
  auto ring = std::make_shared<PolyRing>(2);
  auto amb = free_ambient(ring, {0});
  auto m = GradedSubmodule::span(amb, {tup({Poly::variable(0)}, 2)}, 6);
  auto img = image(PolyMap::identity(amb), m);
  CHECK(img.equals(m));
}

TEST_CASE("intersection of two principal ideals") {
  auto ring = std::make_shared<PolyRing>(2);
  auto amb = free_ambient(ring, {0});
  Poly x = Poly::variable(0), y = Poly::variable(1);
  auto mx = GradedSubmodule::span(amb, {tup({x}, 2)}, 8);
  auto my = GradedSubmodule::span(amb, {tup({y}, 2)}, 8);
  auto both = intersect(mx, my);
  CHECK(both.minimal_generator_degrees() == std::vector<int>{4});
  CHECK(both.contains_tuple({x * y}, 4));
  // brute-force dims of (xy)
  oracle::AmbientSpec amb_o{2, {{0, {}}}};
  std::vector<oracle::GenSpec> gens_o = {{{oracle::to_rep(x * y, 2)}, 4}};
  for (int d = 0; d <= 8; d += 2) CHECK(both.dim(d) == oracle::span_dim(amb_o, gens_o, d));

  auto bad_amb = free_ambient(ring, {0, 0});
  auto other = GradedSubmodule::span(bad_amb, {}, 8);
  CHECK_THROWS_AS(intersect(mx, other), std::invalid_argument);
}

TEST_CASE("hilbert function of a free rank-1 module") {
  auto ring = std::make_shared<PolyRing>(1);
  auto amb = free_ambient(ring, {2});
  auto m = GradedSubmodule::span(amb, {tup({Poly::constant(1)}, 2)}, 10);
  auto h = m.hilbert_function();
  CHECK(h.at(0) == 0);
  for (int d = 2; d <= 10; d += 2) CHECK(h.at(d) == 1);
}

TEST_CASE("graded-freeness verdicts") {
  auto ring2 = std::make_shared<PolyRing>(2);

  SUBCASE("direct sum S + S[-2] is free with generator degrees 0,2") {
    auto amb = free_ambient(ring2, {0, 2});
    auto m = GradedSubmodule::span(
        amb, {tup({Poly::constant(1), Poly()}, 0), tup({Poly(), Poly::constant(1)}, 2)}, 8);
    auto rep = is_graded_free(m);
    CHECK(rep.free);
    CHECK(rep.generator_degrees == std::vector<int>{0, 2});
    CHECK(rep.verified_up_to == 8);
  }

  SUBCASE("the ideal (x,y) is not free, first failure at degree 4") {
    auto amb = free_ambient(ring2, {0});
    auto m = GradedSubmodule::span(
        amb, {tup({Poly::variable(0)}, 2), tup({Poly::variable(1)}, 2)}, 8);
    auto rep = is_graded_free(m);
    CHECK_FALSE(rep.free);
    CHECK(rep.first_failure_degree == 4);
    CHECK(m.dim(4) == 3);
  }

  SUBCASE("principal ideals are free") {
    auto amb = free_ambient(ring2, {0});
    LinForm alpha({BigRat(1), BigRat(1)});
    auto m = GradedSubmodule::span(amb, {tup({alpha.to_poly()}, 2)}, 8);
    auto rep = is_graded_free(m);
    CHECK(rep.free);
    CHECK(rep.generator_degrees == std::vector<int>{2});
  }
}

TEST_CASE("properties: closure growth, idempotent minimal presentation, order independence") {
  std::mt19937_64 rng(23);
  auto ring = std::make_shared<PolyRing>(2);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int iter = 0; iter < 10; ++iter) {
    auto amb = free_ambient(ring, {0, 0, 2});
    std::vector<GenTuple> gens;
    int ngens = 2 + (int)(rng() % 3);
    for (int g = 0; g < ngens; ++g) {
      int degree = 2 * (int)(rng() % 3);
      std::vector<Poly> comps;
      for (int ci = 0; ci < 3; ++ci) {
        int want = degree - amb->comps()[ci].shift;
        Poly p;
        if (want >= 0) {
          std::vector<std::pair<Mono, BigRat>> terms;
          for (Mono m : ring->monos(want / 2)) terms.push_back({m, BigRat(coeff(rng))});
          p = Poly::from_terms(std::move(terms));
        }
        comps.push_back(p);
      }
      bool all_zero = true;
      for (auto& c : comps) all_zero = all_zero && c.is_zero();
      if (!all_zero) gens.push_back({comps, degree});
    }
    if (gens.empty()) continue;
    auto m = GradedSubmodule::span(amb, gens, 8);

    // dim M_{d+2} >= dim (V*M_d)
    for (int d = 0; d <= 6; d += 2) {
      auto closure = amb->closure_rows(m.slice(d).rows, d);
      CHECK(m.dim(d + 2) >= rank_rows(closure));
    }

    // re-spanning the minimal generators reproduces the slices
    auto again = GradedSubmodule::span(amb, m.minimal_generators(), 8);
    CHECK(again.equals(m));
    CHECK(again.minimal_generator_degrees() == m.minimal_generator_degrees());

    // generator order does not matter
    auto shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto m2 = GradedSubmodule::span(amb, shuffled, 8);
    CHECK(m2.equals(m));
    CHECK(m2.minimal_generator_degrees() == m.minimal_generator_degrees());
  }
}

TEST_CASE("free modules built as direct sums always verify free") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 8; ++iter) {
    int n = 1 + (int)(rng() % 3);
    auto ring = std::make_shared<PolyRing>(n);
    int rank = 1 + (int)(rng() % 3);
    std::vector<int> shifts;
    std::vector<GenTuple> gens;
    for (int i = 0; i < rank; ++i) shifts.push_back(2 * (int)(rng() % 4));
    auto amb = free_ambient(ring, shifts);
    for (int i = 0; i < rank; ++i) {
      std::vector<Poly> comps(rank);
      comps[i] = Poly::constant(1);
      gens.push_back({comps, shifts[i]});
    }
    auto m = GradedSubmodule::span(amb, gens, 10);
    auto rep = is_graded_free(m);
    CHECK(rep.free);
    auto sorted = shifts;
    std::sort(sorted.begin(), sorted.end());
    CHECK(rep.generator_degrees == sorted);
  }
}
