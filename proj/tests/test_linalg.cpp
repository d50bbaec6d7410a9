#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gkm/linalg.hpp"

using namespace gkm;

static BRow row_of(std::initializer_list<long long> dense) {
  BRow r;
  int c = 0;
  for (long long v : dense) {
    if (v != 0) r.add_term(c, BigRat(v));
    ++c;
  }
  return r;
}

TEST_CASE("rref canonical form") {
  std::vector<BRow> rows = {row_of({2, 4, 0}), row_of({1, 2, 1}), row_of({3, 6, 1})};
  auto ech = rref_rows(rows);
  REQUIRE(ech.size() == 2);
  CHECK(ech[0].e == row_of({1, 2, 0}).e);
  CHECK(ech[1].e == row_of({0, 0, 1}).e);
  // input order does not matter
  std::vector<BRow> shuffled = {rows[2], rows[0], rows[1]};
  CHECK(rref_rows(shuffled) == ech);
}

TEST_CASE("nullspace basis") {
  // x + y + z = 0
  std::vector<BRow> rows = {row_of({1, 1, 1})};
  auto ns = nullspace_rows(rows, 3);
  REQUIRE(ns.size() == 2);
  for (const auto& v : ns) {
    BigRat sum;
    for (const auto& [c, val] : v.e) sum += val;
    CHECK(sum.is_zero());
  }
  CHECK(rank_rows(ns) == 2);
}

TEST_CASE("rank-nullity on random matrices, both kernels agree") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> val(-4, 4);
  for (int iter = 0; iter < 60; ++iter) {
    int nrows = 1 + (int)(rng() % 8), ncols = 1 + (int)(rng() % 8);
    std::vector<BRow> rows(nrows);
    for (auto& r : rows) {
      for (int c = 0; c < ncols; ++c) r.add_term(c, BigRat(val(rng)));
      r.sort_and_compress();
    }
    int rk = rank_rows(rows);
    auto ns = nullspace_rows(rows, ncols);
    CHECK(rk + (int)ns.size() == ncols);

    // big kernel must produce the identical canonical result
    Echelon<BigRat> ech;
    for (const auto& r : rows) ech.insert(r);
    auto fast = rref_rows(rows);
    REQUIRE(ech.rows().size() == fast.size());
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(ech.rows()[i].e == fast[i].e);
  }
}

TEST_CASE("overflow falls back to the big kernel") {
  // values that overflow int64 on elimination
  BRow a, b;
  a.add_term(0, BigRat::parse("4611686018427387904")); // 2^62
  a.add_term(1, BigRat(3));
  b.add_term(0, BigRat(5));
  b.add_term(1, BigRat::parse("4611686018427387904"));
  auto ech = rref_rows({a, b});
  CHECK(ech.size() == 2);
  CHECK(ech[0].e == row_of({1, 0}).e);
  CHECK(ech[1].e == row_of({0, 1}).e);
}

TEST_CASE("basis membership and intersection") {
  Basis a = basis_from_rows({row_of({1, 0, 1}), row_of({0, 1, 1})});
  Basis b = basis_from_rows({row_of({1, 1, 2}), row_of({1, -1, 0})});
  CHECK(a.contains(row_of({2, 3, 5})));
  CHECK_FALSE(a.contains(row_of({1, 0, 0})));
  Basis both = intersect_bases(a, b, 3);
  CHECK(both.dim() == 2); // both spans equal {x+y=z}
  auto coords = a.coords_in_span(row_of({2, 3, 5}));
  REQUIRE(coords.has_value());
  CHECK((*coords)[0] == BigRat(2));
  CHECK((*coords)[1] == BigRat(3));
}
