#include "gkm/linalg.hpp"

namespace gkm {

std::vector<BRow> rref_rows(const std::vector<BRow>& rows) {
  return run_exact([&](auto* tag) -> std::vector<BRow> {
    using Q = std::remove_pointer_t<decltype(tag)>;
    std::vector<SparseVec<Q>> in;
    if constexpr (std::is_same_v<Q, Rat64>) in = to_small(rows);
    else in = rows;
    Echelon<Q> ech = rref(in);
    if constexpr (std::is_same_v<Q, Rat64>) return to_big_rows(ech.rows());
    else return ech.rows();
  });
}

std::vector<BRow> nullspace_rows(const std::vector<BRow>& rows, int ncols) {
  return run_exact([&](auto* tag) -> std::vector<BRow> {
    using Q = std::remove_pointer_t<decltype(tag)>;
    if constexpr (std::is_same_v<Q, Rat64>) {
      return to_big_rows(nullspace(to_small(rows), ncols));
    } else {
      return nullspace(rows, ncols);
    }
  });
}

int rank_rows(const std::vector<BRow>& rows) {
  return run_exact([&](auto* tag) -> int {
    using Q = std::remove_pointer_t<decltype(tag)>;
    if constexpr (std::is_same_v<Q, Rat64>) {
      return rref(to_small(rows)).rank();
    } else {
      return rref(rows).rank();
    }
  });
}

bool Basis::contains(const BRow& v) const {
  return reduce(v).empty();
}

BRow Basis::reduce(const BRow& v) const {
  return run_exact([&](auto* tag) -> BRow {
    using Q = std::remove_pointer_t<decltype(tag)>;
    if constexpr (std::is_same_v<Q, Rat64>) {
      Echelon<Q> ech;
      for (const auto& r : rows) ech.insert(to_small(r));
      SparseVec<Q> w = to_small(v);
      ech.reduce(w);
      return to_big(w);
    } else {
      Echelon<Q> ech;
      for (const auto& r : rows) ech.insert(r);
      BRow w = v;
      ech.reduce(w);
      return w;
    }
  });
}

std::optional<std::vector<BigRat>> Basis::coords_in_span(const BRow& v) const {
  // rows are already RREF, so tracked reduction gives the coefficients
  BRow w = v;
  BRow coeffs;
  Echelon<BigRat> ech;
  for (const auto& r : rows) ech.insert(r);
  ech.reduce_tracked(w, coeffs);
  if (!w.empty()) return std::nullopt;
  std::vector<BigRat> out(rows.size());
  for (const auto& [i, c] : coeffs.e) out[i] = c;
  return out;
}

bool Basis::operator==(const Basis& o) const {
  if (rows.size() != o.rows.size()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].e != o.rows[i].e) return false;
  return true;
}

Basis basis_from_rows(const std::vector<BRow>& rows) {
  return Basis{rref_rows(rows)};
}

std::optional<std::vector<BigRat>> solve_linear(const std::vector<BRow>& columns,
                                                const BRow& target) {
  int n = (int)columns.size();
  std::int32_t nrows = 0;
  for (const auto& c : columns)
    if (!c.empty()) nrows = std::max(nrows, c.e.back().first + 1);
  if (!target.empty()) nrows = std::max(nrows, target.e.back().first + 1);
  std::vector<BRow> constraint((std::size_t)nrows);
  for (int i = 0; i < n; ++i)
    for (const auto& [r, v] : columns[i].e) constraint[r].add_term(i, v);
  for (const auto& [r, v] : target.e) constraint[r].add_term(n, -v);
  for (auto& r : constraint) r.sort_and_compress();
  auto combos = nullspace_rows(constraint, n + 1);
  for (const auto& combo : combos) {
    const BigRat* t = combo.at(n);
    if (!t || t->is_zero()) continue;
    std::vector<BigRat> x(n);
    for (const auto& [i, v] : combo.e)
      if (i < n) x[i] = v / *t;
    return x;
  }
  return std::nullopt;
}

Basis intersect_bases(const Basis& a, const Basis& b, int ncols) {
  // solve sum x_i a_i = sum y_j b_j coordinatewise
  int m = a.dim(), k = b.dim();
  std::vector<BRow> constraint((std::size_t)ncols);
  for (int i = 0; i < m; ++i)
    for (const auto& [c, v] : a.rows[i].e) constraint[c].add_term(i, v);
  for (int j = 0; j < k; ++j)
    for (const auto& [c, v] : b.rows[j].e) constraint[c].add_term(m + j, -v);
  std::vector<BRow> nonempty;
  for (auto& r : constraint) {
    r.sort_and_compress();
    if (!r.empty()) nonempty.push_back(std::move(r));
  }
  std::vector<BRow> combos = nullspace_rows(nonempty, m + k);
  std::vector<BRow> vecs;
  for (const auto& combo : combos) {
    BRow v;
    for (const auto& [idx, coef] : combo.e) {
      if (idx < m) v = vec_axpy(v, coef, a.rows[idx]);
    }
    if (!v.empty()) vecs.push_back(std::move(v));
  }
  return basis_from_rows(vecs);
}

} // namespace gkm
