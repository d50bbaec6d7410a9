#pragma once

// Sparse exact linear algebra over the rationals: reduced row echelon
// form, nullspaces, images, intersections, membership. Everything is
// degreewise plumbing for the graded modules; matrices stay small but
// must be exact.
//
// All kernels are templated on the scalar. run_exact() first runs the
// int64 kernel and redoes the computation on GMP rationals if a value
// overflows, so callers always see exact results in BigRat form.
// The reduced row echelon form of a row space is unique, hence results
// are independent of the kernel and of the input row order.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gkm/rational.hpp"

namespace gkm {

template <class Q>
struct SparseVec {
  // sorted by column, no zero entries
  std::vector<std::pair<std::int32_t, Q>> e;

  bool empty() const { return e.empty(); }
  void add_term(std::int32_t c, Q v) {
    if (!v.is_zero()) e.push_back({c, std::move(v)});
  }
  void sort_and_compress() {
    std::sort(e.begin(), e.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < e.size();) {
      std::int32_t col = e[i].first;
      Q acc = e[i].second;
      for (++i; i < e.size() && e[i].first == col; ++i) acc += e[i].second;
      if (!acc.is_zero()) e[w++] = {col, std::move(acc)};
    }
    e.resize(w);
  }
  const Q* at(std::int32_t col) const {
    auto it = std::lower_bound(e.begin(), e.end(), col,
                               [](const auto& t, std::int32_t c) { return t.first < c; });
    if (it != e.end() && it->first == col) return &it->second;
    return nullptr;
  }
  friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.e == b.e; }
};

using BRow = SparseVec<BigRat>;

template <class Q>
SparseVec<Q> vec_scale(const SparseVec<Q>& a, const Q& c) {
  SparseVec<Q> r;
  if (c.is_zero()) return r;
  r.e.reserve(a.e.size());
  for (const auto& [col, v] : a.e) r.e.push_back({col, v * c});
  return r;
}

// a + c*b
template <class Q>
SparseVec<Q> vec_axpy(const SparseVec<Q>& a, const Q& c, const SparseVec<Q>& b) {
  SparseVec<Q> r;
  r.e.reserve(a.e.size() + b.e.size());
  auto ia = a.e.begin();
  auto ib = b.e.begin();
  while (ia != a.e.end() || ib != b.e.end()) {
    if (ib == b.e.end() || (ia != a.e.end() && ia->first < ib->first)) {
      r.e.push_back(*ia++);
    } else if (ia == a.e.end() || ib->first < ia->first) {
      Q v = c * ib->second;
      if (!v.is_zero()) r.e.push_back({ib->first, std::move(v)});
      ++ib;
    } else {
      Q v = ia->second + c * ib->second;
      if (!v.is_zero()) r.e.push_back({ia->first, std::move(v)});
      ++ia;
      ++ib;
    }
  }
  return r;
}

// Reduced row echelon form. Rows are kept with unit leading coefficient
// at their pivot column; every pivot column is eliminated from all other
// rows; rows are ordered by pivot column.
template <class Q>
class Echelon {
public:
  void insert(SparseVec<Q> row) {
    reduce(row);
    if (row.empty()) return;
    std::int32_t p = row.e.front().first;
    Q lead = row.e.front().second;
    if (!lead.is_one()) row = vec_scale(row, Q(1) / lead);
    // eliminate the new pivot column from existing rows
    for (auto& r : rows_) {
      const Q* v = r.at(p);
      if (v) r = vec_axpy(r, -*v, row);
    }
    auto it = std::lower_bound(rows_.begin(), rows_.end(), p,
                               [](const SparseVec<Q>& r, std::int32_t c) {
                                 return r.e.front().first < c;
                               });
    rows_.insert(it, std::move(row));
  }

  // reduce a vector modulo the row space (in place)
  void reduce(SparseVec<Q>& row) const {
    std::size_t i = 0;
    while (i < row.e.size()) {
      std::int32_t c = row.e[i].first;
      const SparseVec<Q>* pivot_row = row_with_pivot(c);
      if (pivot_row) {
        Q coeff = row.e[i].second;
        row = vec_axpy(row, -coeff, *pivot_row);
        // entries before position i are untouched and not pivot columns
      } else {
        ++i;
      }
    }
  }

  // reduce and record the coefficient taken against each pivot row
  void reduce_tracked(SparseVec<Q>& row, SparseVec<Q>& coeffs) const {
    std::size_t i = 0;
    while (i < row.e.size()) {
      std::int32_t c = row.e[i].first;
      const SparseVec<Q>* pivot_row = row_with_pivot(c);
      if (pivot_row) {
        Q coeff = row.e[i].second;
        coeffs.add_term(row_index(c), coeff);
        row = vec_axpy(row, -coeff, *pivot_row);
      } else {
        ++i;
      }
    }
    coeffs.sort_and_compress();
  }

  bool contains(const SparseVec<Q>& v) const {
    SparseVec<Q> r = v;
    reduce(r);
    return r.empty();
  }

  int rank() const { return (int)rows_.size(); }
  const std::vector<SparseVec<Q>>& rows() const { return rows_; }
  std::vector<std::int32_t> pivots() const {
    std::vector<std::int32_t> p;
    p.reserve(rows_.size());
    for (const auto& r : rows_) p.push_back(r.e.front().first);
    return p;
  }

private:
  const SparseVec<Q>* row_with_pivot(std::int32_t c) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), c,
                               [](const SparseVec<Q>& r, std::int32_t col) {
                                 return r.e.front().first < col;
                               });
    if (it != rows_.end() && it->e.front().first == c) return &*it;
    return nullptr;
  }
  int row_index(std::int32_t c) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), c,
                               [](const SparseVec<Q>& r, std::int32_t col) {
                                 return r.e.front().first < col;
                               });
    return (int)(it - rows_.begin());
  }

  std::vector<SparseVec<Q>> rows_;
};

template <class Q>
Echelon<Q> rref(const std::vector<SparseVec<Q>>& rows) {
  Echelon<Q> ech;
  for (const auto& r : rows) ech.insert(r);
  return ech;
}

// Canonical nullspace basis of the matrix given by rows (acting on
// column vectors of length ncols): one basis vector per free column, in
// ascending column order, with unit entry at the free column.
template <class Q>
std::vector<SparseVec<Q>> nullspace(const std::vector<SparseVec<Q>>& rows, int ncols) {
  Echelon<Q> ech = rref(rows);
  std::vector<bool> is_pivot(ncols, false);
  for (auto p : ech.pivots()) is_pivot[p] = true;
  std::vector<SparseVec<Q>> basis;
  for (std::int32_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    SparseVec<Q> v;
    v.add_term(f, Q(1));
    for (const auto& r : ech.rows()) {
      const Q* a = r.at(f);
      if (a) v.add_term(r.e.front().first, -*a);
    }
    v.sort_and_compress();
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---- scalar conversion and the two-kernel driver ----

inline SparseVec<Rat64> to_small(const BRow& r) {
  SparseVec<Rat64> out;
  out.e.reserve(r.e.size());
  for (const auto& [c, v] : r.e) out.e.push_back({c, narrow_to(v, (Rat64*)nullptr)});
  return out;
}
inline BRow to_big(const SparseVec<Rat64>& r) {
  BRow out;
  out.e.reserve(r.e.size());
  for (const auto& [c, v] : r.e) out.e.push_back({c, widen(v)});
  return out;
}
inline const BRow& to_big(const BRow& r) { return r; }

inline std::vector<SparseVec<Rat64>> to_small(const std::vector<BRow>& rows) {
  std::vector<SparseVec<Rat64>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(to_small(r));
  return out;
}
inline std::vector<BRow> to_big_rows(const std::vector<SparseVec<Rat64>>& rows) {
  std::vector<BRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(to_big(r));
  return out;
}
inline std::vector<BRow> to_big_rows(std::vector<BRow> rows) { return rows; }

// Run fn on the fast kernel; on overflow, rerun on the big kernel.
// fn receives a scalar tag pointer: fn((Rat64*)nullptr) / fn((BigRat*)nullptr).
template <class Fn>
auto run_exact(Fn&& fn) {
  try {
    return fn((Rat64*)nullptr);
  } catch (const rat_overflow&) {
    return fn((BigRat*)nullptr);
  }
}

// Exact RREF on BigRat rows via the two-kernel driver; result in BigRat.
std::vector<BRow> rref_rows(const std::vector<BRow>& rows);
std::vector<BRow> nullspace_rows(const std::vector<BRow>& rows, int ncols);
int rank_rows(const std::vector<BRow>& rows);

// A frozen canonical basis (RREF rows in BigRat) with membership tests.
struct Basis {
  std::vector<BRow> rows;

  int dim() const { return (int)rows.size(); }
  bool contains(const BRow& v) const;
  // residue of v modulo the span
  BRow reduce(const BRow& v) const;
  // coefficients of v against the basis rows; nullopt if v is outside
  std::optional<std::vector<BigRat>> coords_in_span(const BRow& v) const;
  bool operator==(const Basis& o) const;
};

Basis basis_from_rows(const std::vector<BRow>& rows);
// intersection of two spans inside the same coordinate space
Basis intersect_bases(const Basis& a, const Basis& b, int ncols);
// coefficients x with sum x_i columns_i = target, if solvable
std::optional<std::vector<BigRat>> solve_linear(const std::vector<BRow>& columns,
                                                const BRow& target);

} // namespace gkm
