#pragma once

// Test-only brute-force reference computations, kept independent of the
// engine's slice machinery: dense mpq vectors, naive Gaussian
// elimination, its own monomial enumeration (ascending lex, unlike the
// engine's descending graded lex).

#include <gmpxx.h>
#include <map>
#include <vector>

#include "gkm/module.hpp"

namespace oracle {

using gkm::BigRat;
using gkm::Poly;

struct DenseMat {
  std::vector<std::vector<mpq_class>> rows;

  int rank() const {
    auto m = rows;
    int r = 0;
    int ncols = m.empty() ? 0 : (int)m[0].size();
    for (int c = 0; c < ncols && r < (int)m.size(); ++c) {
      int piv = -1;
      for (int i = r; i < (int)m.size(); ++i)
        if (sgn(m[i][c]) != 0) { piv = i; break; }
      if (piv < 0) continue;
      std::swap(m[r], m[piv]);
      for (int i = 0; i < (int)m.size(); ++i) {
        if (i == r || sgn(m[i][c]) == 0) continue;
        mpq_class f = m[i][c] / m[r][c];
        for (int j = c; j < ncols; ++j) m[i][j] -= f * m[r][j];
      }
      ++r;
    }
    return r;
  }
};

// exponent vectors of total degree t in n variables, ascending lex
inline void enum_exps(int n, int t, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if ((int)cur.size() == n - 1) {
    cur.push_back(t);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = 0; e <= t; ++e) {
    cur.push_back(e);
    enum_exps(n, t - e, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> monomials(int n, int t) {
  std::vector<std::vector<int>> out;
  if (t < 0) return out;
  std::vector<int> cur;
  enum_exps(n, t, cur, out);
  return out;
}

// a polynomial as exponent-vector map
using PolyMapRep = std::map<std::vector<int>, mpq_class>;

inline PolyMapRep to_rep(const Poly& p, int n) {
  PolyMapRep rep;
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e(n);
    for (int v = 0; v < n; ++v) e[v] = gkm::mono_exp(m, v);
    rep[e] = c.value();
  }
  return rep;
}

inline PolyMapRep mul_mono_rep(const PolyMapRep& p, const std::vector<int>& m) {
  PolyMapRep out;
  for (const auto& [e, c] : p) {
    std::vector<int> f = e;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += m[i];
    out[f] += c;
  }
  return out;
}

// reduce modulo a linear form (pivot substitution), independently coded
inline PolyMapRep reduce_rep(PolyMapRep p, const std::vector<mpq_class>& alpha) {
  int pivot = -1;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (sgn(alpha[i]) != 0) { pivot = (int)i; break; }
  bool again = true;
  while (again) {
    again = false;
    PolyMapRep next;
    for (const auto& [e, c] : p) {
      if (sgn(c) == 0) continue;
      if (e[pivot] > 0) {
        again = true;
        // x_p = -(1/a_p) sum_{j!=p} a_j x_j applied once
        for (std::size_t j = 0; j < alpha.size(); ++j) {
          if ((int)j == pivot || sgn(alpha[j]) == 0) continue;
          std::vector<int> f = e;
          f[pivot] -= 1;
          f[j] += 1;
          next[f] += c * (-alpha[j] / alpha[pivot]);
        }
      } else {
        next[e] += c;
      }
    }
    p = std::move(next);
  }
  return p;
}

struct AmbientSpec {
  struct Comp {
    int shift;
    std::vector<mpq_class> ann; // empty = free
  };
  int nvars;
  std::vector<Comp> comps;

  std::vector<std::vector<int>> comp_monos(int ci, int degree) const {
    int t = (degree - comps[ci].shift) / 2;
    if (degree < comps[ci].shift || (degree - comps[ci].shift) % 2 != 0)
      return {};
    if (comps[ci].ann.empty()) return monomials(nvars, t);
    std::vector<std::vector<int>> out;
    int pivot = -1;
    for (std::size_t i = 0; i < comps[ci].ann.size(); ++i)
      if (sgn(comps[ci].ann[i]) != 0) { pivot = (int)i; break; }
    for (auto& m : monomials(nvars, t))
      if (m[pivot] == 0) out.push_back(m);
    return out;
  }

  int dim(int degree) const {
    int total = 0;
    for (int i = 0; i < (int)comps.size(); ++i) total += (int)comp_monos(i, degree).size();
    return total;
  }

  std::vector<mpq_class> tuple_to_dense(const std::vector<PolyMapRep>& tuple, int degree) const {
    std::vector<mpq_class> out(dim(degree), 0);
    int off = 0;
    for (int ci = 0; ci < (int)comps.size(); ++ci) {
      auto monos = comp_monos(ci, degree);
      PolyMapRep p = tuple[ci];
      if (!comps[ci].ann.empty()) p = reduce_rep(p, comps[ci].ann);
      for (const auto& [e, c] : p) {
        if (sgn(c) == 0) continue;
        bool found = false;
        for (std::size_t k = 0; k < monos.size(); ++k)
          if (monos[k] == e) { out[off + (int)k] = c; found = true; break; }
        if (!found) throw std::logic_error("oracle: monomial outside slice");
      }
      off += (int)monos.size();
    }
    return out;
  }
};

struct GenSpec {
  std::vector<PolyMapRep> tuple;
  int degree;
};

// all rows m*g landing in the given degree; min_mono_degree = 1 gives
// the rows generated from strictly lower degrees
inline DenseMat product_rows(const AmbientSpec& amb, const std::vector<GenSpec>& gens,
                             int degree, int min_mono_degree) {
  DenseMat mat;
  for (const auto& g : gens) {
    int d = degree - g.degree;
    if (d < 0 || d % 2 != 0) continue;
    int t = d / 2;
    if (t < min_mono_degree) continue;
    for (const auto& m : monomials(amb.nvars, t)) {
      std::vector<PolyMapRep> prod;
      for (const auto& comp : g.tuple) prod.push_back(mul_mono_rep(comp, m));
      mat.rows.push_back(amb.tuple_to_dense(prod, degree));
    }
  }
  return mat;
}

inline int span_dim(const AmbientSpec& amb, const std::vector<GenSpec>& gens, int degree) {
  return product_rows(amb, gens, degree, 0).rank();
}

inline int min_gen_count(const AmbientSpec& amb, const std::vector<GenSpec>& gens, int degree) {
  return product_rows(amb, gens, degree, 0).rank() -
         product_rows(amb, gens, degree, 1).rank();
}

} // namespace oracle
