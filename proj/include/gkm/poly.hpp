#pragma once

// Sparse multivariate polynomials over the rationals, graded so that a
// linear form has degree 2 (only even degrees occur anywhere).
//
// Monomials are exponent vectors packed into a uint64, one byte per
// variable (at most 8 variables, exponents below 256). Variable 0 sits
// in the most significant byte, so raw integer comparison of the packed
// word is lexicographic order; slice coordinates use graded lex,
// descending within a degree.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gkm/rational.hpp"

namespace gkm {

using Mono = std::uint64_t;

constexpr int kMaxVars = 8;

inline Mono mono_one() { return 0; }

inline int mono_exp(Mono m, int var) { return (int)((m >> (8 * (7 - var))) & 0xff); }

inline Mono mono_set_exp(Mono m, int var, int e) {
  int shift = 8 * (7 - var);
  m &= ~(Mono(0xff) << shift);
  m |= (Mono)(std::uint8_t)e << shift;
  return m;
}

inline Mono mono_mul_var(Mono m, int var) {
  int e = mono_exp(m, var);
  if (e >= 255) throw std::overflow_error("monomial exponent overflow");
  return mono_set_exp(m, var, e + 1);
}

inline int mono_total(Mono m) {
  int t = 0;
  for (int i = 0; i < kMaxVars; ++i) t += (int)((m >> (8 * i)) & 0xff);
  return t;
}

// graded lex, descending: higher total degree first, then larger packed word
inline bool mono_before(Mono a, Mono b) {
  int ta = mono_total(a), tb = mono_total(b);
  if (ta != tb) return ta > tb;
  return a > b;
}

// The ambient polynomial ring S = S(V) with dim V variables. Holds the
// cached monomial coordinate tables used by every slice computation:
// monos(t) lists the monomials of total degree t in graded-lex order;
// monos_without(p, t) the ones avoiding variable p (normal forms modulo
// a linear form with pivot p).
class PolyRing {
public:
  PolyRing(int dim, std::vector<std::string> names = {});

  int dim() const { return dim_; }
  const std::vector<std::string>& var_names() const { return names_; }

  const std::vector<Mono>& monos(int total_degree) const;
  const std::vector<Mono>& monos_without(int pivot, int total_degree) const;
  int mono_index(int total_degree, Mono m) const;
  int mono_index_without(int pivot, int total_degree, Mono m) const;

  static long long count_monos(int vars, int total_degree);

private:
  struct Table {
    std::vector<Mono> list;
    std::unordered_map<Mono, int> index;
  };
  const Table& table(int pivot, int t) const; // pivot = -1: all variables

  int dim_;
  std::vector<std::string> names_;
  mutable std::mutex mutex_;
  // key: (pivot+1) * 4096 + t
  mutable std::map<int, Table> tables_;
};

using PolyRingPtr = std::shared_ptr<const PolyRing>;

// A polynomial: sorted sparse term list, no zero coefficients. The
// paper-degree of a monomial is twice its total exponent degree.
class Poly {
public:
  Poly() = default;
  explicit Poly(const BigRat& c) {
    if (!c.is_zero()) terms_.push_back({mono_one(), c});
  }
  static Poly constant(long long n) { return Poly(BigRat(n)); }
  static Poly variable(int var) {
    Poly p;
    p.terms_.push_back({mono_mul_var(mono_one(), var), BigRat(1)});
    return p;
  }
  static Poly term(Mono m, const BigRat& c) {
    Poly p;
    if (!c.is_zero()) p.terms_.push_back({m, c});
    return p;
  }

  const std::vector<std::pair<Mono, BigRat>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // paper-degree if homogeneous, nullopt otherwise; zero poly reports any degree
  std::optional<int> homogeneous_degree() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const BigRat& c) const;
  Poly mul_mono(Mono m, const BigRat& c) const;
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  static Poly from_terms(std::vector<std::pair<Mono, BigRat>> terms);

  std::string str(const PolyRing& ring) const;

private:
  std::vector<std::pair<Mono, BigRat>> terms_;
};

// A nonzero linear form (paper-degree 2). The pivot is the first
// variable with nonzero coefficient; normal forms modulo the form avoid
// the pivot variable.
class LinForm {
public:
  LinForm() = default;
  explicit LinForm(std::vector<BigRat> coeffs);

  const std::vector<BigRat>& coeffs() const { return coeffs_; }
  int pivot() const { return pivot_; }
  bool is_zero() const { return pivot_ < 0; }
  int dim() const { return (int)coeffs_.size(); }

  Poly to_poly() const;
  bool proportional_to(const LinForm& o) const;
  bool operator==(const LinForm& o) const { return coeffs_ == o.coeffs_; }

  // substitution x_pivot -> -(1/c_p) * sum_{j != p} c_j x_j, as a polynomial
  Poly pivot_substitution() const;

  // normal form of p modulo this form (eliminates the pivot variable)
  Poly reduce(const Poly& p) const;

private:
  std::vector<BigRat> coeffs_;
  int pivot_ = -1;
};

} // namespace gkm
