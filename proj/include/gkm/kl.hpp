#pragma once

// Kazhdan-Lusztig polynomials by the classical recursion, used as the
// external cross-check for the canonical-sheaf stalk characters. This
// path shares only the group enumeration with the graph machinery; the
// Bruhat order and all polynomial data are computed independently.

#include <map>
#include <string>
#include <vector>

#include "gkm/coxeter.hpp"

namespace gkm {

// polynomial in q with integer coefficients, c[k] = coefficient of q^k
struct LaurentPoly {
  std::vector<long long> c;

  static LaurentPoly zero() { return {}; }
  static LaurentPoly one() { return {{1}}; }
  bool is_zero() const;
  int degree() const; // -1 for zero
  long long coeff(int k) const { return (k >= 0 && k < (int)c.size()) ? c[k] : 0; }
  void trim();
  LaurentPoly shifted(int k) const; // multiply by q^k
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly scaled(long long f) const;
  bool operator==(const LaurentPoly& o) const { return c == o.c; }
  std::string str() const;
};

enum class DescentPolicy { First, Last }; // which descent the recursion uses

struct KLTable {
  int w = 0;                      // group element index of the top
  std::vector<int> interval;      // all x <= w, by (length, index)
  std::map<int, LaurentPoly> p;   // x -> P_{x,w}
};

// full table of P_{x,y} for the interval [e, w]
KLTable kl_polynomials(const CoxeterGroup& group, int w,
                       DescentPolicy policy = DescentPolicy::First);

struct KLCompareEntry {
  std::string vertex;
  LaurentPoly expected_in_t; // P_{x,w}(t^2)
  LaurentPoly stalk_character;
  bool match = false;
};

struct KLCompareReport {
  bool all_match = false;
  int cap = 0;
  std::string top_word;
  std::vector<KLCompareEntry> entries;
};

// Builds B(w) on the tilted Bruhat moment graph of W (trivial parabolic)
// and compares every stalk character in [e, w] against P_{x,w}(t^2).
KLCompareReport compare_bmp_kl(const CoxeterSystem& system, const std::string& w_word,
                               int cap);

} // namespace gkm
