#pragma once

// Crystallographic Coxeter systems realized through their Cartan
// matrices, acting on the root-coordinate basis of Q^rank. Provides
// finite group enumeration (ShortLex-minimal words) and the Bruhat
// moment graph of a parabolic quotient.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "gkm/graph.hpp"

namespace gkm {

struct infinite_group_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// integer matrix in row-major order
using WMat = std::vector<long long>;

class CoxeterSystem {
public:
  // "A3", "B2", "C3", "D4", "G2", "I2(3)", "I2(4)", "I2(6)"
  static CoxeterSystem from_type(const std::string& type);
  static CoxeterSystem from_cartan(std::vector<std::vector<long long>> cartan,
                                   std::string name = "custom");

  int rank() const { return rank_; }
  const std::string& name() const { return name_; }
  const std::vector<std::vector<long long>>& cartan() const { return cartan_; }
  const WMat& simple_reflection(int i) const { return simples_[i]; }
  int coxeter_order(int i, int j) const; // m_ij; 0 means infinite
  // known group order for named finite types; 0 when unknown
  long long group_order_bound() const { return order_bound_; }

private:
  CoxeterSystem() = default;
  void build_simples();
  void verify_relations() const;

  int rank_ = 0;
  std::string name_;
  std::vector<std::vector<long long>> cartan_;
  std::vector<WMat> simples_;
  long long order_bound_ = 0;
};

// A fully enumerated finite Coxeter group in the reflection representation.
class CoxeterGroup {
public:
  // throws infinite_group_error when enumeration exceeds the cap
  static CoxeterGroup enumerate(const CoxeterSystem& system,
                                long long max_elements = 200000);

  const CoxeterSystem& system() const { return system_; }
  int size() const { return (int)elements_.size(); }
  int rank() const { return system_.rank(); }
  int identity() const { return 0; }
  int length(int w) const { return length_[w]; }
  const std::vector<int>& word(int w) const { return words_[w]; }
  std::string word_string(int w) const;
  int left_mult(int s, int w) const { return left_[s][w]; }
  int right_mult(int w, int s) const { return right_[s][w]; }
  int from_word(const std::vector<int>& letters) const;
  // parse "s2 s1 s3" or "e" into an element
  int parse_word(const std::string& text) const;
  const WMat& matrix(int w) const { return elements_[w]; }

  // reflections: elements whose fixed space has codimension one
  const std::vector<int>& reflections() const { return reflections_; }

  // Bruhat order via the descent recursion, memoized
  bool bruhat_leq(int x, int w) const;

private:
  explicit CoxeterGroup(CoxeterSystem s) : system_(std::move(s)) {}

  CoxeterSystem system_;
  std::vector<WMat> elements_;
  std::vector<int> length_;
  std::vector<std::vector<int>> words_;
  std::vector<std::vector<int>> left_, right_; // [s][w]
  std::vector<int> reflections_;
  mutable std::vector<std::int8_t> leq_memo_; // size n*n, -1 unknown
};

// The Bruhat moment graph of W/W_parabolic: vertices are the orbit
// points of lambda = sum of the fundamental weights off the parabolic,
// named by ShortLex-minimal reduced words of the minimal coset
// representatives; edges join w.lambda to t w.lambda, labelled by the
// difference vector; the order is generated by the length-directed edges.
MomentGraph bruhat_moment_graph(const CoxeterSystem& system,
                                const std::vector<int>& parabolic,
                                long long max_elements = 200000);

} // namespace gkm
