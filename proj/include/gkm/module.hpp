#pragma once

// Graded submodules of a fixed ambient sum of shifted free modules
// S[k_i] and cyclic quotients (S/alpha_i S)[k_i], materialized degreewise
// as exact rational vector spaces up to a cap D.
//
// Conventions: a component with shift k has its generator in degree k,
// so its degree-d slice consists of the polynomials of paper-degree d-k
// (reduced modulo the annihilator when present). All degrees are even;
// odd-degree slices are zero by definition.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gkm/linalg.hpp"
#include "gkm/poly.hpp"

namespace gkm {

struct AmbientComponent {
  int shift = 0;
  std::optional<LinForm> ann; // a nonzero linear form, paper-degree 2
};

class AmbientModule {
public:
  AmbientModule(PolyRingPtr ring, std::vector<AmbientComponent> comps);

  const PolyRingPtr& ring() const { return ring_; }
  const std::vector<AmbientComponent>& comps() const { return comps_; }
  int size() const { return (int)comps_.size(); }
  int min_degree() const { return min_degree_; }

  int comp_dim(int i, int degree) const;
  int comp_offset(int i, int degree) const;
  int dim(int degree) const;
  const std::vector<Mono>& comp_monos(int i, int degree) const;
  int coord_of(int i, int degree, Mono m) const;

  // reduce a polynomial to the normal form of component i
  Poly reduce_component(int i, const Poly& p) const;

  // tuple of homogeneous polynomials (one per component) -> slice coordinates;
  // throws with the component index if some entry is not homogeneous of
  // paper-degree `degree - shift_i`
  BRow tuple_to_row(const std::vector<Poly>& tuple, int degree) const;
  std::vector<Poly> row_to_tuple(const BRow& row, int degree) const;

  // multiplication by the variable: slice d -> slice d+2
  BRow mult_var(const BRow& row, int degree, int var) const;
  std::vector<BRow> closure_rows(const std::vector<BRow>& basis, int degree) const;

  bool same_layout(const AmbientModule& o) const;

private:
  PolyRingPtr ring_;
  std::vector<AmbientComponent> comps_;
  int min_degree_ = 0;
};

using AmbientPtr = std::shared_ptr<const AmbientModule>;

struct GenTuple {
  std::vector<Poly> comps;
  int degree = 0;
};

// A finitely generated graded submodule, materialized degreewise to cap.
class GradedSubmodule {
public:
  GradedSubmodule() = default;

  // the S-span of homogeneous generator tuples
  static GradedSubmodule span(AmbientPtr amb, std::vector<GenTuple> gens, int cap);
  // adopt degreewise slices known to be closed under the S-action;
  // minimal generators are recomputed and stored as the generator list
  static GradedSubmodule from_slices(AmbientPtr amb, std::vector<Basis> slices, int cap);

  const AmbientPtr& ambient() const { return amb_; }
  int cap() const { return cap_; }
  const std::vector<GenTuple>& generators() const { return gens_; }

  const Basis& slice(int degree) const;
  int dim(int degree) const;
  std::map<int, int> hilbert_function() const; // even degrees, min_degree..cap

  const std::vector<GenTuple>& minimal_generators() const;
  std::vector<int> minimal_generator_degrees() const;

  bool contains(const BRow& row, int degree) const;
  bool contains_tuple(const std::vector<Poly>& tuple, int degree) const;
  bool equals(const GradedSubmodule& o) const; // canonical slice comparison

private:
  void compute_minimal_generators() const;

  AmbientPtr amb_;
  int cap_ = 0;
  std::vector<GenTuple> gens_;
  std::vector<Basis> slices_; // index (degree - min_degree)/2
  mutable std::optional<std::vector<GenTuple>> min_gens_;
  static const Basis empty_basis_;
};

// A degree-0 map between ambients, given by a matrix of homogeneous
// polynomials: entries[i][j] maps source component j to target component i
// and must be homogeneous of paper-degree shift_src_j - shift_tgt_i.
class PolyMap {
public:
  PolyMap(AmbientPtr source, AmbientPtr target, std::vector<std::vector<Poly>> entries);

  static PolyMap identity(AmbientPtr amb);

  const AmbientPtr& source() const { return source_; }
  const AmbientPtr& target() const { return target_; }
  const std::vector<std::vector<Poly>>& entries() const { return entries_; }

  BRow apply_row(const BRow& row, int degree) const;

private:
  AmbientPtr source_;
  AmbientPtr target_;
  std::vector<std::vector<Poly>> entries_;
};

// degreewise nullspace of f restricted to `source` (or to the full
// ambient when source is null)
GradedSubmodule kernel(const PolyMap& f, const GradedSubmodule* source, int cap);
GradedSubmodule image(const PolyMap& f, const GradedSubmodule& m);
GradedSubmodule intersect(const GradedSubmodule& m, const GradedSubmodule& n);

struct FreeReport {
  bool free = false;
  std::vector<int> generator_degrees;
  std::optional<int> first_failure_degree;
  int verified_up_to = 0;
};

// compares the Hilbert function against the free module on the minimal
// generators; a "yes" certifies freeness up to the cap
FreeReport is_graded_free(const GradedSubmodule& m);

// Generic minimal-generator extraction shared with the sheaf section
// spaces: slices[d] must be canonical bases and closed under mult.
// mult(degree, row) returns the products with each variable, landing in
// degree+2. emit(degree, row) is called for each chosen representative.
template <class MultFn, class EmitFn>
void minimal_generators_scan(int dmin, int cap, const std::vector<Basis>& slices,
                             MultFn&& mult, EmitFn&& emit) {
  auto slice_at = [&](int d) -> const Basis* {
    if (d < dmin || d > cap || ((d - dmin) % 2) != 0) return nullptr;
    return &slices[(d - dmin) / 2];
  };
  for (int d = dmin; d <= cap; d += 2) {
    const Basis* cur = slice_at(d);
    if (!cur || cur->dim() == 0) continue;
    std::vector<BRow> closure;
    if (const Basis* prev = slice_at(d - 2)) {
      for (const auto& b : prev->rows) {
        auto prods = mult(d - 2, b);
        for (auto& p : prods) closure.push_back(std::move(p));
      }
    }
    Echelon<BigRat> ech;
    for (const auto& r : closure) ech.insert(r);
    for (const auto& b : cur->rows) {
      BRow residue = b;
      ech.reduce(residue);
      if (!residue.empty()) {
        emit(d, b);
        ech.insert(residue);
      }
    }
  }
}

} // namespace gkm
