#pragma once

// Modules over the structure algebra in coordinate form: finitely
// generated graded submodules of the direct sum of one polynomial ring
// per vertex, together with the localization functor, the adjunction
// diagnostics, the order filtration, Verma flags, and the exactness
// tester for the order-filtration exact structure.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gkm/graph.hpp"
#include "gkm/module.hpp"
#include "gkm/sheaf.hpp"

namespace gkm {

struct ZModule {
  GraphPtr graph;
  std::vector<int> coords; // ascending vertex indices
  GradedSubmodule inner;   // ambient: one shift-0 free component per coord
  int cap = 0;

  int pos_of(int vertex) const; // -1 when the vertex is not a coordinate
  int dim(int degree) const { return inner.dim(degree); }
  std::map<int, int> hilbert_function() const { return inner.hilbert_function(); }
  std::vector<int> minimal_generator_degrees() const {
    return inner.minimal_generator_degrees();
  }
};

// generator: polynomial per coordinate (same order as coords), homogeneous
using ZGen = GenTuple;

// builds the module and, when verify_closure is set, checks that the
// span is closed under the structure algebra action up to the cap
ZModule make_zmodule(GraphPtr g, std::vector<int> coords, std::vector<ZGen> gens, int cap,
                     bool verify_closure = true);

// sections of the structure sheaf over all vertices, with the
// multiplication closure of the minimal generators verified
ZModule structure_algebra(GraphPtr g, int cap);

// the Verma module V(x)[shift]: rank one, supported on x
ZModule verma_module(GraphPtr g, int x, int shift, int cap);

ZModule project(const ZModule& m, const std::vector<int>& subset);        // M^I
ZModule supported_part(const ZModule& m, const std::vector<int>& subset); // M_I
std::vector<int> support(const ZModule& m);

// M(E) = Z(E)-span of the projection to the edge endpoints, inside S + S
GradedSubmodule edge_module(const ZModule& m, int edge);

// the localization functor L
GSheaf localize(const ZModule& m);

// Gamma(L(M)) computed through the edge-membership description, as a
// module on the same coordinates
ZModule gamma_localize(const ZModule& m);

struct DlrReport {
  bool determined = false;
  std::optional<int> witness_degree;
};
DlrReport is_determined_by_local_relations(const ZModule& m);

struct ModuleFlabbyReport {
  bool flabby = false;
  std::string mode; // "exhaustive" or "criterion-3"
  std::string witness;
};
ModuleFlabbyReport is_flabby_module(const ZModule& m);

// M^{[x]} = ker(M^{<=x} -> M^{<x}), a submodule of the coordinate at x
GradedSubmodule order_kernel(const ZModule& m, int x);

struct VermaFlagReport {
  bool has_flag = false;
  std::map<std::string, std::vector<int>> flag; // vertex id -> degree multiset
  std::optional<std::pair<std::string, int>> failure; // vertex, degree
};
VermaFlagReport verma_flag(const ZModule& m);

// a coordinatewise map: multiply coordinate x by factors[x] (vertices
// absent from factors, or absent from the source, map to zero); all
// factors homogeneous of the same paper-degree `shift`
struct ZModMap {
  std::map<int, Poly> factors;
  int shift = 0;

  static ZModMap inclusion(const std::vector<int>& coords);
  std::vector<Poly> apply(const std::vector<int>& src_coords,
                          const std::vector<int>& dst_coords,
                          const std::vector<Poly>& tuple) const;
};

struct ExactReport {
  bool exact = false;
  bool rejected = false; // precondition failure (quotient not torsion-free, bad maps)
  std::string mode;      // "order-kernel" or "exhaustive-opens"
  std::string detail;
};

ExactReport is_short_exact(const ZModule& a, const ZModule& b, const ZModule& c,
                           const ZModMap& f, const ZModMap& g,
                           bool force_exhaustive = false);

// homogeneous polynomial functionals with kernel the Q-span of the rows
std::vector<std::vector<Poly>> qspan_functionals(
    const std::vector<std::vector<Poly>>& rows, int ncols);

} // namespace gkm
