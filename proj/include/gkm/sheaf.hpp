#pragma once

// Sheaves on moment graphs: per-vertex stalks, per-edge quotient
// modules, restriction maps, and the degreewise section solver.
//
// Every stalk and edge module is carried as a quotient presentation
// F/K: a free ambient (edge ambients have the label as componentwise
// annihilator) together with a relation submodule K. Elements are the
// canonical representatives with the pivot coordinates of K eliminated;
// the "q-coordinates" of a degree are the ambient coordinates that
// survive. Free stalks are the common case K = 0.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gkm/graph.hpp"
#include "gkm/module.hpp"

namespace gkm {

struct glob_precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Presentation {
public:
  Presentation() = default;
  Presentation(AmbientPtr amb, std::shared_ptr<const GradedSubmodule> rels, int cap);
  static std::shared_ptr<const Presentation> free_of(PolyRingPtr ring,
                                                     const std::vector<int>& shifts, int cap);
  static std::shared_ptr<const Presentation> zero(PolyRingPtr ring, int cap);

  const AmbientPtr& ambient() const { return amb_; }
  const std::shared_ptr<const GradedSubmodule>& relations() const { return rels_; }
  int cap() const { return cap_; }
  bool is_zero_space() const { return amb_->size() == 0; }
  std::vector<int> shifts() const;

  int qdim(int degree) const;
  const std::vector<std::int32_t>& qcols(int degree) const;
  // canonical representative: eliminate the relation pivots
  BRow reduce(const BRow& ambient_row, int degree) const;
  // reduced ambient row (entries only on qcols) <-> dense q-coordinates
  BRow compress(const BRow& reduced_row, int degree) const;
  BRow decompress(const BRow& qrow, int degree) const;
  BRow q_mult_var(const BRow& qrow, int degree, int var) const;

private:
  AmbientPtr amb_;
  std::shared_ptr<const GradedSubmodule> rels_; // may be null
  int cap_ = 0;
  mutable std::map<int, std::vector<std::int32_t>> qcols_cache_;
  mutable std::mutex mutex_;
};

using PresPtr = std::shared_ptr<const Presentation>;

// An ordered block sum of presentations with concatenated q-coordinates.
class TupleSpace {
public:
  TupleSpace() = default;
  explicit TupleSpace(std::vector<PresPtr> parts) : parts_(std::move(parts)) {}

  int size() const { return (int)parts_.size(); }
  const PresPtr& part(int i) const { return parts_[i]; }
  int qdim(int degree) const;
  int offset(int i, int degree) const;
  int min_degree() const;
  BRow mult_var(const BRow& qrow, int degree, int var) const;
  std::vector<BRow> closure_rows(const std::vector<BRow>& rows, int degree) const;
  // restrict a tuple row to block i, re-based to that block's q-coords
  BRow block_of(const BRow& qrow, int i, int degree) const;

private:
  std::vector<PresPtr> parts_;
};

// Sections of a sheaf over a vertex subset: the degreewise solution
// space of the rho-compatibility system in tuple q-coordinates.
struct SectionSpace {
  std::vector<int> subset; // vertices, ascending
  TupleSpace space;        // one part per subset vertex, same order
  int cap = 0;
  int min_degree = 0;
  std::vector<Basis> slices; // (degree - min_degree)/2

  const Basis& slice(int degree) const;
  int dim(int degree) const;
  std::map<int, int> hilbert_function() const;
  // minimal generators: (degree, tuple q-row) pairs, deterministic
  std::vector<std::pair<int, BRow>> minimal_generators() const;
  std::vector<int> minimal_generator_degrees() const;
};

struct VertexStalk {
  PresPtr pres;
  std::vector<Poly> cover_into_S; // nonempty for coordinate substalks of S
  bool warn_not_free = false;

  bool is_zero() const { return !pres || pres->is_zero_space(); }
};

struct EdgeStalk {
  PresPtr pres;
  bool is_zero() const { return !pres || pres->is_zero_space(); }
};

class GSheaf {
public:
  GraphPtr graph;
  int cap = 0;
  std::vector<VertexStalk> vstalks;                    // per vertex
  std::vector<EdgeStalk> estalks;                      // per edge
  std::vector<std::array<std::optional<PolyMap>, 2>> rho; // per edge, side 0 = u, 1 = v

  const std::optional<PolyMap>& rho_for(int edge, int vertex) const;
  // columns of the degreewise rho map in q-coordinates: one row per
  // stalk q-coordinate, landing in the edge stalk's q-coordinates
  std::vector<BRow> rho_slice_cols(int edge, int vertex, int degree) const;

  static GSheaf structure(GraphPtr g, int cap);
  static GSheaf skyscraper(GraphPtr g, int vertex, int shift, int cap);
  GSheaf restricted(const std::vector<int>& subset) const;
};

SectionSpace compute_sections(const GSheaf& m, std::vector<int> subset);

// span of explicit tuple rows inside a tuple space (S-closure degreewise)
std::vector<Basis> span_in_tuple_space(const TupleSpace& space,
                                       const std::map<int, std::vector<BRow>>& gens_by_degree,
                                       int cap);

struct FlabbyReport {
  bool flabby = false;
  std::optional<std::pair<std::string, int>> witness; // vertex id, degree
  int cap = 0;
};

// Flabbiness via per-vertex surjectivity of the stalk map onto the image
// of the sections below (condition (4) of the equivalence). Requires the
// sheaf to be generated by global sections.
FlabbyReport is_flabby(const GSheaf& m);

// the slower equivalent criteria, used by the property suite
bool flabby_by_open_restrictions(const GSheaf& m);        // condition (2)
bool flabby_by_principal_restrictions(const GSheaf& m);   // condition (3)

struct GlobReport {
  bool generated = false;
  std::string witness;
};

GlobReport is_generated_by_global_sections(const GSheaf& m);

} // namespace gkm
