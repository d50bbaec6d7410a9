#pragma once

// Finite labelled ordered graphs over a rational vector space: the
// combinatorial base every sheaf and module lives on. The order is
// stored as the reachability closure of the directed edges plus any
// extra relations; labels denote lines, so scaling is irrelevant.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gkm/poly.hpp"

namespace gkm {

struct GraphEdge {
  int u = 0; // tail: u < v in the intended order
  int v = 0;
  LinForm label;
};

struct Violation {
  std::string what;
};

class MomentGraph {
public:
  // edges_direct_order: every edge contributes the relation u < v
  MomentGraph(int dim, std::vector<std::string> vertices, std::vector<GraphEdge> edges,
              std::vector<std::pair<int, int>> extra_relations = {},
              bool edges_direct_order = true);

  int dim() const { return dim_; }
  int num_vertices() const { return (int)vertex_ids_.size(); }
  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
  const std::string& id(int v) const { return vertex_ids_[v]; }
  std::optional<int> index_of(const std::string& id) const;
  int require_vertex(const std::string& id) const;
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<std::pair<int, int>>& extra_relations() const { return extra_relations_; }
  bool edges_direct_order() const { return edges_direct_order_; }

  // strict order queries (reachability closure; meaningful only when
  // validate() reports no cycle)
  bool less(int x, int y) const { return reach_[x][y]; }
  bool leq(int x, int y) const { return x == y || reach_[x][y]; }
  std::vector<int> less_than(int x) const;     // { y : y < x }
  std::vector<int> less_eq(int x) const;       // { y : y <= x }
  std::vector<int> greater_eq(int x) const;    // { y : y >= x }
  bool is_open(const std::vector<int>& subset) const; // downwardly closed
  std::vector<int> edges_into(int x) const;    // edge indices E: y -> x
  std::vector<int> edges_inside(const std::vector<int>& subset) const;

  std::vector<std::vector<int>> open_subsets() const; // all order ideals, sorted

  std::vector<Violation> validate() const;
  // GKM: labels at each vertex pairwise non-proportional
  std::pair<bool, std::string> is_gkm() const;

  MomentGraph tilted() const;
  MomentGraph gamma_reduced(const LinForm& gamma) const;

  std::vector<std::vector<int>> connected_components(const std::vector<int>& subset) const;

private:
  void close_order();
  bool has_cycle_ = false;

  int dim_;
  std::vector<std::string> vertex_ids_;
  std::vector<GraphEdge> edges_;
  std::vector<std::pair<int, int>> extra_relations_;
  bool edges_direct_order_ = true;
  std::vector<std::vector<bool>> reach_; // strict: reach_[x][y] means x < y
};

using GraphPtr = std::shared_ptr<const MomentGraph>;

// builders
MomentGraph generic_graph(int dim = 1);
MomentGraph subgeneric_graph(const LinForm& label);
MomentGraph diamond_graph(const LinForm& alpha, const LinForm& beta);

} // namespace gkm
