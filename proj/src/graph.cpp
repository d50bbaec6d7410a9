#include "gkm/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace gkm {

MomentGraph::MomentGraph(int dim, std::vector<std::string> vertices,
                         std::vector<GraphEdge> edges,
                         std::vector<std::pair<int, int>> extra_relations,
                         bool edges_direct_order)
    : dim_(dim),
      vertex_ids_(std::move(vertices)),
      edges_(std::move(edges)),
      extra_relations_(std::move(extra_relations)),
      edges_direct_order_(edges_direct_order) {
  std::set<std::string> seen;
  for (const auto& id : vertex_ids_)
    if (!seen.insert(id).second)
      throw std::invalid_argument("duplicate vertex id: " + id);
  for (const auto& e : edges_)
    if (e.u < 0 || e.u >= num_vertices() || e.v < 0 || e.v >= num_vertices() || e.u == e.v)
      throw std::invalid_argument("edge endpoint out of range");
  for (const auto& [a, b] : extra_relations_)
    if (a < 0 || a >= num_vertices() || b < 0 || b >= num_vertices() || a == b)
      throw std::invalid_argument("relation endpoint out of range");
  close_order();
}

void MomentGraph::close_order() {
  int n = num_vertices();
  reach_.assign(n, std::vector<bool>(n, false));
  std::vector<std::pair<int, int>> rel = extra_relations_;
  if (edges_direct_order_)
    for (const auto& e : edges_) rel.push_back({e.u, e.v});
  for (const auto& [a, b] : rel) reach_[a][b] = true;
  // Floyd-Warshall closure; graphs stay small
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (!reach_[i][k]) continue;
      for (int j = 0; j < n; ++j)
        if (reach_[k][j]) reach_[i][j] = true;
    }
  has_cycle_ = false;
  for (int i = 0; i < n; ++i)
    if (reach_[i][i]) has_cycle_ = true;
}

std::optional<int> MomentGraph::index_of(const std::string& id) const {
  for (int i = 0; i < num_vertices(); ++i)
    if (vertex_ids_[i] == id) return i;
  return std::nullopt;
}

int MomentGraph::require_vertex(const std::string& id) const {
  auto i = index_of(id);
  if (!i) throw std::invalid_argument("unknown vertex id: " + id);
  return *i;
}

std::vector<int> MomentGraph::less_than(int x) const {
  std::vector<int> out;
  for (int y = 0; y < num_vertices(); ++y)
    if (reach_[y][x]) out.push_back(y);
  return out;
}

std::vector<int> MomentGraph::less_eq(int x) const {
  std::vector<int> out = less_than(x);
  out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> MomentGraph::greater_eq(int x) const {
  std::vector<int> out;
  for (int y = 0; y < num_vertices(); ++y)
    if (y == x || reach_[x][y]) out.push_back(y);
  return out;
}

bool MomentGraph::is_open(const std::vector<int>& subset) const {
  std::vector<bool> in(num_vertices(), false);
  for (int v : subset) in[v] = true;
  for (int v : subset)
    for (int y = 0; y < num_vertices(); ++y)
      if (reach_[y][v] && !in[y]) return false;
  return true;
}

std::vector<int> MomentGraph::edges_into(int x) const {
  std::vector<int> out;
  for (int i = 0; i < (int)edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.v == x && less(e.u, x)) out.push_back(i);
    else if (e.u == x && less(e.v, x)) out.push_back(i);
  }
  return out;
}

std::vector<int> MomentGraph::edges_inside(const std::vector<int>& subset) const {
  std::vector<bool> in(num_vertices(), false);
  for (int v : subset) in[v] = true;
  std::vector<int> out;
  for (int i = 0; i < (int)edges_.size(); ++i)
    if (in[edges_[i].u] && in[edges_[i].v]) out.push_back(i);
  return out;
}

std::vector<std::vector<int>> MomentGraph::open_subsets() const {
  int n = num_vertices();
  if (n > 20) throw std::invalid_argument("open-set enumeration limited to 20 vertices");
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) subset.push_back(v);
    if (is_open(subset)) out.push_back(std::move(subset));
  }
  return out;
}

std::vector<Violation> MomentGraph::validate() const {
  std::vector<Violation> out;
  if (has_cycle_)
    out.push_back({"order is not a strict partial order (cycle in relations)"});
  std::map<std::pair<int, int>, int> pair_count;
  for (int i = 0; i < (int)edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.label.is_zero())
      out.push_back({"edge " + id(e.u) + " -- " + id(e.v) + " has zero label"});
    if ((int)e.label.coeffs().size() != dim_)
      out.push_back({"edge " + id(e.u) + " -- " + id(e.v) + " label dimension mismatch"});
    if (!has_cycle_ && !less(e.u, e.v) && !less(e.v, e.u))
      out.push_back({"edge between incomparable vertices " + id(e.u) + ", " + id(e.v)});
    auto key = std::minmax(e.u, e.v);
    if (++pair_count[{key.first, key.second}] > 1)
      out.push_back({"parallel edge between " + id(e.u) + " and " + id(e.v)});
  }
  return out;
}

std::pair<bool, std::string> MomentGraph::is_gkm() const {
  for (int x = 0; x < num_vertices(); ++x) {
    std::vector<int> incident;
    for (int i = 0; i < (int)edges_.size(); ++i)
      if (edges_[i].u == x || edges_[i].v == x) incident.push_back(i);
    for (std::size_t a = 0; a < incident.size(); ++a)
      for (std::size_t b = a + 1; b < incident.size(); ++b)
        if (edges_[incident[a]].label.proportional_to(edges_[incident[b]].label))
          return {false, "proportional labels at vertex " + id(x) + " (edges " +
                             std::to_string(incident[a]) + ", " + std::to_string(incident[b]) +
                             ")"};
  }
  return {true, ""};
}

MomentGraph MomentGraph::tilted() const {
  std::vector<GraphEdge> edges = edges_;
  for (auto& e : edges) std::swap(e.u, e.v);
  std::vector<std::pair<int, int>> rel = extra_relations_;
  for (auto& [a, b] : rel) std::swap(a, b);
  return MomentGraph(dim_, vertex_ids_, std::move(edges), std::move(rel), edges_direct_order_);
}

MomentGraph MomentGraph::gamma_reduced(const LinForm& gamma) const {
  if (gamma.is_zero()) throw std::invalid_argument("gamma must be nonzero");
  std::vector<GraphEdge> kept;
  for (const auto& e : edges_)
    if (e.label.proportional_to(gamma)) kept.push_back(e);
  // same vertices and order: keep the closure via explicit relations
  std::vector<std::pair<int, int>> rel = extra_relations_;
  if (edges_direct_order_)
    for (const auto& e : edges_) rel.push_back({e.u, e.v});
  return MomentGraph(dim_, vertex_ids_, std::move(kept), std::move(rel), false);
}

std::vector<std::vector<int>> MomentGraph::connected_components(
    const std::vector<int>& subset) const {
  std::vector<int> comp(num_vertices(), -1);
  std::vector<bool> in(num_vertices(), false);
  for (int v : subset) in[v] = true;
  std::vector<std::vector<int>> out;
  for (int start : subset) {
    if (comp[start] >= 0) continue;
    std::vector<int> stack{start}, members;
    comp[start] = (int)out.size();
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (const auto& e : edges_) {
        int other = -1;
        if (e.u == v) other = e.v;
        else if (e.v == v) other = e.u;
        if (other >= 0 && in[other] && comp[other] < 0) {
          comp[other] = comp[start];
          stack.push_back(other);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

MomentGraph generic_graph(int dim) {
  return MomentGraph(dim, {"pt"}, {});
}

MomentGraph subgeneric_graph(const LinForm& label) {
  return MomentGraph((int)label.coeffs().size(), {"x", "y"}, {GraphEdge{0, 1, label}});
}

MomentGraph diamond_graph(const LinForm& alpha, const LinForm& beta) {
  return MomentGraph((int)alpha.coeffs().size(), {"u", "v", "w"},
                     {GraphEdge{0, 2, alpha}, GraphEdge{1, 2, beta}});
}

} // namespace gkm
