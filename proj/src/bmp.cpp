#include "gkm/bmp.hpp"

#include <algorithm>

namespace gkm {

namespace {

// ShortLex on vertex ids: token count first, then the plain string
bool id_shortlex_less(const std::string& a, const std::string& b) {
  auto tokens = [](const std::string& s) {
    int n = s.empty() ? 0 : 1;
    for (char c : s)
      if (c == ' ') ++n;
    return n;
  };
  int ta = tokens(a), tb = tokens(b);
  if (ta != tb) return ta < tb;
  return a < b;
}

std::vector<int> default_extension(const MomentGraph& g, const std::vector<int>& upset) {
  std::vector<bool> in(g.num_vertices(), false), done(g.num_vertices(), false);
  for (int v : upset) in[v] = true;
  std::vector<int> order;
  while (order.size() < upset.size()) {
    int pick = -1;
    for (int x : upset) {
      if (done[x]) continue;
      bool ready = true;
      for (int y : upset)
        if (!done[y] && g.less(y, x)) ready = false;
      if (!ready) continue;
      if (pick < 0 || id_shortlex_less(g.id(x), g.id(pick))) pick = x;
    }
    if (pick < 0) throw std::logic_error("order has a cycle");
    done[pick] = true;
    order.push_back(pick);
  }
  return order;
}

} // namespace

BMPSheaf build_bmp(GraphPtr g, int v, int cap,
                   std::optional<std::vector<int>> linear_extension) {
  if (cap % 2 != 0) throw std::invalid_argument("cap must be even");
  auto [gkm_ok, witness] = g->is_gkm();
  if (!gkm_ok)
    throw std::invalid_argument("graph is not GKM: " + witness);
  if (v < 0 || v >= g->num_vertices()) throw std::invalid_argument("unknown base vertex");

  auto ring = std::make_shared<PolyRing>(g->dim());
  std::vector<int> upset = g->greater_eq(v);
  std::vector<int> order = linear_extension ? *linear_extension : default_extension(*g, upset);
  {
    // the extension must enumerate the up-set in a topological order
    std::vector<bool> seen(g->num_vertices(), false);
    if (order.size() != upset.size()) throw std::invalid_argument("bad linear extension");
    for (int x : order) {
      for (int y : upset)
        if (g->less(y, x) && !seen[y]) throw std::invalid_argument("extension is not topological");
      seen[x] = true;
    }
    if (order.empty() || order.front() != v)
      throw std::invalid_argument("extension must start at the base vertex");
  }

  BMPSheaf out;
  out.base_vertex = v;
  out.cap = cap;
  out.order_used = order;
  GSheaf& sheaf = out.sheaf;
  sheaf.graph = g;
  sheaf.cap = cap;
  sheaf.vstalks.assign(g->num_vertices(), {Presentation::zero(ring, cap), {}, false});
  sheaf.estalks.assign(g->edges().size(), {Presentation::zero(ring, cap)});
  sheaf.rho.assign(g->edges().size(), {std::nullopt, std::nullopt});

  std::vector<bool> built(g->num_vertices(), false);
  std::vector<int> support; // processed vertices with nonzero stalk

  for (std::size_t step = 0; step < order.size(); ++step) {
    int x = order[step];
    if (step == 0) {
      sheaf.vstalks[x] = {Presentation::free_of(ring, {0}, cap), {}, false};
      built[x] = true;
      support.push_back(x);
      out.trace.push_back({x, {}, {0}});
      continue;
    }

    // incoming edges whose lower endpoint carries a stalk
    std::vector<int> delta_edges, lowers;
    for (int e : g->edges_into(x)) {
      const auto& edge = g->edges()[e];
      int y = edge.u == x ? edge.v : edge.u;
      if (!built[y] || sheaf.vstalks[y].is_zero()) continue;
      delta_edges.push_back(e);
      lowers.push_back(y);
    }

    // create the edge stalks B^E = B^y / alpha B^y with the quotient rho
    for (std::size_t k = 0; k < delta_edges.size(); ++k) {
      int e = delta_edges[k];
      int y = lowers[k];
      const auto& edge = g->edges()[e];
      std::vector<int> shifts = sheaf.vstalks[y].pres->shifts();
      std::vector<AmbientComponent> comps;
      for (int s : shifts) comps.push_back({s, edge.label});
      auto edge_amb = std::make_shared<AmbientModule>(ring, comps);
      sheaf.estalks[e] = {std::make_shared<Presentation>(edge_amb, nullptr, cap)};
      std::vector<std::vector<Poly>> id_entries((std::size_t)shifts.size(),
                                                std::vector<Poly>(shifts.size()));
      for (std::size_t i = 0; i < shifts.size(); ++i) id_entries[i][i] = Poly::constant(1);
      PolyMap quot(sheaf.vstalks[y].pres->ambient(), edge_amb, id_entries);
      if (edge.u == y)
        sheaf.rho[e][0] = quot;
      else
        sheaf.rho[e][1] = quot;
    }

    if (delta_edges.empty()) {
      built[x] = true;
      continue; // zero stalk off the connected up-set
    }

    // sections of the partial sheaf below x, restricted to the built support
    std::vector<int> below;
    for (int y : support)
      if (g->less(y, x)) below.push_back(y);
    // only components meeting the delta lower endpoints influence the image
    std::vector<int> relevant;
    for (const auto& comp : g->connected_components(below)) {
      bool meets = false;
      for (int y : lowers)
        if (std::find(comp.begin(), comp.end(), y) != comp.end()) meets = true;
      if (meets)
        for (int y : comp) relevant.push_back(y);
    }
    SectionSpace sec = compute_sections(sheaf, relevant);
    std::vector<int> pos_of(g->num_vertices(), -1);
    for (int i = 0; i < (int)sec.subset.size(); ++i) pos_of[sec.subset[i]] = i;

    // B^{delta x} inside the sum of the new edge stalks
    std::vector<AmbientComponent> delta_comps;
    for (int e : delta_edges)
      for (const auto& c : sheaf.estalks[e].pres->ambient()->comps()) delta_comps.push_back(c);
    auto delta_amb = std::make_shared<AmbientModule>(ring, delta_comps);

    std::vector<Basis> delta_slices;
    for (int d = delta_amb->min_degree(); d <= cap; d += 2) {
      std::vector<int> edge_off(delta_edges.size() + 1, 0);
      for (std::size_t k = 0; k < delta_edges.size(); ++k)
        edge_off[k + 1] = edge_off[k] + sheaf.estalks[delta_edges[k]].pres->qdim(d);
      std::vector<std::vector<BRow>> cols_by_edge;
      for (std::size_t k = 0; k < delta_edges.size(); ++k)
        cols_by_edge.push_back(sheaf.rho_slice_cols(delta_edges[k], lowers[k], d));
      std::vector<BRow> rows;
      for (const auto& s : sec.slice(d).rows) {
        BRow img;
        for (std::size_t k = 0; k < delta_edges.size(); ++k) {
          BRow block = sec.space.block_of(s, pos_of[lowers[k]], d);
          for (const auto& [c, vcoef] : block.e)
            for (const auto& [r, val] : cols_by_edge[k][c].e)
              img.add_term(edge_off[k] + r, vcoef * val);
        }
        img.sort_and_compress();
        if (!img.empty()) rows.push_back(std::move(img));
      }
      delta_slices.push_back(basis_from_rows(rows));
    }
    GradedSubmodule delta =
        GradedSubmodule::from_slices(delta_amb, std::move(delta_slices), cap);

    auto mingens = delta.minimal_generators();
    BMPSheaf::VertexTrace tr;
    tr.vertex = x;
    tr.delta_hilbert = delta.hilbert_function();
    for (const auto& gen : mingens) {
      if (gen.degree >= cap - 2)
        throw cap_abort_error("cap too small: generator of B^{delta " + g->id(x) +
                              "} at degree " + std::to_string(gen.degree) +
                              " is within 2 of the cap " + std::to_string(cap));
      tr.generator_degrees.push_back(gen.degree);
    }

    if (mingens.empty()) {
      built[x] = true;
      out.trace.push_back(std::move(tr));
      continue; // zero stalk: nothing to cover
    }

    // free cover on the minimal generators; rho components are the
    // generator representatives
    std::vector<int> shifts;
    for (const auto& gen : mingens) shifts.push_back(gen.degree);
    auto stalk_amb = Presentation::free_of(ring, shifts, cap);
    sheaf.vstalks[x] = {stalk_amb, {}, false};
    int comp_base = 0;
    for (std::size_t k = 0; k < delta_edges.size(); ++k) {
      int e = delta_edges[k];
      int ncomp = sheaf.estalks[e].pres->ambient()->size();
      std::vector<std::vector<Poly>> entries((std::size_t)ncomp,
                                             std::vector<Poly>(mingens.size()));
      for (std::size_t gi = 0; gi < mingens.size(); ++gi)
        for (int ci = 0; ci < ncomp; ++ci) entries[ci][gi] = mingens[gi].comps[comp_base + ci];
      PolyMap rho_x(stalk_amb->ambient(), sheaf.estalks[e].pres->ambient(), entries);
      const auto& edge = g->edges()[e];
      if (edge.u == x)
        sheaf.rho[e][0] = rho_x;
      else
        sheaf.rho[e][1] = rho_x;
      comp_base += ncomp;
    }
    built[x] = true;
    support.push_back(x);
    out.trace.push_back(std::move(tr));
  }
  return out;
}

std::map<std::string, LaurentPoly> bmp_character(const BMPSheaf& b) {
  std::map<std::string, LaurentPoly> out;
  for (int v = 0; v < b.sheaf.graph->num_vertices(); ++v) {
    const auto& stalk = b.sheaf.vstalks[v];
    if (stalk.is_zero()) continue;
    LaurentPoly p;
    for (int s : stalk.pres->shifts()) {
      while ((int)p.c.size() <= s) p.c.push_back(0);
      p.c[s] += 1;
    }
    out[b.sheaf.graph->id(v)] = std::move(p);
  }
  return out;
}

ProjectivityReport projectivity_witness(const GSheaf& m) {
  ProjectivityReport rep;
  for (int v = 0; v < m.graph->num_vertices(); ++v) {
    if (m.vstalks[v].warn_not_free) {
      rep.stalks_free = false;
      rep.failures.push_back("stalk at " + m.graph->id(v) + " is not free");
    }
  }
  for (int e = 0; e < (int)m.graph->edges().size(); ++e) {
    const auto& edge = m.graph->edges()[e];
    int y = m.graph->less(edge.u, edge.v) ? edge.u : edge.v; // lower endpoint
    const auto& stalk = m.vstalks[y];
    const auto& estalk = m.estalks[e];
    if (stalk.is_zero()) {
      if (!estalk.is_zero()) {
        rep.edge_isomorphisms = false;
        rep.failures.push_back("edge " + m.graph->id(edge.u) + "--" + m.graph->id(edge.v) +
                               " has a stalk but its lower endpoint does not");
      }
      continue;
    }
    for (int d = stalk.pres->ambient()->min_degree(); d <= m.cap; d += 2) {
      int expect = stalk.pres->qdim(d) - stalk.pres->qdim(d - 2);
      int target = estalk.is_zero() ? 0 : estalk.pres->qdim(d);
      int rank = estalk.is_zero() ? 0 : rank_rows(m.rho_slice_cols(e, y, d));
      if (rank != target || expect != target) {
        rep.edge_isomorphisms = false;
        rep.failures.push_back("edge " + m.graph->id(edge.u) + "--" + m.graph->id(edge.v) +
                               ": B^y/alpha B^y -> B^E fails at degree " + std::to_string(d));
        break;
      }
    }
  }
  return rep;
}

BMPVermaReport bmp_verma_flag(const BMPSheaf& b) {
  BMPVermaReport rep;
  rep.has_flag = true;
  const GSheaf& m = b.sheaf;
  for (int x = 0; x < m.graph->num_vertices(); ++x) {
    if (m.vstalks[x].is_zero()) continue;
    std::vector<int> delta_edges;
    for (int e : m.graph->edges_into(x))
      if (!m.estalks[e].is_zero()) delta_edges.push_back(e);
    const AmbientPtr& stalk_amb = m.vstalks[x].pres->ambient();

    std::vector<Basis> kernel_slices;
    for (int d = stalk_amb->min_degree(); d <= m.cap; d += 2) {
      int n = m.vstalks[x].pres->qdim(d);
      std::vector<BRow> constraint;
      int row_off = 0;
      for (int e : delta_edges) {
        auto cols = m.rho_slice_cols(e, x, d);
        int eq = m.estalks[e].pres->qdim(d);
        std::vector<BRow> block((std::size_t)eq);
        for (int c = 0; c < (int)cols.size(); ++c)
          for (const auto& [r, val] : cols[c].e) block[r].add_term(c, val);
        for (auto& r : block) {
          r.sort_and_compress();
          constraint.push_back(std::move(r));
        }
        row_off += eq;
      }
      (void)row_off;
      kernel_slices.push_back(basis_from_rows(nullspace_rows(constraint, n)));
    }
    GradedSubmodule kern =
        GradedSubmodule::from_slices(stalk_amb, std::move(kernel_slices), m.cap);
    FreeReport fr = is_graded_free(kern);
    if (!fr.free) {
      rep.has_flag = false;
      rep.failure = {m.graph->id(x), *fr.first_failure_degree};
      return rep;
    }
    if (!fr.generator_degrees.empty()) rep.flag[m.graph->id(x)] = fr.generator_degrees;
  }
  return rep;
}

} // namespace gkm
