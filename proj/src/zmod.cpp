#include "gkm/zmod.hpp"

#include <algorithm>
#include <sstream>

namespace gkm {

namespace {

AmbientPtr coord_ambient(PolyRingPtr ring, int ncoords) {
  std::vector<AmbientComponent> comps((std::size_t)ncoords, AmbientComponent{0, std::nullopt});
  return std::make_shared<AmbientModule>(std::move(ring), std::move(comps));
}

PolyRingPtr ring_of(const MomentGraph& g) { return std::make_shared<PolyRing>(g.dim()); }

// re-index a row living on a sub-list of components into the sub-ambient
GradedSubmodule project_components(const GradedSubmodule& m, const std::vector<int>& keep) {
  const AmbientPtr& amb = m.ambient();
  std::vector<AmbientComponent> comps;
  for (int k : keep) comps.push_back(amb->comps()[k]);
  auto sub = std::make_shared<AmbientModule>(amb->ring(), comps);
  std::vector<Basis> slices;
  for (int d = sub->min_degree(); d <= m.cap(); d += 2) {
    std::vector<BRow> rows;
    for (const auto& b : m.slice(d).rows) {
      BRow r;
      for (int i = 0; i < (int)keep.size(); ++i) {
        int lo = amb->comp_offset(keep[i], d);
        int hi = lo + amb->comp_dim(keep[i], d);
        int off = sub->comp_offset(i, d);
        for (const auto& [c, v] : b.e)
          if (c >= lo && c < hi) r.add_term(off + (c - lo), v);
      }
      r.sort_and_compress();
      if (!r.empty()) rows.push_back(std::move(r));
    }
    slices.push_back(basis_from_rows(rows));
  }
  return GradedSubmodule::from_slices(sub, std::move(slices), m.cap());
}

// elements supported on the kept components, re-indexed into the sub-ambient
GradedSubmodule supported_on_components(const GradedSubmodule& m, const std::vector<int>& keep) {
  const AmbientPtr& amb = m.ambient();
  std::vector<bool> keep_flag(amb->size(), false);
  for (int k : keep) keep_flag[k] = true;
  std::vector<AmbientComponent> comps;
  for (int k : keep) comps.push_back(amb->comps()[k]);
  auto sub = std::make_shared<AmbientModule>(amb->ring(), comps);
  std::vector<Basis> slices;
  for (int d = sub->min_degree(); d <= m.cap(); d += 2) {
    const Basis& basis = m.slice(d);
    // kill every coordinate of a dropped component
    std::vector<BRow> constraint((std::size_t)std::max(1, amb->dim(d)));
    for (int k = 0; k < basis.dim(); ++k) {
      int comp = 0;
      for (const auto& [c, v] : basis.rows[k].e) {
        while (comp + 1 < amb->size() && c >= amb->comp_offset(comp + 1, d)) ++comp;
        if (!keep_flag[comp]) constraint[c].add_term(k, v);
      }
    }
    for (auto& r : constraint) r.sort_and_compress();
    auto combos = nullspace_rows(constraint, basis.dim());
    std::vector<BRow> rows;
    for (const auto& combo : combos) {
      BRow v;
      for (const auto& [k, c] : combo.e) v = vec_axpy(v, c, basis.rows[k]);
      // re-index into the sub-ambient
      BRow r;
      for (int i = 0; i < (int)keep.size(); ++i) {
        int lo = amb->comp_offset(keep[i], d);
        int hi = lo + amb->comp_dim(keep[i], d);
        int off = sub->comp_offset(i, d);
        for (const auto& [c, val] : v.e)
          if (c >= lo && c < hi) r.add_term(off + (c - lo), val);
      }
      r.sort_and_compress();
      if (!r.empty()) rows.push_back(std::move(r));
    }
    slices.push_back(basis_from_rows(rows));
  }
  return GradedSubmodule::from_slices(sub, std::move(slices), m.cap());
}

} // namespace

int ZModule::pos_of(int vertex) const {
  auto it = std::lower_bound(coords.begin(), coords.end(), vertex);
  if (it == coords.end() || *it != vertex) return -1;
  return (int)(it - coords.begin());
}

ZModule make_zmodule(GraphPtr g, std::vector<int> coords, std::vector<ZGen> gens, int cap,
                     bool verify_closure) {
  std::sort(coords.begin(), coords.end());
  ZModule m;
  m.graph = g;
  m.coords = coords;
  m.cap = cap;
  auto amb = coord_ambient(ring_of(*g), (int)coords.size());
  m.inner = GradedSubmodule::span(amb, std::move(gens), cap);
  if (verify_closure) {
    ZModule z = structure_algebra(g, cap);
    for (const auto& zg : z.inner.minimal_generators()) {
      for (const auto& mg : m.inner.minimal_generators()) {
        int d = zg.degree + mg.degree;
        if (d > cap) continue;
        std::vector<Poly> prod(coords.size());
        for (int i = 0; i < (int)coords.size(); ++i)
          prod[i] = zg.comps[coords[i]] * mg.comps[i];
        if (!m.inner.contains_tuple(prod, d))
          throw std::invalid_argument(
              "generators do not span a module over the structure algebra (degree " +
              std::to_string(d) + ")");
      }
    }
  }
  return m;
}

ZModule structure_algebra(GraphPtr g, int cap) {
  GSheaf sheaf = GSheaf::structure(g, cap);
  std::vector<int> all(g->num_vertices());
  for (int i = 0; i < (int)all.size(); ++i) all[i] = i;
  SectionSpace sec = compute_sections(sheaf, all);
  // the tuple coordinates of rank-one free stalks are exactly the
  // coordinates of the sum of one polynomial ring per vertex
  auto amb = coord_ambient(ring_of(*g), g->num_vertices());
  std::vector<Basis> slices = sec.slices;
  ZModule z;
  z.graph = g;
  z.coords = all;
  z.cap = cap;
  z.inner = GradedSubmodule::from_slices(amb, std::move(slices), cap);
  // multiplication closure of the minimal generators
  const auto& gens = z.inner.minimal_generators();
  for (const auto& a : gens)
    for (const auto& b : gens) {
      int d = a.degree + b.degree;
      if (d > cap) continue;
      std::vector<Poly> prod(all.size());
      for (std::size_t i = 0; i < all.size(); ++i) prod[i] = a.comps[i] * b.comps[i];
      if (!z.inner.contains_tuple(prod, d))
        throw std::logic_error("structure algebra is not multiplicatively closed");
    }
  return z;
}

ZModule verma_module(GraphPtr g, int x, int shift, int cap) {
  if (x < 0 || x >= g->num_vertices()) throw std::invalid_argument("unknown vertex");
  ZModule m;
  m.graph = g;
  m.coords = {x};
  m.cap = cap;
  auto ring = ring_of(*g);
  std::vector<AmbientComponent> comps{{shift, std::nullopt}};
  auto amb = std::make_shared<AmbientModule>(ring, comps);
  m.inner = GradedSubmodule::span(amb, {GenTuple{{Poly::constant(1)}, shift}}, cap);
  return m;
}

ZModule project(const ZModule& m, const std::vector<int>& subset) {
  std::vector<int> keep_pos, keep_coords;
  for (int v : subset) {
    int p = m.pos_of(v);
    if (p >= 0) {
      keep_pos.push_back(p);
      keep_coords.push_back(v);
    }
  }
  std::sort(keep_pos.begin(), keep_pos.end());
  std::sort(keep_coords.begin(), keep_coords.end());
  ZModule out;
  out.graph = m.graph;
  out.coords = keep_coords;
  out.cap = m.cap;
  out.inner = project_components(m.inner, keep_pos);
  return out;
}

ZModule supported_part(const ZModule& m, const std::vector<int>& subset) {
  std::vector<int> keep_pos, keep_coords;
  for (int v : subset) {
    int p = m.pos_of(v);
    if (p >= 0) {
      keep_pos.push_back(p);
      keep_coords.push_back(v);
    }
  }
  std::sort(keep_pos.begin(), keep_pos.end());
  std::sort(keep_coords.begin(), keep_coords.end());
  ZModule out;
  out.graph = m.graph;
  out.coords = keep_coords;
  out.cap = m.cap;
  out.inner = supported_on_components(m.inner, keep_pos);
  return out;
}

std::vector<int> support(const ZModule& m) {
  std::vector<int> out;
  for (int i = 0; i < (int)m.coords.size(); ++i) {
    ZModule proj = project(m, {m.coords[i]});
    bool nonzero = false;
    for (int d = 0; d <= m.cap; d += 2)
      if (proj.inner.dim(d) > 0) nonzero = true;
    if (nonzero) out.push_back(m.coords[i]);
  }
  return out;
}

GradedSubmodule edge_module(const ZModule& m, int edge) {
  const auto& e = m.graph->edges()[edge];
  auto ring = ring_of(*m.graph);
  auto pair_amb = coord_ambient(ring, 2);
  int pu = m.pos_of(e.u), pv = m.pos_of(e.v);
  Poly alpha = e.label.to_poly();
  std::vector<GenTuple> gens;
  for (const auto& g : m.inner.minimal_generators()) {
    Poly gu = pu >= 0 ? g.comps[pu] : Poly();
    Poly gv = pv >= 0 ? g.comps[pv] : Poly();
    if (!gu.is_zero() || !gv.is_zero()) gens.push_back({{gu, gv}, g.degree});
    if (!gu.is_zero() && g.degree + 2 <= m.cap)
      gens.push_back({{alpha * gu, Poly()}, g.degree + 2});
  }
  return GradedSubmodule::span(pair_amb, std::move(gens), m.cap);
}

GSheaf localize(const ZModule& m) {
  const MomentGraph& g = *m.graph;
  auto ring = ring_of(g);
  GSheaf sheaf;
  sheaf.graph = m.graph;
  sheaf.cap = m.cap;

  struct StalkData {
    GradedSubmodule proj;     // M^x inside S
    std::vector<Poly> gens;   // cover generators
    std::vector<int> shifts;  // their degrees
  };
  std::vector<std::optional<StalkData>> data(g.num_vertices());

  for (int v = 0; v < g.num_vertices(); ++v) {
    int p = m.pos_of(v);
    if (p < 0) {
      sheaf.vstalks.push_back({Presentation::zero(ring, m.cap), {}, false});
      continue;
    }
    GradedSubmodule proj = project_components(m.inner, {p});
    auto mingens = proj.minimal_generators();
    if (mingens.empty()) {
      sheaf.vstalks.push_back({Presentation::zero(ring, m.cap), {}, false});
      continue;
    }
    StalkData sd;
    sd.proj = proj;
    for (const auto& gen : mingens) {
      sd.gens.push_back(gen.comps[0]);
      sd.shifts.push_back(gen.degree);
    }
    std::vector<AmbientComponent> fcomps;
    for (int s : sd.shifts) fcomps.push_back({s, std::nullopt});
    auto cover_amb = std::make_shared<AmbientModule>(ring, fcomps);
    // relations of the cover: kernel of (a_i) -> sum a_i g_i
    std::vector<std::vector<Poly>> cover_entries(1);
    for (const auto& gp : sd.gens) cover_entries[0].push_back(gp);
    PolyMap cover(cover_amb, coord_ambient(ring, 1), cover_entries);
    GradedSubmodule rels = kernel(cover, nullptr, m.cap);
    bool has_rels = false;
    for (int d = cover_amb->min_degree(); d <= m.cap; d += 2)
      if (rels.dim(d) > 0) has_rels = true;
    auto pres = std::make_shared<Presentation>(
        cover_amb, has_rels ? std::make_shared<GradedSubmodule>(rels) : nullptr, m.cap);
    bool not_free = !is_graded_free(proj).free;
    sheaf.vstalks.push_back({pres, sd.gens, not_free});
    data[v] = std::move(sd);
  }

  for (int ei = 0; ei < (int)g.edges().size(); ++ei) {
    const auto& e = g.edges()[ei];
    if (!data[e.u] || !data[e.v]) {
      sheaf.estalks.push_back({Presentation::zero(ring, m.cap)});
      sheaf.rho.push_back({std::nullopt, std::nullopt});
      continue;
    }
    const StalkData& du = *data[e.u];
    const StalkData& dv = *data[e.v];
    GradedSubmodule me = edge_module(m, ei);
    GradedSubmodule me_u = supported_on_components(me, {0}); // M(E)_u inside S

    // verify alpha * M^u lands in M(E)_u (annihilation of the pushout)
    Poly alpha = e.label.to_poly();
    for (std::size_t i = 0; i < du.gens.size(); ++i) {
      int d = du.shifts[i] + 2;
      if (d > m.cap) continue;
      if (!me_u.contains_tuple({alpha * du.gens[i]}, d))
        throw std::logic_error("edge stalk is not annihilated by the label");
    }

    // edge ambient: the cover of M^u with the label as annihilator
    std::vector<AmbientComponent> acomps;
    for (int s : du.shifts) acomps.push_back({s, e.label});
    auto edge_amb = std::make_shared<AmbientModule>(ring, acomps);
    const AmbientPtr& cover_amb = sheaf.vstalks[e.u].pres->ambient();

    // K_E: preimage of M(E)_u under the cover, reduced mod alpha
    auto s_amb = coord_ambient(ring, 1);
    std::vector<std::vector<Poly>> cover_entries(1);
    for (const auto& gp : du.gens) cover_entries[0].push_back(gp);
    PolyMap cover(cover_amb, s_amb, cover_entries);
    std::vector<Basis> k_slices;
    bool has_k = false;
    for (int d = edge_amb->min_degree(); d <= m.cap; d += 2) {
      int n = cover_amb->dim(d);
      const Basis& target = me_u.slice(d);
      std::vector<BRow> constraint((std::size_t)std::max(1, s_amb->dim(d)));
      for (int c = 0; c < n; ++c) {
        BRow unit;
        unit.add_term(c, BigRat(1));
        BRow img = cover.apply_row(unit, d);
        img = target.reduce(img); // residue modulo M(E)_u
        for (const auto& [r, v] : img.e) constraint[r].add_term(c, v);
      }
      for (auto& r : constraint) r.sort_and_compress();
      auto combos = nullspace_rows(constraint, n);
      // reduce the preimage modulo alpha into the edge ambient
      std::vector<BRow> rows;
      for (const auto& combo : combos) {
        auto tuple = cover_amb->row_to_tuple(combo, d);
        BRow r = edge_amb->tuple_to_row(tuple, d);
        if (!r.empty()) rows.push_back(std::move(r));
      }
      Basis bas = basis_from_rows(rows);
      if (bas.dim() > 0) has_k = true;
      k_slices.push_back(std::move(bas));
    }
    std::shared_ptr<const GradedSubmodule> k_e =
        has_k ? std::make_shared<GradedSubmodule>(
                    GradedSubmodule::from_slices(edge_amb, std::move(k_slices), m.cap))
              : nullptr;
    sheaf.estalks.push_back({std::make_shared<Presentation>(edge_amb, k_e, m.cap)});

    // rho on the u side: the identity of the cover
    std::vector<std::vector<Poly>> id_entries((std::size_t)du.gens.size(),
                                              std::vector<Poly>(du.gens.size()));
    for (std::size_t i = 0; i < du.gens.size(); ++i) id_entries[i][i] = Poly::constant(1);
    PolyMap rho_u(cover_amb, edge_amb, id_entries);

    // rho on the v side: partner coordinates through M(E)
    const AmbientPtr& cover_v = sheaf.vstalks[e.v].pres->ambient();
    std::vector<std::vector<Poly>> rho_v_entries((std::size_t)du.gens.size(),
                                                 std::vector<Poly>(dv.gens.size()));
    const AmbientPtr& pair_amb = me.ambient();
    for (std::size_t j = 0; j < dv.gens.size(); ++j) {
      int d = dv.shifts[j];
      // find (u_j, g'_j) in M(E): solve on the v block of the pair ambient
      const Basis& me_slice = me.slice(d);
      int lo = pair_amb->comp_offset(1, d);
      std::vector<BRow> columns;
      for (const auto& row : me_slice.rows) {
        BRow vpart;
        for (const auto& [c, val] : row.e)
          if (c >= lo) vpart.add_term(c - lo, val);
        columns.push_back(std::move(vpart));
      }
      BRow target;
      for (const auto& [mono, cval] : dv.gens[j].terms())
        target.add_term(pair_amb->coord_of(1, d, mono) - lo, cval);
      target.sort_and_compress();
      auto coeffs = solve_linear(columns, target);
      if (!coeffs) throw std::logic_error("edge-local module does not surject onto M^y");
      BRow uj;
      for (int k = 0; k < (int)coeffs->size(); ++k) {
        if ((*coeffs)[k].is_zero()) continue;
        for (const auto& [c, val] : me_slice.rows[k].e)
          if (c < lo) uj.add_term(c, val * (*coeffs)[k]);
      }
      uj.sort_and_compress();
      // express u_j through the cover of M^u
      std::vector<BRow> cover_cols;
      int n = cover_amb->dim(d);
      for (int c = 0; c < n; ++c) {
        BRow unit;
        unit.add_term(c, BigRat(1));
        cover_cols.push_back(cover.apply_row(unit, d));
      }
      auto a = solve_linear(cover_cols, uj);
      if (!a) throw std::logic_error("cover does not reach a partner element");
      BRow arow;
      for (int c = 0; c < n; ++c) arow.add_term(c, (*a)[c]);
      arow.sort_and_compress();
      auto tuple = cover_amb->row_to_tuple(arow, d);
      for (std::size_t i = 0; i < du.gens.size(); ++i) rho_v_entries[i][j] = tuple[i];
    }
    PolyMap rho_v(cover_v, edge_amb, rho_v_entries);
    sheaf.rho.push_back({rho_u, rho_v});
  }
  return sheaf;
}

ZModule gamma_localize(const ZModule& m) {
  const MomentGraph& g = *m.graph;
  int nc = (int)m.coords.size();
  std::vector<GradedSubmodule> proj(nc);
  for (int i = 0; i < nc; ++i) proj[i] = project_components(m.inner, {i});

  struct EdgeData {
    int pu, pv;
    GradedSubmodule me;
  };
  std::vector<EdgeData> edges;
  for (int ei = 0; ei < (int)g.edges().size(); ++ei) {
    const auto& e = g.edges()[ei];
    int pu = m.pos_of(e.u), pv = m.pos_of(e.v);
    if (pu < 0 || pv < 0) continue; // no local relation
    edges.push_back({pu, pv, edge_module(m, ei)});
  }

  std::vector<Basis> slices;
  const AmbientPtr& amb = m.inner.ambient();
  for (int d = amb->min_degree(); d <= m.cap; d += 2) {
    std::vector<int> off(nc + 1, 0);
    for (int i = 0; i < nc; ++i) off[i + 1] = off[i] + proj[i].dim(d);
    int ncols = off[nc];
    std::vector<BRow> rows;
    for (const auto& ed : edges) {
      const Basis& me = ed.me.slice(d);
      const AmbientPtr& pair_amb = ed.me.ambient();
      int vlo = pair_amb->comp_offset(1, d);
      int pair_dim = pair_amb->dim(d);
      std::vector<BRow> constraint((std::size_t)std::max(1, pair_dim));
      auto scatter = [&](const GradedSubmodule& p, int block, int pair_comp) {
        for (int k = 0; k < p.slice(d).dim(); ++k) {
          BRow embedded;
          for (const auto& [c, v] : p.slice(d).rows[k].e)
            embedded.add_term((pair_comp == 0 ? 0 : vlo) + c, v);
          embedded = me.reduce(embedded); // residue modulo M(E)
          for (const auto& [r, v] : embedded.e) constraint[r].add_term(off[block] + k, v);
        }
      };
      scatter(proj[ed.pu], ed.pu, 0);
      scatter(proj[ed.pv], ed.pv, 1);
      for (auto& r : constraint) {
        r.sort_and_compress();
        if (!r.empty()) rows.push_back(std::move(r));
      }
    }
    auto combos = nullspace_rows(rows, ncols);
    // assemble actual coordinate rows
    std::vector<BRow> vecs;
    for (const auto& combo : combos) {
      BRow v;
      for (const auto& [col, cv] : combo.e) {
        int block = (int)(std::upper_bound(off.begin(), off.end(), col) - off.begin()) - 1;
        int k = col - off[block];
        for (const auto& [c, val] : proj[block].slice(d).rows[k].e)
          v.add_term(amb->comp_offset(block, d) + c, val * cv);
      }
      v.sort_and_compress();
      if (!v.empty()) vecs.push_back(std::move(v));
    }
    slices.push_back(basis_from_rows(vecs));
  }

  ZModule out;
  out.graph = m.graph;
  out.coords = m.coords;
  out.cap = m.cap;
  out.inner = GradedSubmodule::from_slices(amb, std::move(slices), m.cap);
  return out;
}

DlrReport is_determined_by_local_relations(const ZModule& m) {
  ZModule gl = gamma_localize(m);
  DlrReport rep;
  for (int d = m.inner.ambient()->min_degree(); d <= m.cap; d += 2) {
    if (gl.inner.dim(d) != m.inner.dim(d)) {
      rep.determined = false;
      rep.witness_degree = d;
      return rep;
    }
  }
  rep.determined = true;
  return rep;
}

ModuleFlabbyReport is_flabby_module(const ZModule& m) {
  ModuleFlabbyReport rep;
  const MomentGraph& g = *m.graph;
  std::vector<std::vector<int>> opens;
  if (g.num_vertices() <= 10) {
    rep.mode = "exhaustive";
    opens = g.open_subsets();
  } else {
    rep.mode = "criterion-3";
    for (int x = 0; x < g.num_vertices(); ++x) {
      opens.push_back(g.less_eq(x));
      opens.push_back(g.less_than(x));
    }
    std::vector<int> all(g.num_vertices());
    for (int i = 0; i < (int)all.size(); ++i) all[i] = i;
    opens.push_back(all);
  }
  for (const auto& open : opens) {
    if (open.empty()) continue;
    ZModule sub = project(m, open);
    if (sub.coords.empty()) continue;
    DlrReport dlr = is_determined_by_local_relations(sub);
    if (!dlr.determined) {
      std::ostringstream os;
      os << "restriction to {";
      for (std::size_t i = 0; i < open.size(); ++i)
        os << (i ? "," : "") << g.id(open[i]);
      os << "} not determined by local relations at degree " << *dlr.witness_degree;
      rep.flabby = false;
      rep.witness = os.str();
      return rep;
    }
  }
  rep.flabby = true;
  return rep;
}

GradedSubmodule order_kernel(const ZModule& m, int x) {
  ZModule leq = project(m, m.graph->less_eq(x));
  int p = leq.pos_of(x);
  if (p < 0) {
    // x is not a coordinate: the kernel is zero in the rank-one ambient
    auto amb = coord_ambient(ring_of(*m.graph), 1);
    std::vector<Basis> slices((std::size_t)(m.cap / 2 + 1));
    return GradedSubmodule::from_slices(amb, std::move(slices), m.cap);
  }
  return supported_on_components(leq.inner, {p});
}

VermaFlagReport verma_flag(const ZModule& m) {
  VermaFlagReport rep;
  rep.has_flag = true;
  for (int x : m.coords) {
    GradedSubmodule k = order_kernel(m, x);
    bool nonzero = false;
    for (int d = k.ambient()->min_degree(); d <= m.cap; d += 2)
      if (k.dim(d)) nonzero = true;
    if (!nonzero) continue;
    FreeReport fr = is_graded_free(k);
    if (!fr.free) {
      rep.has_flag = false;
      rep.failure = {m.graph->id(x), *fr.first_failure_degree};
      return rep;
    }
    rep.flag[m.graph->id(x)] = fr.generator_degrees;
  }
  return rep;
}

ZModMap ZModMap::inclusion(const std::vector<int>& coords) {
  ZModMap f;
  for (int c : coords) f.factors[c] = Poly::constant(1);
  return f;
}

std::vector<Poly> ZModMap::apply(const std::vector<int>& src_coords,
                                 const std::vector<int>& dst_coords,
                                 const std::vector<Poly>& tuple) const {
  std::vector<Poly> out(dst_coords.size());
  for (std::size_t i = 0; i < dst_coords.size(); ++i) {
    int v = dst_coords[i];
    auto fit = factors.find(v);
    if (fit == factors.end()) continue;
    auto sit = std::lower_bound(src_coords.begin(), src_coords.end(), v);
    if (sit == src_coords.end() || *sit != v) continue;
    out[i] = fit->second * tuple[sit - src_coords.begin()];
  }
  return out;
}

namespace {

// image slices of f: A -> B inside B's ambient
std::vector<Basis> map_image_slices(const ZModule& a, const ZModule& b, const ZModMap& f) {
  std::vector<Basis> out;
  const AmbientPtr& bamb = b.inner.ambient();
  for (int d = bamb->min_degree(); d <= b.cap; d += 2) {
    std::vector<BRow> rows;
    int sd = d - f.shift;
    for (const auto& r : a.inner.slice(sd).rows) {
      auto tuple = a.inner.ambient()->row_to_tuple(r, sd);
      auto img = f.apply(a.coords, b.coords, tuple);
      BRow row = bamb->tuple_to_row(img, d);
      if (!row.empty()) rows.push_back(std::move(row));
    }
    out.push_back(basis_from_rows(rows));
  }
  return out;
}

// dimension of the kernel of f on A at the given degree
int map_kernel_dim(const ZModule& a, const ZModule& b, const ZModMap& f, int d) {
  const Basis& basis = a.inner.slice(d);
  std::vector<BRow> constraint;
  std::vector<BRow> images;
  for (const auto& r : basis.rows) {
    auto tuple = a.inner.ambient()->row_to_tuple(r, d);
    auto img = f.apply(a.coords, b.coords, tuple);
    images.push_back(b.inner.ambient()->tuple_to_row(img, d + f.shift));
  }
  int ncoords = b.inner.ambient()->dim(d + f.shift);
  std::vector<BRow> rows((std::size_t)std::max(1, ncoords));
  for (int k = 0; k < (int)images.size(); ++k)
    for (const auto& [c, v] : images[k].e) rows[c].add_term(k, v);
  for (auto& r : rows) r.sort_and_compress();
  return (int)nullspace_rows(rows, basis.dim()).size();
}

std::vector<std::vector<Poly>> min_gen_tuples_in(const ZModule& src, const ZModule& ambient_of,
                                                 const ZModMap& f) {
  std::vector<std::vector<Poly>> rows;
  for (const auto& g : src.inner.minimal_generators())
    rows.push_back(f.apply(src.coords, ambient_of.coords, g.comps));
  return rows;
}

} // namespace

std::vector<std::vector<Poly>> qspan_functionals(const std::vector<std::vector<Poly>>& rows,
                                                 int ncols) {
  // fraction-free elimination to find pivot rows/columns
  std::vector<std::vector<Poly>> work = rows;
  std::vector<int> pivot_rows, pivot_cols;
  std::size_t r = 0;
  for (int c = 0; c < ncols && r < work.size(); ++c) {
    std::size_t piv = r;
    while (piv < work.size() && work[piv][c].is_zero()) ++piv;
    if (piv == work.size()) continue;
    std::swap(work[r], work[piv]);
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (i == r || work[i][c].is_zero()) continue;
      Poly a = work[r][c], b = work[i][c];
      for (int j = 0; j < ncols; ++j) work[i][j] = a * work[i][j] - b * work[r][j];
    }
    pivot_rows.push_back((int)r);
    pivot_cols.push_back(c);
    ++r;
  }
  int rank = (int)pivot_cols.size();

  // determinant via cofactor expansion over column subsets
  auto det = [&](const std::vector<std::vector<Poly>>& mat,
                 const std::vector<int>& cols) -> Poly {
    std::map<std::pair<int, std::uint32_t>, Poly> memo;
    std::uint32_t full = 0;
    for (std::size_t i = 0; i < cols.size(); ++i) full |= (1u << i);
    std::function<Poly(int, std::uint32_t)> rec = [&](int row, std::uint32_t mask) -> Poly {
      if (row == (int)cols.size()) return Poly::constant(1);
      auto key = std::make_pair(row, mask);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      Poly acc;
      int sign = 1;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (!(mask & (1u << k))) continue;
        const Poly& entry = mat[row][cols[k]];
        if (!entry.is_zero()) {
          Poly sub = rec(row + 1, mask & ~(1u << k));
          Poly term = entry * sub;
          acc = sign > 0 ? acc + term : acc - term;
        }
        sign = -sign;
      }
      memo[key] = acc;
      return acc;
    };
    return rec(0, full);
  };

  // independent rows: greedily select rows that increase the rank
  std::vector<int> indep;
  {
    std::vector<std::vector<Poly>> acc;
    for (std::size_t i = 0; i < rows.size() && (int)indep.size() < rank; ++i) {
      acc.push_back(rows[i]);
      // rank of acc via the same elimination
      auto probe = acc;
      std::size_t pr = 0;
      for (int c = 0; c < ncols && pr < probe.size(); ++c) {
        std::size_t piv = pr;
        while (piv < probe.size() && probe[piv][c].is_zero()) ++piv;
        if (piv == probe.size()) continue;
        std::swap(probe[pr], probe[piv]);
        for (std::size_t k = 0; k < probe.size(); ++k) {
          if (k == pr || probe[k][c].is_zero()) continue;
          Poly aa = probe[pr][c], bb = probe[k][c];
          for (int j = 0; j < ncols; ++j) probe[k][j] = aa * probe[k][j] - bb * probe[pr][j];
        }
        ++pr;
      }
      if ((int)pr == (int)acc.size()) indep.push_back((int)i);
      else acc.pop_back();
    }
  }
  std::vector<std::vector<Poly>> base;
  for (int i : indep) base.push_back(rows[i]);

  std::vector<std::vector<Poly>> funcs;
  for (int f = 0; f < ncols; ++f) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), f) != pivot_cols.end()) continue;
    std::vector<int> cols = pivot_cols;
    cols.push_back(f);
    std::sort(cols.begin(), cols.end());
    std::vector<Poly> phi(ncols);
    int sign = 1;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      std::vector<int> minor_cols;
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (k != j) minor_cols.push_back(cols[k]);
      Poly d = det(base, minor_cols);
      phi[cols[j]] = sign > 0 ? d : -d;
      sign = -sign;
    }
    bool zero = true;
    for (const auto& p : phi) zero = zero && p.is_zero();
    if (!zero) funcs.push_back(std::move(phi));
  }
  return funcs;
}

ExactReport is_short_exact(const ZModule& a, const ZModule& b, const ZModule& c,
                           const ZModMap& f, const ZModMap& g, bool force_exhaustive) {
  ExactReport rep;

  // the quotient by the image of f must stay torsion free (otherwise no
  // valid C exists at all): the image must be saturated in B up to the cap
  auto imf_slices = map_image_slices(a, b, f);
  auto gen_rows = min_gen_tuples_in(a, b, f);
  auto funcs = qspan_functionals(gen_rows, (int)b.coords.size());
  {
    const AmbientPtr& bamb = b.inner.ambient();
    std::vector<AmbientComponent> tcomps;
    std::vector<std::vector<Poly>> entries;
    for (const auto& phi : funcs) {
      int deg = 0;
      for (const auto& p : phi)
        if (!p.is_zero()) deg = *p.homogeneous_degree();
      tcomps.push_back({-deg, std::nullopt});
      entries.push_back(phi);
    }
    int dmin = bamb->min_degree();
    std::optional<GradedSubmodule> sat;
    if (!funcs.empty()) {
      auto tgt = std::make_shared<AmbientModule>(bamb->ring(), tcomps);
      PolyMap n(bamb, tgt, entries);
      sat = kernel(n, &b.inner, b.cap);
    }
    for (int d = dmin; d <= b.cap; d += 2) {
      int sat_dim = sat ? sat->dim(d) : b.inner.dim(d);
      if (sat_dim != (int)imf_slices[(d - dmin) / 2].dim()) {
        rep.rejected = true;
        rep.detail = "cokernel of f has torsion at degree " + std::to_string(d) +
                     " (C is not in the module category)";
        return rep;
      }
    }
  }

  // g o f must vanish on the generators of A
  for (const auto& gen : a.inner.minimal_generators()) {
    auto mid = f.apply(a.coords, b.coords, gen.comps);
    auto end = g.apply(b.coords, c.coords, mid);
    for (const auto& p : end)
      if (!p.is_zero()) {
        rep.rejected = true;
        rep.detail = "g o f is nonzero";
        return rep;
      }
  }

  // route selection: order-kernel path when all three are flabby
  bool all_flabby = !force_exhaustive && is_flabby_module(a).flabby &&
                    is_flabby_module(b).flabby && is_flabby_module(c).flabby;

  auto check_triple = [&](const ZModule& aa, const ZModule& bb, const ZModule& cc,
                          std::string what) -> bool {
    int dmin = bb.inner.ambient()->min_degree();
    for (int d = dmin; d <= b.cap; d += 2) {
      int ia = aa.inner.dim(d - f.shift);
      int kf = map_kernel_dim(aa, bb, f, d - f.shift);
      if (kf != 0) {
        rep.detail = what + ": f not injective at degree " + std::to_string(d);
        return false;
      }
      int img_g_dim;
      {
        std::vector<BRow> rows;
        for (const auto& r : bb.inner.slice(d).rows) {
          auto tuple = bb.inner.ambient()->row_to_tuple(r, d);
          auto img = g.apply(bb.coords, cc.coords, tuple);
          BRow row = cc.inner.ambient()->tuple_to_row(img, d + g.shift);
          if (!row.empty()) rows.push_back(std::move(row));
        }
        img_g_dim = rank_rows(rows);
      }
      if (img_g_dim != cc.inner.dim(d + g.shift)) {
        rep.detail = what + ": g not surjective at degree " + std::to_string(d);
        return false;
      }
      int kg = map_kernel_dim(bb, cc, g, d);
      if (ia != kg) {
        rep.detail = what + ": ker g != im f at degree " + std::to_string(d);
        return false;
      }
    }
    return true;
  };

  if (all_flabby) {
    rep.mode = "order-kernel";
    for (int x = 0; x < b.graph->num_vertices(); ++x) {
      // restrict everything to elements supported on x inside {<=x}
      std::vector<int> leq = b.graph->less_eq(x);
      ZModule ax = supported_part(project(a, leq), {x});
      ZModule bx = supported_part(project(b, leq), {x});
      ZModule cx = supported_part(project(c, leq), {x});
      if (!check_triple(ax, bx, cx, "order kernel at " + b.graph->id(x))) {
        rep.exact = false;
        return rep;
      }
    }
    rep.exact = true;
    return rep;
  }

  rep.mode = "exhaustive-opens";
  for (const auto& open : b.graph->open_subsets()) {
    if (open.empty()) continue;
    ZModule ao = project(a, open);
    ZModule bo = project(b, open);
    ZModule co = project(c, open);
    if (!check_triple(ao, bo, co,
                      "open of size " + std::to_string(open.size()))) {
      rep.exact = false;
      return rep;
    }
  }
  rep.exact = true;
  return rep;
}

} // namespace gkm
