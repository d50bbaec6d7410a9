#include "gkm/sheaf.hpp"

#include <algorithm>

namespace gkm {

namespace {

const Basis kEmptyBasis{};

AmbientPtr make_free_ambient(PolyRingPtr ring, const std::vector<int>& shifts) {
  std::vector<AmbientComponent> comps;
  for (int s : shifts) comps.push_back({s, std::nullopt});
  return std::make_shared<AmbientModule>(std::move(ring), std::move(comps));
}

AmbientPtr make_quotient_ambient(PolyRingPtr ring, const std::vector<int>& shifts,
                                 const LinForm& ann) {
  std::vector<AmbientComponent> comps;
  for (int s : shifts) comps.push_back({s, ann});
  return std::make_shared<AmbientModule>(std::move(ring), std::move(comps));
}

} // namespace

Presentation::Presentation(AmbientPtr amb, std::shared_ptr<const GradedSubmodule> rels, int cap)
    : amb_(std::move(amb)), rels_(std::move(rels)), cap_(cap) {}

std::shared_ptr<const Presentation> Presentation::free_of(PolyRingPtr ring,
                                                          const std::vector<int>& shifts,
                                                          int cap) {
  return std::make_shared<Presentation>(make_free_ambient(std::move(ring), shifts), nullptr,
                                        cap);
}

std::shared_ptr<const Presentation> Presentation::zero(PolyRingPtr ring, int cap) {
  return free_of(std::move(ring), {}, cap);
}

std::vector<int> Presentation::shifts() const {
  std::vector<int> out;
  for (const auto& c : amb_->comps()) out.push_back(c.shift);
  return out;
}

int Presentation::qdim(int degree) const {
  int dim = amb_->dim(degree);
  if (rels_) dim -= rels_->dim(degree);
  return dim;
}

const std::vector<std::int32_t>& Presentation::qcols(int degree) const {
  std::lock_guard<std::mutex> lk(mutex_);
  auto it = qcols_cache_.find(degree);
  if (it != qcols_cache_.end()) return it->second;
  std::vector<std::int32_t> cols;
  int n = amb_->dim(degree);
  std::vector<bool> pivot(n, false);
  if (rels_)
    for (const auto& r : rels_->slice(degree).rows) pivot[r.e.front().first] = true;
  for (int c = 0; c < n; ++c)
    if (!pivot[c]) cols.push_back(c);
  return qcols_cache_.emplace(degree, std::move(cols)).first->second;
}

BRow Presentation::reduce(const BRow& ambient_row, int degree) const {
  if (!rels_) return ambient_row;
  return rels_->slice(degree).reduce(ambient_row);
}

BRow Presentation::compress(const BRow& reduced_row, int degree) const {
  const auto& cols = qcols(degree);
  BRow out;
  out.e.reserve(reduced_row.e.size());
  for (const auto& [c, v] : reduced_row.e) {
    auto it = std::lower_bound(cols.begin(), cols.end(), c);
    if (it == cols.end() || *it != c)
      throw std::logic_error("compress: row is not reduced");
    out.e.push_back({(std::int32_t)(it - cols.begin()), v});
  }
  return out;
}

BRow Presentation::decompress(const BRow& qrow, int degree) const {
  const auto& cols = qcols(degree);
  BRow out;
  out.e.reserve(qrow.e.size());
  for (const auto& [c, v] : qrow.e) out.e.push_back({cols[c], v});
  return out;
}

BRow Presentation::q_mult_var(const BRow& qrow, int degree, int var) const {
  BRow ambient = decompress(qrow, degree);
  BRow lifted = amb_->mult_var(ambient, degree, var);
  return compress(reduce(lifted, degree + 2), degree + 2);
}

int TupleSpace::qdim(int degree) const {
  int total = 0;
  for (const auto& p : parts_) total += p->qdim(degree);
  return total;
}

int TupleSpace::offset(int i, int degree) const {
  int off = 0;
  for (int j = 0; j < i; ++j) off += parts_[j]->qdim(degree);
  return off;
}

int TupleSpace::min_degree() const {
  int dmin = 0;
  for (const auto& p : parts_) dmin = std::min(dmin, p->ambient()->min_degree());
  return dmin;
}

BRow TupleSpace::mult_var(const BRow& qrow, int degree, int var) const {
  BRow out;
  int i = 0;
  BRow block;
  auto flush = [&](int part) {
    if (block.empty()) return;
    BRow lifted = parts_[part]->q_mult_var(block, degree, var);
    int off = offset(part, degree + 2);
    for (const auto& [c, v] : lifted.e) out.add_term(off + c, v);
    block.e.clear();
  };
  for (const auto& [c, v] : qrow.e) {
    while (i + 1 < size() && c >= offset(i + 1, degree)) {
      flush(i);
      ++i;
    }
    block.add_term(c - offset(i, degree), v);
  }
  flush(i);
  out.sort_and_compress();
  return out;
}

std::vector<BRow> TupleSpace::closure_rows(const std::vector<BRow>& rows, int degree) const {
  std::vector<BRow> out;
  if (parts_.empty()) return out;
  int nvars = parts_[0]->ambient()->ring()->dim();
  out.reserve(rows.size() * nvars);
  for (const auto& r : rows)
    for (int v = 0; v < nvars; ++v) out.push_back(mult_var(r, degree, v));
  return out;
}

BRow TupleSpace::block_of(const BRow& qrow, int i, int degree) const {
  int lo = offset(i, degree);
  int hi = lo + parts_[i]->qdim(degree);
  BRow out;
  for (const auto& [c, v] : qrow.e)
    if (c >= lo && c < hi) out.add_term(c - lo, v);
  return out;
}

const Basis& SectionSpace::slice(int degree) const {
  if (degree < min_degree || degree > cap || ((degree - min_degree) % 2) != 0)
    return kEmptyBasis;
  return slices[(degree - min_degree) / 2];
}

int SectionSpace::dim(int degree) const { return slice(degree).dim(); }

std::map<int, int> SectionSpace::hilbert_function() const {
  std::map<int, int> h;
  for (int d = min_degree; d <= cap; d += 2) h[d] = dim(d);
  return h;
}

std::vector<std::pair<int, BRow>> SectionSpace::minimal_generators() const {
  std::vector<std::pair<int, BRow>> out;
  minimal_generators_scan(
      min_degree, cap, slices,
      [&](int d, const BRow& b) { return space.closure_rows({b}, d); },
      [&](int d, const BRow& b) { out.push_back({d, b}); });
  return out;
}

std::vector<int> SectionSpace::minimal_generator_degrees() const {
  std::vector<int> ds;
  for (const auto& [d, row] : minimal_generators()) ds.push_back(d);
  std::sort(ds.begin(), ds.end());
  return ds;
}

const std::optional<PolyMap>& GSheaf::rho_for(int edge, int vertex) const {
  const auto& e = graph->edges()[edge];
  if (vertex == e.u) return rho[edge][0];
  if (vertex == e.v) return rho[edge][1];
  throw std::invalid_argument("vertex is not an endpoint of the edge");
}

std::vector<BRow> GSheaf::rho_slice_cols(int edge, int vertex, int degree) const {
  const VertexStalk& stalk = vstalks[vertex];
  const EdgeStalk& estalk = estalks[edge];
  std::vector<BRow> cols;
  if (stalk.is_zero() || estalk.is_zero()) return cols;
  const auto& pm = rho_for(edge, vertex);
  if (!pm) throw std::logic_error("missing rho for a nonzero stalk/edge pair");
  int n = stalk.pres->qdim(degree);
  cols.reserve(n);
  for (int c = 0; c < n; ++c) {
    BRow unit;
    unit.add_term(c, BigRat(1));
    BRow ambient = stalk.pres->decompress(unit, degree);
    BRow img = pm->apply_row(ambient, degree);
    img = estalk.pres->reduce(img, degree);
    cols.push_back(estalk.pres->compress(img, degree));
  }
  return cols;
}

GSheaf GSheaf::structure(GraphPtr g, int cap) {
  auto ring = std::make_shared<PolyRing>(g->dim());
  GSheaf m;
  m.graph = g;
  m.cap = cap;
  for (int v = 0; v < g->num_vertices(); ++v)
    m.vstalks.push_back({Presentation::free_of(ring, {0}, cap), {}, false});
  for (const auto& e : g->edges()) {
    auto amb = make_quotient_ambient(ring, {0}, e.label);
    m.estalks.push_back({std::make_shared<Presentation>(amb, nullptr, cap)});
    PolyMap quot(make_free_ambient(ring, {0}), amb, {{Poly::constant(1)}});
    m.rho.push_back({quot, quot});
  }
  return m;
}

GSheaf GSheaf::skyscraper(GraphPtr g, int vertex, int shift, int cap) {
  if (vertex < 0 || vertex >= g->num_vertices())
    throw std::invalid_argument("skyscraper: unknown vertex");
  auto ring = std::make_shared<PolyRing>(g->dim());
  GSheaf m;
  m.graph = g;
  m.cap = cap;
  for (int v = 0; v < g->num_vertices(); ++v) {
    if (v == vertex)
      m.vstalks.push_back({Presentation::free_of(ring, {shift}, cap), {}, false});
    else
      m.vstalks.push_back({Presentation::zero(ring, cap), {}, false});
  }
  for (std::size_t e = 0; e < g->edges().size(); ++e) {
    m.estalks.push_back({Presentation::zero(ring, cap)});
    m.rho.push_back({std::nullopt, std::nullopt});
  }
  return m;
}

GSheaf GSheaf::restricted(const std::vector<int>& subset) const {
  std::vector<bool> in(graph->num_vertices(), false);
  for (int v : subset) in[v] = true;
  auto ring = std::make_shared<PolyRing>(graph->dim());
  GSheaf m = *this;
  for (int v = 0; v < graph->num_vertices(); ++v)
    if (!in[v]) m.vstalks[v] = {Presentation::zero(ring, cap), {}, false};
  for (std::size_t e = 0; e < graph->edges().size(); ++e) {
    const auto& edge = graph->edges()[e];
    if (!in[edge.u] || !in[edge.v]) {
      m.estalks[e] = {Presentation::zero(ring, cap)};
      m.rho[e] = {std::nullopt, std::nullopt};
    }
  }
  return m;
}

SectionSpace compute_sections(const GSheaf& m, std::vector<int> subset) {
  std::sort(subset.begin(), subset.end());
  SectionSpace out;
  out.subset = subset;
  out.cap = m.cap;
  std::vector<PresPtr> parts;
  for (int v : subset) parts.push_back(m.vstalks[v].pres);
  out.space = TupleSpace(std::move(parts));
  out.min_degree = out.space.min_degree();

  std::vector<int> pos_of(m.graph->num_vertices(), -1);
  for (int i = 0; i < (int)subset.size(); ++i) pos_of[subset[i]] = i;

  std::vector<int> edges = m.graph->edges_inside(subset);
  for (int d = out.min_degree; d <= m.cap; d += 2) {
    int ncols = out.space.qdim(d);
    std::vector<BRow> rows;
    for (int e : edges) {
      const EdgeStalk& estalk = m.estalks[e];
      if (estalk.is_zero()) continue;
      int eq = estalk.pres->qdim(d);
      if (eq == 0) continue;
      const auto& edge = m.graph->edges()[e];
      std::vector<BRow> block((std::size_t)eq);
      auto scatter = [&](int vertex, int sign) {
        if (m.vstalks[vertex].is_zero()) return;
        auto cols = m.rho_slice_cols(e, vertex, d);
        int off = out.space.offset(pos_of[vertex], d);
        for (int c = 0; c < (int)cols.size(); ++c)
          for (const auto& [r, val] : cols[c].e)
            block[r].add_term(off + c, sign > 0 ? val : -val);
      };
      scatter(edge.u, +1);
      scatter(edge.v, -1);
      for (auto& r : block) {
        r.sort_and_compress();
        if (!r.empty()) rows.push_back(std::move(r));
      }
    }
    out.slices.push_back(basis_from_rows(nullspace_rows(rows, ncols)));
  }
  return out;
}

std::vector<Basis> span_in_tuple_space(const TupleSpace& space,
                                       const std::map<int, std::vector<BRow>>& gens_by_degree,
                                       int cap) {
  std::vector<Basis> slices;
  int dmin = space.min_degree();
  for (int d = dmin; d <= cap; d += 2) {
    std::vector<BRow> rows;
    if (d - 2 >= dmin && !slices.empty())
      rows = space.closure_rows(slices.back().rows, d - 2);
    auto it = gens_by_degree.find(d);
    if (it != gens_by_degree.end())
      for (const auto& r : it->second) rows.push_back(r);
    slices.push_back(basis_from_rows(rows));
  }
  return slices;
}

namespace {

// image of a section space inside the sum of the edge stalks at x
struct DeltaImage {
  std::vector<int> delta_edges; // edges y -> x with nonzero edge stalk
  std::vector<int> edge_offset_cache;

  int offset(const GSheaf& m, int k, int d) const {
    int off = 0;
    for (int j = 0; j < k; ++j) off += m.estalks[delta_edges[j]].pres->qdim(d);
    return off;
  }
  int total_dim(const GSheaf& m, int d) const {
    return offset(m, (int)delta_edges.size(), d);
  }
};

} // namespace

FlabbyReport is_flabby(const GSheaf& m) {
  auto glob = is_generated_by_global_sections(m);
  if (!glob.generated)
    throw glob_precondition_error("sheaf is not generated by global sections (" +
                                  glob.witness + ")");
  FlabbyReport rep;
  rep.cap = m.cap;
  for (int x = 0; x < m.graph->num_vertices(); ++x) {
    DeltaImage delta;
    std::vector<int> lowers;
    for (int e : m.graph->edges_into(x)) {
      if (m.estalks[e].is_zero()) continue;
      delta.delta_edges.push_back(e);
      const auto& edge = m.graph->edges()[e];
      lowers.push_back(edge.u == x ? edge.v : edge.u);
    }
    if (delta.delta_edges.empty()) continue;

    // sections below x: only components meeting the lower endpoints matter
    std::vector<int> below = m.graph->less_than(x);
    std::vector<int> relevant;
    for (const auto& comp : m.graph->connected_components(below)) {
      bool meets = false;
      for (int y : lowers)
        if (std::find(comp.begin(), comp.end(), y) != comp.end()) meets = true;
      if (meets)
        for (int y : comp) relevant.push_back(y);
    }
    SectionSpace sec = compute_sections(m, relevant);
    std::vector<int> pos_of(m.graph->num_vertices(), -1);
    for (int i = 0; i < (int)sec.subset.size(); ++i) pos_of[sec.subset[i]] = i;

    for (int d = sec.min_degree; d <= m.cap; d += 2) {
      // image of the sections under the rho maps along the delta edges
      std::vector<std::vector<BRow>> cols_by_edge;
      for (int k = 0; k < (int)delta.delta_edges.size(); ++k)
        cols_by_edge.push_back(m.rho_slice_cols(delta.delta_edges[k],
                                                lowers[k], d));
      std::vector<BRow> image_rows;
      for (const auto& s : sec.slice(d).rows) {
        BRow img;
        for (int k = 0; k < (int)delta.delta_edges.size(); ++k) {
          if (pos_of[lowers[k]] < 0) continue;
          BRow block = sec.space.block_of(s, pos_of[lowers[k]], d);
          int off = delta.offset(m, k, d);
          for (const auto& [c, v] : block.e)
            for (const auto& [r, val] : cols_by_edge[k][c].e) img.add_term(off + r, v * val);
        }
        img.sort_and_compress();
        if (!img.empty()) image_rows.push_back(std::move(img));
      }
      if (image_rows.empty()) continue;
      Basis delta_image = basis_from_rows(image_rows);

      // image of the stalk at x in the same coordinates
      std::vector<BRow> stalk_rows;
      if (!m.vstalks[x].is_zero()) {
        int n = m.vstalks[x].pres->qdim(d);
        std::vector<std::vector<BRow>> xcols;
        for (int k = 0; k < (int)delta.delta_edges.size(); ++k)
          xcols.push_back(m.rho_slice_cols(delta.delta_edges[k], x, d));
        for (int c = 0; c < n; ++c) {
          BRow img;
          for (int k = 0; k < (int)delta.delta_edges.size(); ++k) {
            int off = delta.offset(m, k, d);
            for (const auto& [r, val] : xcols[k][c].e) img.add_term(off + r, val);
          }
          img.sort_and_compress();
          if (!img.empty()) stalk_rows.push_back(std::move(img));
        }
      }
      Basis stalk_image = basis_from_rows(stalk_rows);
      for (const auto& row : delta_image.rows) {
        if (!stalk_image.contains(row)) {
          rep.flabby = false;
          rep.witness = {m.graph->id(x), d};
          return rep;
        }
      }
    }
  }
  rep.flabby = true;
  return rep;
}

namespace {

bool restriction_surjective(const GSheaf& m, const SectionSpace& global,
                            const std::vector<int>& subset) {
  SectionSpace sub = compute_sections(m, subset);
  std::vector<int> pos_in_global(m.graph->num_vertices(), -1);
  for (int i = 0; i < (int)global.subset.size(); ++i) pos_in_global[global.subset[i]] = i;
  for (int d = sub.min_degree; d <= m.cap; d += 2) {
    if (sub.dim(d) == 0) continue;
    std::vector<BRow> restricted;
    for (const auto& row : global.slice(d).rows) {
      BRow r;
      for (int i = 0; i < (int)sub.subset.size(); ++i) {
        BRow block = global.space.block_of(row, pos_in_global[sub.subset[i]], d);
        int off = sub.space.offset(i, d);
        for (const auto& [c, v] : block.e) r.add_term(off + c, v);
      }
      r.sort_and_compress();
      if (!r.empty()) restricted.push_back(std::move(r));
    }
    if (rank_rows(restricted) != sub.dim(d)) return false;
  }
  return true;
}

} // namespace

bool flabby_by_open_restrictions(const GSheaf& m) {
  std::vector<int> all(m.graph->num_vertices());
  for (int i = 0; i < (int)all.size(); ++i) all[i] = i;
  SectionSpace global = compute_sections(m, all);
  for (const auto& open : m.graph->open_subsets()) {
    if ((int)open.size() == m.graph->num_vertices()) continue;
    if (!restriction_surjective(m, global, open)) return false;
  }
  return true;
}

bool flabby_by_principal_restrictions(const GSheaf& m) {
  for (int x = 0; x < m.graph->num_vertices(); ++x) {
    SectionSpace leq = compute_sections(m, m.graph->less_eq(x));
    if (!restriction_surjective(m, leq, m.graph->less_than(x))) return false;
  }
  return true;
}

GlobReport is_generated_by_global_sections(const GSheaf& m) {
  std::vector<int> all(m.graph->num_vertices());
  for (int i = 0; i < (int)all.size(); ++i) all[i] = i;
  SectionSpace global = compute_sections(m, all);

  // vertex exhaustion: sections project onto every stalk
  for (int x = 0; x < m.graph->num_vertices(); ++x) {
    if (m.vstalks[x].is_zero()) continue;
    for (int d = global.min_degree; d <= m.cap; d += 2) {
      int want = m.vstalks[x].pres->qdim(d);
      if (want == 0) continue;
      std::vector<BRow> blocks;
      for (const auto& row : global.slice(d).rows) {
        BRow b = global.space.block_of(row, x, d);
        if (!b.empty()) blocks.push_back(std::move(b));
      }
      if (rank_rows(blocks) != want)
        return {false, "stalk at " + m.graph->id(x) + " not exhausted at degree " +
                           std::to_string(d)};
    }
  }

  // edge stalks against the localization of the global sections
  auto gens = global.minimal_generators();
  for (int e = 0; e < (int)m.graph->edges().size(); ++e) {
    const auto& edge = m.graph->edges()[e];
    const VertexStalk& su = m.vstalks[edge.u];
    const VertexStalk& sv = m.vstalks[edge.v];
    const EdgeStalk& se = m.estalks[e];
    if (su.is_zero() && sv.is_zero()) {
      for (int d = global.min_degree; d <= m.cap; d += 2)
        if (se.pres && se.pres->qdim(d) != 0)
          return {false, "edge " + m.graph->id(edge.u) + "--" + m.graph->id(edge.v) +
                             " has a stalk but no incident sections"};
      continue;
    }
    int x = su.is_zero() ? edge.v : edge.u; // the side that presents the pushout
    int other = x == edge.u ? edge.v : edge.u;

    TupleSpace pair_space({m.vstalks[edge.u].pres, m.vstalks[edge.v].pres});
    int pos_x = x == edge.u ? 0 : 1;
    int pos_other = 1 - pos_x;
    std::map<int, std::vector<BRow>> pair_gens;
    const LinForm& alpha = edge.label;
    for (const auto& [d, row] : gens) {
      BRow bu = global.space.block_of(row, edge.u, d);
      BRow bv = global.space.block_of(row, edge.v, d);
      BRow pair;
      int off_u = pair_space.offset(0, d);
      int off_v = pair_space.offset(1, d);
      for (const auto& [c, v] : bu.e) pair.add_term(off_u + c, v);
      for (const auto& [c, v] : bv.e) pair.add_term(off_v + c, v);
      pair.sort_and_compress();
      if (!pair.empty()) pair_gens[d].push_back(pair);
      // (alpha * m_x, 0) companion generator one degree up
      if (d + 2 <= m.cap) {
        BRow bx = pos_x == 0 ? bu : bv;
        if (!bx.empty() && !m.vstalks[x].is_zero()) {
          BRow ax;
          for (int var = 0; var < (int)alpha.coeffs().size(); ++var) {
            if (alpha.coeffs()[var].is_zero()) continue;
            BRow t = m.vstalks[x].pres->q_mult_var(bx, d, var);
            ax = vec_axpy(ax, alpha.coeffs()[var], t);
          }
          BRow pair2;
          int off_x = pair_space.offset(pos_x, d + 2);
          for (const auto& [c, v] : ax.e) pair2.add_term(off_x + c, v);
          pair2.sort_and_compress();
          if (!pair2.empty()) pair_gens[d + 2].push_back(pair2);
        }
      }
    }
    auto me_slices = span_in_tuple_space(pair_space, pair_gens, m.cap);

    for (int d = pair_space.min_degree(); d <= m.cap; d += 2) {
      const Basis& me = me_slices[(d - pair_space.min_degree()) / 2];
      // M(E)_x: elements with vanishing other-side block
      int lo = pair_space.offset(pos_other, d);
      int hi = lo + pair_space.part(pos_other)->qdim(d);
      std::vector<BRow> constraint((std::size_t)std::max(1, hi - lo));
      for (int k = 0; k < me.dim(); ++k)
        for (const auto& [c, v] : me.rows[k].e)
          if (c >= lo && c < hi) constraint[c - lo].add_term(k, v);
      for (auto& r : constraint) r.sort_and_compress();
      int kdim = (int)nullspace_rows(constraint, me.dim()).size();

      int stalk_dim = m.vstalks[x].pres->qdim(d);
      int edge_dim = se.is_zero() ? 0 : se.pres->qdim(d);
      int rank_x = se.is_zero() ? 0 : rank_rows(m.rho_slice_cols(e, x, d));
      if (stalk_dim - kdim != edge_dim || rank_x != edge_dim)
        return {false, "edge " + m.graph->id(edge.u) + "--" + m.graph->id(edge.v) +
                           " mismatch at degree " + std::to_string(d)};
    }
  }
  return {true, ""};
}

} // namespace gkm
