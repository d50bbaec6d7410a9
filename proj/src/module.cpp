#include "gkm/module.hpp"

#include <algorithm>

namespace gkm {

const Basis GradedSubmodule::empty_basis_{};

AmbientModule::AmbientModule(PolyRingPtr ring, std::vector<AmbientComponent> comps)
    : ring_(std::move(ring)), comps_(std::move(comps)) {
  for (const auto& c : comps_) {
    if (c.shift % 2 != 0) throw std::invalid_argument("component shift must be even");
    if (c.ann) {
      if (c.ann->is_zero()) throw std::invalid_argument("zero annihilator");
      if (c.ann->dim() != ring_->dim())
        throw std::invalid_argument("annihilator dimension mismatch");
    }
  }
  min_degree_ = 0;
  for (const auto& c : comps_) min_degree_ = std::min(min_degree_, c.shift);
}

int AmbientModule::comp_dim(int i, int degree) const {
  const auto& c = comps_[i];
  int d = degree - c.shift;
  if (d < 0 || d % 2 != 0) return 0;
  int t = d / 2;
  int vars = ring_->dim() - (c.ann ? 1 : 0);
  return (int)PolyRing::count_monos(vars, t);
}

int AmbientModule::comp_offset(int i, int degree) const {
  int off = 0;
  for (int j = 0; j < i; ++j) off += comp_dim(j, degree);
  return off;
}

int AmbientModule::dim(int degree) const {
  int total = 0;
  for (int i = 0; i < size(); ++i) total += comp_dim(i, degree);
  return total;
}

const std::vector<Mono>& AmbientModule::comp_monos(int i, int degree) const {
  const auto& c = comps_[i];
  int t = (degree - c.shift) / 2;
  if (c.ann) return ring_->monos_without(c.ann->pivot(), t);
  return ring_->monos(t);
}

int AmbientModule::coord_of(int i, int degree, Mono m) const {
  const auto& c = comps_[i];
  int t = (degree - c.shift) / 2;
  int local = c.ann ? ring_->mono_index_without(c.ann->pivot(), t, m)
                    : ring_->mono_index(t, m);
  return comp_offset(i, degree) + local;
}

Poly AmbientModule::reduce_component(int i, const Poly& p) const {
  const auto& c = comps_[i];
  if (!c.ann || p.is_zero()) return p;
  return c.ann->reduce(p);
}

BRow AmbientModule::tuple_to_row(const std::vector<Poly>& tuple, int degree) const {
  if ((int)tuple.size() != size())
    throw std::invalid_argument("tuple size does not match ambient");
  BRow row;
  for (int i = 0; i < size(); ++i) {
    Poly p = reduce_component(i, tuple[i]);
    if (p.is_zero()) continue;
    auto hd = p.homogeneous_degree();
    if (!hd || *hd != degree - comps_[i].shift)
      throw std::invalid_argument("component " + std::to_string(i) +
                                  " is not homogeneous of the required degree");
    for (const auto& [m, c] : p.terms()) row.add_term(coord_of(i, degree, m), c);
  }
  row.sort_and_compress();
  return row;
}

std::vector<Poly> AmbientModule::row_to_tuple(const BRow& row, int degree) const {
  std::vector<Poly> tuple(size());
  std::vector<std::vector<std::pair<Mono, BigRat>>> terms(size());
  int i = 0;
  for (const auto& [col, v] : row.e) {
    while (i + 1 < size() && col >= comp_offset(i + 1, degree)) ++i;
    // columns are sorted, components scanned forward
    int local = col - comp_offset(i, degree);
    terms[i].push_back({comp_monos(i, degree)[local], v});
  }
  for (int j = 0; j < size(); ++j) tuple[j] = Poly::from_terms(std::move(terms[j]));
  return tuple;
}

BRow AmbientModule::mult_var(const BRow& row, int degree, int var) const {
  BRow out;
  int i = 0;
  for (const auto& [col, v] : row.e) {
    while (i + 1 < size() && col >= comp_offset(i + 1, degree)) ++i;
    const auto& c = comps_[i];
    int local = col - comp_offset(i, degree);
    Mono m = comp_monos(i, degree)[local];
    if (c.ann && var == c.ann->pivot()) {
      // x_p * m expands through the pivot substitution
      Poly part = c.ann->pivot_substitution().mul_mono(m, v);
      for (const auto& [mm, cc] : part.terms())
        out.add_term(coord_of(i, degree + 2, mm), cc);
    } else {
      out.add_term(coord_of(i, degree + 2, mono_mul_var(m, var)), v);
    }
  }
  out.sort_and_compress();
  return out;
}

std::vector<BRow> AmbientModule::closure_rows(const std::vector<BRow>& basis, int degree) const {
  std::vector<BRow> rows;
  rows.reserve(basis.size() * ring_->dim());
  for (const auto& b : basis)
    for (int v = 0; v < ring_->dim(); ++v) rows.push_back(mult_var(b, degree, v));
  return rows;
}

bool AmbientModule::same_layout(const AmbientModule& o) const {
  if (ring_->dim() != o.ring_->dim() || size() != o.size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (comps_[i].shift != o.comps_[i].shift) return false;
    bool a = comps_[i].ann.has_value(), b = o.comps_[i].ann.has_value();
    if (a != b) return false;
    if (a && !comps_[i].ann->proportional_to(*o.comps_[i].ann)) return false;
  }
  return true;
}

GradedSubmodule GradedSubmodule::span(AmbientPtr amb, std::vector<GenTuple> gens, int cap) {
  if (cap % 2 != 0) throw std::invalid_argument("cap must be even");
  GradedSubmodule m;
  m.amb_ = std::move(amb);
  m.cap_ = cap;
  // validate and reduce generators
  std::map<int, std::vector<BRow>> by_degree;
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    auto& g = gens[gi];
    if (g.degree % 2 != 0)
      throw std::invalid_argument("generator " + std::to_string(gi) + " has odd degree");
    if (g.degree > cap)
      throw std::invalid_argument("cap smaller than degree of generator " + std::to_string(gi));
    BRow row;
    try {
      row = m.amb_->tuple_to_row(g.comps, g.degree);
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument("generator " + std::to_string(gi) + ": " + err.what());
    }
    if (!row.empty()) by_degree[g.degree].push_back(std::move(row));
  }
  m.gens_ = std::move(gens);

  int dmin = m.amb_->min_degree();
  int n = cap < dmin ? 0 : (cap - dmin) / 2 + 1;
  m.slices_.resize(n);
  for (int d = dmin; d <= cap; d += 2) {
    std::vector<BRow> rows;
    if (d - 2 >= dmin) {
      const Basis& prev = m.slices_[(d - 2 - dmin) / 2];
      rows = m.amb_->closure_rows(prev.rows, d - 2);
    }
    auto it = by_degree.find(d);
    if (it != by_degree.end())
      for (auto& r : it->second) rows.push_back(std::move(r));
    m.slices_[(d - dmin) / 2] = basis_from_rows(rows);
  }
  return m;
}

GradedSubmodule GradedSubmodule::from_slices(AmbientPtr amb, std::vector<Basis> slices, int cap) {
  GradedSubmodule m;
  m.amb_ = std::move(amb);
  m.cap_ = cap;
  m.slices_ = std::move(slices);
  int dmin = m.amb_->min_degree();
  std::size_t n = cap < dmin ? 0 : (cap - dmin) / 2 + 1;
  if (m.slices_.size() != n) throw std::logic_error("from_slices: slice count mismatch");
  m.compute_minimal_generators();
  m.gens_ = *m.min_gens_;
  return m;
}

const Basis& GradedSubmodule::slice(int degree) const {
  int dmin = amb_->min_degree();
  if (degree < dmin || degree % 2 != 0) return empty_basis_;
  if (degree > cap_) throw std::out_of_range("slice beyond cap");
  return slices_[(degree - dmin) / 2];
}

int GradedSubmodule::dim(int degree) const {
  int dmin = amb_->min_degree();
  if (degree < dmin || degree % 2 != 0 || degree > cap_) return 0;
  return slices_[(degree - dmin) / 2].dim();
}

std::map<int, int> GradedSubmodule::hilbert_function() const {
  std::map<int, int> h;
  for (int d = amb_->min_degree(); d <= cap_; d += 2) h[d] = dim(d);
  return h;
}

void GradedSubmodule::compute_minimal_generators() const {
  if (min_gens_) return;
  std::vector<GenTuple> out;
  int dmin = amb_->min_degree();
  minimal_generators_scan(
      dmin, cap_, slices_,
      [&](int d, const BRow& b) { return amb_->closure_rows({b}, d); },
      [&](int d, const BRow& b) { out.push_back({amb_->row_to_tuple(b, d), d}); });
  min_gens_ = std::move(out);
}

const std::vector<GenTuple>& GradedSubmodule::minimal_generators() const {
  compute_minimal_generators();
  return *min_gens_;
}

std::vector<int> GradedSubmodule::minimal_generator_degrees() const {
  std::vector<int> ds;
  for (const auto& g : minimal_generators()) ds.push_back(g.degree);
  std::sort(ds.begin(), ds.end());
  return ds;
}

bool GradedSubmodule::contains(const BRow& row, int degree) const {
  if (row.empty()) return true;
  int dmin = amb_->min_degree();
  if (degree < dmin || degree % 2 != 0 || degree > cap_) return false;
  return slices_[(degree - dmin) / 2].contains(row);
}

bool GradedSubmodule::contains_tuple(const std::vector<Poly>& tuple, int degree) const {
  return contains(amb_->tuple_to_row(tuple, degree), degree);
}

bool GradedSubmodule::equals(const GradedSubmodule& o) const {
  if (!amb_->same_layout(*o.amb_)) return false;
  int dmin = std::min(amb_->min_degree(), o.amb_->min_degree());
  int top = std::min(cap_, o.cap_);
  for (int d = dmin; d <= top; d += 2) {
    const Basis& a = slice(d);
    const Basis& b = o.slice(d);
    if (!(a == b)) return false;
  }
  return true;
}

PolyMap::PolyMap(AmbientPtr source, AmbientPtr target, std::vector<std::vector<Poly>> entries)
    : source_(std::move(source)), target_(std::move(target)), entries_(std::move(entries)) {
  if ((int)entries_.size() != target_->size())
    throw std::invalid_argument("PolyMap: row count must equal target components");
  for (int i = 0; i < target_->size(); ++i) {
    if ((int)entries_[i].size() != source_->size())
      throw std::invalid_argument("PolyMap: column count must equal source components");
    for (int j = 0; j < source_->size(); ++j) {
      Poly e = target_->reduce_component(i, entries_[i][j]);
      entries_[i][j] = e;
      if (e.is_zero()) continue;
      int want = source_->comps()[j].shift - target_->comps()[i].shift;
      auto hd = e.homogeneous_degree();
      if (!hd || *hd != want)
        throw std::invalid_argument("PolyMap: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") has incompatible degree");
      const auto& sann = source_->comps()[j].ann;
      const auto& tann = target_->comps()[i].ann;
      if (sann && (!tann || !tann->proportional_to(*sann)))
        throw std::invalid_argument("PolyMap: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") does not respect annihilators");
    }
  }
}

PolyMap PolyMap::identity(AmbientPtr amb) {
  std::vector<std::vector<Poly>> entries((std::size_t)amb->size(),
                                         std::vector<Poly>((std::size_t)amb->size()));
  for (int i = 0; i < amb->size(); ++i) entries[i][i] = Poly::constant(1);
  return PolyMap(amb, amb, std::move(entries));
}

BRow PolyMap::apply_row(const BRow& row, int degree) const {
  BRow out;
  int j = 0;
  for (const auto& [col, v] : row.e) {
    while (j + 1 < source_->size() && col >= source_->comp_offset(j + 1, degree)) ++j;
    int local = col - source_->comp_offset(j, degree);
    Mono m = source_->comp_monos(j, degree)[local];
    for (int i = 0; i < target_->size(); ++i) {
      const Poly& e = entries_[i][j];
      if (e.is_zero()) continue;
      Poly part = target_->reduce_component(i, e.mul_mono(m, v));
      for (const auto& [mm, cc] : part.terms())
        out.add_term(target_->coord_of(i, degree, mm), cc);
    }
  }
  out.sort_and_compress();
  return out;
}

GradedSubmodule kernel(const PolyMap& f, const GradedSubmodule* source, int cap) {
  const AmbientPtr& src = f.source();
  int dmin = src->min_degree();
  std::vector<Basis> slices;
  for (int d = dmin; d <= cap; d += 2) {
    if (source) {
      const Basis& b = source->slice(d);
      // constraint rows indexed by target coordinates, unknowns are the
      // coefficients against the source basis
      std::vector<BRow> constraint(std::max(1, f.target()->dim(d)));
      for (int k = 0; k < b.dim(); ++k) {
        BRow img = f.apply_row(b.rows[k], d);
        for (const auto& [tc, v] : img.e) constraint[tc].add_term(k, v);
      }
      for (auto& r : constraint) r.sort_and_compress();
      auto combos = nullspace_rows(constraint, b.dim());
      std::vector<BRow> vecs;
      for (const auto& combo : combos) {
        BRow v;
        for (const auto& [k, c] : combo.e) v = vec_axpy(v, c, b.rows[k]);
        vecs.push_back(std::move(v));
      }
      slices.push_back(basis_from_rows(vecs));
    } else {
      int n = src->dim(d);
      std::vector<BRow> constraint(std::max(1, f.target()->dim(d)));
      for (int k = 0; k < n; ++k) {
        BRow unit;
        unit.add_term(k, BigRat(1));
        BRow img = f.apply_row(unit, d);
        for (const auto& [tc, v] : img.e) constraint[tc].add_term(k, v);
      }
      for (auto& r : constraint) r.sort_and_compress();
      slices.push_back(basis_from_rows(nullspace_rows(constraint, n)));
    }
  }
  return GradedSubmodule::from_slices(src, std::move(slices), cap);
}

GradedSubmodule image(const PolyMap& f, const GradedSubmodule& m) {
  const AmbientPtr& tgt = f.target();
  int dmin = tgt->min_degree();
  int cap = m.cap();
  std::vector<Basis> slices;
  for (int d = dmin; d <= cap; d += 2) {
    std::vector<BRow> rows;
    for (const auto& b : m.slice(d).rows) rows.push_back(f.apply_row(b, d));
    slices.push_back(basis_from_rows(rows));
  }
  return GradedSubmodule::from_slices(tgt, std::move(slices), cap);
}

GradedSubmodule intersect(const GradedSubmodule& m, const GradedSubmodule& n) {
  if (!m.ambient()->same_layout(*n.ambient()))
    throw std::invalid_argument("intersect: ambient mismatch");
  int cap = std::min(m.cap(), n.cap());
  int dmin = m.ambient()->min_degree();
  std::vector<Basis> slices;
  for (int d = dmin; d <= cap; d += 2)
    slices.push_back(intersect_bases(m.slice(d), n.slice(d), m.ambient()->dim(d)));
  return GradedSubmodule::from_slices(m.ambient(), std::move(slices), cap);
}

FreeReport is_graded_free(const GradedSubmodule& m) {
  FreeReport rep;
  rep.verified_up_to = m.cap();
  rep.generator_degrees = m.minimal_generator_degrees();
  int nvars = m.ambient()->ring()->dim();
  for (int d = m.ambient()->min_degree(); d <= m.cap(); d += 2) {
    long long predicted = 0;
    for (int l : rep.generator_degrees) {
      int t = d - l;
      if (t >= 0 && t % 2 == 0) predicted += PolyRing::count_monos(nvars, t / 2);
    }
    if (predicted != m.dim(d)) {
      rep.free = false;
      rep.first_failure_degree = d;
      return rep;
    }
  }
  rep.free = true;
  return rep;
}

} // namespace gkm
