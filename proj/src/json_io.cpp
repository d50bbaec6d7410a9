#include "gkm/json_io.hpp"

#include <sstream>

namespace gkm {

const char* const kEngineVersion = "0.1.0";

namespace {

ordered_json linform_to_json(const LinForm& l) {
  ordered_json a = ordered_json::array();
  for (const auto& c : l.coeffs()) a.push_back(c.str());
  return a;
}

LinForm linform_from_json(const ordered_json& j) {
  std::vector<BigRat> coeffs;
  for (const auto& c : j) coeffs.push_back(BigRat::parse(c.get<std::string>()));
  return LinForm(std::move(coeffs));
}

ordered_json gens_to_json(const std::vector<GenTuple>& gens, int dim,
                          const std::vector<std::string>* names) {
  ordered_json arr = ordered_json::array();
  for (const auto& g : gens) {
    ordered_json e;
    e["degree"] = g.degree;
    if (names) {
      ordered_json comps;
      for (std::size_t i = 0; i < g.comps.size(); ++i)
        comps[(*names)[i]] = poly_to_json(g.comps[i], dim);
      e["components"] = std::move(comps);
    } else {
      ordered_json comps = ordered_json::array();
      for (const auto& p : g.comps) comps.push_back(poly_to_json(p, dim));
      e["components"] = std::move(comps);
    }
    arr.push_back(std::move(e));
  }
  return arr;
}

std::vector<GenTuple> gens_from_json(const ordered_json& j, int dim, std::size_t ncomps) {
  std::vector<GenTuple> out;
  for (const auto& e : j) {
    GenTuple g;
    g.degree = e.at("degree").get<int>();
    const auto& comps = e.at("components");
    if (comps.size() != ncomps) throw std::invalid_argument("generator arity mismatch");
    for (const auto& c : comps) g.comps.push_back(poly_from_json(c, dim));
    out.push_back(std::move(g));
  }
  return out;
}

} // namespace

ordered_json poly_to_json(const Poly& p, int dim) {
  ordered_json arr = ordered_json::array();
  for (const auto& [m, c] : p.terms()) {
    ordered_json exps = ordered_json::array();
    for (int v = 0; v < dim; ++v) exps.push_back(mono_exp(m, v));
    arr.push_back(ordered_json::array({exps, c.str()}));
  }
  return arr;
}

Poly poly_from_json(const ordered_json& j, int dim) {
  std::vector<std::pair<Mono, BigRat>> terms;
  for (const auto& t : j) {
    const auto& exps = t.at(0);
    if ((int)exps.size() != dim) throw std::invalid_argument("exponent arity mismatch");
    Mono m = mono_one();
    for (int v = 0; v < dim; ++v) {
      int e = exps.at(v).get<int>();
      if (e < 0) throw std::invalid_argument("negative exponent");
      m = mono_set_exp(m, v, e);
    }
    terms.push_back({m, BigRat::parse(t.at(1).get<std::string>())});
  }
  return Poly::from_terms(std::move(terms));
}

ordered_json graph_to_json(const MomentGraph& g) {
  ordered_json j;
  j["dim"] = g.dim();
  j["vertices"] = g.vertex_ids();
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges()) {
    ordered_json je;
    je["u"] = g.id(e.u);
    je["v"] = g.id(e.v);
    je["label"] = linform_to_json(e.label);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  ordered_json rels = ordered_json::array();
  for (const auto& [a, b] : g.extra_relations())
    rels.push_back(ordered_json::array({g.id(a), g.id(b)}));
  j["relations"] = std::move(rels);
  return j;
}

MomentGraph graph_from_json(const ordered_json& j) {
  int dim = j.at("dim").get<int>();
  std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
  auto index_of = [&](const std::string& id) {
    for (int i = 0; i < (int)vertices.size(); ++i)
      if (vertices[i] == id) return i;
    throw std::invalid_argument("unknown vertex id in graph JSON: " + id);
  };
  std::vector<GraphEdge> edges;
  for (const auto& je : j.at("edges")) {
    GraphEdge e;
    e.u = index_of(je.at("u").get<std::string>());
    e.v = index_of(je.at("v").get<std::string>());
    e.label = linform_from_json(je.at("label"));
    edges.push_back(std::move(e));
  }
  std::vector<std::pair<int, int>> rels;
  if (j.contains("relations"))
    for (const auto& r : j.at("relations"))
      rels.push_back({index_of(r.at(0).get<std::string>()),
                      index_of(r.at(1).get<std::string>())});
  MomentGraph g(dim, std::move(vertices), std::move(edges), std::move(rels));
  auto violations = g.validate();
  if (!violations.empty())
    throw std::invalid_argument("invalid graph: " + violations.front().what);
  return g;
}

ordered_json zmodule_to_json(const ZModule& m) {
  ordered_json j;
  j["graph"] = graph_to_json(*m.graph);
  ordered_json coords = ordered_json::array();
  for (int c : m.coords) coords.push_back(m.graph->id(c));
  j["coords"] = std::move(coords);
  j["cap"] = m.cap;
  j["generators"] = gens_to_json(m.inner.minimal_generators(), m.graph->dim(), nullptr);
  return j;
}

ZModule zmodule_from_json(const ordered_json& j, bool verify_closure) {
  auto graph = std::make_shared<const MomentGraph>(graph_from_json(j.at("graph")));
  std::vector<int> coords;
  for (const auto& id : j.at("coords")) coords.push_back(graph->require_vertex(id));
  int cap = j.at("cap").get<int>();
  auto gens = gens_from_json(j.at("generators"), graph->dim(), coords.size());
  return make_zmodule(graph, std::move(coords), std::move(gens), cap, verify_closure);
}

namespace {

ordered_json submodule_gens_json(const GradedSubmodule& m, int dim) {
  return gens_to_json(m.minimal_generators(), dim, nullptr);
}

} // namespace

ordered_json sheaf_to_json(const GSheaf& m) {
  int dim = m.graph->dim();
  ordered_json j;
  j["graph"] = graph_to_json(*m.graph);
  j["cap"] = m.cap;
  ordered_json stalks = ordered_json::array();
  for (int v = 0; v < m.graph->num_vertices(); ++v) {
    const auto& s = m.vstalks[v];
    ordered_json js;
    js["vertex"] = m.graph->id(v);
    js["shifts"] = s.is_zero() ? std::vector<int>{} : s.pres->shifts();
    if (!s.cover_into_S.empty()) {
      ordered_json cover = ordered_json::array();
      for (const auto& p : s.cover_into_S) cover.push_back(poly_to_json(p, dim));
      js["cover"] = std::move(cover);
    }
    if (s.pres && s.pres->relations())
      js["relations"] = submodule_gens_json(*s.pres->relations(), dim);
    if (s.warn_not_free) js["not_free"] = true;
    stalks.push_back(std::move(js));
  }
  j["stalks"] = std::move(stalks);
  ordered_json estalks = ordered_json::array();
  for (int e = 0; e < (int)m.graph->edges().size(); ++e) {
    const auto& s = m.estalks[e];
    ordered_json js;
    js["edge"] = e;
    js["shifts"] = s.is_zero() ? std::vector<int>{} : s.pres->shifts();
    if (s.pres && s.pres->relations())
      js["relations"] = submodule_gens_json(*s.pres->relations(), dim);
    estalks.push_back(std::move(js));
  }
  j["edges"] = std::move(estalks);
  ordered_json rho = ordered_json::array();
  for (int e = 0; e < (int)m.graph->edges().size(); ++e) {
    const auto& edge = m.graph->edges()[e];
    for (int side = 0; side < 2; ++side) {
      if (!m.rho[e][side]) continue;
      ordered_json jr;
      jr["edge"] = e;
      jr["vertex"] = m.graph->id(side == 0 ? edge.u : edge.v);
      ordered_json mat = ordered_json::array();
      for (const auto& row : m.rho[e][side]->entries()) {
        ordered_json jrow = ordered_json::array();
        for (const auto& p : row) jrow.push_back(poly_to_json(p, dim));
        mat.push_back(std::move(jrow));
      }
      jr["matrix"] = std::move(mat);
      rho.push_back(std::move(jr));
    }
  }
  j["rho"] = std::move(rho);
  return j;
}

GSheaf sheaf_from_json(const ordered_json& j) {
  auto graph = std::make_shared<const MomentGraph>(graph_from_json(j.at("graph")));
  int dim = graph->dim();
  int cap = j.at("cap").get<int>();
  auto ring = std::make_shared<PolyRing>(dim);
  GSheaf m;
  m.graph = graph;
  m.cap = cap;

  auto read_relations = [&](const ordered_json& js, AmbientPtr amb)
      -> std::shared_ptr<const GradedSubmodule> {
    if (!js.contains("relations")) return nullptr;
    auto gens = gens_from_json(js.at("relations"), dim, amb->comps().size());
    auto rels = GradedSubmodule::span(amb, std::move(gens), cap);
    bool nonzero = false;
    for (int d = amb->min_degree(); d <= cap; d += 2)
      if (rels.dim(d) > 0) nonzero = true;
    if (!nonzero) return nullptr;
    return std::make_shared<const GradedSubmodule>(std::move(rels));
  };

  m.vstalks.resize(graph->num_vertices());
  for (const auto& js : j.at("stalks")) {
    int v = graph->require_vertex(js.at("vertex").get<std::string>());
    auto shifts = js.at("shifts").get<std::vector<int>>();
    VertexStalk stalk;
    if (shifts.empty()) {
      stalk.pres = Presentation::zero(ring, cap);
    } else {
      std::vector<AmbientComponent> comps;
      for (int s : shifts) comps.push_back({s, std::nullopt});
      auto amb = std::make_shared<AmbientModule>(ring, comps);
      stalk.pres = std::make_shared<Presentation>(amb, read_relations(js, amb), cap);
    }
    if (js.contains("cover"))
      for (const auto& c : js.at("cover")) stalk.cover_into_S.push_back(poly_from_json(c, dim));
    stalk.warn_not_free = js.value("not_free", false);
    m.vstalks[v] = std::move(stalk);
  }

  m.estalks.resize(graph->edges().size());
  m.rho.assign(graph->edges().size(), {std::nullopt, std::nullopt});
  for (const auto& js : j.at("edges")) {
    int e = js.at("edge").get<int>();
    if (e < 0 || e >= (int)graph->edges().size())
      throw std::invalid_argument("edge index out of range in sheaf JSON");
    auto shifts = js.at("shifts").get<std::vector<int>>();
    if (shifts.empty()) {
      m.estalks[e] = {Presentation::zero(ring, cap)};
    } else {
      std::vector<AmbientComponent> comps;
      for (int s : shifts) comps.push_back({s, graph->edges()[e].label});
      auto amb = std::make_shared<AmbientModule>(ring, comps);
      m.estalks[e] = {std::make_shared<Presentation>(amb, read_relations(js, amb), cap)};
    }
  }

  if (j.contains("rho")) {
    for (const auto& jr : j.at("rho")) {
      int e = jr.at("edge").get<int>();
      int v = graph->require_vertex(jr.at("vertex").get<std::string>());
      const auto& edge = graph->edges()[e];
      int side = v == edge.u ? 0 : (v == edge.v ? 1 : -1);
      if (side < 0) throw std::invalid_argument("rho vertex is not an endpoint");
      if (m.vstalks[v].is_zero() || m.estalks[e].is_zero())
        throw std::invalid_argument("rho attached to a zero stalk");
      std::vector<std::vector<Poly>> entries;
      for (const auto& jrow : jr.at("matrix")) {
        std::vector<Poly> row;
        for (const auto& p : jrow) row.push_back(poly_from_json(p, dim));
        entries.push_back(std::move(row));
      }
      m.rho[e][side] = PolyMap(m.vstalks[v].pres->ambient(),
                               m.estalks[e].pres->ambient(), std::move(entries));
    }
  }

  // nonzero edge stalks need rho on every nonzero endpoint stalk
  for (int e = 0; e < (int)graph->edges().size(); ++e) {
    if (m.estalks[e].is_zero()) continue;
    const auto& edge = graph->edges()[e];
    if (!m.vstalks[edge.u].is_zero() && !m.rho[e][0])
      throw std::invalid_argument("missing rho for edge " + std::to_string(e));
    if (!m.vstalks[edge.v].is_zero() && !m.rho[e][1])
      throw std::invalid_argument("missing rho for edge " + std::to_string(e));
  }
  return m;
}

ordered_json laurent_to_json(const LaurentPoly& p) {
  ordered_json arr = ordered_json::array();
  for (long long c : p.c) arr.push_back(c);
  return arr;
}

ordered_json bmp_to_json(const BMPSheaf& b) {
  ordered_json j;
  j["base_vertex"] = b.sheaf.graph->id(b.base_vertex);
  j["cap"] = b.cap;
  ordered_json ext = ordered_json::array();
  for (int v : b.order_used) ext.push_back(b.sheaf.graph->id(v));
  j["linear_extension"] = std::move(ext);
  j["sheaf"] = sheaf_to_json(b.sheaf);
  ordered_json trace = ordered_json::array();
  for (const auto& t : b.trace) {
    ordered_json jt;
    jt["vertex"] = b.sheaf.graph->id(t.vertex);
    ordered_json hf;
    for (const auto& [d, n] : t.delta_hilbert) hf[std::to_string(d)] = n;
    jt["delta_hilbert"] = std::move(hf);
    jt["generator_degrees"] = t.generator_degrees;
    trace.push_back(std::move(jt));
  }
  j["trace"] = std::move(trace);
  ordered_json chars;
  for (const auto& [id, p] : bmp_character(b)) chars[id] = laurent_to_json(p);
  j["characters"] = std::move(chars);
  return j;
}

ordered_json kl_table_to_json(const CoxeterGroup& group, const KLTable& t) {
  ordered_json j;
  j["w"] = group.word_string(t.w);
  ordered_json p;
  for (int x : t.interval) p[group.word_string(x)] = laurent_to_json(t.p.at(x));
  j["polynomials"] = std::move(p);
  return j;
}

ordered_json kl_compare_to_json(const KLCompareReport& r) {
  ordered_json j;
  j["top"] = r.top_word;
  j["cap"] = r.cap;
  j["external_cross_check"] = true;
  j["all_match"] = r.all_match;
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.entries) {
    ordered_json je;
    je["vertex"] = e.vertex;
    je["kl_in_t"] = laurent_to_json(e.expected_in_t);
    je["stalk_character"] = laurent_to_json(e.stalk_character);
    je["match"] = e.match;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

ordered_json make_report(const std::string& command, const std::string& inputs_digest,
                         int cap, const std::string& mode, ordered_json results) {
  ordered_json j;
  j["command"] = command;
  j["engine_version"] = kEngineVersion;
  j["inputs_digest"] = inputs_digest;
  j["cap"] = cap;
  if (!mode.empty()) j["mode"] = mode;
  j["results"] = std::move(results);
  return j;
}

std::string fnv1a_digest(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

} // namespace gkm
