// Command-line entry point: graph generation, structure algebra,
// sections, localization, flag diagnostics, canonical sheaves, and the
// Kazhdan-Lusztig cross-check.
//
// Exit codes: 0 success, 2 validation/schema failure, 3 cap abort,
// 4 KL mismatch. Reports are machine-readable JSON on stdout (or --out);
// human summaries and timing go to stderr.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "gkm/json_io.hpp"
#include "gkm/parallel.hpp"

using namespace gkm;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const ordered_json& j, const std::string& out_path) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + out_path);
    out << text;
  }
}

GraphPtr load_graph(const std::string& path) {
  return std::make_shared<const MomentGraph>(
      graph_from_json(ordered_json::parse(read_file(path))));
}

LinForm parse_vector(const std::string& text) {
  std::vector<BigRat> coeffs;
  std::string tok;
  std::istringstream is(text);
  while (std::getline(is, tok, ',')) coeffs.push_back(BigRat::parse(tok));
  return LinForm(std::move(coeffs));
}

std::vector<int> parse_parabolic(const std::string& text) {
  std::vector<int> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok.size() < 2 || tok[0] != 's')
      throw std::invalid_argument("bad parabolic token: " + tok);
    out.push_back(atoi(tok.c_str() + 1) - 1);
  }
  return out;
}

std::vector<int> parse_open(const MomentGraph& g, const std::string& text) {
  if (text.empty() || text == "all") {
    std::vector<int> all(g.num_vertices());
    for (int i = 0; i < (int)all.size(); ++i) all[i] = i;
    return all;
  }
  std::vector<int> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(g.require_vertex(tok));
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations with sheaves on moment graphs"};
  app.require_subcommand(1);

  // ---- graph ----
  auto* graph_cmd = app.add_subcommand("graph", "generate and transform moment graphs");
  graph_cmd->require_subcommand(1);

  std::string type = "A2", parabolic, out_path, name = "subgeneric";
  std::string label_text = "1", alpha_text = "1,0", beta_text = "0,1";
  std::string graph_path, gamma_text;
  int dim = 1;

  auto* cox = graph_cmd->add_subcommand("coxeter", "Bruhat moment graph of a Coxeter system");
  cox->add_option("--type", type, "A<n>, B<n>, C<n>, D<n>, G2, I2(3|4|6)");
  cox->add_option("--parabolic", parabolic, "simple reflections, e.g. \"s1 s3\"");
  cox->add_option("--out", out_path);

  auto* builtin = graph_cmd->add_subcommand("builtin", "generic, subgeneric, diamond");
  builtin->add_option("--name", name, "generic | subgeneric | diamond")->required();
  builtin->add_option("--dim", dim, "dimension of V for the generic graph");
  builtin->add_option("--label", label_text, "subgeneric edge label, e.g. \"1\"");
  builtin->add_option("--alpha", alpha_text, "first diamond label");
  builtin->add_option("--beta", beta_text, "second diamond label");
  builtin->add_option("--out", out_path);

  auto* tilt = graph_cmd->add_subcommand("tilt", "reverse the order");
  tilt->add_option("--graph", graph_path)->required();
  tilt->add_option("--out", out_path);

  auto* reduce = graph_cmd->add_subcommand("reduce", "keep only edges proportional to gamma");
  reduce->add_option("--graph", graph_path)->required();
  reduce->add_option("--gamma", gamma_text)->required();
  reduce->add_option("--out", out_path);

  // ---- zalg ----
  auto* zalg = app.add_subcommand("zalg", "structure algebra of a graph");
  std::string zalg_graph;
  int max_degree = -1;
  zalg->add_option("--graph", zalg_graph)->required();
  zalg->add_option("--max-degree", max_degree, "even cap D (default 2#vertices)");
  zalg->add_option("--out", out_path);

  // ---- sections ----
  auto* sections = app.add_subcommand("sections", "sections of a sheaf over a subset");
  std::string sheaf_path, sections_graph, open_text;
  sections->add_option("--sheaf", sheaf_path, "sheaf JSON");
  sections->add_option("--graph", sections_graph, "graph JSON (use its structure sheaf)");
  sections->add_option("--open", open_text, "comma-separated vertex ids; default all");
  sections->add_option("--max-degree", max_degree);
  sections->add_option("--out", out_path);

  // ---- localize ----
  auto* loc = app.add_subcommand("localize", "localization of a module");
  std::string module_path;
  loc->add_option("--module", module_path)->required();
  loc->add_option("--out", out_path);

  // ---- flags ----
  auto* flags = app.add_subcommand("flags", "Verma flag and flabbiness of a module");
  flags->add_option("--module", module_path)->required();
  flags->add_option("--out", out_path);

  // ---- bmp ----
  auto* bmp = app.add_subcommand("bmp", "Braden-MacPherson canonical sheaf");
  std::string bmp_graph, vertex_id;
  bmp->add_option("--graph", bmp_graph)->required();
  bmp->add_option("--vertex", vertex_id)->required();
  bmp->add_option("--max-degree", max_degree, "even cap D (default 2#up-set)");
  bmp->add_option("--out", out_path);

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "cross-checks");
  verify->require_subcommand(1);
  auto* vkl = verify->add_subcommand("kl", "stalk characters against KL polynomials");
  std::string w_text;
  vkl->add_option("--type", type)->required();
  vkl->add_option("--w", w_text, "top element as a word, e.g. \"s2 s1 s3 s2\"")->required();
  vkl->add_option("--max-degree", max_degree, "even cap D (default 2 l(w) + 4)");
  vkl->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);
  Timer timer;

  try {
    if (cox->parsed()) {
      auto sys = CoxeterSystem::from_type(type);
      auto g = bruhat_moment_graph(sys, parse_parabolic(parabolic));
      emit(graph_to_json(g), out_path);
      std::cerr << "coxeter graph " << type << ": " << g.num_vertices() << " vertices, "
                << g.edges().size() << " edges [" << timer.seconds() << "s]\n";
    } else if (builtin->parsed()) {
      std::optional<MomentGraph> g;
      if (name == "generic") g = generic_graph(dim);
      else if (name == "subgeneric") g = subgeneric_graph(parse_vector(label_text));
      else if (name == "diamond")
        g = diamond_graph(parse_vector(alpha_text), parse_vector(beta_text));
      else throw std::invalid_argument("unknown builtin graph: " + name);
      emit(graph_to_json(*g), out_path);
      std::cerr << "builtin graph " << name << " [" << timer.seconds() << "s]\n";
    } else if (tilt->parsed()) {
      auto g = load_graph(graph_path);
      emit(graph_to_json(g->tilted()), out_path);
      std::cerr << "tilted graph [" << timer.seconds() << "s]\n";
    } else if (reduce->parsed()) {
      auto g = load_graph(graph_path);
      emit(graph_to_json(g->gamma_reduced(parse_vector(gamma_text))), out_path);
      std::cerr << "gamma-reduced graph [" << timer.seconds() << "s]\n";
    } else if (zalg->parsed()) {
      auto g = load_graph(zalg_graph);
      int cap = max_degree >= 0 ? max_degree : 2 * g->num_vertices();
      ZModule z = structure_algebra(g, cap);
      ordered_json results;
      results["minimal_generator_degrees"] = z.minimal_generator_degrees();
      ordered_json hf;
      for (const auto& [d, n] : z.hilbert_function()) hf[std::to_string(d)] = n;
      results["hilbert_function"] = std::move(hf);
      results["module"] = zmodule_to_json(z);
      std::string digest = fnv1a_digest(read_file(zalg_graph) + "|" + std::to_string(cap));
      emit(make_report("zalg", digest, cap, "", std::move(results)), out_path);
      std::cerr << "structure algebra with " << z.inner.minimal_generators().size()
                << " generators [" << timer.seconds() << "s]\n";
    } else if (sections->parsed()) {
      GSheaf m;
      std::string raw;
      if (!sheaf_path.empty()) {
        raw = read_file(sheaf_path);
        m = sheaf_from_json(ordered_json::parse(raw));
        if (max_degree >= 0 && max_degree != m.cap)
          throw std::invalid_argument("sheaf JSON fixes the cap; omit --max-degree");
      } else if (!sections_graph.empty()) {
        raw = read_file(sections_graph);
        auto g = load_graph(sections_graph);
        int cap = max_degree >= 0 ? max_degree : 2 * g->num_vertices();
        m = GSheaf::structure(g, cap);
      } else {
        throw std::invalid_argument("sections needs --sheaf or --graph");
      }
      auto subset = parse_open(*m.graph, open_text);
      SectionSpace sec = compute_sections(m, subset);
      ordered_json results;
      ordered_json ids = ordered_json::array();
      for (int v : sec.subset) ids.push_back(m.graph->id(v));
      results["subset"] = std::move(ids);
      ordered_json hf;
      for (const auto& [d, n] : sec.hilbert_function()) hf[std::to_string(d)] = n;
      results["hilbert_function"] = std::move(hf);
      results["minimal_generator_degrees"] = sec.minimal_generator_degrees();
      ordered_json gens = ordered_json::array();
      for (const auto& [d, row] : sec.minimal_generators()) {
        ordered_json jg;
        jg["degree"] = d;
        ordered_json comps;
        for (int i = 0; i < (int)sec.subset.size(); ++i) {
          const auto& pres = m.vstalks[sec.subset[i]].pres;
          BRow block = sec.space.block_of(row, i, d);
          auto tuple = pres->ambient()->row_to_tuple(pres->decompress(block, d), d);
          ordered_json jt = ordered_json::array();
          for (const auto& p : tuple) jt.push_back(poly_to_json(p, m.graph->dim()));
          comps[m.graph->id(sec.subset[i])] = std::move(jt);
        }
        jg["components"] = std::move(comps);
        gens.push_back(std::move(jg));
      }
      results["generators"] = std::move(gens);
      std::string digest = fnv1a_digest(raw + "|" + open_text + "|" + std::to_string(m.cap));
      emit(make_report("sections", digest, m.cap, "", std::move(results)), out_path);
      std::cerr << "sections over " << sec.subset.size() << " vertices ["
                << timer.seconds() << "s]\n";
    } else if (loc->parsed()) {
      std::string raw = read_file(module_path);
      ZModule m = zmodule_from_json(ordered_json::parse(raw));
      GSheaf sheaf = localize(m);
      ordered_json results;
      results["sheaf"] = sheaf_to_json(sheaf);
      ordered_json warns = ordered_json::array();
      for (int v = 0; v < m.graph->num_vertices(); ++v)
        if (sheaf.vstalks[v].warn_not_free) warns.push_back(m.graph->id(v));
      results["non_free_stalks"] = std::move(warns);
      std::string digest = fnv1a_digest(raw);
      emit(make_report("localize", digest, m.cap, "", std::move(results)), out_path);
      std::cerr << "localized module [" << timer.seconds() << "s]\n";
    } else if (flags->parsed()) {
      std::string raw = read_file(module_path);
      ZModule m = zmodule_from_json(ordered_json::parse(raw));
      auto vf = verma_flag(m);
      auto fl = is_flabby_module(m);
      ordered_json results;
      ordered_json jvf;
      jvf["has_flag"] = vf.has_flag;
      ordered_json flag;
      for (const auto& [id, degs] : vf.flag) flag[id] = degs;
      jvf["flag"] = std::move(flag);
      if (vf.failure)
        jvf["failure"] = ordered_json::array({vf.failure->first, vf.failure->second});
      results["verma_flag"] = std::move(jvf);
      ordered_json jfl;
      jfl["flabby"] = fl.flabby;
      jfl["mode"] = fl.mode;
      if (!fl.witness.empty()) jfl["witness"] = fl.witness;
      results["flabbiness"] = std::move(jfl);
      std::string digest = fnv1a_digest(raw);
      emit(make_report("flags", digest, m.cap, fl.mode, std::move(results)), out_path);
      std::cerr << "verma flag: " << (vf.has_flag ? "yes" : "no") << ", flabby: "
                << (fl.flabby ? "yes" : "no") << " [" << timer.seconds() << "s]\n";
    } else if (bmp->parsed()) {
      std::string raw = read_file(bmp_graph);
      auto g = load_graph(bmp_graph);
      int v = g->require_vertex(vertex_id);
      int cap = max_degree >= 0 ? max_degree : 2 * (int)g->greater_eq(v).size();
      BMPSheaf b = build_bmp(g, v, cap);
      std::string digest = fnv1a_digest(raw + "|" + vertex_id + "|" + std::to_string(cap));
      emit(make_report("bmp", digest, cap, "", bmp_to_json(b)), out_path);
      std::cerr << "canonical sheaf at " << vertex_id << ", support "
                << bmp_character(b).size() << " vertices [" << timer.seconds() << "s]\n";
    } else if (vkl->parsed()) {
      auto sys = CoxeterSystem::from_type(type);
      CoxeterGroup group = CoxeterGroup::enumerate(sys);
      int w = group.parse_word(w_text);
      int cap = max_degree >= 0 ? max_degree : 2 * group.length(w) + 4;
      KLCompareReport rep = compare_bmp_kl(sys, w_text, cap);
      ordered_json results = kl_compare_to_json(rep);
      results["kl_table"] = kl_table_to_json(group, kl_polynomials(group, w));
      std::string digest = fnv1a_digest(type + "|" + w_text + "|" + std::to_string(cap));
      emit(make_report("verify-kl", digest, cap, "external cross-check", std::move(results)),
           out_path);
      std::cerr << "KL cross-check for " << rep.top_word << ": "
                << (rep.all_match ? "match" : "MISMATCH") << " [" << timer.seconds() << "s]\n";
      if (!rep.all_match) return 4;
    }
  } catch (const cap_abort_error& e) {
    std::cerr << "cap abort: " << e.what() << "\n";
    return 3;
  } catch (const infinite_group_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const glob_precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
