#include "gkm/kl.hpp"

#include <algorithm>
#include <sstream>

#include "gkm/bmp.hpp"

namespace gkm {

bool LaurentPoly::is_zero() const {
  for (long long v : c)
    if (v != 0) return false;
  return true;
}

int LaurentPoly::degree() const {
  for (int k = (int)c.size() - 1; k >= 0; --k)
    if (c[k] != 0) return k;
  return -1;
}

void LaurentPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r;
  if (is_zero()) return r;
  r.c.assign(c.size() + k, 0);
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i + k] = c[i];
  return r;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.coeff((int)i) + b.coeff((int)i);
  r.trim();
  return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
  return a + b.scaled(-1);
}

LaurentPoly LaurentPoly::scaled(long long f) const {
  LaurentPoly r = *this;
  for (auto& v : r.c) v *= f;
  r.trim();
  return r;
}

std::string LaurentPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < (int)c.size(); ++k) {
    if (c[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (c[k] != 1 || k == 0) os << c[k];
    if (k >= 1) {
      if (c[k] != 1) os << "*";
      os << "q";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

namespace {

// tables P_{x,y} for all y in [e, w], built by increasing length of y
struct KLContext {
  const CoxeterGroup& g;
  DescentPolicy policy;
  std::map<int, std::map<int, LaurentPoly>> tables; // y -> (x -> P_{x,y})

  explicit KLContext(const CoxeterGroup& group, DescentPolicy pol) : g(group), policy(pol) {}

  int descent(int w) const {
    // right descent per policy
    int found = -1;
    for (int s = 0; s < g.rank(); ++s) {
      if (g.length(g.right_mult(w, s)) < g.length(w)) {
        found = s;
        if (policy == DescentPolicy::First) return s;
      }
    }
    return found;
  }

  const LaurentPoly& P(int x, int y) {
    static const LaurentPoly kZero = LaurentPoly::zero();
    static const LaurentPoly kOne = LaurentPoly::one();
    if (x == y) return kOne;
    if (!g.bruhat_leq(x, y)) return kZero;
    auto& table = tables[y];
    auto it = table.find(x);
    if (it != table.end()) return it->second;

    int s = descent(y);
    int v = g.right_mult(y, s); // v = ys < y
    int xs = g.right_mult(x, s);
    bool x_descends = g.length(xs) < g.length(x);
    // P_{x,y} = q^{1-c} P_{xs,v} + q^c P_{x,v} - sum mu(z,v) q^{(l(y)-l(z))/2} P_{x,z}
    int c = x_descends ? 1 : 0;
    LaurentPoly acc = P(xs, v).shifted(1 - c) + P(x, v).shifted(c);
    for (int z = 0; z < g.size(); ++z) {
      if (!g.bruhat_leq(x, z) || !g.bruhat_leq(z, v)) continue;
      if (g.length(g.right_mult(z, s)) >= g.length(z)) continue; // need zs < z
      int gap = g.length(v) - g.length(z);
      if (gap % 2 == 0) continue; // mu vanishes
      long long mu = P(z, v).coeff((gap - 1) / 2);
      if (mu == 0) continue;
      acc = acc - P(x, z).scaled(mu).shifted((g.length(y) - g.length(z)) / 2);
    }
    acc.trim();
    return table.emplace(x, std::move(acc)).first->second;
  }
};

} // namespace

KLTable kl_polynomials(const CoxeterGroup& group, int w, DescentPolicy policy) {
  KLContext ctx(group, policy);
  KLTable out;
  out.w = w;
  for (int x = 0; x < group.size(); ++x)
    if (group.bruhat_leq(x, w)) out.interval.push_back(x);
  std::sort(out.interval.begin(), out.interval.end(), [&](int a, int b) {
    if (group.length(a) != group.length(b)) return group.length(a) < group.length(b);
    return a < b;
  });
  for (int x : out.interval) out.p[x] = ctx.P(x, w);
  return out;
}

KLCompareReport compare_bmp_kl(const CoxeterSystem& system, const std::string& w_word,
                               int cap) {
  CoxeterGroup group = CoxeterGroup::enumerate(system);
  int w = group.parse_word(w_word);

  KLCompareReport report;
  report.cap = cap;
  report.top_word = group.word_string(w);

  MomentGraph graph = bruhat_moment_graph(system, {});
  MomentGraph tilted = graph.tilted();
  auto tilted_ptr = std::make_shared<const MomentGraph>(std::move(tilted));
  BMPSheaf b = build_bmp(tilted_ptr, tilted_ptr->require_vertex(report.top_word), cap);
  auto characters = bmp_character(b);

  KLTable table = kl_polynomials(group, w);

  report.all_match = true;
  for (int x : table.interval) {
    KLCompareEntry entry;
    entry.vertex = group.word_string(x);
    const LaurentPoly& p = table.p.at(x);
    // substitute q = t^2
    for (int k = 0; k <= p.degree(); ++k) {
      long long ck = p.coeff(k);
      if (ck == 0) continue;
      while ((int)entry.expected_in_t.c.size() <= 2 * k) entry.expected_in_t.c.push_back(0);
      entry.expected_in_t.c[2 * k] = ck;
    }
    entry.stalk_character = characters.at(entry.vertex);
    entry.match = entry.expected_in_t == entry.stalk_character;
    // total-rank cross check at t = 1
    long long lhs = 0, rhs = 0;
    for (long long v : entry.expected_in_t.c) lhs += v;
    for (long long v : entry.stalk_character.c) rhs += v;
    entry.match = entry.match && lhs == rhs;
    report.all_match = report.all_match && entry.match;
    report.entries.push_back(std::move(entry));
  }

  // every stalk outside [e, w] must vanish
  for (int v = 0; v < tilted_ptr->num_vertices(); ++v) {
    const std::string& id = tilted_ptr->id(v);
    bool in_interval = false;
    for (int x : table.interval)
      if (group.word_string(x) == id) { in_interval = true; break; }
    if (!in_interval && characters.count(id) && !characters.at(id).is_zero()) {
      report.all_match = false;
      KLCompareEntry entry;
      entry.vertex = id;
      entry.stalk_character = characters.at(id);
      entry.match = false;
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

} // namespace gkm
