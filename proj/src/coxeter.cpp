#include "gkm/coxeter.hpp"

#include <algorithm>
#include <sstream>

namespace gkm {

namespace {

WMat mat_identity(int n) {
  WMat m(n * n, 0);
  for (int i = 0; i < n; ++i) m[i * n + i] = 1;
  return m;
}

WMat mat_mul(const WMat& a, const WMat& b, int n) {
  WMat c(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      long long v = a[i * n + k];
      if (v == 0) continue;
      for (int j = 0; j < n; ++j) c[i * n + j] += v * b[k * n + j];
    }
  return c;
}

std::vector<BigRat> mat_apply(const WMat& a, const std::vector<BigRat>& v, int n) {
  std::vector<BigRat> out(n);
  for (int i = 0; i < n; ++i) {
    BigRat acc;
    for (int j = 0; j < n; ++j)
      if (a[i * n + j] != 0) acc += BigRat(a[i * n + j]) * v[j];
    out[i] = acc;
  }
  return out;
}

int fixed_space_codim(const WMat& m, int n) {
  // rank of (M - I) over Q; integer Gaussian elimination with rationals
  std::vector<std::vector<BigRat>> rows(n, std::vector<BigRat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rows[i][j] = BigRat(m[i * n + j] - (i == j ? 1 : 0));
  int rank = 0;
  for (int c = 0; c < n && rank < n; ++c) {
    int piv = -1;
    for (int i = rank; i < n; ++i)
      if (!rows[i][c].is_zero()) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    for (int i = 0; i < n; ++i) {
      if (i == rank || rows[i][c].is_zero()) continue;
      BigRat f = rows[i][c] / rows[rank][c];
      for (int j = c; j < n; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

struct MatKey {
  std::size_t operator()(const WMat& m) const {
    std::size_t h = 1469598103934665603ull;
    for (long long v : m) {
      h ^= (std::size_t)v + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

long long factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

} // namespace

CoxeterSystem CoxeterSystem::from_type(const std::string& type) {
  auto fail = [&]() -> CoxeterSystem {
    throw std::invalid_argument("unsupported Coxeter type: " + type +
                                " (crystallographic types only)");
  };
  if (type.size() < 2) return fail();
  char family = type[0];
  std::vector<std::vector<long long>> cartan;
  long long order = 0;

  auto chain = [](int n, std::vector<std::vector<long long>>& a) {
    a.assign(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 2;
    for (int i = 0; i + 1 < n; ++i) a[i][i + 1] = a[i + 1][i] = -1;
  };

  if (family == 'I') {
    // I2(m) for crystallographic m
    int m = 0;
    if (sscanf(type.c_str(), "I2(%d)", &m) != 1) return fail();
    if (m == 3) cartan = {{2, -1}, {-1, 2}};
    else if (m == 4) cartan = {{2, -1}, {-2, 2}};
    else if (m == 6) cartan = {{2, -1}, {-3, 2}};
    else return fail();
    order = 2 * m;
  } else if (family == 'G') {
    if (type != "G2") return fail();
    cartan = {{2, -1}, {-3, 2}};
    order = 12;
  } else {
    int n = atoi(type.c_str() + 1);
    if (n < 1) return fail();
    switch (family) {
      case 'A':
        chain(n, cartan);
        order = factorial(n + 1);
        break;
      case 'B':
        if (n < 2) return fail();
        chain(n, cartan);
        cartan[n - 2][n - 1] = -2;
        order = factorial(n) << n;
        break;
      case 'C':
        if (n < 2) return fail();
        chain(n, cartan);
        cartan[n - 1][n - 2] = -2;
        order = factorial(n) << n;
        break;
      case 'D':
        if (n < 3) return fail();
        chain(n - 1, cartan);
        cartan.resize(n);
        for (auto& row : cartan) row.resize(n, 0);
        cartan[n - 1][n - 1] = 2;
        cartan[n - 1][n - 3] = cartan[n - 3][n - 1] = -1;
        order = factorial(n) << (n - 1);
        break;
      default:
        return fail();
    }
  }
  CoxeterSystem sys = from_cartan(std::move(cartan), type);
  sys.order_bound_ = order;
  return sys;
}

CoxeterSystem CoxeterSystem::from_cartan(std::vector<std::vector<long long>> cartan,
                                         std::string name) {
  CoxeterSystem sys;
  sys.rank_ = (int)cartan.size();
  sys.name_ = std::move(name);
  if (sys.rank_ < 1 || sys.rank_ > kMaxVars)
    throw std::invalid_argument("Cartan rank must be 1..8");
  for (int i = 0; i < sys.rank_; ++i) {
    if ((int)cartan[i].size() != sys.rank_)
      throw std::invalid_argument("Cartan matrix is not square");
    if (cartan[i][i] != 2) throw std::invalid_argument("Cartan diagonal must be 2");
    for (int j = 0; j < sys.rank_; ++j) {
      if (i == j) continue;
      if (cartan[i][j] > 0)
        throw std::invalid_argument("off-diagonal Cartan entries must be <= 0");
      if ((cartan[i][j] == 0) != (cartan[j][i] == 0))
        throw std::invalid_argument("Cartan zero pattern must be symmetric");
    }
  }
  sys.cartan_ = std::move(cartan);
  sys.build_simples();
  sys.verify_relations();
  return sys;
}

void CoxeterSystem::build_simples() {
  int n = rank_;
  simples_.clear();
  for (int i = 0; i < n; ++i) {
    // s_i(v) = v - <v, alpha_i^vee> alpha_i on the root basis
    WMat m = mat_identity(n);
    for (int j = 0; j < n; ++j) m[i * n + j] -= cartan_[i][j];
    simples_.push_back(std::move(m));
  }
}

int CoxeterSystem::coxeter_order(int i, int j) const {
  if (i == j) return 1;
  long long p = cartan_[i][j] * cartan_[j][i];
  switch (p) {
    case 0: return 2;
    case 1: return 3;
    case 2: return 4;
    case 3: return 6;
    default: return 0; // infinite bond
  }
}

void CoxeterSystem::verify_relations() const {
  int n = rank_;
  for (int i = 0; i < n; ++i) {
    WMat sq = mat_mul(simples_[i], simples_[i], n);
    if (sq != mat_identity(n))
      throw std::logic_error("simple reflection does not square to the identity");
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int m = coxeter_order(i, j);
      if (m == 0) continue;
      WMat prod = mat_mul(simples_[i], simples_[j], n);
      WMat acc = mat_identity(n);
      for (int k = 0; k < m; ++k) acc = mat_mul(acc, prod, n);
      if (acc != mat_identity(n))
        throw std::logic_error("braid relation fails for the given Coxeter matrix");
    }
}

CoxeterGroup CoxeterGroup::enumerate(const CoxeterSystem& system, long long max_elements) {
  long long cap = system.group_order_bound() > 0 ? system.group_order_bound() : max_elements;
  CoxeterGroup g(system);
  int n = system.rank();
  std::unordered_map<WMat, int, MatKey> lookup;

  g.elements_.push_back(mat_identity(n));
  g.length_.push_back(0);
  g.words_.push_back({});
  lookup[g.elements_[0]] = 0;

  // BFS with ascending generators yields ShortLex-minimal words
  for (std::size_t head = 0; head < g.elements_.size(); ++head) {
    for (int s = 0; s < n; ++s) {
      WMat next = mat_mul(g.elements_[head], system.simple_reflection(s), n);
      auto it = lookup.find(next);
      if (it == lookup.end()) {
        if ((long long)g.elements_.size() >= cap)
          throw infinite_group_error("group enumeration exceeded " + std::to_string(cap) +
                                     " elements; group is infinite or too large");
        int idx = (int)g.elements_.size();
        lookup[next] = idx;
        g.elements_.push_back(std::move(next));
        g.length_.push_back(g.length_[head] + 1);
        auto w = g.words_[head];
        w.push_back(s);
        g.words_.push_back(std::move(w));
      }
    }
  }

  int N = g.size();
  g.left_.assign(n, std::vector<int>(N));
  g.right_.assign(n, std::vector<int>(N));
  for (int w = 0; w < N; ++w)
    for (int s = 0; s < n; ++s) {
      g.right_[s][w] = lookup.at(mat_mul(g.elements_[w], system.simple_reflection(s), n));
      g.left_[s][w] = lookup.at(mat_mul(system.simple_reflection(s), g.elements_[w], n));
    }

  for (int w = 1; w < N; ++w)
    if (fixed_space_codim(g.elements_[w], n) == 1) g.reflections_.push_back(w);

  g.leq_memo_.assign((std::size_t)N * N, -1);
  return g;
}

std::string CoxeterGroup::word_string(int w) const {
  if (words_[w].empty()) return "e";
  std::ostringstream os;
  for (std::size_t i = 0; i < words_[w].size(); ++i) {
    if (i) os << " ";
    os << "s" << (words_[w][i] + 1);
  }
  return os.str();
}

int CoxeterGroup::from_word(const std::vector<int>& letters) const {
  int w = 0;
  for (int s : letters) {
    if (s < 0 || s >= rank()) throw std::invalid_argument("generator index out of range");
    w = right_[s][w];
  }
  return w;
}

int CoxeterGroup::parse_word(const std::string& text) const {
  std::istringstream is(text);
  std::string tok;
  std::vector<int> letters;
  while (is >> tok) {
    if (tok == "e") continue;
    if (tok.size() < 2 || tok[0] != 's')
      throw std::invalid_argument("bad generator token: " + tok);
    letters.push_back(atoi(tok.c_str() + 1) - 1);
  }
  return from_word(letters);
}

bool CoxeterGroup::bruhat_leq(int x, int w) const {
  if (x == w || x == 0) return true;
  if (length_[x] >= length_[w]) return false;
  std::int8_t& memo = leq_memo_[(std::size_t)x * size() + w];
  if (memo >= 0) return memo != 0;
  // take the first left descent s of w: x <= w iff min(x,sx) <= sw
  int s = -1;
  for (int i = 0; i < rank(); ++i)
    if (length_[left_[i][w]] < length_[w]) { s = i; break; }
  int sw = left_[s][w];
  int sx = left_[s][x];
  bool ans = length_[sx] < length_[x] ? bruhat_leq(sx, sw) : bruhat_leq(x, sw);
  memo = ans ? 1 : 0;
  return ans;
}

MomentGraph bruhat_moment_graph(const CoxeterSystem& system,
                                const std::vector<int>& parabolic,
                                long long max_elements) {
  CoxeterGroup group = CoxeterGroup::enumerate(system, max_elements);
  int n = system.rank();
  for (int p : parabolic)
    if (p < 0 || p >= n) throw std::invalid_argument("parabolic index out of range");

  // lambda = sum of fundamental weights for simple reflections off the
  // parabolic: solve cartan^T-free system A lambda_coords = e_k summed
  std::vector<BigRat> rhs(n);
  for (int k = 0; k < n; ++k) {
    bool in_parabolic = std::find(parabolic.begin(), parabolic.end(), k) != parabolic.end();
    rhs[k] = in_parabolic ? BigRat(0) : BigRat(1);
  }
  // solve A^T? No: lambda = sum_k w_k with <w_k, alpha_i^vee> = delta_ik;
  // in root coordinates, <v, alpha_i^vee> = (A v)_i, so solve A*lambda = rhs.
  std::vector<std::vector<BigRat>> a(n, std::vector<BigRat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = BigRat(system.cartan()[i][j]);
  std::vector<BigRat> lambda = rhs;
  {
    // dense exact Gauss solve
    std::vector<std::vector<BigRat>> m = a;
    std::vector<BigRat> b = rhs;
    for (int c = 0; c < n; ++c) {
      int piv = -1;
      for (int i = c; i < n; ++i)
        if (!m[i][c].is_zero()) { piv = i; break; }
      if (piv < 0) throw std::invalid_argument("Cartan matrix is singular");
      std::swap(m[c], m[piv]);
      std::swap(b[c], b[piv]);
      for (int i = 0; i < n; ++i) {
        if (i == c || m[i][c].is_zero()) continue;
        BigRat f = m[i][c] / m[c][c];
        for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        b[i] -= f * b[c];
      }
    }
    for (int i = 0; i < n; ++i) lambda[i] = b[i] / m[i][i];
  }

  // orbit BFS; vertex ids are the ShortLex-minimal words reaching a point
  std::map<std::vector<std::string>, int> point_index;
  auto key_of = [&](const std::vector<BigRat>& v) {
    std::vector<std::string> k;
    for (const auto& c : v) k.push_back(c.str());
    return k;
  };
  std::vector<std::vector<BigRat>> points;
  std::vector<std::string> ids;
  std::vector<int> depth;
  points.push_back(lambda);
  ids.push_back("e");
  depth.push_back(0);
  point_index[key_of(lambda)] = 0;
  for (std::size_t head = 0; head < points.size(); ++head) {
    for (int s = 0; s < n; ++s) {
      auto next = mat_apply(system.simple_reflection(s), points[head], n);
      auto key = key_of(next);
      if (point_index.find(key) == point_index.end()) {
        int idx = (int)points.size();
        point_index[key] = idx;
        std::string id = ids[head] == "e" ? "" : ids[head];
        // ShortLex words extend on the right
        id = id.empty() ? ("s" + std::to_string(s + 1))
                        : (id + " s" + std::to_string(s + 1));
        points.push_back(std::move(next));
        ids.push_back(std::move(id));
        depth.push_back(depth[head] + 1);
      }
    }
  }

  // edges: one per unordered orbit pair {mu, t mu}
  std::map<std::pair<int, int>, LinForm> edge_map;
  for (int t : group.reflections()) {
    const WMat& mt = group.matrix(t);
    for (int p = 0; p < (int)points.size(); ++p) {
      auto moved = mat_apply(mt, points[p], n);
      auto it = point_index.find(key_of(moved));
      if (it == point_index.end()) throw std::logic_error("orbit not closed under reflection");
      int q = it->second;
      if (q == p) continue;
      std::vector<BigRat> diff(n);
      for (int i = 0; i < n; ++i) diff[i] = points[p][i] - points[q][i];
      LinForm label(std::move(diff));
      int lo = depth[p] < depth[q] ? p : q;
      int hi = lo == p ? q : p;
      if (depth[p] == depth[q])
        throw std::logic_error("reflection connects cosets of equal length");
      auto key = std::make_pair(lo, hi);
      auto found = edge_map.find(key);
      if (found == edge_map.end()) {
        edge_map.emplace(key, std::move(label));
      } else if (!found->second.proportional_to(label)) {
        throw std::logic_error("conflicting labels for a quotient edge");
      }
    }
  }

  std::vector<GraphEdge> edges;
  for (auto& [key, label] : edge_map)
    edges.push_back(GraphEdge{key.first, key.second, std::move(label)});
  return MomentGraph(n, ids, std::move(edges));
}

} // namespace gkm
