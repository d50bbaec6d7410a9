#include "gkm/poly.hpp"

#include <functional>
#include <sstream>

namespace gkm {

PolyRing::PolyRing(int dim, std::vector<std::string> names)
    : dim_(dim), names_(std::move(names)) {
  if (dim < 1 || dim > kMaxVars) throw std::invalid_argument("PolyRing: dim must be 1..8");
  if (names_.empty()) {
    for (int i = 0; i < dim; ++i) names_.push_back("x" + std::to_string(i + 1));
  }
  if ((int)names_.size() != dim) throw std::invalid_argument("PolyRing: name count mismatch");
}

long long PolyRing::count_monos(int vars, int total_degree) {
  if (total_degree < 0) return 0;
  if (vars == 0) return total_degree == 0 ? 1 : 0;
  // C(total_degree + vars - 1, vars - 1)
  long long r = 1;
  for (int i = 1; i <= vars - 1; ++i) {
    r = r * (total_degree + i) / i;
  }
  return r;
}

const PolyRing::Table& PolyRing::table(int pivot, int t) const {
  std::lock_guard<std::mutex> lk(mutex_);
  int key = (pivot + 1) * 4096 + t;
  auto it = tables_.find(key);
  if (it != tables_.end()) return it->second;

  Table tab;
  std::vector<int> exps(dim_, 0);
  // enumerate exponent vectors of total degree t, skipping the pivot variable
  std::function<void(int, int)> rec = [&](int var, int remaining) {
    if (var == dim_) {
      if (remaining == 0) {
        Mono m = mono_one();
        for (int i = 0; i < dim_; ++i) m = mono_set_exp(m, i, exps[i]);
        tab.list.push_back(m);
      }
      return;
    }
    if (var == pivot) {
      rec(var + 1, remaining);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      exps[var] = e;
      rec(var + 1, remaining - e);
    }
    exps[var] = 0;
  };
  rec(0, t);
  std::sort(tab.list.begin(), tab.list.end(), mono_before);
  for (int i = 0; i < (int)tab.list.size(); ++i) tab.index[tab.list[i]] = i;
  return tables_.emplace(key, std::move(tab)).first->second;
}

const std::vector<Mono>& PolyRing::monos(int t) const { return table(-1, t).list; }

const std::vector<Mono>& PolyRing::monos_without(int pivot, int t) const {
  return table(pivot, t).list;
}

int PolyRing::mono_index(int t, Mono m) const {
  const auto& tab = table(-1, t);
  auto it = tab.index.find(m);
  if (it == tab.index.end()) throw std::logic_error("monomial not in degree table");
  return it->second;
}

int PolyRing::mono_index_without(int pivot, int t, Mono m) const {
  const auto& tab = table(pivot, t);
  auto it = tab.index.find(m);
  if (it == tab.index.end()) throw std::logic_error("monomial not in reduced table");
  return it->second;
}

std::optional<int> Poly::homogeneous_degree() const {
  if (terms_.empty()) return std::nullopt;
  int t = mono_total(terms_.front().first);
  for (const auto& [m, c] : terms_)
    if (mono_total(m) != t) return std::nullopt;
  return 2 * t;
}

Poly Poly::from_terms(std::vector<std::pair<Mono, BigRat>> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return mono_before(a.first, b.first); });
  Poly p;
  for (auto& [m, c] : terms) {
    if (c.is_zero()) continue;
    if (!p.terms_.empty() && p.terms_.back().first == m) {
      p.terms_.back().second += c;
      if (p.terms_.back().second.is_zero()) p.terms_.pop_back();
    } else {
      p.terms_.push_back({m, c});
    }
  }
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<std::pair<Mono, BigRat>> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin(), b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && mono_before(a->first, b->first))) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || mono_before(b->first, a->first)) {
      merged.push_back(*b++);
    } else {
      BigRat c = a->second + b->second;
      if (!c.is_zero()) merged.push_back({a->first, c});
      ++a;
      ++b;
    }
  }
  Poly p;
  p.terms_ = std::move(merged);
  return p;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& [m, c] : p.terms_) c = -c;
  return p;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::scaled(const BigRat& c) const {
  if (c.is_zero()) return Poly();
  Poly p = *this;
  for (auto& [m, co] : p.terms_) co *= c;
  return p;
}

Poly Poly::mul_mono(Mono m, const BigRat& c) const {
  if (c.is_zero()) return Poly();
  Poly p;
  p.terms_.reserve(terms_.size());
  for (const auto& [mm, cc] : terms_) {
    Mono prod = mm;
    for (int v = 0; v < kMaxVars; ++v) {
      int e = mono_exp(m, v);
      for (int i = 0; i < e; ++i) prod = mono_mul_var(prod, v);
    }
    p.terms_.push_back({prod, cc * c});
  }
  std::sort(p.terms_.begin(), p.terms_.end(),
            [](const auto& a, const auto& b) { return mono_before(a.first, b.first); });
  return p;
}

Poly Poly::operator*(const Poly& o) const {
  std::vector<std::pair<Mono, BigRat>> acc;
  for (const auto& [m, c] : o.terms()) {
    Poly part = mul_mono(m, c);
    for (auto& t : part.terms_) acc.push_back(t);
  }
  return from_terms(std::move(acc));
}

std::string Poly::str(const PolyRing& ring) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (int v = 0; v < ring.dim(); ++v) {
      int e = mono_exp(m, v);
      if (e == 0) continue;
      os << "*" << ring.var_names()[v];
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

LinForm::LinForm(std::vector<BigRat> coeffs) : coeffs_(std::move(coeffs)) {
  for (int i = 0; i < (int)coeffs_.size(); ++i) {
    if (!coeffs_[i].is_zero()) {
      pivot_ = i;
      break;
    }
  }
}

Poly LinForm::to_poly() const {
  std::vector<std::pair<Mono, BigRat>> terms;
  for (int i = 0; i < (int)coeffs_.size(); ++i)
    if (!coeffs_[i].is_zero())
      terms.push_back({mono_mul_var(mono_one(), i), coeffs_[i]});
  return Poly::from_terms(std::move(terms));
}

bool LinForm::proportional_to(const LinForm& o) const {
  if (pivot_ != o.pivot_) return false;
  if (pivot_ < 0) return true;
  // cross-multiply against the pivot coefficients
  const BigRat& a = coeffs_[pivot_];
  const BigRat& b = o.coeffs_[o.pivot_];
  for (int i = 0; i < (int)coeffs_.size(); ++i)
    if (coeffs_[i] * b != o.coeffs_[i] * a) return false;
  return true;
}

Poly LinForm::pivot_substitution() const {
  if (pivot_ < 0) throw std::logic_error("pivot of zero form");
  std::vector<std::pair<Mono, BigRat>> terms;
  BigRat inv = BigRat(-1) / coeffs_[pivot_];
  for (int i = 0; i < (int)coeffs_.size(); ++i) {
    if (i == pivot_ || coeffs_[i].is_zero()) continue;
    terms.push_back({mono_mul_var(mono_one(), i), coeffs_[i] * inv});
  }
  return Poly::from_terms(std::move(terms));
}

Poly LinForm::reduce(const Poly& p) const {
  if (pivot_ < 0) throw std::logic_error("reduce by zero form");
  Poly subst = pivot_substitution();
  // cache of subst^k
  std::vector<Poly> powers;
  powers.push_back(Poly::constant(1));
  Poly out;
  std::vector<std::pair<Mono, BigRat>> acc;
  for (const auto& [m, c] : p.terms()) {
    int k = mono_exp(m, pivot_);
    Mono rest = mono_set_exp(m, pivot_, 0);
    while ((int)powers.size() <= k) powers.push_back(powers.back() * subst);
    Poly part = powers[k].mul_mono(rest, c);
    for (const auto& t : part.terms()) acc.push_back(t);
  }
  return Poly::from_terms(std::move(acc));
}

} // namespace gkm
