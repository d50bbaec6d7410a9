#pragma once

// Exact rational scalars.
//
// Two interchangeable kernels back all degreewise linear algebra:
//
//   Rat64  - numerator/denominator in int64, intermediates in __int128.
//            Throws rat_overflow when a canonical result leaves the
//            64-bit range.
//   BigRat - GMP mpq wrapper, never overflows.
//
// Solvers run on Rat64 and redo the slice on BigRat after an overflow
// (see try_scalars in linalg.hpp). Canonical storage between solver
// calls is BigRat. Both kernels keep values reduced with positive
// denominator, so equal values have equal representations.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <gmpxx.h>

namespace gkm {

struct rat_overflow : std::runtime_error {
  rat_overflow() : std::runtime_error("rational overflow in 64-bit kernel") {}
};

class Rat64 {
public:
  Rat64() = default;
  Rat64(long long n) : num_(n), den_(1) {}
  Rat64(long long n, long long d) : num_(n), den_(d) { canonicalize(); }

  static Rat64 from_raw(std::int64_t n, std::int64_t d) {
    Rat64 r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }

  friend Rat64 operator+(const Rat64& a, const Rat64& b) {
    std::int64_t g = std::gcd(a.den_, b.den_);
    __int128 n = (__int128)a.num_ * (b.den_ / g) + (__int128)b.num_ * (a.den_ / g);
    __int128 d = (__int128)(a.den_ / g) * b.den_;
    return make(n, d);
  }
  friend Rat64 operator-(const Rat64& a, const Rat64& b) { return a + (-b); }
  Rat64 operator-() const { return from_raw(-num_, den_); }

  friend Rat64 operator*(const Rat64& a, const Rat64& b) {
    std::int64_t g1 = gcd64(uabs(a.num_), (std::uint64_t)b.den_);
    std::int64_t g2 = gcd64(uabs(b.num_), (std::uint64_t)a.den_);
    __int128 n = (__int128)(a.num_ / g1) * (b.num_ / g2);
    __int128 d = (__int128)(a.den_ / g2) * (b.den_ / g1);
    return make_reduced(n, d);
  }
  friend Rat64 operator/(const Rat64& a, const Rat64& b) {
    if (b.num_ == 0) throw std::domain_error("division by zero rational");
    return a * from_raw(b.num_ < 0 ? -b.den_ : b.den_,
                        b.num_ < 0 ? -b.num_ : b.num_);
  }
  Rat64& operator+=(const Rat64& b) { return *this = *this + b; }
  Rat64& operator-=(const Rat64& b) { return *this = *this - b; }
  Rat64& operator*=(const Rat64& b) { return *this = *this * b; }

  friend bool operator==(const Rat64& a, const Rat64& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat64& a, const Rat64& b) { return !(a == b); }

private:
  static std::uint64_t uabs(std::int64_t x) {
    return x < 0 ? (std::uint64_t)(-(__int128)x) : (std::uint64_t)x;
  }
  static std::int64_t gcd64(std::uint64_t a, std::uint64_t b) {
    while (b) { std::uint64_t t = a % b; a = b; b = t; }
    return (std::int64_t)a;
  }
  static std::int64_t check(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw rat_overflow();
    return (std::int64_t)v;
  }
  // n/d already coprime, d > 0
  static Rat64 make_reduced(__int128 n, __int128 d) {
    return from_raw(check(n), check(d));
  }
  static Rat64 make(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    if (n == 0) return Rat64();
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    return make_reduced(n / a, d / a);
  }
  void canonicalize() {
    if (den_ == 0) throw std::domain_error("zero denominator");
    __int128 n = num_, d = den_;
    if (d < 0) { n = -n; d = -d; }
    *this = make(n, d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

class BigRat {
public:
  BigRat() = default;
  BigRat(long long n) : v_((long)n) {}
  BigRat(long long n, long long d) : v_((long)n, (long)d) { v_.canonicalize(); }
  explicit BigRat(const mpq_class& v) : v_(v) {}

  const mpq_class& value() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  friend BigRat operator+(const BigRat& a, const BigRat& b) { return BigRat(mpq_class(a.v_ + b.v_)); }
  friend BigRat operator-(const BigRat& a, const BigRat& b) { return BigRat(mpq_class(a.v_ - b.v_)); }
  friend BigRat operator*(const BigRat& a, const BigRat& b) { return BigRat(mpq_class(a.v_ * b.v_)); }
  friend BigRat operator/(const BigRat& a, const BigRat& b) {
    if (sgn(b.v_) == 0) throw std::domain_error("division by zero rational");
    return BigRat(mpq_class(a.v_ / b.v_));
  }
  BigRat operator-() const { return BigRat(mpq_class(-v_)); }
  BigRat& operator+=(const BigRat& b) { v_ += b.v_; return *this; }
  BigRat& operator-=(const BigRat& b) { v_ -= b.v_; return *this; }
  BigRat& operator*=(const BigRat& b) { v_ *= b.v_; return *this; }

  friend bool operator==(const BigRat& a, const BigRat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const BigRat& a, const BigRat& b) { return a.v_ != b.v_; }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  static BigRat parse(const std::string& s) {
    mpq_class q(s);
    q.canonicalize();
    return BigRat(q);
  }

private:
  mpq_class v_;
};

// kernel conversions
inline BigRat widen(const Rat64& r) {
  return BigRat(mpq_class((long)r.num(), (long)r.den()));
}
inline BigRat widen(const BigRat& r) { return r; }

inline Rat64 narrow_to(const BigRat& r, Rat64*) {
  if (!r.value().get_num().fits_slong_p() || !r.value().get_den().fits_slong_p())
    throw rat_overflow();
  return Rat64::from_raw(r.value().get_num().get_si(), r.value().get_den().get_si());
}
inline BigRat narrow_to(const BigRat& r, BigRat*) { return r; }

} // namespace gkm
