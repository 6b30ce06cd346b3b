#pragma once
// Exact rational arithmetic on 64-bit numerator/denominator with 128-bit
// intermediates. Values are kept reduced with a positive denominator.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bia/combinatorics.hpp"

namespace bia {

class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(long long n, long long d) { assign(int128(n), int128(d)); }

  // Reduces a 128-bit fraction; throws if the reduced value needs > 63 bits.
  static Rational from_wide(int128 n, int128 d) {
    Rational r;
    r.assign(n, d);
    return r;
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return int128(a.num_) * b.den_ < int128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(int128(a.num_) * b.den_ + int128(b.num_) * a.den_,
                     int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(int128(a.num_) * b.den_ - int128(b.num_) * a.den_,
                     int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(int128(a.num_) * b.num_, int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return from_wide(int128(a.num_) * b.den_, int128(a.den_) * b.num_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static int128 gcd128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
      int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(int128 n, int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    const int128 lim = int128(0x7fffffffffffffffLL);
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational: value too large");
    num_ = static_cast<long long>(n);
    den_ = static_cast<long long>(d);
  }

  long long num_;
  long long den_;
};

}  // namespace bia
