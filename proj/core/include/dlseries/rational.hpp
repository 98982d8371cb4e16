#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <string>

#include "dlseries/errors.hpp"

namespace dls {

using Int = std::int64_t;

namespace detail {

inline Int checked_i64(__int128 v, const char* ctx) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw std::overflow_error(std::string("integer overflow in ") + ctx);
  return static_cast<Int>(v);
}

}  // namespace detail

// Exact rational number on int64 with reduced representation, den > 0.
// All entries in this project are tiny (denominators <= a few hundred),
// but intermediate products go through __int128 and are range-checked.
struct Rat {
  Int num = 0;
  Int den = 1;

  Rat() = default;
  Rat(Int n) : num(n), den(1) {}
  Rat(Int n, Int d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw InputError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Int g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  bool is_integer() const { return den == 1; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return make(n, d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    __int128 n = (__int128)a.num * b.den - (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return make(n, d);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num == 0) throw InputError("rational division by zero");
    return make((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rat operator-() const {
    Rat r;
    r.num = -num;
    r.den = den;
    return r;
  }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }

  // Representative in [0,1) of the class mod 1.
  Rat mod1() const {
    Int r = num % den;
    if (r < 0) r += den;
    Rat out;
    out.num = r;
    out.den = den;
    out.reduce();
    return out;
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Parses "n", "n/d" with optional sign.
  static Rat parse(const std::string& s) {
    if (s.empty()) throw InputError("empty fraction string");
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rat(std::stoll(s));
      Int n = std::stoll(s.substr(0, slash));
      Int d = std::stoll(s.substr(slash + 1));
      return Rat(n, d);
    } catch (const std::exception&) {
      throw InputError("malformed fraction string: \"" + s + "\"");
    }
  }

  static Rat make(__int128 n, __int128 d) {
    Rat r;
    r.num = detail::checked_i64(n, "rational arithmetic");
    r.den = detail::checked_i64(d, "rational arithmetic");
    r.reduce();
    return r;
  }
};

}  // namespace dls

template <>
struct std::hash<dls::Rat> {
  size_t operator()(const dls::Rat& r) const {
    return std::hash<dls::Int>()(r.num) * 1000003u ^ std::hash<dls::Int>()(r.den);
  }
};
