#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dlseries/rational.hpp"

namespace dls {

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Dense row-major integer matrix. Sizes here are tiny (rank <= 8 lattices,
// Weyl matrices), so no effort is spent on anything beyond exactness.
struct IntMat {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a((size_t)r * c, 0) {}

  Int& operator()(int i, int j) { return a[(size_t)i * cols + j]; }
  Int operator()(int i, int j) const { return a[(size_t)i * cols + j]; }

  static IntMat identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  bool is_identity() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  IntMat transpose() const {
    IntMat t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMat operator*(const IntMat& x, const IntMat& y) {
    IntMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        Int v = x(i, k);
        if (v == 0) continue;
        for (int j = 0; j < y.cols; ++j) {
          __int128 acc = (__int128)z(i, j) + (__int128)v * y(k, j);
          z(i, j) = detail::checked_i64(acc, "matrix product");
        }
      }
    return z;
  }

  friend bool operator==(const IntMat& x, const IntMat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
  friend bool operator!=(const IntMat& x, const IntMat& y) { return !(x == y); }
  friend bool operator<(const IntMat& x, const IntMat& y) { return x.a < y.a; }

  IntVec apply(const IntVec& v) const {
    IntVec out(rows, 0);
    for (int i = 0; i < rows; ++i) {
      __int128 acc = 0;
      for (int j = 0; j < cols; ++j) acc += (__int128)(*this)(i, j) * v[j];
      out[i] = detail::checked_i64(acc, "matrix-vector product");
    }
    return out;
  }

  RatVec apply(const RatVec& v) const {
    RatVec out(rows);
    for (int i = 0; i < rows; ++i) {
      Rat acc(0);
      for (int j = 0; j < cols; ++j) acc = acc + Rat((*this)(i, j)) * v[j];
      out[i] = acc;
    }
    return out;
  }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < rows; ++i) {
      s += i ? "; " : "";
      for (int j = 0; j < cols; ++j) s += (j ? "," : "") + std::to_string((*this)(i, j));
    }
    return s + "]";
  }
};

inline Int dot(const IntVec& x, const IntVec& y) {
  __int128 acc = 0;
  for (size_t i = 0; i < x.size(); ++i) acc += (__int128)x[i] * y[i];
  return detail::checked_i64(acc, "dot product");
}

inline Rat dot(const RatVec& x, const IntVec& y) {
  Rat acc(0);
  for (size_t i = 0; i < x.size(); ++i) acc = acc + x[i] * Rat(y[i]);
  return acc;
}

inline IntVec operator+(const IntVec& x, const IntVec& y) {
  IntVec z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

inline IntVec operator-(const IntVec& x) {
  IntVec z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = -x[i];
  return z;
}

inline IntVec operator-(const IntVec& x, const IntVec& y) {
  IntVec z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

inline IntVec scale(Int c, const IntVec& x) {
  IntVec z(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    z[i] = detail::checked_i64((__int128)c * x[i], "vector scale");
  return z;
}

// Exact inverse via Gauss-Jordan over Q. Throws on singular input.
IntMat rational_inverse_times_den(const IntMat& m, Int& den_out);

// Inverse of a matrix whose inverse is known to be integral (|det| need not
// be 1; the result is checked). Throws InputError otherwise.
IntMat integer_inverse(const IntMat& m);

// transpose-inverse, the induced action on the dual lattice
inline IntMat dual_action(const IntMat& m) { return integer_inverse(m).transpose(); }

// Multiplicative order, bounded. Throws InputError if the order exceeds cap.
int matrix_order(const IntMat& m, int cap = 1 << 20);

}  // namespace dls

template <>
struct std::hash<dls::IntMat> {
  size_t operator()(const dls::IntMat& m) const {
    size_t h = 1469598103934665603ull;
    for (auto v : m.a) {
      h ^= std::hash<dls::Int>()(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};
