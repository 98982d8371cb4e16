#include "dlseries/smith.hpp"

#include <algorithm>
#include <cstdlib>

namespace dls {

IntMat rational_inverse_times_den(const IntMat& m, Int& den_out) {
  if (m.rows != m.cols) throw InputError("inverse of non-square matrix");
  int n = m.rows;
  // Gauss-Jordan on [M | I] over Q.
  std::vector<RatVec> w(n, RatVec(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w[i][j] = Rat(m(i, j));
    w[i][n + i] = Rat(1);
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (w[r][col].num != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw InputError("singular matrix has no inverse");
    std::swap(w[piv], w[col]);
    Rat d = w[col][col];
    for (int j = 0; j < 2 * n; ++j) w[col][j] = w[col][j] / d;
    for (int r = 0; r < n; ++r) {
      if (r == col || w[r][col].num == 0) continue;
      Rat f = w[r][col];
      for (int j = 0; j < 2 * n; ++j) w[r][j] = w[r][j] - f * w[col][j];
    }
  }
  Int lcm = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      lcm = detail::checked_i64((__int128)lcm / std::gcd(lcm, w[i][n + j].den) *
                                    w[i][n + j].den,
                                "inverse denominator");
  IntMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat v = w[i][n + j] * Rat(lcm);
      out(i, j) = v.num;  // den == 1 by construction
    }
  den_out = lcm;
  return out;
}

IntMat integer_inverse(const IntMat& m) {
  Int den = 1;
  IntMat inv = rational_inverse_times_den(m, den);
  if (den != 1) throw InputError("matrix has no integral inverse");
  return inv;
}

int matrix_order(const IntMat& m, int cap) {
  IntMat p = m;
  for (int k = 1; k <= cap; ++k) {
    if (p.is_identity()) return k;
    p = p * m;
  }
  throw InputError("matrix order exceeds cap " + std::to_string(cap));
}

namespace {

struct Work {
  IntMat a, u, v;
};

void row_op(Work& w, int i, int j, Int p, Int q, Int r, Int s) {
  // (row_i, row_j) <- (p*row_i + q*row_j, r*row_i + s*row_j), same on U
  for (auto* m : {&w.a, &w.u}) {
    for (int c = 0; c < m->cols; ++c) {
      __int128 x = (__int128)p * (*m)(i, c) + (__int128)q * (*m)(j, c);
      __int128 y = (__int128)r * (*m)(i, c) + (__int128)s * (*m)(j, c);
      (*m)(i, c) = detail::checked_i64(x, "smith row op");
      (*m)(j, c) = detail::checked_i64(y, "smith row op");
    }
  }
}

void col_op(Work& w, int i, int j, Int p, Int q, Int r, Int s) {
  for (auto* m : {&w.a, &w.v}) {
    for (int rr = 0; rr < m->rows; ++rr) {
      __int128 x = (__int128)p * (*m)(rr, i) + (__int128)q * (*m)(rr, j);
      __int128 y = (__int128)r * (*m)(rr, i) + (__int128)s * (*m)(rr, j);
      (*m)(rr, i) = detail::checked_i64(x, "smith col op");
      (*m)(rr, j) = detail::checked_i64(y, "smith col op");
    }
  }
}

// extended gcd: g = a*x + b*y
Int egcd(Int a, Int b, Int& x, Int& y) {
  if (b == 0) {
    x = (a < 0) ? -1 : 1;
    y = 0;
    return a < 0 ? -a : a;
  }
  Int x1, y1;
  Int g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace

SmithForm smith_normal_form(const IntMat& a) {
  Work w{a, IntMat::identity(a.rows), IntMat::identity(a.cols)};
  int n = std::min(a.rows, a.cols);
  for (int t = 0; t < n; ++t) {
    // move a nonzero pivot of minimal |value| to (t,t)
    for (;;) {
      int pi = -1, pj = -1;
      Int best = 0;
      for (int i = t; i < w.a.rows; ++i)
        for (int j = t; j < w.a.cols; ++j) {
          Int v = w.a(i, j) < 0 ? -w.a(i, j) : w.a(i, j);
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) break;  // all zero, done with this block
      if (pi != t) row_op(w, t, pi, 0, 1, 1, 0);
      if (pj != t) col_op(w, t, pj, 0, 1, 1, 0);
      bool clean = true;
      for (int i = t + 1; i < w.a.rows; ++i) {
        if (w.a(i, t) == 0) continue;
        if (w.a(i, t) % w.a(t, t) == 0) {
          // plain elimination keeps row t intact, which the termination
          // argument needs
          row_op(w, t, i, 1, 0, -(w.a(i, t) / w.a(t, t)), 1);
        } else {
          Int x, y;
          Int g = egcd(w.a(t, t), w.a(i, t), x, y);
          row_op(w, t, i, x, y, -(w.a(i, t) / g), w.a(t, t) / g);
        }
        clean = false;
      }
      for (int j = t + 1; j < w.a.cols; ++j) {
        if (w.a(t, j) == 0) continue;
        if (w.a(t, j) % w.a(t, t) == 0) {
          col_op(w, t, j, 1, 0, -(w.a(t, j) / w.a(t, t)), 1);
        } else {
          Int x, y;
          Int g = egcd(w.a(t, t), w.a(t, j), x, y);
          col_op(w, t, j, x, y, -(w.a(t, j) / g), w.a(t, t) / g);
        }
        clean = false;
      }
      if (clean) break;
    }
    if (w.a(t, t) == 0) break;
  }
  // force divisibility chain d_t | d_{t+1}
  for (int t = 0; t + 1 < n; ++t) {
    if (w.a(t, t) == 0) break;
    for (int j = t + 1; j < n; ++j) {
      if (w.a(j, j) == 0 || w.a(j, j) % w.a(t, t) == 0) continue;
      // col_t += col_j puts d_j below the pivot; the 2x2 block then reduces
      // to diag(gcd, lcm)
      col_op(w, t, j, 1, 1, 0, 1);
      Int x, y;
      Int g = egcd(w.a(t, t), w.a(j, t), x, y);
      row_op(w, t, j, x, y, -(w.a(j, t) / g), w.a(t, t) / g);
      Int q = w.a(t, j) / w.a(t, t);
      col_op(w, j, t, 1, -q, 0, 1);
    }
  }
  for (int t = 0; t < n; ++t)
    if (w.a(t, t) < 0) row_op(w, t, t, -1, 0, 0, -1);
  return SmithForm{w.a, w.u, w.v};
}

IntVec SmithForm::diagonal() const {
  IntVec d;
  for (int t = 0; t < std::min(s.rows, s.cols); ++t) d.push_back(s(t, t));
  return d;
}

IntVec SmithForm::torsion() const {
  IntVec out;
  for (Int d : diagonal())
    if (d > 1) out.push_back(d);
  return out;
}

int SmithForm::rank() const {
  int r = 0;
  for (Int d : diagonal())
    if (d != 0) ++r;
  return r;
}

IntMat column_lattice_basis(const IntMat& gens) {
  // Column HNF by integer column reduction, deterministic.
  IntMat m = gens;
  int rank = 0;
  for (int row = 0; row < m.rows && rank < m.cols; ++row) {
    // gcd-reduce columns rank..end on this row
    for (;;) {
      int piv = -1;
      Int best = 0;
      for (int j = rank; j < m.cols; ++j) {
        Int v = m(row, j) < 0 ? -m(row, j) : m(row, j);
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          piv = j;
        }
      }
      if (piv < 0) break;
      // swap pivot column into place
      if (piv != rank)
        for (int i = 0; i < m.rows; ++i) std::swap(m(i, piv), m(i, rank));
      bool done = true;
      for (int j = rank + 1; j < m.cols; ++j) {
        if (m(row, j) == 0) continue;
        Int q = m(row, j) / m(row, rank);
        for (int i = 0; i < m.rows; ++i)
          m(i, j) = detail::checked_i64((__int128)m(i, j) - (__int128)q * m(i, rank),
                                        "hnf reduce");
        if (m(row, j) != 0) done = false;
      }
      if (done) break;
    }
    if (m(row, rank) != 0) {
      if (m(row, rank) < 0)
        for (int i = 0; i < m.rows; ++i) m(i, rank) = -m(i, rank);
      // reduce earlier columns above the pivot for a canonical basis
      for (int j = 0; j < rank; ++j) {
        Int v = m(row, j);
        Int d = m(row, rank);
        Int q = (v % d + d) % d;  // make entry in [0, d)
        Int k = (v - q) / d;
        if (k != 0)
          for (int i = 0; i < m.rows; ++i)
            m(i, j) = detail::checked_i64((__int128)m(i, j) - (__int128)k * m(i, rank),
                                          "hnf reduce");
      }
      ++rank;
    }
  }
  IntMat out(m.rows, rank);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < rank; ++j) out(i, j) = m(i, j);
  return out;
}

std::optional<IntVec> solve_integer(const IntMat& a, const IntVec& b) {
  SmithForm f = smith_normal_form(a);
  IntVec ub = f.u.apply(b);
  int n = std::min(a.rows, a.cols);
  IntVec y(a.cols, 0);
  for (int i = 0; i < a.rows; ++i) {
    Int d = (i < n) ? f.s(i, i) : 0;
    if (d == 0) {
      if (ub[i] != 0) return std::nullopt;
    } else {
      if (ub[i] % d != 0) return std::nullopt;
      y[i] = ub[i] / d;
    }
  }
  return f.v.apply(y);
}

std::vector<RatVec> torsion_kernel(const IntMat& a) {
  if (a.rows != a.cols) throw InputError("torsion_kernel needs a square matrix");
  SmithForm f = smith_normal_form(a);
  int n = a.rows;
  IntVec d = f.diagonal();
  for (Int x : d)
    if (x == 0) throw InputError("torsion_kernel needs a nonsingular matrix");
  // A^{-1}Z^n = V S^{-1} Z^n: generated by col_i(V)/d_i mod Z^n.
  std::vector<RatVec> out;
  std::vector<Int> c(n, 0);
  for (;;) {
    RatVec l(n, Rat(0));
    for (int j = 0; j < n; ++j) {
      if (c[j] == 0) continue;
      for (int i = 0; i < n; ++i)
        l[i] = l[i] + Rat(c[j], d[j]) * Rat(f.v(i, j));
    }
    for (auto& x : l) x = x.mod1();
    out.push_back(l);
    int j = 0;
    while (j < n && ++c[j] == d[j]) c[j++] = 0;
    if (j == n) break;
  }
  return out;
}

}  // namespace dls
