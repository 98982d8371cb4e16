#include "dlseries/oracle.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

#include "dlseries/errors.hpp"

namespace dls {
namespace oracle {

namespace {

// --- polynomial helpers over F_p, little-endian coefficient vectors ---

IntVec poly_trim(IntVec f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

IntVec poly_mod(IntVec f, const IntVec& g, Int p) {
  f = poly_trim(std::move(f));
  IntVec h = poly_trim(g);
  if (h.empty()) throw InputError("polynomial division by zero");
  Int lead_inv = 1;
  for (Int t = 1; t < p; ++t)
    if (t * h.back() % p == 1) lead_inv = t;
  while (f.size() >= h.size()) {
    Int c = f.back() * lead_inv % p;
    size_t shift = f.size() - h.size();
    for (size_t i = 0; i < h.size(); ++i)
      f[shift + i] = ((f[shift + i] - c * h[i]) % p + p) % p;
    f = poly_trim(std::move(f));
  }
  return f;
}

IntVec poly_mulmod(const IntVec& a, const IntVec& b, const IntVec& f, Int p) {
  IntVec c(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(c), f, p);
}

IntVec poly_gcd(IntVec a, IntVec b, Int p) {
  a = poly_trim(std::move(a));
  b = poly_trim(std::move(b));
  while (!b.empty()) {
    IntVec r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^e) mod f by iterated Frobenius
IntVec frobenius_power(const IntVec& f, Int p, int e) {
  IntVec x{0, 1};
  IntVec acc = poly_mod(x, f, p);
  for (int k = 0; k < e; ++k) {
    IntVec r = acc;
    Int reps = p;
    // acc^p by square-and-multiply on the exponent p
    IntVec result{1};
    IntVec base = acc;
    while (reps > 0) {
      if (reps & 1) result = poly_mulmod(result, base, f, p);
      base = poly_mulmod(base, base, f, p);
      reps >>= 1;
    }
    acc = result;
    (void)r;
  }
  return acc;
}

bool is_irreducible(const IntVec& f, Int p, int deg) {
  // f monic of degree deg: irreducible iff x^{p^deg} = x mod f and
  // gcd(x^{p^{deg/l}} - x, f) = 1 for every prime l | deg
  IntVec x{0, 1};
  IntVec xq = frobenius_power(f, p, deg);
  IntVec diff = xq;
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  if (!poly_trim(diff).empty()) return false;
  for (int l = 2; l <= deg; ++l) {
    if (deg % l != 0) continue;
    bool prime = true;
    for (int d = 2; d * d <= l; ++d)
      if (l % d == 0) prime = false;
    if (!prime) continue;
    IntVec xe = frobenius_power(f, p, deg / l);
    IntVec g = xe;
    if (g.size() < 2) g.resize(2, 0);
    g[1] = ((g[1] - 1) % p + p) % p;
    IntVec gcd = poly_gcd(g, f, p);
    if (gcd.size() != 1) return false;
  }
  return true;
}

std::vector<Int> prime_factors(Int n) {
  std::vector<Int> out;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

SmallField::SmallField(Int p, int deg) : p_(p), deg_(deg) {
  if (!is_prime(p)) throw InputError("field characteristic must be prime");
  if (deg < 1 || deg > 12) throw InputError("field degree out of range [1,12]");
  q_ = 1;
  for (int i = 0; i < deg; ++i) {
    q_ *= p;
    if (q_ > 1000000) throw InputError("field too large");
  }
  if (deg == 1) {
    modpoly_ = {0, 1};
  } else {
    // lexicographically least monic irreducible of degree deg
    bool found = false;
    for (Int tail = 0; tail < q_ && !found; ++tail) {
      IntVec f(deg + 1, 0);
      Int t = tail;
      for (int i = 0; i < deg; ++i) {
        f[i] = t % p;
        t /= p;
      }
      f[deg] = 1;
      if (is_irreducible(f, p, deg)) {
        modpoly_ = f;
        found = true;
      }
    }
    if (!found) throw IdentityViolation("field-construction", "no irreducible polynomial found");
  }
  // primitive element, then exp/log tables
  auto factors = prime_factors(q_ - 1);
  Int g = 0;
  for (Int cand = 1; cand < q_; ++cand) {
    bool ok = true;
    for (Int l : factors) {
      // cand^((q-1)/l) via raw ops
      Int e = (q_ - 1) / l;
      Int acc = 1, base = cand;
      while (e > 0) {
        if (e & 1) acc = raw_mul(acc, base);
        base = raw_mul(base, base);
        e >>= 1;
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok && q_ > 2) {
      g = cand;
      break;
    }
    if (q_ == 2) {
      g = 1;
      break;
    }
  }
  if (g == 0) throw IdentityViolation("field-construction", "no primitive element found");
  exp_.resize(q_ - 1);
  log_.assign(q_, -1);
  Int cur = 1;
  for (Int k = 0; k < q_ - 1; ++k) {
    exp_[k] = cur;
    log_[cur] = k;
    cur = raw_mul(cur, g);
  }
  if (cur != 1) throw IdentityViolation("field-construction", "generator order mismatch");
  if (q_ <= 64) {
    add_table_.resize(q_ * q_);
    mul_table_.resize(q_ * q_);
    neg_table_.resize(q_);
    for (Int a = 0; a < q_; ++a) {
      neg_table_[a] = neg_slow(a);
      for (Int b = 0; b < q_; ++b) {
        add_table_[a * q_ + b] = add_slow(a, b);
        mul_table_[a * q_ + b] = raw_mul(a, b);
      }
    }
  }
}

Int SmallField::raw_mul(Int a, Int b) const {
  if (deg_ == 1) return a * b % p_;
  IntVec fa(deg_), fb(deg_);
  Int t = a;
  for (int i = 0; i < deg_; ++i) {
    fa[i] = t % p_;
    t /= p_;
  }
  t = b;
  for (int i = 0; i < deg_; ++i) {
    fb[i] = t % p_;
    t /= p_;
  }
  IntVec fc = poly_mulmod(fa, fb, modpoly_, p_);
  Int out = 0;
  for (int i = (int)fc.size() - 1; i >= 0; --i) out = out * p_ + fc[i];
  return out;
}

Int SmallField::add_slow(Int a, Int b) const {
  if (deg_ == 1) return (a + b) % p_;
  Int out = 0, mult = 1;
  for (int i = 0; i < deg_; ++i) {
    out += (a % p_ + b % p_) % p_ * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return out;
}

Int SmallField::neg_slow(Int a) const {
  if (deg_ == 1) return (p_ - a) % p_;
  Int out = 0, mult = 1;
  for (int i = 0; i < deg_; ++i) {
    out += (p_ - a % p_) % p_ * mult;
    a /= p_;
    mult *= p_;
  }
  return out;
}

Int SmallField::inv(Int a) const {
  if (a == 0) throw InputError("field inverse of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Int SmallField::pow(Int a, Int e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw InputError("field inverse of zero");
    return 0;
  }
  Int k = ((log_[a] * (e % (q_ - 1))) % (q_ - 1) + (q_ - 1)) % (q_ - 1);
  return exp_[k];
}

Int SmallField::mul_order(Int a) const {
  if (a == 0) throw InputError("order of zero");
  Int k = log_[a];
  return (q_ - 1) / std::gcd(q_ - 1, k == 0 ? q_ - 1 : k);
}

std::vector<Int> SmallField::embedding_into(const SmallField& big) const {
  if (big.p() != p_ || big.degree() % deg_ != 0)
    throw InputError("no field embedding exists");
  std::vector<Int> map(q_, 0);
  if (deg_ == 1) {
    for (Int a = 0; a < q_; ++a) map[a] = big.from_int(a);
    return map;
  }
  // find the least root of our modulus inside `big`
  Int root = -1;
  for (Int e = 0; e < big.q() && root < 0; ++e) {
    Int acc = 0;
    for (int i = (int)modpoly_.size() - 1; i >= 0; --i)
      acc = big.add(big.mul(acc, e), big.from_int(modpoly_[i]));
    if (acc == 0) root = e;
  }
  if (root < 0) throw IdentityViolation("field-embedding", "modulus has no root in the extension");
  for (Int a = 0; a < q_; ++a) {
    Int t = a, acc = 0, epow = 1;
    for (int i = 0; i < deg_; ++i) {
      acc = big.add(acc, big.mul(big.from_int(t % p_), epow));
      epow = big.mul(epow, root);
      t /= p_;
    }
    map[a] = acc;
  }
  // must be a ring homomorphism
  for (Int a = 1; a < std::min<Int>(q_, 50); ++a)
    for (Int b = 1; b < std::min<Int>(q_, 50); ++b)
      if (map[mul(a, b)] != big.mul(map[a], map[b]))
        throw IdentityViolation("field-embedding", "embedding is not multiplicative");
  return map;
}

MatrixFamily parse_matrix_family(const std::string& s) {
  if (s == "GL") return MatrixFamily::GL;
  if (s == "SL") return MatrixFamily::SL;
  if (s == "PGL") return MatrixFamily::PGL;
  throw InputError("unknown matrix family \"" + s + "\" (expected GL/SL/PGL)");
}

std::string to_string(MatrixFamily f) {
  switch (f) {
    case MatrixFamily::GL: return "GL";
    case MatrixFamily::SL: return "SL";
    case MatrixFamily::PGL: return "PGL";
  }
  return "?";
}

namespace {

// --- tiny matrices over a SmallField, packed into base-q keys ---

struct FMat {
  int n = 0;
  std::array<Int, 9> a{};
  Int& at(int i, int j) { return a[i * n + j]; }
  Int at(int i, int j) const { return a[i * n + j]; }
};

using Key = std::uint32_t;

Key pack(const FMat& m, Int q) {
  Key k = 0;
  for (int i = m.n * m.n - 1; i >= 0; --i) k = (Key)(k * q + m.a[i]);
  return k;
}

FMat unpack(Key k, int n, Int q) {
  FMat m;
  m.n = n;
  for (int i = 0; i < n * n; ++i) {
    m.a[i] = k % q;
    k = (Key)(k / q);
  }
  return m;
}

FMat fmul(const SmallField& F, const FMat& x, const FMat& y) {
  FMat z;
  z.n = x.n;
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      Int acc = 0;
      for (int k = 0; k < x.n; ++k) acc = F.add(acc, F.mul(x.at(i, k), y.at(k, j)));
      z.at(i, j) = acc;
    }
  return z;
}

Int fdet(const SmallField& F, const FMat& m) {
  switch (m.n) {
    case 1:
      return m.at(0, 0);
    case 2:
      return F.sub(F.mul(m.at(0, 0), m.at(1, 1)), F.mul(m.at(0, 1), m.at(1, 0)));
    case 3: {
      Int d = 0;
      d = F.add(d, F.mul(m.at(0, 0), F.sub(F.mul(m.at(1, 1), m.at(2, 2)),
                                           F.mul(m.at(1, 2), m.at(2, 1)))));
      d = F.sub(d, F.mul(m.at(0, 1), F.sub(F.mul(m.at(1, 0), m.at(2, 2)),
                                           F.mul(m.at(1, 2), m.at(2, 0)))));
      d = F.add(d, F.mul(m.at(0, 2), F.sub(F.mul(m.at(1, 0), m.at(2, 1)),
                                           F.mul(m.at(1, 1), m.at(2, 0)))));
      return d;
    }
    default:
      throw InputError("matrix size out of range");
  }
}

FMat finv(const SmallField& F, const FMat& m) {
  Int d = fdet(F, m);
  if (d == 0) throw InputError("singular matrix over the field");
  Int di = F.inv(d);
  FMat inv;
  inv.n = m.n;
  if (m.n == 1) {
    inv.at(0, 0) = di;
    return inv;
  }
  if (m.n == 2) {
    inv.at(0, 0) = F.mul(m.at(1, 1), di);
    inv.at(0, 1) = F.mul(F.neg(m.at(0, 1)), di);
    inv.at(1, 0) = F.mul(F.neg(m.at(1, 0)), di);
    inv.at(1, 1) = F.mul(m.at(0, 0), di);
    return inv;
  }
  // adjugate for n = 3
  auto cof = [&](int i, int j) {
    int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
    return F.sub(F.mul(m.at(r0, c0), m.at(r1, c1)), F.mul(m.at(r0, c1), m.at(r1, c0)));
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv.at(j, i) = F.mul(cof(i, j), di);
  return inv;
}

// coefficients c_1..c_n of det(tI - m) = t^n + c_1 t^{n-1} + ... + c_n
std::vector<Int> fcharpoly(const SmallField& F, const FMat& m) {
  std::vector<Int> c;
  Int tr = 0;
  for (int i = 0; i < m.n; ++i) tr = F.add(tr, m.at(i, i));
  if (m.n == 1) {
    c = {F.neg(tr)};
  } else if (m.n == 2) {
    c = {F.neg(tr), fdet(F, m)};
  } else {
    Int m2 = 0;
    for (int i = 0; i < 3; ++i) {
      int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      m2 = F.add(m2, F.sub(F.mul(m.at(r0, r0), m.at(r1, r1)), F.mul(m.at(r0, r1), m.at(r1, r0))));
    }
    c = {F.neg(tr), m2, F.neg(fdet(F, m))};
  }
  return c;
}

// concrete finite group of matrices with canonicalization (scalar classes
// for PGL), element ids, and conjugation
struct MatGroup {
  const SmallField& F;
  MatrixGroupSpec spec;
  Key keyspace = 0;
  std::vector<Key> keys;           // id -> canonical key
  std::vector<std::int32_t> ids;   // key -> id (or -1)
  std::vector<std::uint8_t> dense;  // id -> n*n entries, decoded once
  std::vector<int> gens;

  explicit MatGroup(const SmallField& field, const MatrixGroupSpec& s) : F(field), spec(s) {
    int n = spec.n;
    Int q = F.q();
    keyspace = 1;
    for (int i = 0; i < n * n; ++i) keyspace = (Key)(keyspace * q);
    ids.assign(keyspace, -1);
    for (Key k = 0; k < keyspace; ++k) {
      FMat m = unpack(k, n, q);
      Int d = fdet(F, m);
      if (d == 0) continue;
      if (spec.family == MatrixFamily::SL && d != 1) continue;
      if (spec.family == MatrixFamily::PGL && !is_canonical(m)) continue;
      if ((long)keys.size() >= kCensusCap)
        throw InputError("census cap exceeded: group has more than " +
                         std::to_string(kCensusCap) + " elements");
      ids[k] = (std::int32_t)keys.size();
      keys.push_back(k);
      for (int i = 0; i < n * n; ++i) dense.push_back((std::uint8_t)m.a[i]);
    }
    make_generators();
  }

  bool is_canonical(const FMat& m) const {
    for (int i = 0; i < m.n * m.n; ++i) {
      if (m.a[i] == 0) continue;
      return m.a[i] == 1;
    }
    return false;
  }

  FMat canonicalize(FMat m) const {
    if (spec.family != MatrixFamily::PGL) return m;
    for (int i = 0; i < m.n * m.n; ++i) {
      if (m.a[i] == 0) continue;
      Int s = F.inv(m.a[i]);
      for (int j = 0; j < m.n * m.n; ++j) m.a[j] = F.mul(m.a[j], s);
      return m;
    }
    throw InputError("zero matrix cannot be canonicalized");
  }

  int id_of(const FMat& m) const {
    std::int32_t v = ids[pack(canonicalize(m), F.q())];
    if (v < 0) throw IdentityViolation("census-closure", "product escaped the group");
    return v;
  }

  FMat mat(int id) const {
    FMat m;
    m.n = spec.n;
    const std::uint8_t* src = &dense[(size_t)id * spec.n * spec.n];
    for (int i = 0; i < spec.n * spec.n; ++i) m.a[i] = src[i];
    return m;
  }

  int mul(int a, int b) const { return id_of(fmul(F, mat(a), mat(b))); }

  // conjugation by the k-th generator, with cached matrices
  std::vector<std::pair<FMat, FMat>> gen_mats;  // (g, g^{-1})
  int conj_by_gen(size_t k, int x) const {
    return id_of(fmul(F, fmul(F, gen_mats[k].first, mat(x)), gen_mats[k].second));
  }

  int identity_id() const {
    FMat id;
    id.n = spec.n;
    for (int i = 0; i < spec.n; ++i) id.at(i, i) = 1;
    return id_of(id);
  }

  Int element_order(int x) const {
    int id = identity_id();
    int cur = x;
    Int ord = 1;
    while (cur != id) {
      cur = mul(cur, x);
      ++ord;
      if (ord > (Int)keys.size())
        throw IdentityViolation("census-order", "element order exceeds group order");
    }
    return ord;
  }

  int power(int x, long e) const {
    int acc = identity_id();
    int base = x;
    while (e > 0) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }

  void make_generators() {
    int n = spec.n;
    std::set<int> g;
    if (n >= 2) {
      // all transvections I + c E_ij generate SL_n
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          for (Int c = 1; c < F.q(); ++c) {
            FMat t;
            t.n = n;
            for (int k = 0; k < n; ++k) t.at(k, k) = 1;
            t.at(i, j) = c;
            if (spec.family == MatrixFamily::SL || fdet(F, t) != 0) g.insert(id_of(t));
          }
        }
    }
    if (spec.family != MatrixFamily::SL) {
      FMat dgen;
      dgen.n = n;
      dgen.at(0, 0) = F.generator();
      for (int k = 1; k < n; ++k) dgen.at(k, k) = 1;
      g.insert(id_of(dgen));
    }
    gens.assign(g.begin(), g.end());
    for (int id : gens) gen_mats.push_back({mat(id), finv(F, mat(id))});
  }
};

long expected_group_order(const MatrixGroupSpec& s) {
  long gl = 1;
  long qn = 1;
  for (int i = 0; i < s.n; ++i) qn *= (long)s.q;
  long qi = 1;
  for (int i = 0; i < s.n; ++i) {
    gl *= (qn - qi);
    qi *= (long)s.q;
  }
  if (s.family == MatrixFamily::GL) return gl;
  return gl / (long)(s.q - 1);
}

}  // namespace

ClassCensus census(const MatrixGroupSpec& spec) {
  if (spec.n < 1 || spec.n > 3) throw InputError("census supports n <= 3");
  if (spec.q != 2 && spec.q != 3 && spec.q != 4 && spec.q != 5)
    throw InputError("census supports q in {2,3,4,5}");
  auto p0 = prime_of_prime_power(spec.q);
  Int p = *p0;
  int deg = 0;
  for (Int t = spec.q; t > 1; t /= p) ++deg;
  SmallField F(p, deg);
  MatGroup G(F, spec);

  ClassCensus out;
  out.spec = spec;
  out.group_order = (long)G.keys.size();
  if (out.group_order != expected_group_order(spec))
    throw IdentityViolation("census-order", "enumerated order differs from the product formula");

  // x is semisimple iff its order is prime to p iff x^m = 1 for m the
  // p'-part of the group order
  long m = out.group_order;
  while (m % p == 0) m /= p;
  int id = G.identity_id();
  std::vector<bool> semisimple(G.keys.size());
  for (size_t i = 0; i < G.keys.size(); ++i) {
    semisimple[i] = (G.power((int)i, m) == id);
    if (semisimple[i]) ++out.semisimple_elements;
  }

  std::vector<bool> seen(G.keys.size(), false);
  long covered = 0;
  for (size_t i = 0; i < G.keys.size(); ++i) {
    if (!semisimple[i] || seen[i]) continue;
    // ascending scan => i is the canonical (minimal) representative;
    // conjugation never leaves the class, so `seen` doubles as the
    // membership test
    long cls_size = 1;
    std::vector<int> queue{(int)i};
    seen[i] = true;
    while (!queue.empty()) {
      int x = queue.back();
      queue.pop_back();
      for (size_t k = 0; k < G.gens.size(); ++k) {
        int y = G.conj_by_gen(k, x);
        if (!seen[y]) {
          seen[y] = true;
          ++cls_size;
          queue.push_back(y);
        }
      }
    }
    RationalClass rc;
    FMat rep = G.mat((int)i);
    rc.representative.assign(rep.a.begin(), rep.a.begin() + spec.n * spec.n);
    rc.size = cls_size;
    rc.element_order = G.element_order((int)i);
    rc.charpoly = fcharpoly(F, rep);
    out.classes.push_back(std::move(rc));
    covered += cls_size;
  }
  if (covered != out.semisimple_elements)
    throw IdentityViolation("census-partition",
                            "class sizes do not sum to the semisimple element count");

  // geometric bundling and component groups
  if (spec.family == MatrixFamily::PGL) {
    SmallField big(p, 6 * deg);
    auto emb = F.embedding_into(big);
    std::vector<Int> back(big.q(), -1);
    for (Int a = 0; a < F.q(); ++a) back[emb[a]] = a;
    auto twist_key = [&](const std::vector<Int>& c) {
      std::vector<Int> best = c;
      for (Int lam = 1; lam < big.q(); ++lam) {
        std::vector<Int> cand(c.size());
        bool ok = true;
        Int lpow = 1;
        for (size_t i = 0; i < c.size(); ++i) {
          lpow = big.mul(lpow, lam);
          Int v = big.mul(emb[c[i]], lpow);
          if (back[v] < 0) {
            ok = false;
            break;
          }
          cand[i] = back[v];
        }
        if (ok && cand < best) best = cand;
      }
      return best;
    };
    auto pi0_count = [&](const std::vector<Int>& c) {
      Int count = 0;
      for (Int lam = 1; lam < big.q(); ++lam) {
        bool ok = true;
        Int lpow = 1;
        for (size_t i = 0; i < c.size(); ++i) {
          lpow = big.mul(lpow, lam);
          if (big.mul(emb[c[i]], lpow) != emb[c[i]]) {
            ok = false;
            break;
          }
        }
        if (ok) ++count;
      }
      return count;
    };
    std::map<std::vector<Int>, std::vector<int>> bundles;
    for (size_t i = 0; i < out.classes.size(); ++i) {
      out.classes[i].pi0 = pi0_count(out.classes[i].charpoly);
      bundles[twist_key(out.classes[i].charpoly)].push_back((int)i);
    }
    std::vector<std::pair<int, std::vector<int>>> ordered;
    for (auto& [key, cls] : bundles) ordered.push_back({cls.front(), cls});
    std::sort(ordered.begin(), ordered.end());
    for (auto& [first, cls] : ordered) out.bundles.push_back({cls});
  } else {
    // GL always has connected centralizers of semisimple elements; SL is
    // simply connected, same conclusion
    std::map<std::vector<Int>, std::vector<int>> bundles;
    for (size_t i = 0; i < out.classes.size(); ++i) {
      out.classes[i].pi0 = 1;
      bundles[out.classes[i].charpoly].push_back((int)i);
    }
    std::vector<std::pair<int, std::vector<int>>> ordered;
    for (auto& [key, cls] : bundles) ordered.push_back({cls.front(), cls});
    std::sort(ordered.begin(), ordered.end());
    for (auto& [first, cls] : ordered) out.bundles.push_back({cls});
  }
  return out;
}

namespace {

void check_duality(Family family, int rank, Isogeny iso, const MatrixGroupSpec& spec) {
  std::string datum = to_string(family) + std::to_string(rank) + "-" + to_string(iso);
  std::string census_group =
      to_string(spec.family) + std::to_string(spec.n) + "(F_" + std::to_string(spec.q) + ")";
  auto reject = [&]() {
    throw InputError("census group " + census_group + " is not the dual of " + datum +
                     " (GL_n <-> GL_n, SL_n <-> PGL_n, PGL_n <-> SL_n)");
  };
  if (family != Family::A) reject();
  if (spec.n != rank + 1) reject();
  switch (iso) {
    case Isogeny::GL:
      if (spec.family != MatrixFamily::GL) reject();
      break;
    case Isogeny::SimplyConnected:
      if (spec.family != MatrixFamily::PGL) reject();
      break;
    case Isogeny::Adjoint:
      if (spec.family != MatrixFamily::SL) reject();
      break;
  }
}

}  // namespace

CompareReport compare(Family family, int rank, Isogeny iso, Int q, Int denominator_bound,
                      const MatrixGroupSpec& spec) {
  check_duality(family, rank, iso, spec);
  if (q != spec.q) throw InputError("datum and census use different q");
  auto p0 = prime_of_prime_power(q);
  if (!p0) throw InputError("q is not a prime power");
  Int p = *p0;

  RootDatum d = RootDatum::named(family, rank, iso);
  WeylGroup w = WeylGroup::generate(d);
  Twist eps{q, IntMat::identity(d.rank)};

  // all parameters whose W-orbit is ε-stable: solutions of (q·w - 1)l ∈ X.
  // Their orders divide q^m - 1 for m = ord(w), which is asserted.
  std::set<SheafParam> params;
  for (int i = 0; i < w.size(); ++i) {
    IntMat a = w.matrix(i);
    for (auto& v : a.a)
      v = detail::checked_i64((__int128)v * q, "compare solve");
    for (int k = 0; k < d.rank; ++k) a(k, k) -= 1;
    Int qm = 1;
    for (int rep = 0; rep < matrix_order(w.matrix(i)); ++rep)
      qm = detail::checked_i64((__int128)qm * q, "compare order bound");
    for (const auto& sol : torsion_kernel(a)) {
      SheafParam l = make_param_unchecked(sol, p);
      if ((qm - 1) % l.denominator != 0)
        throw IdentityViolation("compare-order-bound",
                                "solution order does not divide q^ord(w) - 1");
      params.insert(l);
    }
  }
  // W-orbit partition
  CompareReport rep;
  std::set<SheafParam> assigned;
  for (const auto& l : params) {
    if (assigned.count(l)) continue;
    // orbit of l
    std::set<SheafParam> orbit{l};
    std::vector<SheafParam> queue{l};
    while (!queue.empty()) {
      SheafParam x = queue.back();
      queue.pop_back();
      for (int g : w.generators()) {
        RatVec img = w.matrix(g).apply(x.vector);
        for (auto& v : img) v = v.mod1();
        SheafParam y = make_param_unchecked(img, p);
        if (orbit.insert(y).second) queue.push_back(y);
      }
    }
    for (const auto& x : orbit) assigned.insert(x);
    SheafParam rep_l = *orbit.begin();
    if (rep_l.denominator % p == 0)
      throw IdentityViolation("compare-denominator", "solution with p | denominator");
    if (rep_l.denominator > denominator_bound) {
      rep.skipped.push_back({rep_l, "denominator exceeds bound " +
                                        std::to_string(denominator_bound)});
      continue;
    }
    CompareOrbit row;
    row.rep = rep_l;
    row.orbit_size = (long)orbit.size();
    auto stab = stabilize(w, eps, rep_l);
    LittleGroups little = little_groups(w, rep_l);
    BSet b = b_set(w, stab.effective, rep_l, little);
    coinvariants(w, little, b);  // the coinvariant bijection must hold along the way
    row.rational_count = (long)b.orbits.size();
    row.omega_order = (long)little.omega.size();
    rep.orbits.push_back(std::move(row));
  }
  std::sort(rep.orbits.begin(), rep.orbits.end(),
            [](const CompareOrbit& a, const CompareOrbit& b) { return a.rep < b.rep; });
  for (const auto& row : rep.orbits) {
    rep.predicted_total += row.rational_count;
    rep.predicted_profile.push_back({row.rational_count, row.omega_order});
  }
  std::sort(rep.predicted_profile.begin(), rep.predicted_profile.end());

  ClassCensus c = census(spec);
  rep.census_total = (long)c.classes.size();
  for (const auto& bundle : c.bundles) {
    Int pi0 = c.classes[bundle.classes.front()].pi0;
    for (int idx : bundle.classes)
      if (c.classes[idx].pi0 != pi0)
        throw IdentityViolation("census-bundle", "π₀ is not constant on a geometric bundle");
    rep.census_profile.push_back({(long)bundle.classes.size(), pi0});
  }
  std::sort(rep.census_profile.begin(), rep.census_profile.end());

  rep.match = rep.skipped.empty() && rep.predicted_total == rep.census_total &&
              rep.predicted_profile == rep.census_profile;
  if (!rep.match) {
    if (!rep.skipped.empty())
      rep.detail = "comparison incomplete: " + std::to_string(rep.skipped.size()) +
                   " parameter orbit(s) skipped";
    else if (rep.predicted_total != rep.census_total)
      rep.detail = "totals differ: predicted " + std::to_string(rep.predicted_total) +
                   ", census " + std::to_string(rep.census_total);
    else
      rep.detail = "per-bundle profiles differ";
  } else {
    rep.detail = "match: " + std::to_string(rep.predicted_total) + " = " +
                 std::to_string(rep.census_total);
  }
  return rep;
}

TorusSeriesCheck finite_group_series_check(const DisconnectedInput& in, const SheafParam& l) {
  in.check();
  if (!in.datum0.roots.empty())
    throw InputError("finite-group check needs a torus datum");
  Int m = in.q - 1;
  int r = in.datum0.rank;
  if ((m == 0) || l.denominator == 0 || m % l.denominator != 0)
    throw InputError("parameter is not a character of the split torus (denominator must divide q-1)");

  long torus_order = 1;
  for (int i = 0; i < r; ++i) {
    torus_order *= (long)m;
    if (torus_order > kTorusGroupCap) throw InputError("torus group cap exceeded");
  }
  long group_order = torus_order * in.pi0.size;
  if (group_order > kTorusGroupCap)
    throw InputError("group order " + std::to_string(group_order) + " exceeds cap " +
                     std::to_string(kTorusGroupCap));

  // point action of π₀ on exponent vectors: a ↦ M^{-T} a (characters then
  // transform by M, matching the lattice action on parameters)
  std::vector<IntMat> point_action;
  for (const auto& mat : in.pi0.action) point_action.push_back(dual_action(mat));

  auto vec_mod = [&](IntVec v) {
    for (auto& x : v) x = ((x % m) + m) % m;
    return v;
  };

  // elements of G = (Z/m)^r ⋊ π₀ encoded as index = (a-index)*|π₀| + c
  auto a_of = [&](long idx) {
    IntVec a(r);
    long t = idx / in.pi0.size;
    for (int i = 0; i < r; ++i) {
      a[i] = t % m;
      t /= m;
    }
    return a;
  };
  auto c_of = [&](long idx) { return (int)(idx % in.pi0.size); };
  auto enc = [&](const IntVec& a, int c) {
    long t = 0;
    for (int i = r - 1; i >= 0; --i) t = t * m + a[i];
    return t * in.pi0.size + c;
  };
  auto gmul = [&](long x, long y) {
    IntVec ax = a_of(x), ay = a_of(y);
    int cx = c_of(x), cy = c_of(y);
    IntVec moved = vec_mod(point_action[cx].apply(ay));
    return enc(vec_mod(ax + moved), in.pi0.mul(cx, cy));
  };
  auto ginv = [&](long x) {
    int ci = in.pi0.inverse(c_of(x));
    IntVec a = a_of(x);
    IntVec back = vec_mod(point_action[ci].apply(a));
    for (auto& v : back) v = (m - v) % m;
    return enc(back, ci);
  };

  TorusSeriesCheck out;
  out.group_order = group_order;

  // conjugacy classes of G, brute force
  {
    std::vector<bool> seen(group_order, false);
    for (long x = 0; x < group_order; ++x) {
      if (seen[x]) continue;
      ++out.total_irreducibles;
      for (long g = 0; g < group_order; ++g) seen[gmul(gmul(g, x), ginv(g))] = true;
    }
  }

  // character orbits under π₀: characters are vectors in (Z/m)^r, π₀ acting
  // through the lattice matrices
  auto char_orbit_data = [&](const IntVec& chi) {
    std::set<IntVec> orbit{chi};
    std::vector<IntVec> queue{chi};
    while (!queue.empty()) {
      IntVec x = queue.back();
      queue.pop_back();
      for (int c = 0; c < in.pi0.size; ++c) {
        IntVec y = vec_mod(in.pi0.action[c].apply(x));
        if (orbit.insert(y).second) queue.push_back(y);
      }
    }
    std::vector<int> stab;
    for (int c = 0; c < in.pi0.size; ++c)
      if (vec_mod(in.pi0.action[c].apply(chi)) == chi) stab.push_back(c);
    return std::pair(orbit, stab);
  };
  auto stab_class_count = [&](const std::vector<int>& stab) {
    std::set<int> in_stab(stab.begin(), stab.end());
    std::set<int> seen;
    long classes = 0;
    for (int x : stab) {
      if (seen.count(x)) continue;
      ++classes;
      for (int g : stab) seen.insert(in.pi0.mul(in.pi0.mul(g, x), in.pi0.inverse(g)));
    }
    for (int x : seen)
      if (!in_stab.count(x))
        throw IdentityViolation("little-group", "stabilizer is not a subgroup");
    return classes;
  };

  IntVec chi(r);
  for (int i = 0; i < r; ++i) {
    Rat v = l.vector[i] * Rat(m);
    if (v.den != 1) throw InputError("parameter denominator must divide q-1");
    chi[i] = ((v.num % m) + m) % m;
  }
  auto [orbit, stab] = char_orbit_data(chi);
  out.orbit_size = (long)orbit.size();
  out.oracle_count = stab_class_count(stab);
  bool abelian = true;
  for (int a : stab)
    for (int b : stab)
      if (in.pi0.mul(a, b) != in.pi0.mul(b, a)) abelian = false;
  if (abelian) {
    long dim = in.pi0.size / (long)stab.size();
    out.oracle_dims.assign((size_t)out.oracle_count, dim);
  }

  // global little-group consistency: counts over all orbits must exhaust
  // Irr(G), and dimensions must square-sum to |G| when stabilizers are abelian
  {
    std::set<IntVec> assigned;
    long total = 0;
    __int128 dimsq = 0;
    bool all_abelian = true;
    IntVec cur(r, 0);
    for (;;) {
      if (!assigned.count(cur)) {
        auto [orb, st] = char_orbit_data(cur);
        for (const auto& x : orb) assigned.insert(x);
        long cnt = stab_class_count(st);
        total += cnt;
        bool ab = true;
        for (int a : st)
          for (int b : st)
            if (in.pi0.mul(a, b) != in.pi0.mul(b, a)) ab = false;
        if (ab) {
          long dim = in.pi0.size / (long)st.size();
          dimsq += (__int128)orb.size() == 0 ? 0 : (__int128)cnt * dim * dim;
        } else {
          all_abelian = false;
        }
      }
      int i = 0;
      while (i < r && ++cur[i] == m) cur[i++] = 0;
      if (i == r) break;
    }
    if (total != out.total_irreducibles)
      throw IdentityViolation("little-group-count",
                              "little-group irreducible count != #conjugacy classes (" +
                                  std::to_string(total) + " vs " +
                                  std::to_string(out.total_irreducibles) + ")");
    if (all_abelian && dimsq != (__int128)group_order)
      throw IdentityViolation("little-group-dims", "sum of squared dimensions != |G|");
  }

  // series-side predictions
  auto geo = disconnected_geometric_report(in, l);
  if (!geo.report.predicted_simple_count)
    throw IdentityViolation("torus-prediction", "torus case must have a predicted count");
  out.predicted_geometric = *geo.report.predicted_simple_count;
  Twist e{in.q, in.tau.matrix};
  if (e.apply(l) == l) {
    auto rat = disconnected_rational_report(in, l);
    out.predicted_rational = rat.report.predicted_simple_count;
  }
  return out;
}

}  // namespace oracle
}  // namespace dls
