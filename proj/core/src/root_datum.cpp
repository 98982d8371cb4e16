#include "dlseries/root_datum.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dlseries/errors.hpp"

namespace dls {

Family parse_family(const std::string& s) {
  if (s == "A") return Family::A;
  if (s == "B") return Family::B;
  if (s == "C") return Family::C;
  if (s == "D") return Family::D;
  if (s == "G") return Family::G;
  throw InputError("unknown family \"" + s + "\" (expected A/B/C/D/G)");
}

Isogeny parse_isogeny(const std::string& s) {
  if (s == "simply-connected" || s == "sc") return Isogeny::SimplyConnected;
  if (s == "adjoint" || s == "ad") return Isogeny::Adjoint;
  if (s == "gl") return Isogeny::GL;
  throw InputError("unknown isogeny \"" + s + "\" (expected simply-connected/adjoint/gl)");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::G: return "G";
  }
  return "?";
}

std::string to_string(Isogeny i) {
  switch (i) {
    case Isogeny::SimplyConnected: return "sc";
    case Isogeny::Adjoint: return "ad";
    case Isogeny::GL: return "gl";
  }
  return "?";
}

namespace {

// c(i,j) = <alpha_j, alpha_i^vee>
IntMat cartan_matrix(Family f, int n) {
  auto chain = [&](IntMat& c) {
    for (int i = 0; i + 1 < n; ++i) {
      c(i, i + 1) = -1;
      c(i + 1, i) = -1;
    }
  };
  IntMat c(n, n);
  for (int i = 0; i < n; ++i) c(i, i) = 2;
  switch (f) {
    case Family::A:
      if (n < 1) throw InputError("type A needs rank >= 1");
      chain(c);
      break;
    case Family::B:
      // alpha_n short: <alpha_{n-1), alpha_n^vee> = -2
      if (n < 2) throw InputError("type B needs rank >= 2");
      chain(c);
      c(n - 1, n - 2) = -2;
      c(n - 2, n - 1) = -1;
      break;
    case Family::C:
      // alpha_n long
      if (n < 2) throw InputError("type C needs rank >= 2");
      chain(c);
      c(n - 1, n - 2) = -1;
      c(n - 2, n - 1) = -2;
      break;
    case Family::D:
      if (n < 3) throw InputError("type D needs rank >= 3");
      for (int i = 0; i + 2 < n; ++i) {
        c(i, i + 1) = -1;
        c(i + 1, i) = -1;
      }
      c(n - 3, n - 1) = -1;
      c(n - 1, n - 3) = -1;
      break;
    case Family::G:
      if (n != 2) throw InputError("type G needs rank 2");
      c(0, 1) = -3;  // alpha_1 short, alpha_2 long
      c(1, 0) = -1;
      break;
  }
  return c;
}

struct RootPair {
  IntVec root, coroot;
};

// Closure of the simple pairs under all simple reflections; dual reflections
// track the coroots so the pairing stays aligned.
std::vector<RootPair> generate_root_system(const std::vector<RootPair>& simples) {
  std::set<IntVec> seen;
  std::vector<RootPair> all;
  std::vector<RootPair> queue = simples;
  for (auto& rp : simples) {
    if (seen.insert(rp.root).second) all.push_back(rp);
  }
  while (!queue.empty()) {
    RootPair rp = queue.back();
    queue.pop_back();
    for (const auto& s : simples) {
      Int a = dot(rp.root, s.coroot);
      Int b = dot(s.root, rp.coroot);
      RootPair img{rp.root - scale(a, s.root), rp.coroot - scale(b, s.coroot)};
      if (seen.insert(img.root).second) {
        all.push_back(img);
        queue.push_back(img);
      }
    }
    // negation is also in the system
    RootPair neg{-rp.root, -rp.coroot};
    if (seen.insert(neg.root).second) {
      all.push_back(neg);
      queue.push_back(neg);
    }
    if (all.size() > 100000) throw InputError("root system closure does not terminate");
  }
  return all;
}

}  // namespace

int RootDatum::root_index(const IntVec& v) const {
  for (size_t i = 0; i < roots.size(); ++i)
    if (roots[i] == v) return (int)i;
  return -1;
}

Int RootDatum::height(int root_idx) const {
  // height = sum of coefficients over the base; solve via the simple coroot
  // pairing only when the base is a lattice basis, otherwise fall back to
  // the stored positive/negative split with coordinate sum as tiebreak.
  // For ordering we use the coefficient sum computed rationally.
  // (Roots are always integral combinations of the base.)
  if (simple.empty()) return 0;
  // Solve S c = root over Q where S has simple roots as columns.
  int r = rank, k = (int)simple.size();
  // least squares not needed: simple roots are linearly independent
  // build k x k Gram-ish system via pairing with simple coroots:
  // <root, alpha_i^vee> = sum_j c_j <alpha_j, alpha_i^vee>
  IntMat c(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      c(i, j) = dot(roots[simple[j]], coroots[simple[i]]);
  IntVec b(k);
  for (int i = 0; i < k; ++i) b[i] = dot(roots[root_idx], coroots[simple[i]]);
  auto sol = solve_integer(c, b);
  if (!sol) throw IdentityViolation("root-in-base", "root is not an integral combination of the base");
  Int h = 0;
  for (Int x : *sol) h += x;
  (void)r;
  return h;
}

RootDatum RootDatum::from_lists(int rank, std::vector<IntVec> roots_in,
                                std::vector<IntVec> coroots_in,
                                const std::vector<IntVec>& simple_roots) {
  if (roots_in.size() != coroots_in.size())
    throw InputError("roots and coroots must have equal length");
  RootDatum d;
  d.rank = rank;
  // positives = roots expressible with all base coefficients >= 0
  struct Entry {
    IntVec root, coroot;
    Int height;
  };
  std::vector<Entry> pos;
  // temporary datum for coefficient solving
  RootDatum tmp;
  tmp.rank = rank;
  tmp.roots = roots_in;
  tmp.coroots = coroots_in;
  for (const auto& s : simple_roots) {
    int idx = tmp.root_index(s);
    if (idx < 0) throw InputError("simple root not in root list");
    tmp.simple.push_back(idx);
  }
  int k = (int)simple_roots.size();
  IntMat c(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      c(i, j) = dot(roots_in[tmp.simple[j]], coroots_in[tmp.simple[i]]);
  for (size_t t = 0; t < roots_in.size(); ++t) {
    IntVec b(k);
    for (int i = 0; i < k; ++i) b[i] = dot(roots_in[t], coroots_in[tmp.simple[i]]);
    auto sol = solve_integer(c, b);
    if (!sol) throw InputError("root is not an integral combination of the given base");
    bool nonneg = true, nonpos = true;
    Int h = 0;
    for (Int x : *sol) {
      h += x;
      nonneg &= (x >= 0);
      nonpos &= (x <= 0);
    }
    if (!nonneg && !nonpos)
      throw InputError("root neither positive nor negative for the given base");
    if (nonneg) pos.push_back({roots_in[t], coroots_in[t], h});
  }
  std::sort(pos.begin(), pos.end(), [](const Entry& a, const Entry& b) {
    if (a.height != b.height) return a.height < b.height;
    return a.root < b.root;
  });
  for (const auto& e : pos) {
    d.roots.push_back(e.root);
    d.coroots.push_back(e.coroot);
  }
  for (const auto& e : pos) {
    d.roots.push_back(-e.root);
    d.coroots.push_back(-e.coroot);
  }
  for (int i = 0; i < (int)pos.size(); ++i) d.positive.push_back(i);
  for (const auto& s : simple_roots) {
    int idx = d.root_index(s);
    if (idx < 0) throw InputError("simple root lost in canonicalization");
    d.simple.push_back(idx);
  }
  return d;
}

RootDatum RootDatum::torus(int rank) {
  RootDatum d;
  d.rank = rank;
  d.label = "torus" + std::to_string(rank);
  return d;
}

RootDatum RootDatum::named(Family f, int rank, Isogeny iso) {
  if (rank < 1) throw InputError("rank must be positive");
  if (iso == Isogeny::GL && f != Family::A)
    throw InputError("isogeny gl is only valid for family A");
  std::vector<RootPair> simples;
  int dim;
  if (iso == Isogeny::GL) {
    // GL_{rank+1}: X = Y = Z^{n}, roots e_i - e_j
    dim = rank + 1;
    for (int i = 0; i + 1 < dim; ++i) {
      IntVec v(dim, 0);
      v[i] = 1;
      v[i + 1] = -1;
      simples.push_back({v, v});
    }
  } else {
    IntMat c = cartan_matrix(f, rank);
    dim = rank;
    for (int j = 0; j < rank; ++j) {
      IntVec root(rank), coroot(rank);
      for (int i = 0; i < rank; ++i) {
        if (iso == Isogeny::SimplyConnected) {
          // coroots are the standard basis, roots are Cartan columns
          root[i] = c(i, j);
          coroot[i] = (i == j) ? 1 : 0;
        } else {
          // roots are the standard basis, coroots are Cartan rows
          root[i] = (i == j) ? 1 : 0;
          coroot[i] = c(j, i);
        }
      }
      simples.push_back({root, coroot});
    }
  }
  auto all = generate_root_system(simples);
  std::vector<IntVec> roots, coroots, simple_roots;
  for (auto& rp : all) {
    roots.push_back(rp.root);
    coroots.push_back(rp.coroot);
  }
  for (auto& rp : simples) simple_roots.push_back(rp.root);
  RootDatum d = from_lists(dim, roots, coroots, simple_roots);
  d.label = to_string(f) + std::to_string(rank) + "-" + to_string(iso);
  return d;
}

std::vector<std::string> RootDatum::validate() const {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& msg) { bad.push_back(msg); };
  if (rank < 0) fail("negative rank");
  if (roots.size() != coroots.size()) {
    fail("roots/coroots length mismatch");
    return bad;
  }
  for (size_t i = 0; i < roots.size(); ++i) {
    if ((int)roots[i].size() != rank || (int)coroots[i].size() != rank) {
      fail("root/coroot of wrong dimension");
      return bad;
    }
    if (dot(roots[i], coroots[i]) != 2)
      fail("<alpha,alpha^vee> != 2 at index " + std::to_string(i));
  }
  std::set<IntVec> root_set(roots.begin(), roots.end());
  if (root_set.size() != roots.size()) fail("duplicate root");
  for (const auto& r : roots)
    if (!root_set.count(-r)) fail("root without its negative");
  // reflection closure, both sides
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = 0; j < roots.size(); ++j) {
      IntVec r = roots[j] - scale(dot(roots[j], coroots[i]), roots[i]);
      if (!root_set.count(r)) {
        fail("reflection image not a root (s_" + std::to_string(i) + " of root " +
             std::to_string(j) + ")");
        break;
      }
      IntVec cr = coroots[j] - scale(dot(roots[i], coroots[j]), coroots[i]);
      bool found = false;
      for (const auto& c : coroots)
        if (c == cr) {
          found = true;
          break;
        }
      if (!found) {
        fail("dual reflection image not a coroot");
        break;
      }
    }
  // positivity structure
  std::set<int> pos_set(positive.begin(), positive.end());
  if (pos_set.size() * 2 != roots.size())
    fail("positive set is not half of the root list");
  for (int i : positive) {
    if (i < 0 || i >= (int)roots.size()) {
      fail("positive index out of range");
      return bad;
    }
    if (pos_set.count(negate_index(i))) fail("both a root and its negative marked positive");
  }
  // every positive root must be a nonnegative integral combination of the base
  if (!simple.empty()) {
    int k = (int)simple.size();
    IntMat c(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) c(i, j) = dot(roots[simple[j]], coroots[simple[i]]);
    for (int t : positive) {
      IntVec b(k);
      for (int i = 0; i < k; ++i) b[i] = dot(roots[t], coroots[simple[i]]);
      auto sol = solve_integer(c, b);
      if (!sol) {
        fail("positive root is not an integral combination of the base");
        continue;
      }
      for (Int x : *sol)
        if (x < 0) {
          fail("positive root with a negative base coefficient");
          break;
        }
    }
  } else if (!roots.empty()) {
    fail("nonempty root list with empty base");
  }
  return bad;
}

RootDatum RootDatum::dual() const {
  std::vector<IntVec> simple_coroots;
  for (int i : simple) simple_coroots.push_back(coroots[i]);
  RootDatum d = from_lists(rank, coroots, roots, simple_coroots);
  d.label = label.empty() ? "" : label + "-dual";
  return d;
}

IntVec RootDatum::lattice_torsion() const {
  if (roots.empty()) return {};
  IntMat m(rank, (int)positive.size());
  for (int j = 0; j < (int)positive.size(); ++j)
    for (int i = 0; i < rank; ++i) m(i, j) = roots[positive[j]][i];
  return smith_normal_form(m).torsion();
}

IntVec RootDatum::dual_lattice_torsion() const { return dual().lattice_torsion(); }

IntMat RootDatum::reflection_matrix(int root_idx) const {
  IntMat m = IntMat::identity(rank);
  const IntVec& a = roots[root_idx];
  const IntVec& av = coroots[root_idx];
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      m(i, j) -= detail::checked_i64((__int128)a[i] * av[j], "reflection matrix");
  return m;
}

BasedAutomorphism BasedAutomorphism::identity(const RootDatum& d) {
  BasedAutomorphism b;
  b.matrix = IntMat::identity(d.rank);
  b.order = 1;
  b.simple_perm.resize(d.simple.size());
  for (size_t i = 0; i < d.simple.size(); ++i) b.simple_perm[i] = (int)i;
  return b;
}

BasedAutomorphism BasedAutomorphism::from_matrix(const RootDatum& d, const IntMat& m) {
  if (m.rows != d.rank || m.cols != d.rank)
    throw InputError("automorphism matrix has wrong size");
  BasedAutomorphism b;
  b.matrix = m;
  b.order = matrix_order(m, 10000);
  IntMat dual = dual_action(m);
  b.simple_perm.resize(d.simple.size());
  for (size_t i = 0; i < d.simple.size(); ++i) {
    IntVec img = m.apply(d.roots[d.simple[i]]);
    int pos = -1;
    for (size_t j = 0; j < d.simple.size(); ++j)
      if (d.roots[d.simple[j]] == img) pos = (int)j;
    if (pos < 0) throw InputError("matrix does not permute the simple roots");
    if (dual.apply(d.coroots[d.simple[i]]) != d.coroots[d.simple[pos]])
      throw InputError("matrix does not permute the simple coroots compatibly");
    b.simple_perm[i] = pos;
  }
  return b;
}

BasedAutomorphism BasedAutomorphism::from_simple_permutation(const RootDatum& d,
                                                             const std::vector<int>& perm) {
  int k = (int)d.simple.size();
  if ((int)perm.size() != k) throw InputError("permutation length != number of simple roots");
  std::vector<bool> hit(k, false);
  for (int v : perm) {
    if (v < 0 || v >= k || hit[v]) throw InputError("not a permutation of simple indices");
    hit[v] = true;
  }
  if (k < d.rank)
    throw InputError("simple roots do not span; provide tau as an explicit matrix");
  // Solve M * alpha_i = alpha_{perm(i)}: M = S_perm * S^{-1}.
  IntMat s(d.rank, k), sp(d.rank, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < d.rank; ++i) {
      s(i, j) = d.roots[d.simple[j]][i];
      sp(i, j) = d.roots[d.simple[perm[j]]][i];
    }
  Int den = 1;
  IntMat sinv = rational_inverse_times_den(s, den);
  IntMat num = sp * sinv;
  IntMat m(d.rank, d.rank);
  for (int i = 0; i < d.rank; ++i)
    for (int j = 0; j < d.rank; ++j) {
      if (num(i, j) % den != 0)
        throw InputError("permutation does not define an integral lattice map");
      m(i, j) = num(i, j) / den;
    }
  return from_matrix(d, m);
}

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::optional<Int> prime_of_prime_power(Int q) {
  if (q < 2) return std::nullopt;
  for (Int d = 2; d * d <= q; ++d) {
    if (q % d) continue;
    Int m = q;
    while (m % d == 0) m /= d;
    return m == 1 ? std::optional<Int>(d) : std::nullopt;
  }
  return q;  // q itself prime
}

FrobeniusTwist FrobeniusTwist::make(Int q, Int p, BasedAutomorphism tau) {
  auto p0 = prime_of_prime_power(q);
  if (!p0) throw InputError("q = " + std::to_string(q) + " is not a prime power");
  if (*p0 != p)
    throw InputError("p = " + std::to_string(p) + " does not match q = " + std::to_string(q));
  FrobeniusTwist e;
  e.q = q;
  e.p = p;
  e.tau = std::move(tau);
  return e;
}

FrobeniusTwist FrobeniusTwist::split(const RootDatum& d, Int q) {
  auto p0 = prime_of_prime_power(q);
  if (!p0) throw InputError("q = " + std::to_string(q) + " is not a prime power");
  return make(q, *p0, BasedAutomorphism::identity(d));
}

RegularEmbedding regular_embedding(const RootDatum& d) {
  int r = d.rank;
  // generators of X_c: (x,x) for x in basis of X, and (alpha,0) for simple alpha
  int ng = r + (int)d.simple.size();
  IntMat gens(2 * r, ng);
  for (int i = 0; i < r; ++i) {
    gens(i, i) = 1;
    gens(r + i, i) = 1;
  }
  for (int j = 0; j < (int)d.simple.size(); ++j)
    for (int i = 0; i < r; ++i) gens(i, r + j) = d.roots[d.simple[j]][i];
  IntMat basis = column_lattice_basis(gens);
  int rc = basis.cols;

  // roots (alpha, 0) in basis coordinates; coroots B^T (alpha^vee, 0)
  IntMat bt = basis.transpose();
  std::vector<IntVec> roots, coroots, simple_roots;
  for (size_t t = 0; t < d.roots.size(); ++t) {
    IntVec ext(2 * r, 0), extv(2 * r, 0);
    for (int i = 0; i < r; ++i) {
      ext[i] = d.roots[t][i];
      extv[i] = d.coroots[t][i];
    }
    auto c = solve_integer(basis, ext);
    if (!c) throw IdentityViolation("regular-embedding", "(alpha,0) not in X_c");
    roots.push_back(*c);
    coroots.push_back(bt.apply(extv));
  }
  for (int i : d.simple) simple_roots.push_back(roots[i]);
  RegularEmbedding emb;
  emb.big = RootDatum::from_lists(rc, roots, coroots, simple_roots);
  emb.big.label = (d.label.empty() ? "datum" : d.label) + "-embedded";
  emb.basis = basis;
  // restriction = first r rows of basis
  emb.restriction = IntMat(r, rc);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < rc; ++j) emb.restriction(i, j) = basis(i, j);

  emb.root_correspondence.resize(d.roots.size());
  for (size_t t = 0; t < d.roots.size(); ++t) {
    emb.root_correspondence[t] = emb.big.root_index(roots[t]);
    if (emb.root_correspondence[t] < 0)
      throw IdentityViolation("regular-embedding", "root correspondence broke");
  }

  if (!emb.big.lattice_torsion().empty())
    throw IdentityViolation("connected-centre",
                            "X_c/ZPhi_c has torsion after regular embedding");
  auto f = smith_normal_form(emb.restriction);
  for (Int x : f.diagonal())
    if (x != 1)
      throw IdentityViolation("regular-embedding", "restriction map is not surjective");
  return emb;
}

BasedAutomorphism RegularEmbedding::lift(const BasedAutomorphism& tau) const {
  int r = restriction.rows;
  int rc = basis.cols;
  // diag(tau, tau) in X+X coordinates, conjugated into the X_c basis
  IntMat m(rc, rc);
  for (int j = 0; j < rc; ++j) {
    IntVec col(2 * r, 0);
    for (int i = 0; i < 2 * r; ++i) col[i] = basis(i, j);
    IntVec x1(col.begin(), col.begin() + r), x2(col.begin() + r, col.end());
    IntVec y1 = tau.matrix.apply(x1), y2 = tau.matrix.apply(x2);
    IntVec y(2 * r);
    for (int i = 0; i < r; ++i) {
      y[i] = y1[i];
      y[r + i] = y2[i];
    }
    auto c = solve_integer(basis, y);
    if (!c) throw InputError("automorphism does not preserve the embedded lattice");
    for (int i = 0; i < rc; ++i) m(i, j) = (*c)[i];
  }
  return BasedAutomorphism::from_matrix(big, m);
}

}  // namespace dls
