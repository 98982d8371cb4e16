#include "dlseries/weyl.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dlseries/errors.hpp"

namespace dls {

namespace {

std::vector<int> root_permutation(const RootDatum& d, const IntMat& m) {
  std::vector<int> perm(d.roots.size());
  for (size_t i = 0; i < d.roots.size(); ++i) {
    int j = d.root_index(m.apply(d.roots[i]));
    if (j < 0) throw InputError("matrix does not permute the root list");
    perm[i] = j;
  }
  return perm;
}

}  // namespace

WeylGroup WeylGroup::generate(const RootDatum& d, long cap) {
  WeylGroup w;
  w.datum_ = d;
  std::vector<IntMat> gens;
  for (int i : d.simple) gens.push_back(d.reflection_matrix(i));

  IntMat id = IntMat::identity(d.rank);
  w.elements_.push_back({id, root_permutation(d, id)});
  w.index_[id] = 0;
  // BFS by word length; within a layer, expand in lex order of the matrices
  std::vector<IntMat> layer{id};
  while (!layer.empty()) {
    std::vector<IntMat> next;
    for (const auto& m : layer)
      for (const auto& g : gens) {
        IntMat prod = m * g;
        if (w.index_.count(prod)) continue;
        w.index_[prod] = -1;  // reserve
        next.push_back(prod);
      }
    std::sort(next.begin(), next.end());
    for (const auto& m : next) {
      if ((long)w.elements_.size() >= cap)
        throw InputError("Weyl group order exceeds cap (more than " +
                         std::to_string(cap) + " elements)");
      w.index_[m] = (int)w.elements_.size();
      w.elements_.push_back({m, root_permutation(d, m)});
    }
    layer = std::move(next);
  }
  for (const auto& g : gens) w.generators_.push_back(w.index_.at(g));
  w.inverse_cache_.assign(w.elements_.size(), -1);
  return w;
}

int WeylGroup::index_of(const IntMat& m) const {
  auto it = index_.find(m);
  return it == index_.end() ? -1 : it->second;
}

int WeylGroup::mul(int i, int j) const {
  int k = index_of(elements_[i].matrix * elements_[j].matrix);
  if (k < 0) throw IdentityViolation("group-closure", "product escaped the group");
  return k;
}

int WeylGroup::inverse(int i) const {
  if (inverse_cache_[i] >= 0) return inverse_cache_[i];
  int k = index_of(integer_inverse(elements_[i].matrix));
  if (k < 0) throw IdentityViolation("group-closure", "inverse escaped the group");
  inverse_cache_[i] = k;
  return k;
}

int WeylGroup::length(int i) const {
  int np = datum_.num_positive();
  int len = 0;
  for (int r = 0; r < np; ++r)
    if (!datum_.is_positive_index(elements_[i].root_perm[r])) ++len;
  return len;
}

int WeylGroup::length_of(const IntMat& m) const {
  int i = index_of(m);
  if (i < 0) throw InputError("element is not in the enumerated Weyl group");
  return length(i);
}

int WeylGroup::reflection(int root_idx) const {
  int k = index_of(datum_.reflection_matrix(root_idx));
  if (k < 0) throw IdentityViolation("group-closure", "reflection not in enumerated group");
  return k;
}

WeylGroup::Subgroup WeylGroup::reflection_subgroup(const std::vector<int>& root_subset) const {
  Subgroup out;
  std::set<int> rs(root_subset.begin(), root_subset.end());
  // closure requirements: negation and reflections stay inside
  for (int i : rs) {
    if (!rs.count(datum_.negate_index(i)))
      throw InputError("root subset is not closed under negation");
    for (int j : rs) {
      int img = elements_[reflection(i)].root_perm[j];
      if (!rs.count(img)) throw InputError("root subset is not closed under its reflections");
    }
  }
  for (int i : rs)
    if (datum_.is_positive_index(i)) out.subsystem_pos.push_back(i);
  std::sort(out.subsystem_pos.begin(), out.subsystem_pos.end());
  // canonical simple system: indecomposables of the positive part
  for (int i : out.subsystem_pos) {
    bool decomposable = false;
    for (int a : out.subsystem_pos) {
      for (int b : out.subsystem_pos) {
        if (datum_.roots[a] + datum_.roots[b] == datum_.roots[i]) {
          decomposable = true;
          break;
        }
      }
      if (decomposable) break;
    }
    if (!decomposable) out.simple_system.push_back(i);
  }
  // generated subgroup
  std::set<int> elems{0};
  std::vector<int> queue{0};
  std::vector<int> gens;
  for (int i : out.simple_system) gens.push_back(reflection(i));
  while (!queue.empty()) {
    int x = queue.back();
    queue.pop_back();
    for (int g : gens) {
      int y = mul(x, g);
      if (elems.insert(y).second) queue.push_back(y);
    }
  }
  out.elements.assign(elems.begin(), elems.end());
  return out;
}

int WeylGroup::min_coset_rep(const std::vector<int>& subgroup, const std::vector<int>& coset,
                             const std::vector<int>& subsystem_pos) const {
  if (coset.empty()) throw InputError("empty coset");
  if (subgroup.size() != coset.size())
    throw InputError("coset size differs from subgroup size");
  std::set<int> cs(coset.begin(), coset.end());
  int w0 = coset.front();
  for (int u : subgroup)
    if (!cs.count(mul(u, w0))) throw InputError("input set is not a left coset of the subgroup");

  int best = -1, best_len = -1;
  bool tie = false;
  for (int x : coset) {
    int l = length(x);
    if (best < 0 || l < best_len) {
      best = x;
      best_len = l;
      tie = false;
    } else if (l == best_len) {
      tie = true;
      if (elements_[x].matrix < elements_[best].matrix) best = x;
    }
  }
  if (tie)
    throw IdentityViolation("unique-minimal-coset-representative",
                            "two coset elements attain the minimal length");
  for (int r : subsystem_pos)
    if (!datum_.is_positive_index(elements_[best].root_perm[r]))
      throw IdentityViolation("minimal-representative-positivity",
                              "minimal coset element does not map the subsystem's "
                              "positive roots into the positive system");
  return best;
}

Pi0 Pi0::trivial(int rank) {
  Pi0 p;
  p.size = 1;
  p.table = {{0}};
  p.action = {IntMat::identity(rank)};
  return p;
}

int Pi0::inverse(int a) const {
  for (int b = 0; b < size; ++b)
    if (table[a][b] == 0) return b;
  throw InputError("pi0 element without inverse");
}

void Pi0::check(const RootDatum& d) const {
  if ((int)table.size() != size || (int)action.size() != size)
    throw InputError("pi0 table/action size mismatch");
  for (const auto& row : table) {
    if ((int)row.size() != size) throw InputError("pi0 table is not square");
    for (int v : row)
      if (v < 0 || v >= size) throw InputError("pi0 table entry out of range");
  }
  for (int i = 0; i < size; ++i)
    if (table[0][i] != i || table[i][0] != i)
      throw InputError("pi0 element 0 must be the identity");
  // associativity, inverses
  for (int a = 0; a < size; ++a) {
    bool has_inv = false;
    for (int b = 0; b < size; ++b) {
      has_inv |= (table[a][b] == 0);
      for (int c = 0; c < size; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw InputError("pi0 table is not associative");
    }
    if (!has_inv) throw InputError("pi0 table has an element without inverse");
  }
  // action: based automorphisms, multiplicative
  for (int a = 0; a < size; ++a) BasedAutomorphism::from_matrix(d, action[a]);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      if (!(action[a] * action[b] == action[table[a][b]]))
        throw InputError("pi0 action is not multiplicative");
}

ExtendedWeylGroup ExtendedWeylGroup::extend(WeylGroup base, Pi0 pi0) {
  pi0.check(base.datum());
  ExtendedWeylGroup g;
  g.conj_.assign(pi0.size, std::vector<int>(base.size()));
  for (int c = 0; c < pi0.size; ++c) {
    IntMat inv = integer_inverse(pi0.action[c]);
    for (int w = 0; w < base.size(); ++w) {
      int img = base.index_of(pi0.action[c] * base.matrix(w) * inv);
      if (img < 0)
        throw InputError("pi0 action does not normalize the Weyl group");
      g.conj_[c][w] = img;
    }
  }
  g.base_ = std::move(base);
  g.pi0_ = std::move(pi0);
  // splitting must be multiplicative: (1,c1)(1,c2) = (1, c1 c2) holds by
  // construction of mul(); verified here once over all pairs.
  for (int c1 = 0; c1 < g.pi0_.size; ++c1)
    for (int c2 = 0; c2 < g.pi0_.size; ++c2) {
      Elem e = g.mul({0, c1}, {0, c2});
      if (e.w != 0 || e.c != g.pi0_.table[c1][c2])
        throw IdentityViolation("split-section", "section pi0 -> W is not multiplicative");
    }
  return g;
}

ExtendedWeylGroup::Elem ExtendedWeylGroup::mul(const Elem& x, const Elem& y) const {
  return {base_.mul(x.w, conj_[x.c][y.w]), pi0_.mul(x.c, y.c)};
}

ExtendedWeylGroup::Elem ExtendedWeylGroup::inverse(const Elem& x) const {
  int ci = pi0_.inverse(x.c);
  return {conj_[ci][base_.inverse(x.w)], ci};
}

IntMat ExtendedWeylGroup::matrix(const Elem& x) const {
  return base_.matrix(x.w) * pi0_.action[x.c];
}

RatVec ExtendedWeylGroup::apply(const Elem& x, const RatVec& v) const {
  return matrix(x).apply(v);
}

std::vector<ExtendedWeylGroup::Elem> ExtendedWeylGroup::all_elements() const {
  std::vector<Elem> out;
  out.reserve(size());
  for (int c = 0; c < pi0_.size; ++c)
    for (int w = 0; w < base_.size(); ++w) out.push_back({w, c});
  return out;
}

}  // namespace dls
