#pragma once

#include <unordered_map>
#include <vector>

#include "dlseries/root_datum.hpp"

namespace dls {

constexpr long kDefaultWeylCap = 200000;

// Element of W as an integer matrix on X plus its permutation of the
// indexed root list.
struct WeylElement {
  IntMat matrix;
  std::vector<int> root_perm;
};

// Fully enumerated finite Weyl group. Elements are indexed; index 0 is the
// identity. Enumeration order is canonical (BFS by length, lex matrix order
// within a layer), so indices are reproducible.
class WeylGroup {
public:
  static WeylGroup generate(const RootDatum& d, long cap = kDefaultWeylCap);

  const RootDatum& datum() const { return datum_; }
  int size() const { return (int)elements_.size(); }
  const WeylElement& element(int i) const { return elements_[i]; }
  const IntMat& matrix(int i) const { return elements_[i].matrix; }

  int index_of(const IntMat& m) const;  // -1 if not in the group
  int mul(int i, int j) const;
  int inverse(int i) const;
  int length(int i) const;
  // length of an element given by its matrix; rejects non-members
  int length_of(const IntMat& m) const;
  // simple reflections, in base order
  const std::vector<int>& generators() const { return generators_; }
  // reflection in an arbitrary root (index into datum roots)
  int reflection(int root_idx) const;

  // Subgroup generated by the reflections in a negation-closed, reflection-
  // closed subset of roots. Returns sorted element indices and the canonical
  // simple system of the subsystem (root indices, positive part).
  struct Subgroup {
    std::vector<int> elements;        // sorted indices into the parent group
    std::vector<int> subsystem_pos;   // positive roots of the subsystem
    std::vector<int> simple_system;   // canonical simple roots of the subsystem
  };
  Subgroup reflection_subgroup(const std::vector<int>& root_subset) const;

  // Unique minimal-length element of a left coset (subgroup * w).
  // `subsystem_pos` may be empty; when given, the minimizer is checked to map
  // those roots into the positive system.
  int min_coset_rep(const std::vector<int>& subgroup, const std::vector<int>& coset,
                    const std::vector<int>& subsystem_pos) const;

  int apply_to_root(int elem, int root_idx) const { return elements_[elem].root_perm[root_idx]; }

private:
  RootDatum datum_;
  std::vector<WeylElement> elements_;
  std::vector<int> generators_;
  std::unordered_map<IntMat, int> index_;
  mutable std::vector<int> inverse_cache_;
};

// Finite component group given by a multiplication table, acting on the
// lattice of a root datum.
struct Pi0 {
  int size = 1;
  std::vector<std::vector<int>> table;  // table[a][b] = a*b
  std::vector<IntMat> action;           // matrix of each element on X

  static Pi0 trivial(int rank);
  void check(const RootDatum& d) const;
  int mul(int a, int b) const { return table[a][b]; }
  int inverse(int a) const;
};

// W = W° ⋊ π₀ with the section ω ↦ (1, ω). Elements are pairs
// (index in W°, index in π₀); the pair acts on X by M_w · M_ω.
class ExtendedWeylGroup {
public:
  struct Elem {
    int w;
    int c;
    bool operator==(const Elem& o) const { return w == o.w && c == o.c; }
    bool operator<(const Elem& o) const { return c != o.c ? c < o.c : w < o.w; }
  };

  static ExtendedWeylGroup extend(WeylGroup base, Pi0 pi0);

  const WeylGroup& base() const { return base_; }
  const Pi0& pi0() const { return pi0_; }
  long size() const { return (long)base_.size() * pi0_.size; }

  Elem identity() const { return {0, 0}; }
  Elem mul(const Elem& x, const Elem& y) const;
  Elem inverse(const Elem& x) const;
  IntMat matrix(const Elem& x) const;
  RatVec apply(const Elem& x, const RatVec& v) const;
  std::vector<Elem> all_elements() const;

private:
  WeylGroup base_;
  Pi0 pi0_;
  // conjugation action of pi0 on W° by element index
  std::vector<std::vector<int>> conj_;
};

}  // namespace dls
