#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlseries/matrix.hpp"
#include "dlseries/smith.hpp"

namespace dls {

enum class Family { A, B, C, D, G };
enum class Isogeny { SimplyConnected, Adjoint, GL };

Family parse_family(const std::string& s);
Isogeny parse_isogeny(const std::string& s);
std::string to_string(Family f);
std::string to_string(Isogeny i);

// Based root datum with explicit integer root/coroot vectors.
// X = Y = Z^rank with the dot product as the pairing. roots[i] pairs with
// coroots[i]. Positive roots come first in the canonical order (height, then
// lex); roots[i + #positive] == -roots[i].
struct RootDatum {
  int rank = 0;
  std::vector<IntVec> roots;
  std::vector<IntVec> coroots;
  std::vector<int> simple;    // indices into roots
  std::vector<int> positive;  // indices into roots
  std::string label;          // e.g. "A2-sc"; empty for ad-hoc data

  static RootDatum named(Family f, int rank, Isogeny iso);
  static RootDatum torus(int rank);
  // From explicit root/coroot lists; reorders canonically, derives positives.
  static RootDatum from_lists(int rank, std::vector<IntVec> roots,
                              std::vector<IntVec> coroots,
                              const std::vector<IntVec>& simple_roots);

  std::vector<std::string> validate() const;
  RootDatum dual() const;

  int num_positive() const { return (int)positive.size(); }
  bool is_positive_index(int i) const { return i < num_positive(); }
  int negate_index(int i) const {
    int np = num_positive();
    return i < np ? i + np : i - np;
  }
  // index of a root vector, or -1
  int root_index(const IntVec& v) const;
  Int height(int root_idx) const;

  // Torsion invariant factors of X / ZPhi (empty <=> connected centre dual:
  // torsion-free quotient).
  IntVec lattice_torsion() const;
  // Torsion of Y / ZPhi^vee (the fundamental-group side).
  IntVec dual_lattice_torsion() const;

  // Simple reflection matrices acting on X.
  IntMat reflection_matrix(int root_idx) const;
};

// Lattice automorphism compatible with the base: permutes the simple roots,
// and its dual action permutes the simple coroots the same way.
struct BasedAutomorphism {
  IntMat matrix;
  int order = 1;
  std::vector<int> simple_perm;  // image position of each simple root

  static BasedAutomorphism identity(const RootDatum& d);
  // From a permutation of the simple indices (positions in d.simple).
  static BasedAutomorphism from_simple_permutation(const RootDatum& d,
                                                   const std::vector<int>& perm);
  // From an explicit matrix; checked against the base of d.
  static BasedAutomorphism from_matrix(const RootDatum& d, const IntMat& m);
};

// The arithmetic Frobenius datum: q = p^k and a pinned finite part.
struct FrobeniusTwist {
  Int q = 0;
  Int p = 0;
  BasedAutomorphism tau;

  static FrobeniusTwist make(Int q, Int p, BasedAutomorphism tau);
  static FrobeniusTwist split(const RootDatum& d, Int q);
};

bool is_prime(Int p);
// p such that q = p^k, or nullopt
std::optional<Int> prime_of_prime_power(Int q);

// G_c = (G x T)/Z with Z antidiagonal: X_c = {(x1,x2) : x1 - x2 in ZPhi},
// roots (alpha, 0). The centre of the result is connected.
struct RegularEmbedding {
  RootDatum big;
  // basis of X_c as columns, inside X + X
  IntMat basis;
  // X_c -> X, (x1,x2) |-> x1, in basis coordinates: rank x rank_c
  IntMat restriction;
  // roots of `big` correspond index-by-index to roots of the source
  std::vector<int> root_correspondence;

  BasedAutomorphism lift(const BasedAutomorphism& tau) const;
};

RegularEmbedding regular_embedding(const RootDatum& d);

}  // namespace dls
