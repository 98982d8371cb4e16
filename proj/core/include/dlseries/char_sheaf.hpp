#pragma once

#include "dlseries/weyl.hpp"

namespace dls {

// Kummer parameter on the torus: torsion element of X ⊗ (Q/Z) with order
// prime to p, stored as the canonical [0,1) representative. Dually read as a
// semisimple element of the dual torus.
struct SheafParam {
  RatVec vector;
  Int denominator = 1;  // lcm of entry denominators
  Int p = 0;

  bool operator==(const SheafParam& o) const { return vector == o.vector; }
  bool operator<(const SheafParam& o) const;
  std::string str() const;
};

SheafParam make_param(const RatVec& v, const RootDatum& d, Int p);
SheafParam make_param_unchecked(const RatVec& v, Int p);

// Frobenius acting on parameters as l |-> q·m(l) mod X and on W by
// conjugation with m. The pinned case has m = tau; after stabilization m is
// w·tau for the stabilizing w.
struct Twist {
  Int q = 1;
  IntMat matrix;

  static Twist of(const FrobeniusTwist& e) { return {e.q, e.tau.matrix}; }
  SheafParam apply(const SheafParam& l) const;
  // conjugation image of a Weyl element
  int conjugate(const WeylGroup& w, int i) const;
};

inline SheafParam frobenius_act(const FrobeniusTwist& eps, const SheafParam& l) {
  return Twist::of(eps).apply(l);
}

struct SheafOrbit {
  SheafParam base;
  std::vector<SheafParam> elements;  // sorted canonically
  std::vector<int> stabilizer;       // W_L as element indices
  bool param_stable = false;         // ε·l = l
  bool orbit_stable = false;         // ε·l ∈ W·l
};

SheafOrbit orbit_and_stability(const WeylGroup& w, const Twist& eps, const SheafParam& l);

struct Stabilization {
  int w = 0;             // minimal-length w with w(ε·l) = l and w·ε pinned on Φ_L⁺
  Twist effective;       // the twist w·ε
  bool already_fixed = false;
};

// Replace ε by an equivalent twist fixing l. Requires the
// orbit of l to be ε-stable. Among all stabilizing w the ones making w·ε
// preserve Φ_L⁺ are kept (they form a coset of Ω_L), then minimal length and
// lexicographically least matrix.
Stabilization stabilize(const WeylGroup& w, const Twist& eps, const SheafParam& l);

// Φ_L = {α : <l, α^vee> ∈ Z}, returned as root indices with the positive part.
struct EndoscopicRoots {
  std::vector<int> all;
  std::vector<int> positive;
};
EndoscopicRoots endoscopic_roots(const SheafParam& l, const RootDatum& d);

// W_L = Stab_W(l) with its factorization W_L = W_L° ⋊ Ω_L.
struct LittleGroups {
  std::vector<int> w_l;          // sorted element indices
  WeylGroup::Subgroup w_l0;      // reflection subgroup of Φ_L
  std::vector<int> omega;        // Ω_L: elements of W_L preserving Φ_L⁺
  EndoscopicRoots phi_l;
  // factorization w = u·ω recorded per element of W_L as indices into
  // (w_l0.elements, omega)
  std::vector<std::pair<int, int>> factorization;
};

LittleGroups little_groups(const WeylGroup& w, const SheafParam& l);

}  // namespace dls
