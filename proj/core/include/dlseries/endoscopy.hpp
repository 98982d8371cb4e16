#pragma once

#include "dlseries/char_sheaf.hpp"

namespace dls {

// The endoscopic group H of the pair (datum, l): same lattice, root system
// Φ_L, together with the groups attached to l in W.
struct EndoscopicDatum {
  RootDatum ambient;
  SheafParam l;
  LittleGroups little;   // Φ_L, W_L, W_L°, Ω_L
  RootDatum h;           // datum of H (roots Φ_L in the same lattice)
};

EndoscopicDatum endoscopic_datum(const RootDatum& d, const SheafParam& l,
                                 const WeylGroup& w);

// 𝔅_L = W_L° \ {w : w(ε·l) = l} with the twisted Ω_L-action
// Ad_ε(ω)·w = ω w ε(ω)^{-1} and minimal coset representatives.
struct BSet {
  std::vector<std::vector<int>> cosets;  // element indices, each sorted
  std::vector<int> min_reps;             // w^β per coset
  int identity_coset = -1;               // the coset of 1
  // action[ω][β] = index of Ad_ε(ω)·β, ω indexed as in LittleGroups::omega
  std::vector<std::vector<int>> action;
  std::vector<std::vector<int>> orbits;  // partition of coset indices
  // ε-image of each ω ∈ Ω_L, as an index into omega
  std::vector<int> eps_on_omega;
};

BSet b_set(const WeylGroup& w, const Twist& eps, const SheafParam& l,
           const LittleGroups& little);

// Frobenius form of H attached to β: finite part w^β ∘ ε restricted to
// (H, Φ_L⁺), plus q.
struct RationalForm {
  int beta = 0;
  int w_beta = 0;
  BasedAutomorphism sigma;  // based for the H-datum
  Int q = 0;
};

RationalForm rational_form(int beta, const BSet& b, const EndoscopicDatum& e,
                           const WeylGroup& w, const Twist& eps);

// Twisted-conjugacy classes of Ω_L under ω' ↦ ω ω' ε(ω)^{-1}, with the
// verified bijection to the Ad_ε-orbits on 𝔅_L.
struct Coinvariants {
  std::vector<std::vector<int>> classes;  // partition of omega indices
  std::vector<int> orbit_to_class;        // BSet orbit -> class index
};

Coinvariants coinvariants(const WeylGroup& w, const LittleGroups& little, const BSet& b);

// Dual-side component group: W_s and its reflection part on the dual datum,
// with the exhibited isomorphism Ω_L ≅ W_s / W_s°.
struct ComponentGroupReport {
  RootDatum dual_datum;
  std::vector<int> w_s;                  // stabilizer of s in W(dual)
  std::vector<int> w_s0;                 // reflection subgroup
  std::vector<int> w_s0_simple;          // its generating reflections (dual root indices)
  std::vector<std::vector<int>> cosets;  // W_s°\W_s
  std::vector<int> omega_to_coset;       // the isomorphism, by omega index
};

ComponentGroupReport steinberg_component_group(const RootDatum& d, const SheafParam& l,
                                               const WeylGroup& w,
                                               const LittleGroups& little);

// Ω_L^ε = {ω : ε(ω) = ω}; checked equal to {ω : ω ε(ω)^{-1} ∈ W_L°}.
std::vector<int> fixed_omega(const WeylGroup& w, const Twist& eps,
                             const LittleGroups& little);

// Stab_{Ω_L}(β) under Ad_ε, as omega indices.
std::vector<int> stabilizer_omega(int beta, const BSet& b, const LittleGroups& little);

// Extension of l across a regular embedding: solves restriction·l_c ≡ l with
// denominator dividing that of l, lexicographically least, and checks that
// the big side has trivial Ω and Φ_{L_c} matching Φ_L.
struct EmbeddedParam {
  SheafParam l_c;
  LittleGroups little_c;
  std::vector<int> phi_lc;  // endoscopic roots upstairs, as big-datum indices
};

EmbeddedParam extend_to_embedding(const RegularEmbedding& emb, const SheafParam& l,
                                  const WeylGroup& w_big,
                                  const EndoscopicRoots& phi_l_downstairs);

}  // namespace dls
