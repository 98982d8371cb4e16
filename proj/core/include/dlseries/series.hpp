#pragma once

#include <optional>

#include "dlseries/endoscopy.hpp"

namespace dls {

// Index data of a geometric series: the right-hand side
// (⊕_{β ∈ 𝔅_L} Rep₁(H^{σ_{βε}}))^{Ω_L} of the equivalence, together with the
// cross-checks tying the pieces together.
struct GeometricSeriesReport {
  RootDatum datum;
  Int q = 0, p = 0;
  IntMat tau;
  SheafParam l;
  Stabilization stab;
  EndoscopicDatum endo;
  BSet b;
  std::vector<RationalForm> forms;  // one per coset of 𝔅_L
  Coinvariants coinv;
  ComponentGroupReport steinberg;
  std::vector<int> omega_eps;  // Ω_L^ε, omega indices
  // simple-object count of the right-hand side; only defined when H is a
  // torus (Rep₁ of a torus has one simple object)
  std::optional<long> predicted_simple_count;
};

// One rational series inside the geometric one: an Ad_ε-orbit on 𝔅_L.
struct RationalSeriesReport {
  std::vector<int> orbit;  // coset indices, sorted
  int beta = 0;            // representative: lexicographically least w^β
  Twist s_twist;           // the twist w^β·ε defining s_β
  RationalForm form;
  std::vector<int> omega_beta;                // Ω_{L,β}, omega indices
  std::optional<std::vector<int>> omega_eps;  // β = 1 only
  std::optional<long> predicted_simple_count;
};

struct RationalPartition {
  GeometricSeriesReport geometric;
  std::vector<RationalSeriesReport> series;
};

struct SeriesContext {
  WeylGroup w;
  GeometricSeriesReport report;
};

SeriesContext geometric_report(const RootDatum& d, const FrobeniusTwist& eps,
                               const SheafParam& l, long cap = kDefaultWeylCap);

struct PartitionContext {
  WeylGroup w;
  RationalPartition partition;
};

PartitionContext rational_partition(const RootDatum& d, const FrobeniusTwist& eps,
                                    const SheafParam& l, long cap = kDefaultWeylCap);

// Disconnected group shadow: reductive G° with a finite component group
// acting by pinned automorphisms, all components ε-stable.
struct DisconnectedInput {
  RootDatum datum0;
  Pi0 pi0;
  Int q = 0, p = 0;
  BasedAutomorphism tau;  // must commute with the pi0 action on X

  void check() const;
};

// Ω_L and friends computed in the extended group W = W° ⋊ π₀.
struct ExtendedLittleGroups {
  std::vector<ExtendedWeylGroup::Elem> w_l;
  std::vector<ExtendedWeylGroup::Elem> omega;  // Ω_L in W
  std::vector<int> omega0;  // Ω_L° = Ω_L ∩ W°, as indices into omega
  EndoscopicRoots phi_l;
};

struct DisconnectedGeometricReport {
  DisconnectedInput input;
  SheafParam l;
  Stabilization stab;  // within W°
  EndoscopicDatum endo;
  BSet b0;                          // 𝔅_L° with the Ω_L°-action
  std::vector<RationalForm> forms;  // per β ∈ 𝔅_L°
  ExtendedLittleGroups ext;
  // Ad_ε-action of the full Ω_L on 𝔅_L° and its orbits
  std::vector<std::vector<int>> ext_action;
  std::vector<std::vector<int>> ext_orbits;
  // W°-orbit decomposition of W·l and the double-coset count W°\W/W_L
  int w0_orbits_in_wl = 0;
  int double_cosets = 0;
  std::vector<int> pi0_orbit_stabilizer;  // {c : c·l ∈ W°·l}
  std::optional<long> predicted_simple_count;
};

struct DisconnectedSeriesContext {
  ExtendedWeylGroup w;
  DisconnectedGeometricReport report;
};

DisconnectedSeriesContext disconnected_geometric_report(const DisconnectedInput& in,
                                                        const SheafParam& l,
                                                        long cap = kDefaultWeylCap);

// β = 1 rational series data for the disconnected case, with the two-layer
// (Ω°, π₀) structure made explicit.
struct DisconnectedRationalReport {
  DisconnectedInput input;
  SheafParam l;
  EndoscopicDatum endo;
  RationalForm form;                                // σ = finite part of ε
  std::vector<ExtendedWeylGroup::Elem> omega_eps;   // Ω_L^ε in W
  std::vector<ExtendedWeylGroup::Elem> omega_l1;    // {ω : ω ε(ω)^{-1} ∈ W_L°}
  std::vector<int> omega0_l1;                       // Ω°_{L,1}, indices into omega_l1
  std::vector<int> pi0_part;                        // image of Ω_{L,1} in π₀
  std::optional<long> predicted_simple_count;
};

struct DisconnectedRationalContext {
  ExtendedWeylGroup w;
  DisconnectedRationalReport report;
};

DisconnectedRationalContext disconnected_rational_report(const DisconnectedInput& in,
                                                         const SheafParam& l,
                                                         long cap = kDefaultWeylCap);

// number of conjugacy classes, i.e. |Irr|, of the subgroup of the extended
// group spanned by `elems` (must be closed under the group operations)
long conjugacy_class_count(const ExtendedWeylGroup& w,
                           const std::vector<ExtendedWeylGroup::Elem>& elems);
long conjugacy_class_count(const WeylGroup& w, const std::vector<int>& elems);

}  // namespace dls
