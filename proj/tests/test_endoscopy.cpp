#include <doctest.h>

#include <algorithm>
#include <set>

#include "dlseries/endoscopy.hpp"

using namespace dls;

namespace {

struct Pipeline {
  RootDatum d;
  WeylGroup w;
  SheafParam l;
  Stabilization stab;
  EndoscopicDatum endo;
  BSet b;
};

Pipeline run(Family f, int rank, Isogeny iso, Int q, const RatVec& v,
             const IntMat* tau = nullptr) {
  RootDatum d = RootDatum::named(f, rank, iso);
  WeylGroup w = WeylGroup::generate(d);
  Int p = *prime_of_prime_power(q);
  SheafParam l = make_param(v, d, p);
  Twist eps{q, tau ? *tau : IntMat::identity(d.rank)};
  Stabilization stab = stabilize(w, eps, l);
  EndoscopicDatum endo = endoscopic_datum(d, l, w);
  BSet b = b_set(w, stab.effective, l, endo.little);
  return Pipeline{std::move(d), std::move(w), std::move(l), std::move(stab),
                  std::move(endo), std::move(b)};
}

}  // namespace

TEST_CASE("endoscopic datum: l = 0 reproduces the ambient datum") {
  RootDatum b2 = RootDatum::named(Family::B, 2, Isogeny::Adjoint);
  WeylGroup w = WeylGroup::generate(b2);
  SheafParam zero = make_param(RatVec{Rat(0), Rat(0)}, b2, 3);
  EndoscopicDatum e = endoscopic_datum(b2, zero, w);
  CHECK(e.h.roots == b2.roots);
  CHECK(e.h.coroots == b2.coroots);
  CHECK(e.h.validate().empty());
}

TEST_CASE("endoscopic datum: SL2 at 1/2 is the rank-1 torus") {
  auto pl = run(Family::A, 1, Isogeny::SimplyConnected, 3, RatVec{Rat(1, 2)});
  CHECK(pl.endo.h.roots.empty());
  CHECK(pl.endo.h.rank == 1);
  CHECK(pl.endo.h.validate().empty());
}

TEST_CASE("endoscopic datum: GL2 at (1/2,1/2) is GL2 again") {
  auto pl = run(Family::A, 1, Isogeny::GL, 3, RatVec{Rat(1, 2), Rat(1, 2)});
  CHECK(pl.endo.h.roots == pl.d.roots);
}

TEST_CASE("flagship SL2, q = 3, l = 1/2") {
  auto pl = run(Family::A, 1, Isogeny::SimplyConnected, 3, RatVec{Rat(1, 2)});
  // Phi_L empty, W_L0 trivial, Omega of order 2
  CHECK(pl.endo.little.phi_l.all.empty());
  CHECK(pl.endo.little.w_l0.elements.size() == 1);
  CHECK(pl.endo.little.omega.size() == 2);
  // B set: two cosets, two singleton orbits
  CHECK(pl.b.cosets.size() == 2);
  CHECK(pl.b.orbits.size() == 2);
  for (const auto& orbit : pl.b.orbits) CHECK(orbit.size() == 1);
  // forms are +1 and -1 on X
  std::set<Int> entries;
  for (size_t beta = 0; beta < pl.b.cosets.size(); ++beta) {
    RationalForm f = rational_form((int)beta, pl.b, pl.endo, pl.w, pl.stab.effective);
    CHECK(f.sigma.matrix.rows == 1);
    entries.insert(f.sigma.matrix(0, 0));
    CHECK(f.q == 3);
  }
  CHECK(entries == std::set<Int>{-1, 1});
  // coinvariants: two twisted classes matching two orbits
  Coinvariants ci = coinvariants(pl.w, pl.endo.little, pl.b);
  CHECK(ci.classes.size() == 2);
  // fixed omega: all of Omega_L in the split case
  CHECK(fixed_omega(pl.w, pl.stab.effective, pl.endo.little).size() == 2);
  // stabilizer of each beta is everything (orbits are singletons)
  CHECK(stabilizer_omega(0, pl.b, pl.endo.little).size() == 2);
  CHECK(stabilizer_omega(1, pl.b, pl.endo.little).size() == 2);
}

TEST_CASE("l = 0: single coset, trivial everything") {
  auto pl = run(Family::A, 2, Isogeny::SimplyConnected, 2, RatVec{Rat(0), Rat(0)});
  CHECK(pl.b.cosets.size() == 1);
  CHECK(pl.b.orbits.size() == 1);
  CHECK(pl.b.identity_coset == 0);
  RationalForm f = rational_form(0, pl.b, pl.endo, pl.w, pl.stab.effective);
  CHECK(f.sigma.matrix.is_identity());
  Coinvariants ci = coinvariants(pl.w, pl.endo.little, pl.b);
  CHECK(ci.classes.size() == 1);
}

TEST_CASE("GL2 at (1/2,0): B set is a single coset") {
  auto pl = run(Family::A, 1, Isogeny::GL, 3, RatVec{Rat(1, 2), Rat(0)});
  CHECK(pl.b.cosets.size() == 1);
  CHECK(pl.b.orbits.size() == 1);
}

TEST_CASE("quasi-split outer form: A2 with flip, l = 0") {
  RootDatum a2 = RootDatum::named(Family::A, 2, Isogeny::SimplyConnected);
  IntMat flip = BasedAutomorphism::from_simple_permutation(a2, {1, 0}).matrix;
  auto pl = run(Family::A, 2, Isogeny::SimplyConnected, 2, RatVec{Rat(0), Rat(0)}, &flip);
  REQUIRE(pl.b.cosets.size() == 1);
  RationalForm f = rational_form(0, pl.b, pl.endo, pl.w, pl.stab.effective);
  CHECK(f.sigma.matrix == flip);
  CHECK(f.sigma.order == 2);
}

TEST_CASE("b_set demands an eps-fixed parameter") {
  RootDatum gl2 = RootDatum::named(Family::A, 1, Isogeny::GL);
  WeylGroup w = WeylGroup::generate(gl2);
  IntMat swap(2, 2);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  Twist eps{3, swap};
  SheafParam l = make_param(RatVec{Rat(1, 2), Rat(0)}, gl2, 3);
  LittleGroups little = little_groups(w, l);
  CHECK_THROWS_AS(b_set(w, eps, l, little), InputError);
  // after stabilization it works
  Stabilization s = stabilize(w, eps, l);
  CHECK_NOTHROW(b_set(w, s.effective, l, little));
}

TEST_CASE("min reps: unique minimum sending Phi_L+ into Phi+ across a B2 sweep") {
  RootDatum b2 = RootDatum::named(Family::B, 2, Isogeny::SimplyConnected);
  WeylGroup w = WeylGroup::generate(b2);
  for (Int den : {1, 2, 3, 4}) {
    for (Int a = 0; a < den; ++a)
      for (Int b = 0; b < den; ++b) {
        SheafParam l = make_param_unchecked(RatVec{Rat(a, den), Rat(b, den)}, 7);
        Twist eps{7, IntMat::identity(2)};
        if (!(eps.apply(l) == l)) continue;
        LittleGroups little = little_groups(w, l);
        BSet bs = b_set(w, eps, l, little);
        std::set<int> pos(little.phi_l.positive.begin(), little.phi_l.positive.end());
        for (int rep : bs.min_reps) {
          for (int r : little.phi_l.positive) CHECK(pos.count(w.apply_to_root(rep, r)));
          CHECK(std::find(little.omega.begin(), little.omega.end(), rep) !=
                little.omega.end());
        }
      }
  }
}

TEST_CASE("coinvariants for twisted A2: inversion collapses Z/3 to one class") {
  // simply connected A2 with the diagram flip at l = (1/3,1/3): the Coxeter
  // rotation fixes l, so Omega_L = Z/3, and the flip inverts it; twisted
  // conjugacy then has a single class, against two orbits in the split case
  RootDatum a2 = RootDatum::named(Family::A, 2, Isogeny::SimplyConnected);
  WeylGroup w = WeylGroup::generate(a2);
  IntMat flip = BasedAutomorphism::from_simple_permutation(a2, {1, 0}).matrix;
  SheafParam l = make_param(RatVec{Rat(1, 3), Rat(1, 3)}, a2, 2);
  LittleGroups little = little_groups(w, l);
  REQUIRE(little.omega.size() == 3);
  REQUIRE(little.w_l0.elements.size() == 1);

  SUBCASE("twisted by the flip: one class") {
    Twist eps{4, flip};
    REQUIRE(eps.apply(l) == l);
    BSet bs = b_set(w, eps, l, little);
    Coinvariants ci = coinvariants(w, little, bs);
    CHECK(ci.classes.size() == 1);
    CHECK(bs.orbits.size() == 1);
    CHECK(fixed_omega(w, eps, little).size() == 1);
  }
  SUBCASE("split: abelian untwisted coinvariants keep all three classes") {
    Twist eps{4, IntMat::identity(2)};
    REQUIRE(eps.apply(l) == l);
    BSet bs = b_set(w, eps, l, little);
    Coinvariants ci = coinvariants(w, little, bs);
    CHECK(ci.classes.size() == 3);
    CHECK(bs.orbits.size() == 3);
  }
}

TEST_CASE("component group: SL2 at 1/2 against the dual side") {
  auto pl = run(Family::A, 1, Isogeny::SimplyConnected, 3, RatVec{Rat(1, 2)});
  ComponentGroupReport r = steinberg_component_group(pl.d, pl.l, pl.w, pl.endo.little);
  CHECK(r.w_s.size() == 2);
  CHECK(r.w_s0.size() == 1);
  CHECK(r.cosets.size() == 2);
  CHECK(r.omega_to_coset.size() == 2);
}

TEST_CASE("component group: s = 0 has trivial quotient") {
  auto pl = run(Family::B, 2, Isogeny::SimplyConnected, 3, RatVec{Rat(0), Rat(0)});
  ComponentGroupReport r = steinberg_component_group(pl.d, pl.l, pl.w, pl.endo.little);
  CHECK(r.cosets.size() == 1);
}

TEST_CASE("fixed omega matches the coset characterisation (checked internally)") {
  auto pl = run(Family::A, 1, Isogeny::SimplyConnected, 5, RatVec{Rat(1, 2)});
  auto fixed = fixed_omega(pl.w, pl.stab.effective, pl.endo.little);
  CHECK(fixed.size() == 2);
}

TEST_CASE("fixed omega: D4 twist swapping two Klein-four generators leaves the diagonal") {
  RootDatum d4 = RootDatum::named(Family::D, 4, Isogeny::SimplyConnected);
  auto flip = BasedAutomorphism::from_simple_permutation(d4, {0, 1, 3, 2});
  WeylGroup w = WeylGroup::generate(d4);
  SheafParam l = make_param(RatVec{Rat(0), Rat(1, 2), Rat(0), Rat(0)}, d4, 3);
  Twist eps{3, flip.matrix};
  REQUIRE(eps.apply(l) == l);
  LittleGroups lg = little_groups(w, l);
  REQUIRE(lg.omega.size() == 4);
  // Omega_L is Klein four and the twist permutes two of its generators
  for (int om : lg.omega) CHECK(w.mul(om, om) == 0);
  int moved = 0;
  for (int om : lg.omega)
    if (eps.conjugate(w, om) != om) ++moved;
  CHECK(moved == 2);
  auto fixed = fixed_omega(w, eps, lg);
  CHECK(fixed.size() == 2);
}

TEST_CASE("component groups on GL data are trivial across a small sweep") {
  RootDatum gl2 = RootDatum::named(Family::A, 1, Isogeny::GL);
  WeylGroup w = WeylGroup::generate(gl2);
  for (Int den : {1, 2, 4, 5}) {
    for (Int a = 0; a < den; ++a)
      for (Int b = 0; b < den; ++b) {
        SheafParam l = make_param_unchecked(RatVec{Rat(a, den), Rat(b, den)}, 3);
        if (l.denominator % 3 == 0) continue;
        LittleGroups little = little_groups(w, l);
        ComponentGroupReport r = steinberg_component_group(gl2, l, w, little);
        CHECK(r.cosets.size() == 1);
      }
  }
}

TEST_CASE("orbit-stabilizer on the B set") {
  auto pl = run(Family::A, 1, Isogeny::SimplyConnected, 3, RatVec{Rat(1, 2)});
  for (size_t beta = 0; beta < pl.b.cosets.size(); ++beta) {
    auto stab = stabilizer_omega((int)beta, pl.b, pl.endo.little);
    for (const auto& orbit : pl.b.orbits)
      if (std::find(orbit.begin(), orbit.end(), (int)beta) != orbit.end())
        CHECK(orbit.size() * stab.size() == pl.endo.little.omega.size());
  }
}

TEST_CASE("extension across the regular embedding") {
  SUBCASE("SL2 at 1/2") {
    RootDatum sl2 = RootDatum::named(Family::A, 1, Isogeny::SimplyConnected);
    RegularEmbedding emb = regular_embedding(sl2);
    WeylGroup wbig = WeylGroup::generate(emb.big);
    SheafParam l = make_param(RatVec{Rat(1, 2)}, sl2, 3);
    auto phi = endoscopic_roots(l, sl2);
    EmbeddedParam ext = extend_to_embedding(emb, l, wbig, phi);
    CHECK(ext.l_c.denominator == 2);
    CHECK(ext.little_c.omega.size() == 1);
    CHECK(ext.phi_lc.empty());
    // restriction really maps l_c to l
    RatVec down = emb.restriction.apply(ext.l_c.vector);
    for (int i = 0; i < sl2.rank; ++i) CHECK(down[i].mod1() == l.vector[i]);
  }
  SUBCASE("zero parameter lifts to zero") {
    RootDatum a2 = RootDatum::named(Family::A, 2, Isogeny::SimplyConnected);
    RegularEmbedding emb = regular_embedding(a2);
    WeylGroup wbig = WeylGroup::generate(emb.big);
    SheafParam zero = make_param(RatVec{Rat(0), Rat(0)}, a2, 5);
    auto phi = endoscopic_roots(zero, a2);
    EmbeddedParam ext = extend_to_embedding(emb, zero, wbig, phi);
    CHECK(ext.l_c.denominator == 1);
    CHECK(ext.phi_lc.size() == emb.big.roots.size());
  }
  SUBCASE("GL2: extension exists for every small parameter") {
    RootDatum gl2 = RootDatum::named(Family::A, 1, Isogeny::GL);
    RegularEmbedding emb = regular_embedding(gl2);
    WeylGroup wbig = WeylGroup::generate(emb.big);
    for (Int den : {1, 2, 4}) {
      for (Int a = 0; a < den; ++a)
        for (Int b = 0; b < den; ++b) {
          SheafParam l = make_param(RatVec{Rat(a, den), Rat(b, den)}, gl2, 3);
          auto phi = endoscopic_roots(l, gl2);
          EmbeddedParam ext = extend_to_embedding(emb, l, wbig, phi);
          CHECK(ext.little_c.omega.size() == 1);
          CHECK(ext.l_c.denominator % 3 != 0);
        }
    }
  }
}
