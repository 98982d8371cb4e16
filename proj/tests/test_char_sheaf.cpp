#include <doctest.h>

#include <set>

#include "dlseries/char_sheaf.hpp"

using namespace dls;

namespace {

RatVec rv(std::initializer_list<Rat> xs) { return RatVec(xs); }

}  // namespace

TEST_CASE("make_param canonicalizes and enforces coprimality") {
  RootDatum sl2 = RootDatum::named(Family::A, 1, Isogeny::SimplyConnected);
  SheafParam zero = make_param(rv({Rat(0)}), sl2, 3);
  CHECK(zero.denominator == 1);

  SheafParam half = make_param(rv({Rat(1, 2)}), sl2, 3);
  CHECK(half.denominator == 2);
  CHECK(make_param(rv({Rat(-1, 2)}), sl2, 3) == half);
  CHECK(make_param(rv({Rat(7, 2)}), sl2, 3) == half);

  CHECK_THROWS_AS(make_param(rv({Rat(1, 2)}), sl2, 2), InputError);
  CHECK_THROWS_AS(make_param(rv({Rat(1, 2), Rat(0)}), sl2, 3), InputError);
}

TEST_CASE("frobenius action: split cases stay put exactly when den | q-1") {
  RootDatum sl2 = RootDatum::named(Family::A, 1, Isogeny::SimplyConnected);
  SUBCASE("l = 0 is always fixed") {
    Twist e{3, IntMat::identity(1)};
    SheafParam l = make_param(rv({Rat(0)}), sl2, 3);
    CHECK(e.apply(l) == l);
  }
  SUBCASE("q=3, l=1/2: 3/2 = 1/2") {
    Twist e{3, IntMat::identity(1)};
    SheafParam l = make_param(rv({Rat(1, 2)}), sl2, 3);
    CHECK(e.apply(l) == l);
  }
  SUBCASE("q=5, l=1/4: 5/4 = 1/4") {
    Twist e{5, IntMat::identity(1)};
    SheafParam l = make_param(rv({Rat(1, 4)}), sl2, 5);
    CHECK(e.apply(l) == l);
  }
  SUBCASE("q=4, l=1/3: 4/3 = 1/3") {
    Twist e{4, IntMat::identity(1)};
    SheafParam l = make_param(rv({Rat(1, 3)}), sl2, 2);
    CHECK(e.apply(l) == l);
  }
  SUBCASE("split stability law over a grid") {
    for (Int q : {2, 3, 4, 5, 7, 8, 9}) {
      Int p = *prime_of_prime_power(q);
      for (Int den = 1; den <= 12; ++den) {
        if (den % p == 0) continue;
        Twist e{q, IntMat::identity(1)};
        SheafParam l = make_param(rv({Rat(1, den)}), sl2, p);
        bool fixed = (e.apply(l) == l);
        CHECK(fixed == ((q - 1) % den == 0));
      }
    }
  }
}

TEST_CASE("orbit and stability flags on GL2") {
  RootDatum gl2 = RootDatum::named(Family::A, 1, Isogeny::GL);
  WeylGroup w = WeylGroup::generate(gl2);
  Twist e{3, IntMat::identity(2)};
  SheafParam l = make_param(rv({Rat(1, 2), Rat(0)}), gl2, 3);
  SheafOrbit orb = orbit_and_stability(w, e, l);
  CHECK(orb.elements.size() == 2);
  std::set<SheafParam> expect{make_param(rv({Rat(1, 2), Rat(0)}), gl2, 3),
                              make_param(rv({Rat(0), Rat(1, 2)}), gl2, 3)};
  CHECK(std::set<SheafParam>(orb.elements.begin(), orb.elements.end()) == expect);
  CHECK(orb.param_stable);
  CHECK(orb.orbit_stable);
  CHECK(orb.stabilizer.size() == 1);  // only the identity fixes (1/2, 0)

  SheafParam zero = make_param(rv({Rat(0), Rat(0)}), gl2, 3);
  SheafOrbit orb0 = orbit_and_stability(w, e, zero);
  CHECK(orb0.elements.size() == 1);
  CHECK(orb0.param_stable);
  CHECK(orb0.orbit_stable);
}

TEST_CASE("stabilize: fixed parameter gives w = 1") {
  RootDatum gl2 = RootDatum::named(Family::A, 1, Isogeny::GL);
  WeylGroup w = WeylGroup::generate(gl2);
  Twist e{3, IntMat::identity(2)};
  SheafParam l = make_param(rv({Rat(1, 2), Rat(0)}), gl2, 3);
  Stabilization s = stabilize(w, e, l);
  CHECK(s.w == 0);
  CHECK(s.already_fixed);
  CHECK(s.effective.matrix == e.matrix);
}

TEST_CASE("stabilize: GL2 with coordinate-swap tau needs the swap reflection") {
  RootDatum gl2 = RootDatum::named(Family::A, 1, Isogeny::GL);
  WeylGroup w = WeylGroup::generate(gl2);
  IntMat swap(2, 2);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  Twist e{3, swap};
  SheafParam l = make_param(rv({Rat(1, 2), Rat(0)}), gl2, 3);
  // eps: (1/2,0) -> 3·(0,1/2) = (0,1/2): moved, but the orbit is stable
  CHECK_FALSE(e.apply(l) == l);
  Stabilization s = stabilize(w, e, l);
  CHECK_FALSE(s.already_fixed);
  CHECK(w.length(s.w) == 1);
  // effective twist fixes l
  CHECK(s.effective.apply(l) == l);
}

TEST_CASE("stabilize rejects unstable orbits") {
  RootDatum sl2 = RootDatum::named(Family::A, 1, Isogeny::SimplyConnected);
  WeylGroup w = WeylGroup::generate(sl2);
  Twist e{3, IntMat::identity(1)};
  // orbit of 1/5 under W = {±1} is {1/5, 4/5}; 3·(1/5) = 3/5 is outside
  SheafParam l = make_param(rv({Rat(1, 5)}), sl2, 3);
  CHECK_THROWS_AS(stabilize(w, e, l), InputError);
}

TEST_CASE("endoscopic roots") {
  SUBCASE("l = 0 gives the full system") {
    RootDatum b2 = RootDatum::named(Family::B, 2, Isogeny::Adjoint);
    SheafParam zero = make_param(rv({Rat(0), Rat(0)}), b2, 3);
    CHECK(endoscopic_roots(zero, b2).all.size() == b2.roots.size());
  }
  SUBCASE("SL2 at 1/2 is a torus") {
    RootDatum sl2 = RootDatum::named(Family::A, 1, Isogeny::SimplyConnected);
    SheafParam half = make_param(rv({Rat(1, 2)}), sl2, 3);
    CHECK(endoscopic_roots(half, sl2).all.empty());
  }
  SUBCASE("GL2 at (1/2,1/2) keeps the full system") {
    RootDatum gl2 = RootDatum::named(Family::A, 1, Isogeny::GL);
    SheafParam l = make_param(rv({Rat(1, 2), Rat(1, 2)}), gl2, 3);
    CHECK(endoscopic_roots(l, gl2).all.size() == 2);
  }
  SUBCASE("closure under negation and reflections, swept") {
    RootDatum b2 = RootDatum::named(Family::B, 2, Isogeny::SimplyConnected);
    WeylGroup w = WeylGroup::generate(b2);
    for (Int d = 1; d <= 6; ++d) {
      for (Int a = 0; a < d; ++a)
        for (Int b = 0; b < d; ++b) {
          SheafParam l = make_param_unchecked(rv({Rat(a, d), Rat(b, d)}), 7);
          auto phi = endoscopic_roots(l, b2);
          std::set<int> in(phi.all.begin(), phi.all.end());
          for (int r : phi.all) {
            CHECK(in.count(b2.negate_index(r)));
            for (int r2 : phi.all) CHECK(in.count(w.apply_to_root(w.reflection(r), r2)));
          }
        }
    }
  }
}

TEST_CASE("little groups: flagship SL2 at 1/2") {
  RootDatum sl2 = RootDatum::named(Family::A, 1, Isogeny::SimplyConnected);
  WeylGroup w = WeylGroup::generate(sl2);
  SheafParam l = make_param(rv({Rat(1, 2)}), sl2, 3);
  LittleGroups lg = little_groups(w, l);
  CHECK(lg.w_l.size() == 2);            // s fixes 1/2 mod Z
  CHECK(lg.w_l0.elements.size() == 1);  // no endoscopic roots
  CHECK(lg.omega.size() == 2);          // Omega_L = W = Z/2
}

TEST_CASE("little groups: zero parameter gives W_L = W_L0 = W") {
  RootDatum a2 = RootDatum::named(Family::A, 2, Isogeny::SimplyConnected);
  WeylGroup w = WeylGroup::generate(a2);
  SheafParam zero = make_param(rv({Rat(0), Rat(0)}), a2, 5);
  LittleGroups lg = little_groups(w, zero);
  CHECK((int)lg.w_l.size() == w.size());
  CHECK((int)lg.w_l0.elements.size() == w.size());
  CHECK(lg.omega.size() == 1);
}

TEST_CASE("little groups: GL2 at (1/2,0) is trivial") {
  RootDatum gl2 = RootDatum::named(Family::A, 1, Isogeny::GL);
  WeylGroup w = WeylGroup::generate(gl2);
  SheafParam l = make_param(rv({Rat(1, 2), Rat(0)}), gl2, 3);
  LittleGroups lg = little_groups(w, l);
  CHECK(lg.w_l.size() == 1);
  CHECK(lg.omega.size() == 1);
}

TEST_CASE("connected-centre law: GL_n parameters always have trivial Omega") {
  for (int rank : {1, 2}) {
    RootDatum gl = RootDatum::named(Family::A, rank, Isogeny::GL);
    WeylGroup w = WeylGroup::generate(gl);
    for (Int d = 1; d <= 4; ++d) {
      std::vector<Int> idx(gl.rank, 0);
      for (;;) {
        RatVec v(gl.rank);
        for (int i = 0; i < gl.rank; ++i) v[i] = Rat(idx[i], d);
        SheafParam l = make_param_unchecked(v, 7);
        LittleGroups lg = little_groups(w, l);
        CHECK(lg.omega.size() == 1);
        int i = 0;
        while (i < gl.rank && ++idx[i] == d) idx[i++] = 0;
        if (i == gl.rank) break;
      }
    }
  }
}

TEST_CASE("factorization W_L = W_L0 x| Omega_L is unique across a sweep") {
  RootDatum b2 = RootDatum::named(Family::B, 2, Isogeny::SimplyConnected);
  WeylGroup w = WeylGroup::generate(b2);
  for (Int d : {1, 2, 3, 4, 6}) {
    for (Int a = 0; a < d; ++a)
      for (Int b = 0; b < d; ++b) {
        SheafParam l = make_param_unchecked(rv({Rat(a, d), Rat(b, d)}), 7);
        LittleGroups lg = little_groups(w, l);  // factorization asserted inside
        CHECK(lg.w_l.size() == lg.w_l0.elements.size() * lg.omega.size());
        CHECK(lg.factorization.size() == lg.w_l.size());
        for (size_t k = 0; k < lg.w_l.size(); ++k) {
          auto [ui, oi] = lg.factorization[k];
          CHECK(w.mul(lg.w_l0.elements[ui], lg.omega[oi]) == lg.w_l[k]);
        }
      }
  }
}
