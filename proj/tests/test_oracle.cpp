#include <doctest.h>

#include <algorithm>
#include <set>

#include "dlseries/oracle.hpp"

using namespace dls;
using namespace dls::oracle;

TEST_CASE("small fields: prime and prime-power arithmetic") {
  SUBCASE("F_5") {
    SmallField f(5, 1);
    CHECK(f.q() == 5);
    for (Int a = 0; a < 5; ++a)
      for (Int b = 0; b < 5; ++b) {
        CHECK(f.add(a, b) == (a + b) % 5);
        CHECK(f.mul(a, b) == a * b % 5);
      }
    for (Int a = 1; a < 5; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
  }
  SUBCASE("F_4 via x^2+x+1") {
    SmallField f(2, 2);
    CHECK(f.q() == 4);
    CHECK(f.modulus() == IntVec{1, 1, 1});
    // the class of x (index 2) has order 3
    CHECK(f.mul_order(2) == 3);
    CHECK(f.mul(2, 2) == f.add(2, 1));  // x^2 = x + 1
    for (Int a = 1; a < 4; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    // field axioms by brute force
    for (Int a = 0; a < 4; ++a)
      for (Int b = 0; b < 4; ++b) {
        CHECK(f.add(a, b) == f.add(b, a));
        CHECK(f.mul(a, b) == f.mul(b, a));
        for (Int c = 0; c < 4; ++c)
          CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      }
  }
  SUBCASE("embedding F_4 into F_4096 = F_2^12") {
    SmallField small(2, 2), big(2, 12);
    auto emb = small.embedding_into(big);
    CHECK(emb[0] == 0);
    CHECK(emb[1] == 1);
    for (Int a = 0; a < 4; ++a)
      for (Int b = 0; b < 4; ++b) {
        CHECK(emb[small.mul(a, b)] == big.mul(emb[a], emb[b]));
        CHECK(emb[small.add(a, b)] == big.add(emb[a], emb[b]));
      }
  }
}

TEST_CASE("census GL2(F2) = S3: two semisimple classes") {
  ClassCensus c = census({MatrixFamily::GL, 2, 2});
  CHECK(c.group_order == 6);
  CHECK(c.classes.size() == 2);
  CHECK(c.semisimple_elements == 3);  // identity + two 3-cycles
  CHECK(c.bundles.size() == 2);
  for (const auto& cls : c.classes) CHECK(cls.pi0 == 1);
}

TEST_CASE("census PGL2(F3) = S4: four semisimple classes, order-2 pair bundles") {
  ClassCensus c = census({MatrixFamily::PGL, 2, 3});
  CHECK(c.group_order == 24);
  CHECK(c.classes.size() == 4);
  std::multiset<Int> orders;
  for (const auto& cls : c.classes) orders.insert(cls.element_order);
  CHECK(orders == std::multiset<Int>{1, 2, 2, 4});
  // bundles: {1}, {the two order-2 classes}, {order-4}
  std::multiset<size_t> bundle_sizes;
  for (const auto& b : c.bundles) bundle_sizes.insert(b.classes.size());
  CHECK(bundle_sizes == std::multiset<size_t>{1, 1, 2});
  // the order-2 classes have disconnected centralizer (pi0 = 2)
  for (const auto& cls : c.classes) {
    if (cls.element_order == 2) CHECK(cls.pi0 == 2);
    if (cls.element_order == 1) CHECK(cls.pi0 == 1);
  }
}

TEST_CASE("census SL2(F3): classes I, -I, and one order-4 class") {
  ClassCensus c = census({MatrixFamily::SL, 2, 3});
  CHECK(c.group_order == 24);
  CHECK(c.classes.size() == 3);
  std::multiset<Int> orders;
  for (const auto& cls : c.classes) orders.insert(cls.element_order);
  CHECK(orders == std::multiset<Int>{1, 2, 4});
  CHECK(c.semisimple_elements == 8);  // I, -I, six order-4 elements
}

TEST_CASE("census PGL2(F5) = S5 semisimple part") {
  ClassCensus c = census({MatrixFamily::PGL, 2, 5});
  CHECK(c.group_order == 120);
  CHECK(c.classes.size() == 6);
  std::multiset<Int> orders;
  for (const auto& cls : c.classes) orders.insert(cls.element_order);
  CHECK(orders == std::multiset<Int>{1, 2, 2, 3, 4, 6});
}

TEST_CASE("census GL3(F2): orders 1, 3, 7, 7") {
  ClassCensus c = census({MatrixFamily::GL, 3, 2});
  CHECK(c.group_order == 168);
  CHECK(c.classes.size() == 4);
  std::multiset<Int> orders;
  for (const auto& cls : c.classes) orders.insert(cls.element_order);
  CHECK(orders == std::multiset<Int>{1, 3, 7, 7});
  // the two order-7 classes have different characteristic polynomials
  CHECK(c.bundles.size() == 4);
}

TEST_CASE("census PGL2(F4) = A5: orders 1, 3, 5, 5") {
  ClassCensus c = census({MatrixFamily::PGL, 2, 4});
  CHECK(c.group_order == 60);
  CHECK(c.classes.size() == 4);
  std::multiset<Int> orders;
  for (const auto& cls : c.classes) orders.insert(cls.element_order);
  CHECK(orders == std::multiset<Int>{1, 3, 5, 5});
}

TEST_CASE("census GL1(F5): the multiplicative group") {
  ClassCensus c = census({MatrixFamily::GL, 1, 5});
  CHECK(c.group_order == 4);
  CHECK(c.classes.size() == 4);
  CHECK(c.semisimple_elements == 4);
}

TEST_CASE("census rejects out-of-scope specs") {
  CHECK_THROWS_AS(census({MatrixFamily::GL, 4, 2}), InputError);
  CHECK_THROWS_AS(census({MatrixFamily::GL, 2, 7}), InputError);
}

TEST_CASE("census determinism") {
  ClassCensus a = census({MatrixFamily::PGL, 2, 3});
  ClassCensus b = census({MatrixFamily::PGL, 2, 3});
  REQUIRE(a.classes.size() == b.classes.size());
  for (size_t i = 0; i < a.classes.size(); ++i) {
    CHECK(a.classes[i].representative == b.classes[i].representative);
    CHECK(a.classes[i].size == b.classes[i].size);
  }
}

TEST_CASE("compare: SL2 over F3 against PGL2(F3)") {
  CompareReport r = compare(Family::A, 1, Isogeny::SimplyConnected, 3, 12,
                            {MatrixFamily::PGL, 2, 3});
  CHECK(r.match);
  CHECK(r.predicted_total == 4);
  CHECK(r.census_total == 4);
  CHECK(r.skipped.empty());
  // orbits: 0, 1/2 (splits in two), {1/4,3/4}
  CHECK(r.orbits.size() == 3);
  long split_two = 0;
  for (const auto& o : r.orbits)
    if (o.rational_count == 2) ++split_two;
  CHECK(split_two == 1);
}

TEST_CASE("compare: GL2 over F2 against GL2(F2)") {
  CompareReport r =
      compare(Family::A, 1, Isogeny::GL, 2, 12, {MatrixFamily::GL, 2, 2});
  CHECK(r.match);
  CHECK(r.predicted_total == 2);
  CHECK(r.census_total == 2);
}

TEST_CASE("compare: rank-2 duals and nonsplit component groups") {
  struct Row {
    Family f;
    int r;
    Isogeny iso;
    Int q;
    MatrixGroupSpec spec;
    long expect;
  };
  // element orders reach q^2+q+1, so the bound must clear 21
  for (const auto& row : std::vector<Row>{
           {Family::A, 2, Isogeny::SimplyConnected, 2, {MatrixFamily::PGL, 3, 2}, 4},
           {Family::A, 2, Isogeny::Adjoint, 3, {MatrixFamily::SL, 3, 3}, 9},
           {Family::A, 2, Isogeny::SimplyConnected, 4, {MatrixFamily::PGL, 3, 4}, 18},
           {Family::A, 2, Isogeny::GL, 3, {MatrixFamily::GL, 3, 3}, 18},
           {Family::A, 1, Isogeny::Adjoint, 4, {MatrixFamily::SL, 2, 4}, 4},
       }) {
    CompareReport rep = compare(row.f, row.r, row.iso, row.q, 40, row.spec);
    CHECK(rep.match);
    CHECK(rep.predicted_total == row.expect);
    CHECK(rep.skipped.empty());
  }
}

TEST_CASE("compare rejects wrong duality pairings") {
  CHECK_THROWS_AS(compare(Family::A, 1, Isogeny::SimplyConnected, 3, 12,
                          {MatrixFamily::SL, 2, 3}),
                  InputError);
  CHECK_THROWS_AS(compare(Family::A, 1, Isogeny::GL, 3, 12, {MatrixFamily::GL, 3, 3}),
                  InputError);
  CHECK_THROWS_AS(compare(Family::B, 2, Isogeny::Adjoint, 3, 12, {MatrixFamily::SL, 2, 3}),
                  InputError);
  CHECK_THROWS_AS(compare(Family::A, 1, Isogeny::SimplyConnected, 5, 12,
                          {MatrixFamily::PGL, 2, 3}),
                  InputError);
}

namespace {

DisconnectedInput swap_torus(Int q) {
  DisconnectedInput in;
  in.datum0 = RootDatum::torus(2);
  in.pi0.size = 2;
  in.pi0.table = {{0, 1}, {1, 0}};
  IntMat swap(2, 2);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  in.pi0.action = {IntMat::identity(2), swap};
  in.q = q;
  in.p = *prime_of_prime_power(q);
  in.tau = BasedAutomorphism::identity(in.datum0);
  return in;
}

}  // namespace

TEST_CASE("finite group check: dihedral of order 8 = (F3x)^2 x| swap") {
  DisconnectedInput in = swap_torus(3);
  SUBCASE("character (chi, 1): one 2-dimensional irreducible") {
    auto t = finite_group_series_check(in, make_param(RatVec{Rat(1, 2), Rat(0)}, in.datum0, 3));
    CHECK(t.group_order == 8);
    CHECK(t.total_irreducibles == 5);  // dihedral group of order 8
    CHECK(t.orbit_size == 2);
    CHECK(t.oracle_count == 1);
    REQUIRE(t.oracle_dims.size() == 1);
    CHECK(t.oracle_dims[0] == 2);
    CHECK(t.predicted_geometric == 1);
    REQUIRE(t.predicted_rational.has_value());
    CHECK(*t.predicted_rational == 1);
  }
  SUBCASE("character (chi, chi): two 1-dimensional irreducibles") {
    auto t = finite_group_series_check(
        in, make_param(RatVec{Rat(1, 2), Rat(1, 2)}, in.datum0, 3));
    CHECK(t.oracle_count == 2);
    REQUIRE(t.oracle_dims.size() == 2);
    CHECK(t.oracle_dims == std::vector<long>{1, 1});
    CHECK(t.predicted_geometric == 2);
    REQUIRE(t.predicted_rational.has_value());
    CHECK(*t.predicted_rational == 2);
  }
  SUBCASE("trivial character: trivial and sign of pi0") {
    auto t = finite_group_series_check(in, make_param(RatVec{Rat(0), Rat(0)}, in.datum0, 3));
    CHECK(t.oracle_count == 2);
    CHECK(t.predicted_geometric == 2);
    REQUIRE(t.predicted_rational.has_value());
    CHECK(*t.predicted_rational == 2);
  }
}

TEST_CASE("finite group check: (F5x)^2 x| swap, order 32") {
  DisconnectedInput in = swap_torus(5);
  for (auto [a, b] : std::vector<std::pair<Int, Int>>{{1, 0}, {1, 1}, {0, 0}}) {
    auto t = finite_group_series_check(
        in, make_param(RatVec{Rat(a, 2), Rat(b, 2)}, in.datum0, 5));
    CHECK(t.group_order == 32);
    CHECK(t.oracle_count == t.predicted_geometric);
    REQUIRE(t.predicted_rational.has_value());
    CHECK(t.oracle_count == *t.predicted_rational);
  }
  // all characters, order-4 ones included
  for (Int a = 0; a < 4; ++a)
    for (Int b = 0; b < 4; ++b) {
      auto t = finite_group_series_check(
          in, make_param(RatVec{Rat(a, 4), Rat(b, 4)}, in.datum0, 5));
      CHECK(t.oracle_count == t.predicted_geometric);
    }
}

TEST_CASE("finite group check: (F4x)^2 x| Z/3 with a non-symmetric action") {
  // the order-3 lattice action [[0,1],[-1,-1]] differs from its
  // transpose-inverse, so this pins down the point-vs-character action
  // conventions; the resulting group is extraspecial of order 27
  DisconnectedInput in;
  in.datum0 = RootDatum::torus(2);
  in.pi0.size = 3;
  in.pi0.table = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  IntMat rot(2, 2);
  rot(0, 1) = 1;
  rot(1, 0) = -1;
  rot(1, 1) = -1;
  in.pi0.action = {IntMat::identity(2), rot, rot * rot};
  in.q = 4;
  in.p = 2;
  in.tau = BasedAutomorphism::identity(in.datum0);

  SUBCASE("fixed character (1/3,1/3): three extensions") {
    auto t = finite_group_series_check(
        in, make_param(RatVec{Rat(1, 3), Rat(1, 3)}, in.datum0, 2));
    CHECK(t.group_order == 27);
    CHECK(t.total_irreducibles == 11);  // extraspecial 3-group
    CHECK(t.orbit_size == 1);
    CHECK(t.oracle_count == 3);
    CHECK(t.predicted_geometric == 3);
    REQUIRE(t.predicted_rational.has_value());
    CHECK(*t.predicted_rational == 3);
  }
  SUBCASE("moved character (1/3,0): one induced irreducible") {
    auto t = finite_group_series_check(
        in, make_param(RatVec{Rat(1, 3), Rat(0)}, in.datum0, 2));
    CHECK(t.orbit_size == 3);
    CHECK(t.oracle_count == 1);
    REQUIRE(t.oracle_dims.size() == 1);
    CHECK(t.oracle_dims[0] == 3);
    CHECK(t.predicted_geometric == 1);
  }
}

TEST_CASE("finite group check input validation") {
  DisconnectedInput in = swap_torus(3);
  // denominator must divide q - 1
  CHECK_THROWS_AS(
      finite_group_series_check(in, make_param(RatVec{Rat(1, 4), Rat(0)}, in.datum0, 3)),
      InputError);
  // non-torus datum rejected
  DisconnectedInput bad;
  bad.datum0 = RootDatum::named(Family::A, 1, Isogeny::SimplyConnected);
  bad.pi0 = Pi0::trivial(1);
  bad.q = 3;
  bad.p = 3;
  bad.tau = BasedAutomorphism::identity(bad.datum0);
  CHECK_THROWS_AS(
      finite_group_series_check(bad, make_param(RatVec{Rat(1, 2)}, bad.datum0, 3)),
      InputError);
}
