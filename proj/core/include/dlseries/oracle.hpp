#pragma once

#include <cstdint>

#include "dlseries/series.hpp"

namespace dls {
namespace oracle {

// Small finite field F_{p^deg} as a polynomial quotient, with exact exp/log
// tables over a primitive element. Elements are indices in [0, q): the base-p
// digits of the index are the polynomial coefficients.
class SmallField {
public:
  SmallField(Int p, int deg);

  Int p() const { return p_; }
  int degree() const { return deg_; }
  Int q() const { return q_; }
  const IntVec& modulus() const { return modpoly_; }
  Int generator() const { return q_ == 2 ? 1 : exp_[1]; }

  Int add(Int a, Int b) const {
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return add_slow(a, b);
  }
  Int sub(Int a, Int b) const { return add(a, neg(b)); }
  Int neg(Int a) const {
    if (!neg_table_.empty()) return neg_table_[a];
    return neg_slow(a);
  }
  Int mul(Int a, Int b) const {
    if (!mul_table_.empty()) return mul_table_[a * q_ + b];
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
  }
  Int inv(Int a) const;
  Int pow(Int a, Int e) const;
  Int from_int(Int k) const {  // prime-field embedding
    Int r = k % p_;
    return r < 0 ? r + p_ : r;
  }
  Int mul_order(Int a) const;

  // Embedding into an extension field (the lexicographically least one):
  // an element map of size q. Throws unless deg | big.degree and p matches.
  std::vector<Int> embedding_into(const SmallField& big) const;

private:
  Int p_;
  int deg_;
  Int q_;
  IntVec modpoly_;
  std::vector<Int> exp_;  // exp_[k] = g^k, length q-1
  std::vector<Int> log_;  // log_[a] for a != 0
  // dense op tables for small fields
  std::vector<Int> add_table_, mul_table_, neg_table_;

  Int raw_mul(Int a, Int b) const;
  Int add_slow(Int a, Int b) const;
  Int neg_slow(Int a) const;
};

enum class MatrixFamily { GL, SL, PGL };
MatrixFamily parse_matrix_family(const std::string& s);
std::string to_string(MatrixFamily f);

struct MatrixGroupSpec {
  MatrixFamily family = MatrixFamily::GL;
  int n = 2;
  Int q = 2;
};

constexpr long kCensusCap = 10000000;

struct RationalClass {
  std::vector<Int> representative;  // n x n row-major, canonical (minimal) element
  long size = 0;
  Int element_order = 0;
  std::vector<Int> charpoly;  // c_1..c_n of det(tI - lift), field indices
  Int pi0 = 1;                // |π₀(Z(s))| of the ambient algebraic group
};

struct GeometricBundle {
  std::vector<int> classes;  // indices into ClassCensus::classes
};

struct ClassCensus {
  MatrixGroupSpec spec;
  long group_order = 0;
  long semisimple_elements = 0;
  std::vector<RationalClass> classes;
  std::vector<GeometricBundle> bundles;
};

ClassCensus census(const MatrixGroupSpec& spec);

// Comparison of the parameter-side rational-series counts against the
// census of the dual group: exact equality of totals and of the multiset of
// (splitting number, component group order) per geometric class.
struct CompareOrbit {
  SheafParam rep;
  long orbit_size = 0;
  long rational_count = 0;  // |𝔅_L / Ad_ε(Ω_L)|
  long omega_order = 0;
};

struct CompareReport {
  std::vector<CompareOrbit> orbits;
  std::vector<std::pair<SheafParam, std::string>> skipped;
  long predicted_total = 0;
  long census_total = 0;
  std::vector<std::pair<long, Int>> predicted_profile;  // sorted (count, |Ω_L|)
  std::vector<std::pair<long, Int>> census_profile;     // sorted (bundle size, π₀)
  bool match = false;
  std::string detail;
};

CompareReport compare(Family family, int rank, Isogeny iso, Int q, Int denominator_bound,
                      const MatrixGroupSpec& spec);

// Character-theory check for G = (F_q^×)^r ⋊ π₀ via the little-group method
// over the abelian normal subgroup.
struct TorusSeriesCheck {
  long group_order = 0;
  long total_irreducibles = 0;  // = #conjugacy classes of G
  long orbit_size = 0;          // of the input character under π₀
  long oracle_count = 0;        // irreducibles lying over that orbit
  std::vector<long> oracle_dims;  // set when the stabilizer is abelian
  long predicted_geometric = 0;
  std::optional<long> predicted_rational;
};

constexpr long kTorusGroupCap = 5000;

TorusSeriesCheck finite_group_series_check(const DisconnectedInput& in, const SheafParam& l);

}  // namespace oracle
}  // namespace dls
