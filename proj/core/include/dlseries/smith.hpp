#pragma once

#include <optional>

#include "dlseries/matrix.hpp"

namespace dls {

// Smith normal form  U * A * V = S  with U, V unimodular and S diagonal,
// d_1 | d_2 | ... | d_k >= 0.
struct SmithForm {
  IntMat s;
  IntMat u;
  IntMat v;
  IntVec diagonal() const;
  // Invariant factors > 1 (the torsion of coker(A) as a map into Z^rows).
  IntVec torsion() const;
  int rank() const;
};

SmithForm smith_normal_form(const IntMat& a);

// Column-style Hermite basis of the lattice spanned by the columns of `gens`
// inside Z^rows. Returns a rows x rank matrix whose columns are a basis.
IntMat column_lattice_basis(const IntMat& gens);

// One solution x of A x = b over Z, if any.
std::optional<IntVec> solve_integer(const IntMat& a, const IntVec& b);

// All solutions of A*l = 0 over (Q/Z)^cols, i.e. l in A^{-1}Z^rows mod Z^cols,
// for square nonsingular A. Each returned vector is the canonical [0,1)
// representative. The count equals |det A|.
std::vector<RatVec> torsion_kernel(const IntMat& a);

}  // namespace dls
