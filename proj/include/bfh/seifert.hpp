#pragma once

#include "bfh/braid.hpp"
#include "bfh/intlinalg.hpp"

namespace bfh::seifert {

using linalg::IntMat;

/// Seifert matrix of the closed-braid surface (one disk per strand, one band
/// per letter). Size is (#letters - strands + 1); requires a knot closure.
IntMat seifert_matrix(const braid::BraidWord& b);

/// Signature of V + V^T, computed exactly over the rationals.
int signature(const braid::BraidWord& b);

/// |det(V + V^T)|; equals 1 for the unknot, always odd for knots.
exact::Int determinant(const braid::BraidWord& b);

/// Signature of a symmetric integer matrix by congruence diagonalization.
int symmetric_signature(const IntMat& s);

}  // namespace bfh::seifert
