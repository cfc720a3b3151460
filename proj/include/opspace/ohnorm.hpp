#pragma once

// Exact matrix norms over the operator Hilbert space (S_2 carries this
// structure): ||[x_ij]|| = || [[<x_ij, x_kl>]_{k,l}]_{i,j} ||^{1/2}.

#include "opspace/opmatrix.hpp"

#include <span>

namespace opspace {

/// Gram arrangement of a square block matrix: the n^2 x n^2 matrix whose
/// entry at row i*n + k, column j*n + l is hs_inner(x_ij, x_kl). The outer
/// position is (i, j), the inner one (k, l).
struct GramArrangement {
  Eigen::Index n;
  ComplexMatrix gram;
};

/// Rectangular inputs are zero-padded to square first.
GramArrangement gram_arrangement(const BlockMatrix& x);

/// Operator norm of the Gram arrangement, square-rooted.
double oh_matrix_norm(const BlockMatrix& x);

/// (sum_{i,j} |<a_i, a_j>|^2)^{1/4}: the norm of the column [a_1; ...; a_n].
double oh_column_norm(std::span<const ComplexMatrix> entries);

struct CmpCheck {
  double matrix_norm;
  double column_norm;
  bool ok;
};

/// Compares ||x||_{M_n(OH)} with the norm of the column of all n^2 entries
/// taken in column-major order (x_11, ..., x_n1, ..., x_nn).
CmpCheck cmp_check_oh(const BlockMatrix& x, double tol = 1e-9);

}  // namespace opspace
