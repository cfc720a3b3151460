#pragma once

// Explicit matrices used by the column-row estimates.

#include "opspace/opmatrix.hpp"

#include <string>
#include <string_view>

namespace opspace {

/// m x m matrix unit E_ij; i and j are 1-based as in the usual notation.
ComplexMatrix matrix_unit(Eigen::Index i, Eigen::Index j, Eigen::Index m);

/// A_n: first outer row (E_11, E_12, ..., E_1n), zeros elsewhere; inner n x n.
BlockMatrix make_A(Eigen::Index n);
/// B_n: first outer row (E_11, E_21, ..., E_n1), zeros elsewhere; inner n x n.
BlockMatrix make_B(Eigen::Index n);

/// a = E_11, b = n^{-1/(2p)} I_n. Both lie in the unit ball of S_{2p}^n,
/// b on its boundary. Rejects p = inf.
CompressionPair compression_witness(Eigen::Index n, const PExponent& p);

struct CbTransposeWitness {
  BlockMatrix v;   // element of M_n(M_{n,1})
  double ratio;    // ||[t(v_ij)]|| / ||[v_ij]||
};

/// v has block (1, i) = e_i in C^n (a column), zero elsewhere. Applying the
/// transpose to each entry turns the flattened identity block into a single
/// row with n ones, so the ratio of operator norms is sqrt(n).
CbTransposeWitness cb_transpose_witness(Eigen::Index n);

enum class WitnessName { kA, kB, kCbTranspose };

WitnessName parse_witness_name(std::string_view text);
std::string to_string(WitnessName name);

struct WitnessFamily {
  WitnessName name;
  Eigen::Index n;
  BlockMatrix payload;
};

WitnessFamily make_family(WitnessName name, Eigen::Index n);

}  // namespace opspace
